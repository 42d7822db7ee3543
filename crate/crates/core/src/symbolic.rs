//! Polynomial algebra in the inner products `<gamma^(i), gamma^(j)>`.
//!
//! Scalar quantities along a curve (energy densities, squared norms of
//! covariant derivatives) are polynomials in these inner products, and vector
//! quantities are linear combinations `sum_l c_l gamma^(l)` with polynomial
//! coefficients. Differentiation in `s` acts by the product rule, which makes
//! covariant derivatives and Euler-Lagrange operators mechanical.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ambient::AmbientVector;

/// Product of inner products `<gamma^(i), gamma^(j)>`, stored as sorted
/// pairs with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(u8, u8)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn dot(i: u8, j: u8) -> Self {
        Self(vec![(i.min(j), i.max(j))])
    }

    pub fn factors(&self) -> &[(u8, u8)] {
        &self.0
    }

    fn from_factors(mut factors: Vec<(u8, u8)>) -> Self {
        for f in &mut factors {
            if f.0 > f.1 {
                *f = (f.1, f.0);
            }
        }
        factors.sort_unstable();
        Self(factors)
    }

    fn times(&self, other: &Self) -> Self {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        Self::from_factors(f)
    }

    pub fn max_order(&self) -> usize {
        self.0.iter().map(|&(_, j)| j as usize).max().unwrap_or(0)
    }

    /// `d/ds` as a sum of monomials (with multiplicity).
    fn derivative(&self) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(2 * self.0.len());
        for (k, &(i, j)) in self.0.iter().enumerate() {
            for bumped in [(i + 1, j), (i, j + 1)] {
                let mut f = self.0.clone();
                f[k] = bumped;
                out.push(Self::from_factors(f));
            }
        }
        out
    }
}

/// Per-sample table of inner products of derivatives up to some order.
#[derive(Debug, Clone)]
pub struct DotTable {
    order: usize,
    values: Vec<f64>,
}

impl DotTable {
    pub fn new(derivs: &[&AmbientVector]) -> Self {
        let m = derivs.len();
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let d = derivs[i].dot(derivs[j]);
                values[i * m + j] = d;
                values[j * m + i] = d;
            }
        }
        Self {
            order: m - 1,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.order + 1) + j]
    }
}

/// Polynomial in inner products with real coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalarPoly {
    terms: BTreeMap<Monomial, f64>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(Monomial::one(), c);
        p
    }

    /// `<gamma^(i), gamma^(j)>`.
    pub fn dot(i: u8, j: u8) -> Self {
        let mut p = Self::zero();
        p.accumulate(Monomial::dot(i, j), 1.0);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            for dm in m.derivative() {
                out.accumulate(dm, c);
            }
        }
        out
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Partial derivative with respect to the vector `gamma^(l)`, viewing
    /// each factor `<gamma^(i), gamma^(j)>` as a bilinear form.
    pub fn partial(&self, l: u8) -> VectorExpr {
        let mut out = VectorExpr::zero();
        for (m, &c) in &self.terms {
            for (k, &(i, j)) in m.0.iter().enumerate() {
                if i != l && j != l {
                    continue;
                }
                let mut rest = m.0.clone();
                rest.remove(k);
                let rest = Monomial::from_factors(rest);
                if i == l && j == l {
                    out.add_term(l, &Self::single(rest, 2.0 * c));
                } else {
                    let other = if i == l { j } else { i };
                    out.add_term(other, &Self::single(rest, c));
                }
            }
        }
        out
    }

    fn single(m: Monomial, c: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(m, c);
        p
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(Monomial::max_order).max().unwrap_or(0)
    }

    pub fn eval(&self, table: &DotTable) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| {
                m.0.iter()
                    .fold(c, |acc, &(i, j)| acc * table.get(i as usize, j as usize))
            })
            .sum()
    }
}

impl Add for &ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: Self) -> ScalarPoly {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.accumulate(m.clone(), c);
        }
        out
    }
}

impl Sub for &ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: Self) -> ScalarPoly {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        self.scale(-1.0)
    }
}

impl Mul for &ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: Self) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.accumulate(a.times(b), ca * cb);
            }
        }
        out
    }
}

/// Vector field `sum_l c_l gamma^(l)` with polynomial coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VectorExpr {
    terms: BTreeMap<u8, ScalarPoly>,
}

impl VectorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `gamma^(l)`.
    pub fn gamma(l: u8) -> Self {
        let mut v = Self::zero();
        v.add_term(l, &ScalarPoly::constant(1.0));
        v
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, &ScalarPoly)> {
        self.terms.iter().map(|(&l, p)| (l, p))
    }

    pub fn coefficient(&self, l: u8) -> ScalarPoly {
        self.terms.get(&l).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, l: u8, p: &ScalarPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&l) {
            Some(existing) => existing + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&l);
        } else {
            self.terms.insert(l, sum);
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.mul_scalar(&ScalarPoly::constant(c))
    }

    pub fn mul_scalar(&self, p: &ScalarPoly) -> Self {
        let mut out = Self::zero();
        for (&l, q) in &self.terms {
            out.add_term(l, &(q * p));
        }
        out
    }

    pub fn dot(&self, other: &Self) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (&i, p) in &self.terms {
            for (&j, q) in &other.terms {
                out = &out + &(&(p * q) * &ScalarPoly::dot(i, j));
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&l, p) in &self.terms {
            out.add_term(l + 1, p);
            out.add_term(l, &p.derivative());
        }
        out
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |v, _| v.derivative())
    }

    /// Covariant derivative along the curve of a tangent field of the
    /// sphere, pulled back to `R^{n+1}`: `X' + <X, gamma'> gamma`.
    pub fn covariant_derivative(&self) -> Self {
        let mut out = self.derivative();
        out.add_term(0, &self.dot(&Self::gamma(1)));
        out
    }

    /// `self - <self, gamma> gamma`.
    pub fn reject_position(&self) -> Self {
        let mut out = self.clone();
        out.add_term(0, &(-&self.dot(&Self::gamma(0))));
        out
    }

    pub fn max_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(&l, p)| (l as usize).max(p.max_order()))
            .max()
            .unwrap_or(0)
    }

    /// Evaluates against derivatives `derivs[l] = gamma^(l)` at one sample.
    pub fn eval(&self, derivs: &[&AmbientVector], table: &DotTable) -> AmbientVector {
        let mut out = AmbientVector::zeros(derivs[0].dim());
        for (&l, p) in &self.terms {
            out.add_scaled(p.eval(table), derivs[l as usize]);
        }
        out
    }
}

impl Add for &VectorExpr {
    type Output = VectorExpr;
    fn add(self, rhs: Self) -> VectorExpr {
        let mut out = self.clone();
        for (&l, p) in &rhs.terms {
            out.add_term(l, p);
        }
        out
    }
}

impl Sub for &VectorExpr {
    type Output = VectorExpr;
    fn sub(self, rhs: Self) -> VectorExpr {
        self + &rhs.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_for(vs: &[AmbientVector]) -> DotTable {
        let refs: Vec<&AmbientVector> = vs.iter().collect();
        DotTable::new(&refs)
    }

    #[test]
    fn product_rule_on_squared_norm() {
        // d/ds <g', g'> = 2 <g', g''>
        let p = ScalarPoly::dot(1, 1).derivative();
        assert_eq!(p, ScalarPoly::dot(1, 2).scale(2.0));
    }

    #[test]
    fn partial_of_quartic() {
        // d/dg' <g',g'>^2 = 4 <g',g'> g'
        let p = ScalarPoly::dot(1, 1).pow(2);
        let v = p.partial(1);
        assert_eq!(v, VectorExpr::gamma(1).mul_scalar(&ScalarPoly::dot(1, 1).scale(4.0)));
    }

    #[test]
    fn covariant_derivative_of_tangent() {
        // nabla T = g'' + <g', g'> g
        let v = VectorExpr::gamma(1).covariant_derivative();
        let expected = &VectorExpr::gamma(2) + &VectorExpr::gamma(0).mul_scalar(&ScalarPoly::dot(1, 1));
        assert_eq!(v, expected);
    }

    #[test]
    fn evaluation_matches_direct_computation() {
        let vs = vec![
            AmbientVector::from_vec(vec![1.0, 2.0, 0.5]),
            AmbientVector::from_vec(vec![-1.0, 0.0, 3.0]),
            AmbientVector::from_vec(vec![0.25, -2.0, 1.0]),
        ];
        let t = table_for(&vs);
        let p = &(&ScalarPoly::dot(0, 2) * &ScalarPoly::dot(1, 1)) + &ScalarPoly::constant(3.0);
        let direct = vs[0].dot(&vs[2]) * vs[1].dot(&vs[1]) + 3.0;
        assert!((p.eval(&t) - direct).abs() < 1e-14);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &ScalarPoly::dot(0, 1) - &ScalarPoly::dot(1, 0);
        assert!(p.is_zero());
    }
}
