//! Curves in the unit sphere `S^n` viewed inside `R^{n+1}`.
//!
//! Two representations are supported: the analytic superposition of planar
//! circles (`CircleAnsatzCurve`) and uniformly sampled closed curves
//! (`DiscreteCurve`). Both produce stacks of ambient derivatives, which every
//! other module consumes.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{PolycurveError, Result};
use crate::spectral::SpectralGrid;
use crate::tolerances::{MAX_ANALYTIC_ORDER, MAX_SPECTRAL_ORDER, TOL_ANSATZ, TOL_SPHERE};

/// Minimum ambient dimension (`S^2` in `R^3`).
pub const MIN_DIM: usize = 3;
/// Minimum sample count of a discrete curve.
pub const MIN_SAMPLES: usize = 16;

/// A point or vector of `R^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbientVector(Vec<f64>);

impl AmbientVector {
    /// Checked constructor: requires dimension at least 3 and finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < MIN_DIM {
            return Err(PolycurveError::InvalidCurve(format!(
                "ambient dimension {} is below {MIN_DIM}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(PolycurveError::InvalidCurve("non-finite coordinate".into()));
        }
        Ok(Self(coords))
    }

    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// `scale * e_axis`.
    pub fn axis(dim: usize, axis: usize, scale: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = scale;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.norm())
    }
}

impl Index<usize> for AmbientVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: Self) -> AmbientVector {
        AmbientVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: Self) -> AmbientVector {
        AmbientVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &AmbientVector {
    type Output = AmbientVector;
    fn mul(self, rhs: f64) -> AmbientVector {
        self.scaled(rhs)
    }
}

impl Neg for &AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scaled(-1.0)
    }
}

impl AddAssign<&AmbientVector> for AmbientVector {
    fn add_assign(&mut self, rhs: &AmbientVector) {
        self.add_scaled(1.0, rhs);
    }
}

/// One planar circle `cos(a s) e_cos + sin(a s) e_sin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleTerm {
    #[serde(rename = "a")]
    pub frequency: f64,
    pub e_cos: AmbientVector,
    pub e_sin: AmbientVector,
}

impl CircleTerm {
    pub fn new(frequency: f64, e_cos: AmbientVector, e_sin: AmbientVector) -> Self {
        Self {
            frequency,
            e_cos,
            e_sin,
        }
    }

    /// `|e_cos|^2`, the squared radius of the circle.
    pub fn amplitude_sq(&self) -> f64 {
        self.e_cos.norm_sq()
    }
}

/// `gamma(s) = sum_j [cos(a_j s) e_cos_j + sin(a_j s) e_sin_j] + e0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleAnsatzCurve {
    terms: Vec<CircleTerm>,
    constant: AmbientVector,
}

impl CircleAnsatzCurve {
    /// Validates orthogonality, equal radii per term, `sum |e_j|^2 + |e0|^2 = 1`
    /// and distinct positive frequencies.
    pub fn new(terms: Vec<CircleTerm>, constant: AmbientVector) -> Result<Self> {
        let invalid = |msg: String| Err(PolycurveError::InvalidCurve(msg));
        if terms.is_empty() {
            return invalid("ansatz needs at least one circle term".into());
        }
        let dim = constant.dim();
        if dim < MIN_DIM {
            return invalid(format!("ambient dimension {dim} is below {MIN_DIM}"));
        }
        let mut vectors: Vec<&AmbientVector> = vec![&constant];
        for (j, term) in terms.iter().enumerate() {
            if !(term.frequency.is_finite() && term.frequency > 0.0) {
                return invalid(format!("term {j}: frequency must be positive"));
            }
            if term.e_cos.dim() != dim || term.e_sin.dim() != dim {
                return invalid(format!("term {j}: dimension mismatch"));
            }
            if (term.e_cos.norm_sq() - term.e_sin.norm_sq()).abs() > TOL_ANSATZ {
                return invalid(format!("term {j}: |e_cos| and |e_sin| differ"));
            }
            vectors.push(&term.e_cos);
            vectors.push(&term.e_sin);
        }
        for i in 0..vectors.len() {
            for k in (i + 1)..vectors.len() {
                let d = vectors[i].dot(vectors[k]);
                if d.abs() > TOL_ANSATZ {
                    return invalid(format!("ansatz vectors {i} and {k} are not orthogonal ({d:e})"));
                }
            }
        }
        for i in 0..terms.len() {
            for k in (i + 1)..terms.len() {
                let (a, b) = (terms[i].frequency, terms[k].frequency);
                if (a - b).abs() <= 1e-12 * a.max(b) {
                    return invalid(format!("terms {i} and {k} share frequency {a}"));
                }
            }
        }
        let total: f64 = terms.iter().map(CircleTerm::amplitude_sq).sum::<f64>() + constant.norm_sq();
        if (total - 1.0).abs() > TOL_ANSATZ {
            return invalid(format!("squared radii sum to {total}, not 1"));
        }
        Ok(Self { terms, constant })
    }

    pub fn terms(&self) -> &[CircleTerm] {
        &self.terms
    }

    pub fn constant(&self) -> &AmbientVector {
        &self.constant
    }

    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    /// `|gamma'|^2 = sum_j a_j^2 |e_j|^2`, constant along the curve.
    pub fn speed_sq(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.frequency * t.frequency * t.amplitude_sq())
            .sum()
    }

    pub fn is_unit_speed(&self, tol: f64) -> bool {
        (self.speed_sq() - 1.0).abs() <= tol
    }

    pub fn min_frequency(&self) -> f64 {
        self.terms.iter().map(|t| t.frequency).fold(f64::INFINITY, f64::min)
    }

    pub fn evaluate(&self, s: f64) -> AmbientVector {
        self.derivative(s, 0)
    }

    /// `gamma^{(order)}(s)`. Uses exact quarter-turn phase shifts.
    pub fn derivative(&self, s: f64, order: usize) -> AmbientVector {
        let mut out = if order == 0 {
            self.constant.clone()
        } else {
            AmbientVector::zeros(self.dim())
        };
        for term in &self.terms {
            let (sin, cos) = (term.frequency * s).sin_cos();
            let (c, d) = match order % 4 {
                0 => (cos, sin),
                1 => (-sin, cos),
                2 => (-cos, -sin),
                _ => (sin, -cos),
            };
            let amp = term.frequency.powi(order as i32);
            out.add_scaled(amp * c, &term.e_cos);
            out.add_scaled(amp * d, &term.e_sin);
        }
        out
    }

    /// Least common period of all circle terms, or `None` when the
    /// frequency ratios are not (small-denominator) rational.
    pub fn common_period(&self) -> Option<f64> {
        let base = self.terms[0].frequency;
        let mut ratios = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            ratios.push(rational_approximation(term.frequency / base, MAX_DENOMINATOR)?);
        }
        // Frequencies are base * p_j / q_j; the common unit is base / lcm(q_j),
        // and every frequency is an integer multiple m_j of it.
        let denom_lcm = ratios.iter().fold(1_i64, |acc, &(_, q)| acc.lcm(&q));
        let multiples: Vec<i64> = ratios.iter().map(|&(p, q)| p * (denom_lcm / q)).collect();
        let gcd = multiples.iter().fold(0_i64, |acc, &m| acc.gcd(&m));
        let unit = base / denom_lcm as f64 * gcd as f64;
        Some(2.0 * PI / unit)
    }

    /// Samples one common period at `n` points.
    pub fn sample(&self, n: usize) -> Result<DiscreteCurve> {
        let period = self.common_period().ok_or(PolycurveError::IrrationalFrequencies)?;
        let samples = (0..n)
            .map(|j| self.evaluate(j as f64 * period / n as f64))
            .collect();
        DiscreteCurve::new(samples, period)
    }
}

const MAX_DENOMINATOR: i64 = 1000;

/// Continued-fraction approximation `p/q` of `x` with `q <= max_den`,
/// accepted only if it reproduces `x` to near machine precision.
fn rational_approximation(x: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0_i64, 1_i64);
    let (mut k0, mut k1) = (1_i64, 0_i64);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e12 {
            return None;
        }
        let a_int = a as i64;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-11 * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = rem - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        rem = 1.0 / frac;
    }
    None
}

/// A closed curve sampled at `N` uniform parameter values on `[0, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    samples: Vec<AmbientVector>,
    period: f64,
}

impl DiscreteCurve {
    /// Requires `N >= 16`, even `N`, `L > 0` and every sample on the unit sphere.
    pub fn new(samples: Vec<AmbientVector>, period: f64) -> Result<Self> {
        let n = samples.len();
        if n < MIN_SAMPLES || !n.is_multiple_of(2) {
            return Err(PolycurveError::BadSampleCount(n));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(PolycurveError::InvalidCurve(format!("period {period} must be positive")));
        }
        let dim = samples[0].dim();
        if dim < MIN_DIM {
            return Err(PolycurveError::InvalidCurve(format!(
                "ambient dimension {dim} is below {MIN_DIM}"
            )));
        }
        for (i, x) in samples.iter().enumerate() {
            if x.dim() != dim {
                return Err(PolycurveError::InvalidCurve(format!("sample {i}: dimension mismatch")));
            }
            let off = (x.norm() - 1.0).abs();
            if !(off <= TOL_SPHERE) {
                return Err(PolycurveError::InvalidCurve(format!(
                    "sample {i} is off the unit sphere by {off:e}"
                )));
            }
        }
        Ok(Self { samples, period })
    }

    /// Radially projects each sample onto the sphere before validating.
    pub fn from_projected(samples: Vec<AmbientVector>, period: f64) -> Result<Self> {
        let projected = samples
            .into_iter()
            .map(|x| {
                let r = x.norm();
                if r > 0.0 {
                    Ok(x.scaled(1.0 / r))
                } else {
                    Err(PolycurveError::InvalidCurve("sample at the origin".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(projected, period)
    }

    pub fn samples(&self) -> &[AmbientVector] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn parameters(&self) -> Vec<f64> {
        let h = self.period / self.len() as f64;
        (0..self.len()).map(|j| j as f64 * h).collect()
    }

    /// Coordinate `c` of every sample.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.samples.iter().map(|x| x[c]).collect()
    }

}

/// Either curve representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Ansatz(CircleAnsatzCurve),
    Discrete(DiscreteCurve),
}

impl Curve {
    pub fn dim(&self) -> usize {
        match self {
            Curve::Ansatz(c) => c.dim(),
            Curve::Discrete(c) => c.dim(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Curve::Ansatz(_))
    }
}

impl From<CircleAnsatzCurve> for Curve {
    fn from(c: CircleAnsatzCurve) -> Self {
        Curve::Ansatz(c)
    }
}

impl From<DiscreteCurve> for Curve {
    fn from(c: DiscreteCurve) -> Self {
        Curve::Discrete(c)
    }
}

/// `values[l][i]` is `gamma^{(l)}` at the `i`-th parameter value.
#[derive(Debug, Clone)]
pub struct DerivativeStack {
    pub parameters: Vec<f64>,
    pub values: Vec<Vec<AmbientVector>>,
}

impl DerivativeStack {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.parameters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
    }
}

/// Point evaluation. Discrete curves are evaluated through their
/// trigonometric interpolant.
pub fn evaluate(curve: &Curve, s: f64) -> AmbientVector {
    match curve {
        Curve::Ansatz(c) => c.evaluate(s),
        Curve::Discrete(c) => {
            let grid = SpectralGrid::new(c.len(), c.period());
            AmbientVector::from_vec(
                (0..c.dim())
                    .map(|k| grid.interpolant(&c.component(k)).eval(s))
                    .collect(),
            )
        }
    }
}

/// Exact derivatives of an analytic curve at the given parameters.
pub fn derivatives_analytic(
    curve: &CircleAnsatzCurve,
    parameters: &[f64],
    max_order: usize,
) -> Result<DerivativeStack> {
    if max_order > MAX_ANALYTIC_ORDER {
        return Err(PolycurveError::UnsupportedOrder {
            requested: max_order,
            max: MAX_ANALYTIC_ORDER,
        });
    }
    let values = (0..=max_order)
        .map(|l| parameters.iter().map(|&s| curve.derivative(s, l)).collect())
        .collect();
    Ok(DerivativeStack {
        parameters: parameters.to_vec(),
        values,
    })
}

/// Fourier-differentiated derivatives of a sampled curve at its samples.
pub fn derivatives_spectral(curve: &DiscreteCurve, max_order: usize) -> Result<DerivativeStack> {
    if max_order > MAX_SPECTRAL_ORDER {
        return Err(PolycurveError::UnsupportedOrder {
            requested: max_order,
            max: MAX_SPECTRAL_ORDER,
        });
    }
    if !curve.len().is_multiple_of(2) || curve.len() < MIN_SAMPLES {
        return Err(PolycurveError::BadSampleCount(curve.len()));
    }
    let grid = SpectralGrid::new(curve.len(), curve.period());
    let per_component: Vec<Vec<Vec<f64>>> = (0..curve.dim())
        .map(|c| grid.derivatives(&curve.component(c), max_order))
        .collect();
    let values = (0..=max_order)
        .map(|l| {
            (0..curve.len())
                .map(|i| AmbientVector::from_vec(per_component.iter().map(|d| d[l][i]).collect()))
                .collect()
        })
        .collect();
    Ok(DerivativeStack {
        parameters: curve.parameters(),
        values,
    })
}

/// Resamples a closed curve uniformly in arclength, returning a unit-speed
/// discrete curve whose period is the total length.
///
/// Speed and cumulative length come from the Fourier interpolant; each new
/// sample is located by Newton iteration on the length function.
pub fn arclength_reparametrize(curve: &Curve) -> Result<DiscreteCurve> {
    let discrete = match curve {
        Curve::Ansatz(c) => {
            let n = 128;
            c.sample(n)?
        }
        Curve::Discrete(c) => c.clone(),
    };
    let n = discrete.len();
    let dim = discrete.dim();
    let grid = SpectralGrid::new(n, discrete.period());
    let components: Vec<Vec<f64>> = (0..dim).map(|c| discrete.component(c)).collect();
    let interps: Vec<_> = components.iter().map(|c| grid.interpolant(c)).collect();
    let derivs: Vec<Vec<f64>> = components.iter().map(|c| grid.differentiate(c, 1)).collect();
    let speed: Vec<f64> = (0..n)
        .map(|i| derivs.iter().map(|d| d[i] * d[i]).sum::<f64>().sqrt())
        .collect();
    if speed.iter().any(|&v| v <= 1e-12) {
        let i = speed.iter().position(|&v| v <= 1e-12).unwrap_or(0);
        return Err(PolycurveError::VanishingTangent(i));
    }
    let speed_interp = grid.interpolant(&speed);
    let total = speed_interp.mean() * discrete.period();
    let speed_at = |t: f64| -> f64 {
        interps
            .iter()
            .map(|p| p.eval_derivative(t, 1).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let mut out = Vec::with_capacity(n);
    let mut t = 0.0;
    for j in 0..n {
        let target = j as f64 * total / n as f64;
        for _ in 0..50 {
            let f = speed_interp.integral_from_zero(t) - target;
            let step = f / speed_at(t);
            t -= step;
            if step.abs() <= 1e-15 * discrete.period() {
                break;
            }
        }
        out.push(AmbientVector::from_vec(interps.iter().map(|p| p.eval(t)).collect()));
    }
    DiscreteCurve::from_projected(out, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle(dim: usize) -> CircleAnsatzCurve {
        CircleAnsatzCurve::new(
            vec![CircleTerm::new(
                1.0,
                AmbientVector::axis(dim, 0, 1.0),
                AmbientVector::axis(dim, 1, 1.0),
            )],
            AmbientVector::zeros(dim),
        )
        .unwrap()
    }

    #[test]
    fn rejects_short_vectors() {
        assert!(AmbientVector::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn rejects_non_orthogonal_ansatz() {
        let bad = CircleAnsatzCurve::new(
            vec![CircleTerm::new(
                1.0,
                AmbientVector::from_vec(vec![1.0, 0.0, 0.0]),
                AmbientVector::from_vec(vec![0.6, 0.8, 0.0]),
            )],
            AmbientVector::zeros(3),
        );
        assert!(matches!(bad, Err(PolycurveError::InvalidCurve(_))));
    }

    #[test]
    fn rejects_bad_normalisation() {
        let bad = CircleAnsatzCurve::new(
            vec![CircleTerm::new(
                1.0,
                AmbientVector::axis(3, 0, 0.5),
                AmbientVector::axis(3, 1, 0.5),
            )],
            AmbientVector::zeros(3),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn analytic_derivatives_match_closed_form() {
        let c = unit_circle(3);
        let s = 0.37;
        for l in 0..=MAX_ANALYTIC_ORDER {
            let d = c.derivative(s, l);
            let phase = s + l as f64 * PI / 2.0;
            assert!((d[0] - phase.cos()).abs() < 1e-14);
            assert!((d[1] - phase.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn common_period_of_rational_frequencies() {
        let c = CircleAnsatzCurve::new(
            vec![
                CircleTerm::new(1.5, AmbientVector::axis(4, 0, 0.6), AmbientVector::axis(4, 1, 0.6)),
                CircleTerm::new(2.5, AmbientVector::axis(4, 2, 0.8), AmbientVector::axis(4, 3, 0.8)),
            ],
            AmbientVector::zeros(4),
        )
        .unwrap();
        let p = c.common_period().unwrap();
        assert!((p - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn irrational_frequencies_have_no_period() {
        let a = 0.9_f64;
        let c = CircleAnsatzCurve::new(
            vec![
                CircleTerm::new(a, AmbientVector::axis(4, 0, 0.6), AmbientVector::axis(4, 1, 0.6)),
                CircleTerm::new(
                    a * 2_f64.sqrt(),
                    AmbientVector::axis(4, 2, 0.8),
                    AmbientVector::axis(4, 3, 0.8),
                ),
            ],
            AmbientVector::zeros(4),
        )
        .unwrap();
        assert!(c.common_period().is_none());
        assert!(matches!(c.sample(32), Err(PolycurveError::IrrationalFrequencies)));
    }

    #[test]
    fn discrete_curve_validation() {
        let c = unit_circle(3);
        assert!(matches!(c.sample(15), Err(PolycurveError::BadSampleCount(15))));
        assert!(c.sample(18).is_ok());
        let mut samples = c.sample(16).unwrap().samples().to_vec();
        samples[3] = samples[3].scaled(1.0 + 1e-6);
        assert!(DiscreteCurve::new(samples, 2.0 * PI).is_err());
    }

    #[test]
    fn spectral_derivatives_of_sampled_circle() {
        let c = unit_circle(3);
        let d = c.sample(32).unwrap();
        let stack = derivatives_spectral(&d, 8).unwrap();
        for l in 0..=8 {
            for (i, s) in stack.parameters.iter().enumerate() {
                let exact = c.derivative(*s, l);
                assert!((&stack.values[l][i] - &exact).max_abs() < 1e-10);
            }
        }
        assert!(derivatives_spectral(&d, 9).is_err());
    }

    #[test]
    fn evaluate_discrete_between_samples() {
        let c = unit_circle(3);
        let d = Curve::Discrete(c.sample(32).unwrap());
        let s = 0.123;
        assert!((&evaluate(&d, s) - &c.evaluate(s)).max_abs() < 1e-12);
    }

    #[test]
    fn reparametrizes_nonuniform_circle() {
        // A great circle traversed with speed 1 + 0.3 cos(t).
        let n = 64;
        let period = 2.0 * PI;
        let samples = (0..n)
            .map(|j| {
                let t = j as f64 * period / n as f64;
                let phi = t + 0.3 * t.sin();
                AmbientVector::from_vec(vec![phi.cos(), phi.sin(), 0.0])
            })
            .collect();
        let d = DiscreteCurve::new(samples, period).unwrap();
        let r = arclength_reparametrize(&Curve::Discrete(d)).unwrap();
        assert!((r.period() - 2.0 * PI).abs() < 1e-10);
        let stack = derivatives_spectral(&r, 1).unwrap();
        let worst = stack.values[1]
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "speed defect {worst}");
    }
}
