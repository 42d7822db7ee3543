//! Explicit solution families, the curvature-torsion relation of helices,
//! frequency polynomials and the algebraic critical-point systems of
//! superpositions of circles.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientVector, CircleAnsatzCurve, CircleTerm};
use crate::error::{PolycurveError, Result};
use crate::tolerances::{NEWTON_MAX_HALVINGS, NEWTON_MAX_ITERS, TOL_CLASS, TOL_DEDUP, TOL_ROOT};

/// Single circle `gamma(s) = cos(sqrt(r) s) e1 + sin(sqrt(r) s) e2 + e3` in
/// `S^n`, with `|e1|^2 = |e2|^2 = 1/r` and `|e3|^2 = (r-1)/r`.
pub fn make_r_circle(r: usize, n: usize) -> Result<CircleAnsatzCurve> {
    if r < 2 {
        return Err(PolycurveError::InvalidArgument(format!("r must be >= 2, got {r}")));
    }
    if n < 2 {
        return Err(PolycurveError::InvalidArgument(format!("sphere dimension must be >= 2, got {n}")));
    }
    single_frequency_circle(r as f64, 1.0 / r as f64, n)
}

/// Circle of frequency `sqrt(a_sq)` and squared radius `alpha_sq` in `S^n`,
/// centred on the third coordinate axis.
pub fn single_frequency_circle(a_sq: f64, alpha_sq: f64, n: usize) -> Result<CircleAnsatzCurve> {
    if !(a_sq > 0.0) || !(0.0..=1.0).contains(&alpha_sq) {
        return Err(PolycurveError::InvalidArgument(format!(
            "need a^2 > 0 and 0 <= alpha^2 <= 1, got a^2 = {a_sq}, alpha^2 = {alpha_sq}"
        )));
    }
    let dim = n + 1;
    let radius = alpha_sq.sqrt();
    CircleAnsatzCurve::new(
        vec![CircleTerm::new(
            a_sq.sqrt(),
            AmbientVector::axis(dim, 0, radius),
            AmbientVector::axis(dim, 1, radius),
        )],
        AmbientVector::axis(dim, 2, (1.0 - alpha_sq).sqrt()),
    )
}

/// Superposition of two circles of frequencies `sqrt(a_sq)`, `sqrt(b_sq)` with
/// squared radii `alpha1_sq` and `1 - alpha1_sq`, in `S^n` with `n >= 3`.
pub fn two_frequency_circle(a_sq: f64, b_sq: f64, alpha1_sq: f64, n: usize) -> Result<CircleAnsatzCurve> {
    if n < 3 {
        return Err(PolycurveError::InvalidArgument(format!(
            "two-frequency curves need S^n with n >= 3, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&alpha1_sq) || !(a_sq > 0.0) || !(b_sq > 0.0) {
        return Err(PolycurveError::InvalidArgument(format!(
            "invalid two-frequency parameters a^2 = {a_sq}, b^2 = {b_sq}, alpha1^2 = {alpha1_sq}"
        )));
    }
    let dim = n + 1;
    let p = alpha1_sq.sqrt();
    let q = (1.0 - alpha1_sq).sqrt();
    CircleAnsatzCurve::new(
        vec![
            CircleTerm::new(a_sq.sqrt(), AmbientVector::axis(dim, 0, p), AmbientVector::axis(dim, 1, p)),
            CircleTerm::new(b_sq.sqrt(), AmbientVector::axis(dim, 2, q), AmbientVector::axis(dim, 3, q)),
        ],
        AmbientVector::zeros(dim),
    )
}

/// A biharmonic two-frequency curve, or the great circle it collapses to
/// when `a^2 = b^2 = 1`.
#[derive(Debug, Clone)]
pub struct BiharmonicTwoFrequency {
    pub curve: CircleAnsatzCurve,
    pub a_sq: f64,
    pub b_sq: f64,
    /// `a^2 = 1`: both frequencies coincide and the curve is a geodesic.
    pub is_geodesic: bool,
}

/// `cos(as) e1 + sin(as) e2 + cos(bs) e3 + sin(bs) e4` with `b^2 = 2 - a^2`
/// and all `|e_j|^2 = 1/2`.
pub fn make_biharmonic_two_freq(a: f64, n: usize) -> Result<BiharmonicTwoFrequency> {
    let a_sq = a * a;
    if !(a_sq > 0.0 && a_sq < 2.0) {
        return Err(PolycurveError::InvalidArgument(format!("need 0 < a^2 < 2, got {a_sq}")));
    }
    if n < 3 {
        return Err(PolycurveError::InvalidArgument(format!(
            "two-frequency curves need S^n with n >= 3, got {n}"
        )));
    }
    let b_sq = 2.0 - a_sq;
    if (a_sq - 1.0).abs() <= TOL_ROOT {
        // Equal frequencies: the two circles merge into one great circle.
        let dim = n + 1;
        let h = 0.5_f64.sqrt();
        let mut e_cos = AmbientVector::axis(dim, 0, h);
        e_cos.add_scaled(1.0, &AmbientVector::axis(dim, 2, h));
        let mut e_sin = AmbientVector::axis(dim, 1, h);
        e_sin.add_scaled(1.0, &AmbientVector::axis(dim, 3, h));
        let curve = CircleAnsatzCurve::new(vec![CircleTerm::new(1.0, e_cos, e_sin)], AmbientVector::zeros(dim))?;
        return Ok(BiharmonicTwoFrequency {
            curve,
            a_sq: 1.0,
            b_sq: 1.0,
            is_geodesic: true,
        });
    }
    Ok(BiharmonicTwoFrequency {
        curve: two_frequency_circle(a_sq, b_sq, 0.5, n)?,
        a_sq,
        b_sq,
        is_geodesic: false,
    })
}

/// Test of `(k^2 + tau^2)^2 = K ((r - 1) k^2 + tau^2)` for a helix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationCheck {
    #[serde(rename = "K")]
    pub curvature: f64,
    pub r: usize,
    pub k: f64,
    pub tau: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

pub fn check_relation(curvature: f64, r: usize, k: f64, tau: f64) -> ClassificationCheck {
    let w = k * k + tau * tau;
    let lhs = w * w;
    let rhs = curvature * ((r as f64 - 1.0) * k * k + tau * tau);
    let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
    ClassificationCheck {
        curvature,
        r,
        k,
        tau,
        lhs,
        rhs,
        satisfied: (lhs - rhs).abs() <= TOL_CLASS * scale,
    }
}

/// Real roots of `x^2 + b x + c = 0`, ascending, computed without
/// cancellation. A slightly negative discriminant is treated as zero.
pub fn quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * c;
    let scale = (b * b).max(4.0 * c.abs()).max(f64::MIN_POSITIVE);
    if disc < -1e-14 * scale {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q, c / q]
    };
    roots.sort_by(f64::total_cmp);
    roots
}

/// Nonnegative roots `k^2` of `(k^2 + tau^2)^2 = K ((r - 1) k^2 + tau^2)`.
pub fn solve_relation_for_k(curvature: f64, r: usize, tau: f64) -> Vec<f64> {
    let t2 = tau * tau;
    let b = 2.0 * t2 - curvature * (r as f64 - 1.0);
    let c = t2 * t2 - curvature * t2;
    let mut roots: Vec<f64> = quadratic_roots(b, c)
        .into_iter()
        .filter(|&x| x >= -TOL_ROOT)
        .map(|x| x.max(0.0))
        .collect();
    roots.dedup_by(|a, b| (*a - *b).abs() <= TOL_ROOT);
    roots
}

/// A root `a^2` of a frequency polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRoot {
    pub a_squared: f64,
    pub multiplicity: usize,
    /// `a^2 = 1` with arclength parametrisation forces a great circle.
    pub is_geodesic: bool,
}

fn frequency_root(a_squared: f64, multiplicity: usize) -> FrequencyRoot {
    FrequencyRoot {
        a_squared,
        multiplicity,
        is_geodesic: (a_squared - 1.0).abs() <= TOL_ROOT,
    }
}

/// Real roots of the monic cubic `x^3 + b x^2 + c x + d` with multiplicity,
/// classified by the discriminant of the depressed cubic.
pub fn cubic_real_roots(b: f64, c: f64, d: f64) -> Vec<(f64, usize)> {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let scale = (4.0 * p.abs().powi(3)).max(27.0 * q * q).max(f64::MIN_POSITIVE);
    let mut roots = if p.abs() <= 1e-14 * (1.0 + b * b + c.abs()) && q.abs() <= 1e-14 * (1.0 + d.abs()) {
        vec![(0.0, 3)]
    } else if disc.abs() <= 1e-12 * scale {
        vec![(3.0 * q / p, 1), (-1.5 * q / p, 2)]
    } else if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| (m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos(), 1))
            .collect()
    } else {
        let root = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        vec![((-q / 2.0 + root).cbrt() + (-q / 2.0 - root).cbrt(), 1)]
    };
    for r in &mut roots {
        r.0 -= shift;
    }
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    roots
}

/// Roots `a^2` of the frequency polynomial of arclength-parametrised single
/// circles that are `r`-harmonic: `a^2 - 2` for `r = 2`, `a^4 - 4a^2 + 3`
/// for `r = 3`, `(a^2 - 4)(a^2 - 1)^2` for `r = 4`, and in general
/// `(a^2 - r)(a^2 - 1)^{r-2}`.
pub fn solve_single_freq_polynomial(r: usize) -> Result<Vec<FrequencyRoot>> {
    match r {
        0 | 1 => Err(PolycurveError::InvalidArgument(format!("r must be >= 2, got {r}"))),
        2 => Ok(vec![frequency_root(2.0, 1)]),
        3 => Ok(quadratic_roots(-4.0, 3.0)
            .into_iter()
            .map(|x| frequency_root(x, 1))
            .collect()),
        4 => Ok(cubic_real_roots(-6.0, 9.0, -4.0)
            .into_iter()
            .map(|(x, m)| frequency_root(x, m))
            .collect()),
        _ => Ok(vec![frequency_root(1.0, r - 2), frequency_root(r as f64, 1)]),
    }
}

/// A solution of an algebraic critical-point system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicSolution {
    pub unknowns: BTreeMap<String, f64>,
    /// Largest absolute violation over all equations.
    pub residual: f64,
    pub is_geodesic: bool,
    /// A circle term has vanishing frequency or radius, or both frequencies
    /// coincide, so the curve is not a genuine two-frequency superposition.
    pub degenerate: bool,
}

impl AlgebraicSolution {
    pub fn get(&self, name: &str) -> f64 {
        self.unknowns.get(name).copied().unwrap_or(f64::NAN)
    }

    pub fn is_proper(&self) -> bool {
        !self.is_geodesic && !self.degenerate
    }
}

/// Initial guess `(a^2, b^2, alpha1^2, alpha3^2, lambda)` for the
/// two-frequency triharmonic system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoFrequencySeed {
    pub a_sq: f64,
    pub b_sq: f64,
    pub alpha1_sq: f64,
    pub alpha3_sq: f64,
    pub lambda: f64,
}

impl TwoFrequencySeed {
    fn to_vector(self) -> SVector<f64, 5> {
        SVector::from([self.a_sq, self.b_sq, self.alpha1_sq, self.alpha3_sq, self.lambda])
    }
}

/// `10^4` seeds: `a^2, b^2` on `0.6, 1.2, .., 6`, `alpha1^2` on the interior
/// of the simplex, `lambda` on `[-20, 16]`.
pub fn default_triharmonic_seeds() -> Vec<TwoFrequencySeed> {
    let mut seeds = Vec::with_capacity(10_000);
    for i in 1..=10 {
        for j in 1..=10 {
            for k in 0..10 {
                for l in 0..10 {
                    let x = (k as f64 + 0.5) / 10.0;
                    seeds.push(TwoFrequencySeed {
                        a_sq: 0.6 * i as f64,
                        b_sq: 0.6 * j as f64,
                        alpha1_sq: x,
                        alpha3_sq: 1.0 - x,
                        lambda: -20.0 + 4.0 * l as f64,
                    });
                }
            }
        }
    }
    seeds
}

/// The four equations of the two-frequency triharmonic system in the
/// unknowns `u = (A, B, x, y, lambda)` with `A = a^2`, `B = b^2`,
/// `x = alpha1^2`, `y = alpha3^2`.
pub fn triharmonic_two_freq_system(u: &[f64; 5]) -> [f64; 4] {
    let [a, b, x, y, lam] = *u;
    [
        a.powi(3) * (1.0 - 2.0 * x) - 2.0 * a * a + 3.0 * a - 2.0 * a * b * b * y + lam,
        b.powi(3) * (1.0 - 2.0 * y) - 2.0 * b * b + 3.0 * b - 2.0 * b * a * a * x + lam,
        a * x + b * y - 1.0,
        x + y - 1.0,
    ]
}

fn triharmonic_two_freq_jacobian(u: &[f64; 5]) -> SMatrix<f64, 4, 5> {
    let [a, b, x, y, _] = *u;
    SMatrix::<f64, 4, 5>::from_row_slice(&[
        3.0 * a * a * (1.0 - 2.0 * x) - 4.0 * a + 3.0 - 2.0 * b * b * y,
        -4.0 * a * b * y,
        -2.0 * a.powi(3),
        -2.0 * a * b * b,
        1.0,
        -4.0 * a * b * x,
        3.0 * b * b * (1.0 - 2.0 * y) - 4.0 * b + 3.0 - 2.0 * a * a * x,
        -2.0 * b * a * a,
        -2.0 * b.powi(3),
        1.0,
        x,
        y,
        a,
        b,
        0.0,
        0.0,
        0.0,
        1.0,
        1.0,
        0.0,
    ])
}

/// Why a seed did not yield a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub seed: TwoFrequencySeed,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoFrequencySolveReport {
    pub seeds: usize,
    /// Converged, feasible, deduplicated solutions in lexicographic order.
    pub solutions: Vec<AlgebraicSolution>,
    pub failures: Vec<SeedFailure>,
}

impl TwoFrequencySolveReport {
    pub fn proper(&self) -> impl Iterator<Item = &AlgebraicSolution> {
        self.solutions.iter().filter(|s| s.is_proper())
    }
}

fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Damped minimum-norm Newton iteration for the underdetermined system.
fn newton_two_freq(seed: TwoFrequencySeed) -> std::result::Result<[f64; 5], String> {
    let mut u: [f64; 5] = seed.to_vector().into();
    if u.iter().any(|v| !v.is_finite()) {
        return Err("non-finite seed".into());
    }
    let mut f = triharmonic_two_freq_system(&u);
    for _ in 0..NEWTON_MAX_ITERS {
        let merit = f.iter().map(|v| v * v).sum::<f64>();
        if max_abs(&f) <= 1e-14 {
            return Ok(u);
        }
        let jac = triharmonic_two_freq_jacobian(&u);
        let pinv = jac
            .pseudo_inverse(1e-14)
            .map_err(|e| format!("pseudo-inverse failed: {e}"))?;
        let step = -(pinv * SVector::<f64, 4>::from(f));
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let trial: [f64; 5] = std::array::from_fn(|k| u[k] + t * step[k]);
            let ft = triharmonic_two_freq_system(&trial);
            if ft.iter().map(|v| v * v).sum::<f64>() < merit {
                u = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return if max_abs(&f) <= TOL_ROOT {
                Ok(u)
            } else {
                Err(format!("line search stalled at residual {:e}", max_abs(&f)))
            };
        }
    }
    if max_abs(&f) <= TOL_ROOT {
        Ok(u)
    } else {
        Err(format!("no convergence in {NEWTON_MAX_ITERS} iterations"))
    }
}

fn two_freq_solution(u: [f64; 5]) -> AlgebraicSolution {
    let [a, b, x, y, lam] = u;
    let residual = max_abs(&triharmonic_two_freq_system(&u));
    let unknowns = BTreeMap::from([
        ("a_sq".to_string(), a),
        ("b_sq".to_string(), b),
        ("alpha1_sq".to_string(), x),
        ("alpha3_sq".to_string(), y),
        ("lambda".to_string(), lam),
    ]);
    let small = 1e-6;
    AlgebraicSolution {
        unknowns,
        residual,
        is_geodesic: (a - 1.0).abs() <= TOL_ROOT.sqrt() && (b - 1.0).abs() <= TOL_ROOT.sqrt(),
        degenerate: a <= small || b <= small || x <= small || y <= small || (a - b).abs() <= small,
    }
}

fn feasible(u: &[f64; 5]) -> bool {
    let tol = TOL_ROOT;
    u[0] > -tol && u[1] > -tol && (-tol..=1.0 + tol).contains(&u[2]) && (-tol..=1.0 + tol).contains(&u[3])
}

/// Runs Newton from every seed in parallel and merges the converged,
/// feasible results deterministically.
pub fn solve_triharmonic_two_freq(seeds: &[TwoFrequencySeed]) -> TwoFrequencySolveReport {
    let outcomes: Vec<std::result::Result<[f64; 5], SeedFailure>> = seeds
        .par_iter()
        .map(|&seed| match newton_two_freq(seed) {
            Ok(u) if feasible(&u) => Ok(u),
            Ok(u) => Err(SeedFailure {
                seed,
                reason: format!("converged to infeasible point {u:?}"),
            }),
            Err(reason) => Err(SeedFailure { seed, reason }),
        })
        .collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(u) => points.push(u),
            Err(f) => failures.push(f),
        }
    }
    points.sort_by(|p, q| {
        p.iter()
            .zip(q)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<[f64; 5]> = Vec::new();
    for p in points {
        let duplicate = kept
            .iter()
            .any(|q| p.iter().zip(q).all(|(a, b)| (a - b).abs() <= TOL_DEDUP));
        if !duplicate {
            kept.push(p);
        }
    }
    TwoFrequencySolveReport {
        seeds: seeds.len(),
        solutions: kept.into_iter().map(two_freq_solution).collect(),
        failures,
    }
}

/// The frequency system of the three-frequency biharmonic ansatz,
/// `a^2 + b^2 = 2`, `a^2 + c^2 = 2`, `b^2 + c^2 = 2`.
pub fn solve_biharmonic_three_freq() -> Result<AlgebraicSolution> {
    solve_biharmonic_three_freq_perturbed([0.0; 3])
}

/// Same system with right-hand sides `2 + eps_j`.
pub fn solve_biharmonic_three_freq_perturbed(eps: [f64; 3]) -> Result<AlgebraicSolution> {
    let m = Matrix3::new(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0);
    let rhs = Vector3::new(2.0 + eps[0], 2.0 + eps[1], 2.0 + eps[2]);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| PolycurveError::NonConvergence("singular frequency system".into()))?;
    let residual = (m * sol - rhs).amax();
    let is_geodesic = sol.iter().all(|v| (v - 1.0).abs() <= TOL_ROOT);
    Ok(AlgebraicSolution {
        unknowns: BTreeMap::from([
            ("a_sq".to_string(), sol[0]),
            ("b_sq".to_string(), sol[1]),
            ("c_sq".to_string(), sol[2]),
        ]),
        residual,
        is_geodesic,
        degenerate: sol.iter().any(|&v| v <= 0.0),
    })
}

/// Reduced one-variable function `g(A, B)` of the two-frequency triharmonic
/// system after eliminating `x, y` by the constraints and `lambda` by
/// subtracting the first two equations. Zeros with `A != B` are proper
/// solutions. Used as an independent scan of the solution set.
pub fn triharmonic_two_freq_eliminated(a: f64, b: f64) -> Option<(f64, f64)> {
    if (a - b).abs() < 1e-12 {
        return None;
    }
    let x = (1.0 - b) / (a - b);
    let y = 1.0 - x;
    let u = [a, b, x, y, 0.0];
    let f = triharmonic_two_freq_system(&u);
    Some((f[0] - f[1], x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_examples() {
        assert!(check_relation(1.0, 2, 1.0, 0.0).satisfied);
        assert!(check_relation(1.0, 3, 2_f64.sqrt(), 0.0).satisfied);
        let c = check_relation(-1.0, 2, 1.0, 1.0);
        assert!(!c.satisfied);
        assert_eq!(c.lhs, 4.0);
        assert_eq!(c.rhs, -2.0);
    }

    #[test]
    fn relation_roots() {
        // Oracle: k^2 (k^2 - 2) = 0.
        assert_eq!(solve_relation_for_k(1.0, 3, 0.0), vec![0.0, 2.0]);
        // Oracle: k^2 + tau^2 = 1.
        let r = solve_relation_for_k(1.0, 2, 0.6);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.64).abs() < 1e-14);
        assert!(solve_relation_for_k(-1.0, 3, 0.5).is_empty());
        assert!(solve_relation_for_k(0.0, 3, 0.5).is_empty());
    }

    #[test]
    fn single_frequency_roots() {
        let r3 = solve_single_freq_polynomial(3).unwrap();
        assert_eq!(r3.len(), 2);
        assert!((r3[0].a_squared - 1.0).abs() < 1e-14 && r3[0].is_geodesic);
        assert!((r3[1].a_squared - 3.0).abs() < 1e-14);
        let r4 = solve_single_freq_polynomial(4).unwrap();
        assert_eq!(r4, vec![frequency_root(1.0, 2), frequency_root(4.0, 1)]);
        let r2 = solve_single_freq_polynomial(2).unwrap();
        assert_eq!(r2[0].a_squared, 2.0);
    }

    #[test]
    fn cubic_roots_match_factored_forms() {
        // (x - 1)(x - 2)(x - 5) = x^3 - 8x^2 + 17x - 10
        let r = cubic_real_roots(-8.0, 17.0, -10.0);
        let xs: Vec<f64> = r.iter().map(|p| p.0).collect();
        for (x, e) in xs.iter().zip([1.0, 2.0, 5.0]) {
            assert!((x - e).abs() < 1e-12);
        }
        // (x - 2)(x^2 + 1)
        let r = cubic_real_roots(-2.0, 1.0, -2.0);
        assert_eq!(r.len(), 1);
        assert!((r[0].0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let u = [1.7, 0.6, 0.3, 0.7, -2.0];
        let jac = triharmonic_two_freq_jacobian(&u);
        let h = 1e-6;
        for k in 0..5 {
            let mut up = u;
            let mut dn = u;
            up[k] += h;
            dn[k] -= h;
            let fp = triharmonic_two_freq_system(&up);
            let fm = triharmonic_two_freq_system(&dn);
            for e in 0..4 {
                let fd = (fp[e] - fm[e]) / (2.0 * h);
                assert!((fd - jac[(e, k)]).abs() < 1e-6, "entry ({e},{k})");
            }
        }
    }

    #[test]
    fn geodesic_seed_stays_geodesic() {
        let rep = solve_triharmonic_two_freq(&[TwoFrequencySeed {
            a_sq: 1.0,
            b_sq: 1.0,
            alpha1_sq: 0.5,
            alpha3_sq: 0.5,
            lambda: 0.1,
        }]);
        assert_eq!(rep.solutions.len(), 1);
        let s = &rep.solutions[0];
        assert!(s.residual <= TOL_ROOT);
        assert!(s.is_geodesic, "{s:?}");
    }

    #[test]
    fn nearby_seed_converges_close_to_geodesic_point() {
        // The proper solution set passes through a^2 = b^2 = 1, so a seed
        // off it lands on a nearby solution rather than exactly on (1, 1).
        let rep = solve_triharmonic_two_freq(&[TwoFrequencySeed {
            a_sq: 1.05,
            b_sq: 0.97,
            alpha1_sq: 0.5,
            alpha3_sq: 0.5,
            lambda: 0.1,
        }]);
        let s = &rep.solutions[0];
        assert!(s.residual <= TOL_ROOT);
        assert!((s.get("a_sq") - 1.0).abs() < 0.1 && (s.get("b_sq") - 1.0).abs() < 0.1);
    }

    #[test]
    fn three_frequency_system() {
        let s = solve_biharmonic_three_freq().unwrap();
        assert!(s.is_geodesic);
        let eps = [1e-3, -2e-3, 5e-4];
        let p = solve_biharmonic_three_freq_perturbed(eps).unwrap();
        // Oracle: a^2 = 1 + (e1 + e2 - e3) / 2, etc.
        assert!((p.get("a_sq") - (1.0 + (eps[0] + eps[1] - eps[2]) / 2.0)).abs() < 1e-14);
        assert!((p.get("b_sq") - (1.0 + (eps[0] - eps[1] + eps[2]) / 2.0)).abs() < 1e-14);
        assert!((p.get("c_sq") - (1.0 + (-eps[0] + eps[1] + eps[2]) / 2.0)).abs() < 1e-14);
        assert!(!p.is_geodesic);
    }

    #[test]
    fn biharmonic_two_freq_geodesic_flag() {
        let f = make_biharmonic_two_freq(1.0, 3).unwrap();
        assert!(f.is_geodesic);
        assert!(f.curve.is_unit_speed(1e-12));
        let g = make_biharmonic_two_freq(1.5_f64.sqrt(), 3).unwrap();
        assert!(!g.is_geodesic);
        assert!((g.b_sq - 0.5).abs() < 1e-14);
        assert!(g.curve.is_unit_speed(1e-12));
        assert!(make_biharmonic_two_freq(2.0, 3).is_err());
    }
}
