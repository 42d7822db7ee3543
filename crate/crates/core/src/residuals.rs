//! Pointwise residuals of the harmonic-type equations along a curve, and
//! first integrals of the triharmonic and 4-harmonic equations.

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientVector, Curve};
use crate::error::{PolycurveError, Result};
use crate::geometry::{covariant_expressions, covariant_stack_sampled, SpaceForm, MAX_COVARIANT_ORDER};
use crate::sampling::{EvalOptions, SampledCurve};
use crate::symbolic::{ScalarPoly, VectorExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    /// Intrinsic `r`-tension field.
    Intrinsic,
    Geodesic,
    BiharmonicOde,
    TriharmonicOde,
    FourHarmonicOde,
    /// `gamma^(2r) - <gamma^(2r), gamma> gamma`.
    ExtrinsicPoly,
    /// Mechanised Euler-Lagrange operator of a Lagrangian.
    EulerLagrange,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub kind: ResidualKind,
    pub r: usize,
    pub parameters: Vec<f64>,
    /// Euclidean norm of the residual vector at each sample.
    pub per_sample: Vec<f64>,
    pub max_norm: f64,
    pub l2_norm: f64,
    /// Pointwise Lagrange multiplier, where the equation determines one.
    pub lambda_estimate: Option<Vec<f64>>,
    #[serde(skip)]
    pub vectors: Vec<AmbientVector>,
}

impl ResidualReport {
    pub(crate) fn from_vectors(
        kind: ResidualKind,
        r: usize,
        sampled: &SampledCurve,
        vectors: Vec<AmbientVector>,
        lambda_estimate: Option<Vec<f64>>,
    ) -> Self {
        let per_sample: Vec<f64> = vectors.iter().map(AmbientVector::norm).collect();
        Self {
            kind,
            r,
            parameters: sampled.parameters().to_vec(),
            max_norm: per_sample.iter().copied().fold(0.0, f64::max),
            l2_norm: sampled.l2_norm(&per_sample),
            per_sample,
            lambda_estimate,
            vectors,
        }
    }
}

fn dot(i: u8, j: u8) -> ScalarPoly {
    ScalarPoly::dot(i, j)
}

fn gamma(l: u8) -> VectorExpr {
    VectorExpr::gamma(l)
}

fn constant(c: f64) -> ScalarPoly {
    ScalarPoly::constant(c)
}

/// `(a, alpha^2)` when the curve is a single analytic circle.
pub fn single_frequency_parameters(curve: &Curve) -> Option<(f64, f64)> {
    match curve {
        Curve::Ansatz(c) if c.terms().len() == 1 => {
            let t = &c.terms()[0];
            Some((t.frequency, t.amplitude_sq()))
        }
        _ => None,
    }
}

/// Scalar factor `f` with `tau_r = f * nabla T` on a single circle of
/// frequency `a` and squared radius `alpha_sq`.
pub fn single_frequency_tension_factor(a: f64, alpha_sq: f64, r: usize, curvature: f64) -> f64 {
    let c = a * a * (1.0 - alpha_sq);
    let v = a * a * alpha_sq;
    (-c).powi(r as i32 - 2) * (-c + curvature * (r as f64 - 1.0) * v)
}

/// Intrinsic `r`-tension field
/// `nabla^{2r-1} T + K sum_l (-1)^l (<T, nabla^l T> nabla^{2r-3-l} T - <T, nabla^{2r-3-l} T> nabla^l T)`.
///
/// Orders `r <= 4` are computed from covariant derivatives on any curve;
/// higher orders only for single analytic circles, via the closed recursion
/// for their covariant derivatives.
pub fn residual_intrinsic(curve: &Curve, r: usize, space: &SpaceForm, opts: &EvalOptions) -> Result<ResidualReport> {
    if r < 2 {
        return Err(PolycurveError::InvalidArgument(format!("tension order r must be >= 2, got {r}")));
    }
    space.require_unit_sphere()?;
    let top = 2 * r - 1;
    if top > MAX_COVARIANT_ORDER {
        let Some((a, alpha_sq)) = single_frequency_parameters(curve) else {
            return Err(PolycurveError::UnsupportedOrder {
                requested: top,
                max: MAX_COVARIANT_ORDER,
            });
        };
        let sampled = SampledCurve::new(curve, 2, opts)?;
        let factor = single_frequency_tension_factor(a, alpha_sq, r, space.curvature);
        let vectors = sampled
            .eval_vector(&covariant_expressions()[1])?
            .into_iter()
            .map(|v| v.scaled(factor))
            .collect();
        return Ok(ResidualReport::from_vectors(ResidualKind::Intrinsic, r, &sampled, vectors, None));
    }
    let sampled = SampledCurve::new(curve, top + 1, opts)?;
    let cov = covariant_stack_sampled(&sampled, top)?;
    let vectors = (0..sampled.len())
        .map(|i| {
            let t = &cov.values[0][i];
            let mut out = cov.values[top][i].clone();
            for l in 0..=(r - 2) {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let lo = &cov.values[l][i];
                let hi = &cov.values[2 * r - 3 - l][i];
                out.add_scaled(space.curvature * sign * t.dot(lo), hi);
                out.add_scaled(-space.curvature * sign * t.dot(hi), lo);
            }
            out
        })
        .collect();
    Ok(ResidualReport::from_vectors(ResidualKind::Intrinsic, r, &sampled, vectors, None))
}

/// `gamma'' + |gamma'|^2 gamma`.
pub fn residual_geodesic(curve: &Curve, opts: &EvalOptions) -> Result<ResidualReport> {
    let sampled = SampledCurve::new(curve, 2, opts)?;
    let expr = &gamma(2) + &gamma(0).mul_scalar(&dot(1, 1));
    let vectors = sampled.eval_vector(&expr)?;
    let lambda = sampled.eval_scalar(&dot(1, 1))?;
    Ok(ResidualReport::from_vectors(ResidualKind::Geodesic, 1, &sampled, vectors, Some(lambda)))
}

/// `gamma'''' + 2 gamma'' + (2 - |gamma''|^2) gamma`.
pub fn residual_biharmonic_ode(curve: &Curve, opts: &EvalOptions) -> Result<ResidualReport> {
    let sampled = SampledCurve::new(curve, 4, opts)?;
    let multiplier = &constant(2.0) - &dot(2, 2);
    let expr = &(&gamma(4) + &gamma(2).scale(2.0)) + &gamma(0).mul_scalar(&multiplier);
    let vectors = sampled.eval_vector(&expr)?;
    let lambda = sampled.eval_scalar(&multiplier)?;
    Ok(ResidualReport::from_vectors(ResidualKind::BiharmonicOde, 2, &sampled, vectors, Some(lambda)))
}

/// Triharmonic equation in ambient form, with `P = |gamma''|^2`:
/// `gamma^(6) + 2 gamma^(4) + 3 gamma'' - 2 P gamma'' - 2 P' gamma'
///  - ((9/2) P'' - |gamma'''|^2 - 3 + 4 P) gamma`.
pub fn residual_triharmonic_ode(curve: &Curve, opts: &EvalOptions) -> Result<ResidualReport> {
    let sampled = SampledCurve::new(curve, 6, opts)?;
    let p = dot(2, 2);
    let pv = sampled.eval_scalar(&p)?;
    let dp = sampled.d_scalar(&p, 1)?;
    let ddp = sampled.d_scalar(&p, 2)?;
    let q = sampled.eval_scalar(&dot(3, 3))?;
    let n = sampled.len();
    let mut lambda = Vec::with_capacity(n);
    let vectors = (0..n)
        .map(|i| {
            let g = |l: usize| sampled.derivative(l, i);
            let mult = 4.5 * ddp[i] - q[i] - 3.0 + 4.0 * pv[i];
            lambda.push(-mult);
            let mut v = g(6).clone();
            v.add_scaled(2.0, g(4));
            v.add_scaled(3.0 - 2.0 * pv[i], g(2));
            v.add_scaled(-2.0 * dp[i], g(1));
            v.add_scaled(-mult, g(0));
            v
        })
        .collect();
    Ok(ResidualReport::from_vectors(ResidualKind::TriharmonicOde, 3, &sampled, vectors, Some(lambda)))
}

/// 4-harmonic equation in ambient form. With `P = |gamma''|^2`, `D = d/ds`
/// and `<i,j> = <gamma^(i), gamma^(j)>`, the field
///
/// `V = gamma^(8) + 2 gamma^(6) + 3 gamma^(4) - P gamma^(4) - 6 P gamma''
///      + 4 gamma'' - 2 <4,2> gamma'' + 5 D^2(<4,1> gamma') - D^4(P gamma)
///      - 6 P' gamma' - 2 D<4,2> gamma' - 5 D(<4,1> gamma'')`
///
/// is corrected by the multiplier term `-(...) gamma` built from the
/// `gamma`-components of the same pieces.
pub fn residual_fourharmonic_ode(curve: &Curve, opts: &EvalOptions) -> Result<ResidualReport> {
    let sampled = SampledCurve::new(curve, 8, opts)?;
    let p = dot(2, 2);
    let d41 = dot(4, 1);
    let d42 = dot(4, 2);
    let w1 = sampled.d_vector(&gamma(1).mul_scalar(&d41), 2)?;
    let w2 = sampled.d_vector(&gamma(0).mul_scalar(&p), 4)?;
    let w3 = sampled.d_vector(&gamma(2).mul_scalar(&d41), 1)?;
    let pv = sampled.eval_scalar(&p)?;
    let dp = sampled.d_scalar(&p, 1)?;
    let v42 = sampled.eval_scalar(&d42)?;
    let dv42 = sampled.d_scalar(&d42, 1)?;
    let n = sampled.len();
    let mut lambda = Vec::with_capacity(n);
    let vectors = (0..n)
        .map(|i| {
            let g = |l: usize| sampled.derivative(l, i);
            let mut v = g(8).clone();
            v.add_scaled(2.0, g(6));
            v.add_scaled(3.0 - pv[i], g(4));
            v.add_scaled(4.0 - 6.0 * pv[i] - 2.0 * v42[i], g(2));
            v.add_scaled(5.0, &w1[i]);
            v.add_scaled(-1.0, &w2[i]);
            v.add_scaled(-6.0 * dp[i] - 2.0 * dv42[i], g(1));
            v.add_scaled(-5.0, &w3[i]);
            let x = g(0);
            let block_a = g(8).dot(x) + 2.0 * g(6).dot(x) + 3.0 * g(4).dot(x) - g(4).dot(x) * pv[i]
                + 6.0 * pv[i]
                - 4.0
                + 2.0 * v42[i];
            let block_b = 5.0 * x.dot(&w1[i]) - x.dot(&w2[i]) - 5.0 * x.dot(&w3[i]);
            lambda.push(-(block_a + block_b));
            v.add_scaled(-(block_a + block_b), x);
            v
        })
        .collect();
    Ok(ResidualReport::from_vectors(ResidualKind::FourHarmonicOde, 4, &sampled, vectors, Some(lambda)))
}

/// `gamma^(2r) - <gamma^(2r), gamma> gamma`, the critical-point equation of
/// `int |gamma^(r)|^2` on the sphere.
pub fn residual_extrinsic(curve: &Curve, r: usize, opts: &EvalOptions) -> Result<ResidualReport> {
    if r < 1 {
        return Err(PolycurveError::InvalidArgument("extrinsic order r must be >= 1".into()));
    }
    let top = (2 * r) as u8;
    let sampled = SampledCurve::new(curve, 2 * r, opts)?;
    let expr = gamma(top).reject_position();
    let vectors = sampled.eval_vector(&expr)?;
    let lambda = sampled.eval_scalar(&(-&dot(top, 0)))?;
    Ok(ResidualReport::from_vectors(ResidualKind::ExtrinsicPoly, r, &sampled, vectors, Some(lambda)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConservationLaw {
    /// `D^2 |nabla T|^2 - |nabla^2 T|^2`.
    TriharmonicFirst,
    /// `1/2 D^2 |nabla^2 T|^2 - 3/2 |nabla^3 T|^2 + 1/2 |nabla^2 T|^2 - |nabla T|^4`.
    TriharmonicSecond,
    /// `D^4 |nabla T|^2 - 2 D^2 |nabla^2 T|^2 + |nabla^3 T|^2`.
    FourHarmonic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConservationReport {
    pub law: ConservationLaw,
    pub parameters: Vec<f64>,
    pub values: Vec<f64>,
    pub mean: f64,
    /// `max - min` over the samples.
    pub drift: f64,
}

impl ConservationReport {
    fn new(law: ConservationLaw, sampled: &SampledCurve, values: Vec<f64>) -> Self {
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            law,
            parameters: sampled.parameters().to_vec(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            drift: max - min,
            values,
        }
    }
}

/// `|nabla^l T|^2` as a polynomial.
fn covariant_norm_sq(l: usize) -> ScalarPoly {
    let e = &covariant_expressions()[l];
    e.dot(e)
}

/// The two first integrals of the triharmonic equation.
pub fn conservation_triharmonic(curve: &Curve, opts: &EvalOptions) -> Result<(ConservationReport, ConservationReport)> {
    let sampled = SampledCurve::new(curve, 6, opts)?;
    let n1 = covariant_norm_sq(1);
    let n2 = covariant_norm_sq(2);
    let n3 = covariant_norm_sq(3);
    let d2n1 = sampled.d_scalar(&n1, 2)?;
    let d2n2 = sampled.d_scalar(&n2, 2)?;
    let v1 = sampled.eval_scalar(&n1)?;
    let v2 = sampled.eval_scalar(&n2)?;
    let v3 = sampled.eval_scalar(&n3)?;
    let first = (0..sampled.len()).map(|i| d2n1[i] - v2[i]).collect();
    let second = (0..sampled.len())
        .map(|i| 0.5 * d2n2[i] - 1.5 * v3[i] + 0.5 * v2[i] - v1[i] * v1[i])
        .collect();
    Ok((
        ConservationReport::new(ConservationLaw::TriharmonicFirst, &sampled, first),
        ConservationReport::new(ConservationLaw::TriharmonicSecond, &sampled, second),
    ))
}

/// Integrated conservation quantity of the 4-harmonic equation.
pub fn conservation_fourharmonic(curve: &Curve, opts: &EvalOptions) -> Result<ConservationReport> {
    let sampled = SampledCurve::new(curve, 8, opts)?;
    let n1 = covariant_norm_sq(1);
    let n2 = covariant_norm_sq(2);
    let d4n1 = sampled.d_scalar(&n1, 4)?;
    let d2n2 = sampled.d_scalar(&n2, 2)?;
    let v3 = sampled.eval_scalar(&covariant_norm_sq(3))?;
    let values = (0..sampled.len()).map(|i| d4n1[i] - 2.0 * d2n2[i] + v3[i]).collect();
    Ok(ConservationReport::new(ConservationLaw::FourHarmonic, &sampled, values))
}

/// Evaluation of `(k1')^2 + 2 k1 k1'' - k1^4 - k1^2 k2^2` on
/// `k1 = alpha / s`, `k2 = beta / s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub alpha: f64,
    pub beta: f64,
    pub parameters: Vec<f64>,
    pub values: Vec<f64>,
    /// `alpha^2 (5 - alpha^2 - beta^2) / s^4` at the same points.
    pub predicted: Vec<f64>,
    pub max_abs: f64,
    /// `max - min` of the values.
    pub drift: f64,
    /// Whether `max_abs >= 1e-3 |alpha^2 (5 - alpha^2 - beta^2)|`.
    pub nonvanishing: bool,
}

/// The scalar expression in curvatures and their derivatives.
pub fn probe_expression(k1: f64, dk1: f64, ddk1: f64, k2: f64) -> f64 {
    dk1 * dk1 + 2.0 * k1 * ddk1 - k1.powi(4) - k1 * k1 * k2 * k2
}

/// Evaluates the probe on `points` uniform values of `s` in `[s_min, s_max]`,
/// using exact derivatives of `alpha / s`.
pub fn conjecture_probe(alpha: f64, beta: f64, s_min: f64, s_max: f64, points: usize) -> Result<ProbeReport> {
    if !(s_min < s_max) || (s_min <= 0.0 && s_max >= 0.0) {
        return Err(PolycurveError::InvalidArgument(format!(
            "probe interval [{s_min}, {s_max}] must be non-empty and exclude 0"
        )));
    }
    if points < 2 {
        return Err(PolycurveError::InvalidArgument("probe needs at least 2 points".into()));
    }
    let parameters: Vec<f64> = (0..points)
        .map(|j| s_min + (s_max - s_min) * j as f64 / (points - 1) as f64)
        .collect();
    let values: Vec<f64> = parameters
        .iter()
        .map(|&s| probe_expression(alpha / s, -alpha / (s * s), 2.0 * alpha / s.powi(3), beta / s))
        .collect();
    let c = alpha * alpha * (5.0 - alpha * alpha - beta * beta);
    let predicted = parameters.iter().map(|&s| c / s.powi(4)).collect();
    let max_abs = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ProbeReport {
        alpha,
        beta,
        parameters,
        values,
        predicted,
        max_abs,
        drift: max - min,
        nonvanishing: max_abs >= 1e-3 * c.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{CircleAnsatzCurve, CircleTerm};

    /// Unit-speed circle with `a^2 = a_sq`.
    fn circle(a_sq: f64) -> Curve {
        let alpha = (1.0 / a_sq).sqrt();
        let height = (1.0 - 1.0 / a_sq).sqrt();
        Curve::Ansatz(
            CircleAnsatzCurve::new(
                vec![CircleTerm::new(
                    a_sq.sqrt(),
                    AmbientVector::axis(3, 0, alpha),
                    AmbientVector::axis(3, 1, alpha),
                )],
                AmbientVector::axis(3, 2, height),
            )
            .unwrap(),
        )
    }

    #[test]
    fn circle_tension_matches_closed_factor() {
        // Independent of the closed recursion: numeric covariant route for r <= 4.
        let space = SpaceForm::unit_sphere(2);
        for &a_sq in &[1.5, 2.0, 3.0, 5.0] {
            for r in 2..=4 {
                let rep = residual_intrinsic(&circle(a_sq), r, &space, &EvalOptions::default()).unwrap();
                let k = (a_sq - 1.0).sqrt();
                let expected = (single_frequency_tension_factor(a_sq.sqrt(), 1.0 / a_sq, r, 1.0) * k).abs();
                assert!((rep.max_norm - expected).abs() < 1e-9 * expected.max(1.0), "a^2={a_sq} r={r}");
            }
        }
    }

    #[test]
    fn rejects_low_tension_order() {
        let space = SpaceForm::unit_sphere(2);
        assert!(residual_intrinsic(&circle(2.0), 1, &space, &EvalOptions::default()).is_err());
    }

    #[test]
    fn probe_matches_closed_form() {
        let rep = conjecture_probe(1.0, 1.0, 1.0, 2.0, 11).unwrap();
        for (v, p) in rep.values.iter().zip(&rep.predicted) {
            assert!((v - p).abs() < 1e-12);
        }
        assert!(rep.nonvanishing);
        assert!(conjecture_probe(1.0, 1.0, -1.0, 1.0, 11).is_err());
    }
}
