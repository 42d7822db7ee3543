//! Discrete `r`-energies, the reduced one-parameter Lagrangian of single
//! circles, its second variation, and gradient flows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{arclength_reparametrize, derivatives_spectral, AmbientVector, Curve, DiscreteCurve};
use crate::error::{PolycurveError, Result};
use crate::families::single_frequency_circle;
use crate::geometry::MAX_COVARIANT_ORDER;
use crate::lagrangian::LagrangianId;
use crate::residuals::single_frequency_parameters;
use crate::sampling::{EvalOptions, SampledCurve};
use crate::spectral::SpectralGrid;
use crate::symbolic::{DotTable, ScalarPoly};
use crate::tolerances::{ARMIJO_C, BACKTRACK, TOL_FLOW};

/// `E_r = int |nabla^{r-1} T|^2 ds` over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub total: f64,
    pub interval_length: f64,
    /// `total / interval_length`.
    pub density: f64,
}

/// `a^{2r} alpha^2 (1 - alpha^2)^{r-1}`, the energy density of a circle of
/// frequency `a` and squared radius `alpha_sq`.
pub fn circle_energy_density(a: f64, alpha_sq: f64, r: usize) -> f64 {
    a.powi(2 * r as i32) * alpha_sq * (1.0 - alpha_sq).powi(r as i32 - 1)
}

/// Spectral quadrature of `|nabla^{r-1} T|^2` over the sampling window.
///
/// Single analytic circles with `r - 1` beyond the covariant budget use the
/// closed-form density instead.
pub fn discrete_energy(curve: &Curve, r: usize, opts: &EvalOptions) -> Result<EnergyValue> {
    if r < 1 {
        return Err(PolycurveError::InvalidArgument("energy order r must be >= 1".into()));
    }
    if r > MAX_COVARIANT_ORDER + 1 {
        let Some((a, alpha_sq)) = single_frequency_parameters(curve) else {
            return Err(PolycurveError::UnsupportedOrder {
                requested: r,
                max: MAX_COVARIANT_ORDER + 1,
            });
        };
        let density = circle_energy_density(a, alpha_sq, r);
        let interval_length = 2.0 * std::f64::consts::PI / a;
        return Ok(EnergyValue {
            total: density * interval_length,
            interval_length,
            density,
        });
    }
    let poly = LagrangianId::Intrinsic(r).polynomial()?;
    let sampled = SampledCurve::new(curve, r, opts)?;
    let values = sampled.eval_scalar(&poly)?;
    let total = values.iter().sum::<f64>() * sampled.weight();
    Ok(EnergyValue {
        total,
        interval_length: sampled.span(),
        density: total / sampled.span(),
    })
}

/// Which form of the reduced Lagrangian to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducedMode {
    /// Frequency held at the given value while `alpha` varies.
    FixedFrequency(f64),
    /// Frequency tied to `alpha` by `a^2 alpha^2 = 1`.
    Constrained,
}

/// `alpha -> a^{2r} alpha^2 (1 - alpha^2)^{r-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedLagrangian {
    pub r: usize,
    pub mode: ReducedMode,
}

impl ReducedLagrangian {
    fn frequency(&self, alpha: f64) -> f64 {
        match self.mode {
            ReducedMode::FixedFrequency(a) => a,
            ReducedMode::Constrained => 1.0 / alpha,
        }
    }

    pub fn value(&self, alpha: f64) -> f64 {
        circle_energy_density(self.frequency(alpha), alpha * alpha, self.r)
    }

    /// `d/d alpha` in closed form.
    pub fn derivative(&self, alpha: f64) -> f64 {
        let r = self.r as i32;
        let x = alpha * alpha;
        match self.mode {
            ReducedMode::FixedFrequency(a) => {
                2.0 * a.powi(2 * r) * alpha * (1.0 - x).powi(r - 2) * (1.0 - self.r as f64 * x)
            }
            ReducedMode::Constrained => {
                -2.0 * (self.r as f64 - 1.0) * alpha.powi(1 - 2 * r) * (1.0 - x).powi(r - 2)
            }
        }
    }
}

/// Critical values of `alpha^2` of the reduced Lagrangian at fixed frequency:
/// `1 / r`, and `1` (a geodesic) when `r >= 3`.
pub fn reduced_lagrangian_critical_points(r: usize) -> Result<Vec<f64>> {
    match r {
        0 | 1 => Err(PolycurveError::InvalidArgument(format!("r must be >= 2, got {r}"))),
        2 => Ok(vec![0.5]),
        _ => Ok(vec![1.0, 1.0 / r as f64]),
    }
}

/// Closed-form second variation of the reduced energy at the critical
/// circle, checked against a centred finite difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondVariation {
    pub r: usize,
    pub interval_length: f64,
    pub closed_form: f64,
    pub finite_difference: f64,
    pub relative_gap: f64,
}

/// `-4 |I| r^r (1 - 1/r)^{r-2}`: the second derivative in `alpha` of
/// `|I| a^{2r} alpha^2 (1 - alpha^2)^{r-1}` at `alpha^2 = 1/r`, `a^2 = r`.
pub fn second_variation_reduced(r: usize, interval_length: f64) -> Result<SecondVariation> {
    if r < 2 {
        return Err(PolycurveError::InvalidArgument(format!("r must be >= 2, got {r}")));
    }
    if !(interval_length > 0.0) {
        return Err(PolycurveError::InvalidArgument("interval length must be positive".into()));
    }
    let rf = r as f64;
    let closed_form = -4.0 * interval_length * rf.powi(r as i32) * (1.0 - 1.0 / rf).powi(r as i32 - 2);
    let lagrangian = ReducedLagrangian {
        r,
        mode: ReducedMode::FixedFrequency(rf.sqrt()),
    };
    let alpha = (1.0 / rf).sqrt();
    let h = 1e-4;
    let finite_difference = interval_length
        * (lagrangian.value(alpha + h) - 2.0 * lagrangian.value(alpha) + lagrangian.value(alpha - h))
        / (h * h);
    let relative_gap = (closed_form - finite_difference).abs() / closed_form.abs();
    if relative_gap > 0.01 {
        return Err(PolycurveError::SecondVariationMismatch {
            closed_form,
            finite_difference,
        });
    }
    Ok(SecondVariation {
        r,
        interval_length,
        closed_form,
        finite_difference,
        relative_gap,
    })
}

/// Energy of sampled closed curves with a fixed sample count and period,
/// with a finite-difference gradient in the sample coordinates.
///
/// Differentiation is exactly linear (no spectral noise floor), so
/// perturbing one coordinate changes every derivative by a shifted copy of
/// the differentiated unit impulse.
#[derive(Debug, Clone)]
pub struct EnergyKernel {
    r: usize,
    n: usize,
    period: f64,
    poly: ScalarPoly,
    grid: SpectralGrid,
    impulse: Vec<Vec<f64>>,
}

/// Step of the central differences in the energy gradient.
pub const GRADIENT_STEP: f64 = 1e-6;

impl EnergyKernel {
    pub fn new(r: usize, n: usize, period: f64) -> Result<Self> {
        if !(1..=MAX_COVARIANT_ORDER + 1).contains(&r) {
            return Err(PolycurveError::UnsupportedOrder {
                requested: r,
                max: MAX_COVARIANT_ORDER + 1,
            });
        }
        let grid = SpectralGrid::new(n, period).with_noise_floor(0.0);
        let mut delta = vec![0.0; n];
        delta[0] = 1.0;
        let impulse = grid.derivatives(&delta, r);
        Ok(Self {
            r,
            n,
            period,
            poly: LagrangianId::Intrinsic(r).polynomial()?,
            grid,
            impulse,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    fn weight(&self) -> f64 {
        self.period / self.n as f64
    }

    /// `derivs[i][l]` at every sample.
    fn derivatives(&self, samples: &[AmbientVector]) -> Vec<Vec<AmbientVector>> {
        let dim = samples[0].dim();
        let comps: Vec<Vec<Vec<f64>>> = (0..dim)
            .map(|c| {
                let v: Vec<f64> = samples.iter().map(|x| x[c]).collect();
                self.grid.derivatives(&v, self.r)
            })
            .collect();
        (0..self.n)
            .map(|i| {
                (0..=self.r)
                    .map(|l| AmbientVector::from_vec(comps.iter().map(|d| d[l][i]).collect()))
                    .collect()
            })
            .collect()
    }

    fn density(&self, derivs: &[AmbientVector]) -> f64 {
        let refs: Vec<&AmbientVector> = derivs.iter().collect();
        self.poly.eval(&DotTable::new(&refs))
    }

    pub fn energy(&self, samples: &[AmbientVector]) -> f64 {
        self.derivatives(samples)
            .iter()
            .map(|d| self.density(d))
            .sum::<f64>()
            * self.weight()
    }

    /// Central-difference gradient `dE/dx_j` for every sample `j`.
    pub fn gradient(&self, samples: &[AmbientVector]) -> Vec<AmbientVector> {
        let derivs = self.derivatives(samples);
        let dim = samples[0].dim();
        let h = GRADIENT_STEP;
        let entries: Vec<f64> = (0..self.n * dim)
            .into_par_iter()
            .map(|idx| {
                let (j, c) = (idx / dim, idx % dim);
                let mut acc = 0.0;
                let mut plus: Vec<AmbientVector> = derivs[0].clone();
                let mut minus: Vec<AmbientVector> = derivs[0].clone();
                for (i, d) in derivs.iter().enumerate() {
                    let shift = (i + self.n - j) % self.n;
                    for l in 0..=self.r {
                        plus[l].clone_from(&d[l]);
                        minus[l].clone_from(&d[l]);
                        let k = self.impulse[l][shift];
                        plus[l].coords_mut()[c] += h * k;
                        minus[l].coords_mut()[c] -= h * k;
                    }
                    acc += self.density(&plus) - self.density(&minus);
                }
                acc * self.weight() / (2.0 * h)
            })
            .collect();
        entries
            .chunks(dim)
            .map(|c| AmbientVector::from_vec(c.to_vec()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowMode {
    /// Optimise only the radius of a single circle, with the frequency tied
    /// to it by arclength parametrisation.
    Restricted,
    /// Projected gradient descent on all sample coordinates.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub mode: FlowMode,
    pub max_iters: usize,
    pub tol: f64,
    /// Full mode: accepted steps between arclength reparametrisations.
    pub reparam_every: usize,
    /// Restricted mode: samples of the reconstructed circle.
    pub samples: usize,
    /// Permit `r = 4` (needs at least 512 samples in full mode).
    pub allow_r4: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            mode: FlowMode::Restricted,
            max_iters: 5000,
            tol: TOL_FLOW,
            reparam_every: 10,
            samples: 128,
            allow_r4: false,
        }
    }
}

/// One record of a flow. Step 0 is the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowIteration {
    pub step: usize,
    pub energy: f64,
    /// Quantity decreased by the line search: the energy in full mode, the
    /// squared first variation in restricted mode.
    pub objective: f64,
    pub constraint_violation: f64,
    pub step_size: f64,
    pub gradient_norm: f64,
    pub reparametrized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
    LineSearchStall,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyTrace {
    pub mode: FlowMode,
    pub r: usize,
    pub iterations: Vec<FlowIteration>,
    pub termination: Termination,
    #[serde(serialize_with = "crate::io::serialize_discrete")]
    pub final_curve: DiscreteCurve,
    /// Restricted mode: final squared radius and frequency of the circle.
    pub final_alpha_sq: Option<f64>,
    pub final_frequency: Option<f64>,
}

impl EnergyTrace {
    pub fn accepted_steps(&self) -> usize {
        self.iterations.len().saturating_sub(1)
    }

    pub fn final_energy(&self) -> f64 {
        self.iterations.last().map(|i| i.energy).unwrap_or(f64::NAN)
    }
}

fn check_flow_order(r: usize, options: &FlowOptions, n: usize) -> Result<()> {
    match r {
        2 | 3 => Ok(()),
        4 if options.allow_r4 => {
            if options.mode == FlowMode::Full && n < 512 {
                Err(PolycurveError::InvalidArgument(format!(
                    "r = 4 full flow needs at least 512 samples, got {n}"
                )))
            } else {
                Ok(())
            }
        }
        _ => Err(PolycurveError::InvalidArgument(format!(
            "gradient flow supports r in {{2, 3}} (r = 4 behind allow_r4), got {r}"
        ))),
    }
}

/// Minimises the `r`-energy from `initial`; see [`FlowMode`].
///
/// Restricted mode fits a circle to `initial` and then drives the first
/// variation of the fixed-frequency reduced energy to zero, re-imposing
/// `a^2 alpha^2 = 1` after each step. Critical circles are maxima of the
/// reduced energy, so the flow descends the squared first variation rather
/// than the energy.
pub fn gradient_flow(initial: &DiscreteCurve, r: usize, options: &FlowOptions) -> Result<EnergyTrace> {
    check_flow_order(r, options, initial.len())?;
    match options.mode {
        FlowMode::Restricted => restricted_flow(initial, r, options),
        FlowMode::Full => full_flow(initial, r, options),
    }
}

/// Fits `(a, alpha)` of a single circle to sampled data.
pub fn fit_circle(curve: &DiscreteCurve) -> Result<(f64, f64)> {
    let n = curve.len() as f64;
    let mut centre = AmbientVector::zeros(curve.dim());
    for x in curve.samples() {
        centre.add_scaled(1.0 / n, x);
    }
    let alpha_sq = curve
        .samples()
        .iter()
        .map(|x| (x - &centre).norm_sq())
        .sum::<f64>()
        / n;
    let stack = derivatives_spectral(curve, 1)?;
    let speed = stack.values[1].iter().map(AmbientVector::norm).sum::<f64>() / n;
    let alpha = alpha_sq.sqrt();
    if alpha <= 1e-12 {
        return Err(PolycurveError::InvalidCurve("initial curve is a point".into()));
    }
    Ok((speed / alpha, alpha))
}

struct RestrictedProblem {
    r: usize,
    samples: usize,
    dim: usize,
}

impl RestrictedProblem {
    fn curve(&self, a: f64, alpha: f64) -> Result<DiscreteCurve> {
        single_frequency_circle(a * a, alpha * alpha, self.dim - 1)?.sample(self.samples)
    }

    fn density(&self, a: f64, alpha: f64) -> Result<f64> {
        let c = Curve::Discrete(self.curve(a, alpha)?);
        Ok(discrete_energy(&c, self.r, &EvalOptions::default())?.density)
    }

    /// `d/d alpha` of the density at fixed frequency `1 / alpha`.
    fn first_variation(&self, alpha: f64) -> Result<f64> {
        let a = 1.0 / alpha;
        let h = 1e-5;
        let hi = (alpha + h).min(1.0);
        let lo = alpha - h;
        Ok((self.density(a, hi)? - self.density(a, lo)?) / (hi - lo))
    }

    fn objective(&self, alpha: f64) -> Result<f64> {
        Ok(self.first_variation(alpha)?.powi(2))
    }

    fn objective_slope(&self, alpha: f64) -> Result<f64> {
        let h = 1e-4;
        let hi = (alpha + h).min(1.0);
        let lo = alpha - h;
        Ok((self.objective(hi)? - self.objective(lo)?) / (hi - lo))
    }
}

const ALPHA_MIN: f64 = 1e-3;
/// Trust region on `alpha` per step; the zero of the first variation at
/// `alpha = 1` (`r >= 3`) is separated from the proper critical radius by
/// a barrier in the objective that longer steps could jump.
const MAX_ALPHA_STEP: f64 = 0.02;
const MAX_BACKTRACKS: usize = 60;

fn restricted_flow(initial: &DiscreteCurve, r: usize, options: &FlowOptions) -> Result<EnergyTrace> {
    let problem = RestrictedProblem {
        r,
        samples: options.samples,
        dim: initial.dim(),
    };
    let (a0, alpha0) = fit_circle(initial)?;
    let mut alpha = alpha0.clamp(ALPHA_MIN, 1.0);
    let mut g = problem.first_variation(alpha)?;
    let mut phi = g * g;
    let mut iterations = vec![FlowIteration {
        step: 0,
        energy: problem.density(1.0 / alpha, alpha)?,
        objective: phi,
        constraint_violation: (a0 * a0 * alpha0 * alpha0 - 1.0).abs(),
        step_size: 0.0,
        gradient_norm: g.abs(),
        reparametrized: false,
    }];
    let mut t: f64 = 1e-3;
    let mut termination = Termination::MaxIterations;
    for step in 1..=options.max_iters {
        if g.abs() <= options.tol {
            termination = Termination::Converged;
            break;
        }
        let slope = problem.objective_slope(alpha)?;
        if slope == 0.0 {
            termination = Termination::LineSearchStall;
            break;
        }
        t = (2.0 * t).min(MAX_ALPHA_STEP / slope.abs());
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = (alpha - t * slope).clamp(ALPHA_MIN, 1.0);
            let phi_trial = problem.objective(trial)?;
            if phi_trial <= phi - ARMIJO_C * (alpha - trial).abs() * slope.abs() {
                accepted = Some((trial, phi_trial));
                break;
            }
            t *= BACKTRACK;
        }
        let Some((next, phi_next)) = accepted else {
            termination = Termination::LineSearchStall;
            break;
        };
        // Violation of a^2 alpha^2 = 1 after moving alpha at fixed a, before
        // the frequency is re-tied.
        let violation = ((next / alpha).powi(2) - 1.0).abs();
        alpha = next;
        phi = phi_next;
        g = problem.first_variation(alpha)?;
        iterations.push(FlowIteration {
            step,
            energy: problem.density(1.0 / alpha, alpha)?,
            objective: phi,
            constraint_violation: violation,
            step_size: t,
            gradient_norm: g.abs(),
            reparametrized: false,
        });
    }
    if termination == Termination::MaxIterations && g.abs() <= options.tol {
        termination = Termination::Converged;
    }
    let trace = EnergyTrace {
        mode: FlowMode::Restricted,
        r,
        iterations,
        termination,
        final_curve: problem.curve(1.0 / alpha, alpha)?,
        final_alpha_sq: Some(alpha * alpha),
        final_frequency: Some(1.0 / alpha),
    };
    if termination == Termination::LineSearchStall {
        return Err(PolycurveError::LineSearchStall(Box::new(trace)));
    }
    Ok(trace)
}

fn project_tangent(samples: &[AmbientVector], grad: &mut [AmbientVector]) {
    for (x, g) in samples.iter().zip(grad.iter_mut()) {
        let d = g.dot(x);
        g.add_scaled(-d, x);
    }
}

fn full_flow(initial: &DiscreteCurve, r: usize, options: &FlowOptions) -> Result<EnergyTrace> {
    let mut samples = initial.samples().to_vec();
    let mut kernel = EnergyKernel::new(r, samples.len(), initial.period())?;
    let mut energy = kernel.energy(&samples);
    let mut grad = kernel.gradient(&samples);
    project_tangent(&samples, &mut grad);
    let max_norm = |g: &[AmbientVector]| g.iter().map(AmbientVector::max_abs).fold(0.0, f64::max);
    let mut gnorm = max_norm(&grad);
    let mut iterations = vec![FlowIteration {
        step: 0,
        energy,
        objective: energy,
        constraint_violation: 0.0,
        step_size: 0.0,
        gradient_norm: gnorm,
        reparametrized: false,
    }];
    let mut t = if gnorm > 0.0 { 0.01 / gnorm } else { 1.0 };
    let mut termination = Termination::MaxIterations;
    let mut accepted_since_reparam = 0;
    for step in 1..=options.max_iters {
        if gnorm <= options.tol {
            termination = Termination::Converged;
            break;
        }
        let sq: f64 = grad.iter().map(AmbientVector::norm_sq).sum();
        t *= 2.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut violation = 0.0_f64;
            let trial: Vec<AmbientVector> = samples
                .iter()
                .zip(&grad)
                .map(|(x, g)| {
                    let mut y = x.clone();
                    y.add_scaled(-t, g);
                    violation = violation.max((y.norm() - 1.0).abs());
                    y.normalized()
                })
                .collect();
            let e = kernel.energy(&trial);
            if e <= energy - ARMIJO_C * t * sq {
                accepted = Some((trial, e, violation));
                break;
            }
            t *= BACKTRACK;
        }
        let Some((next, e, violation)) = accepted else {
            termination = Termination::LineSearchStall;
            break;
        };
        samples = next;
        energy = e;
        accepted_since_reparam += 1;
        let mut reparametrized = false;
        if accepted_since_reparam >= options.reparam_every {
            accepted_since_reparam = 0;
            let current = DiscreteCurve::new(samples.clone(), kernel.period())?;
            if let Ok(re) = arclength_reparametrize(&Curve::Discrete(current)) {
                let re_kernel = EnergyKernel::new(r, re.len(), re.period())?;
                let re_energy = re_kernel.energy(re.samples());
                if re_energy <= energy {
                    samples = re.samples().to_vec();
                    kernel = re_kernel;
                    energy = re_energy;
                    reparametrized = true;
                }
            }
        }
        grad = kernel.gradient(&samples);
        project_tangent(&samples, &mut grad);
        gnorm = max_norm(&grad);
        iterations.push(FlowIteration {
            step,
            energy,
            objective: energy,
            constraint_violation: violation,
            step_size: t,
            gradient_norm: gnorm,
            reparametrized,
        });
    }
    if termination == Termination::MaxIterations && gnorm <= options.tol {
        termination = Termination::Converged;
    }
    let trace = EnergyTrace {
        mode: FlowMode::Full,
        r,
        iterations,
        termination,
        final_curve: DiscreteCurve::new(samples, kernel.period())?,
        final_alpha_sq: None,
        final_frequency: None,
    };
    if termination == Termination::LineSearchStall {
        return Err(PolycurveError::LineSearchStall(Box::new(trace)));
    }
    Ok(trace)
}

/// Great circle in the first two coordinates with seeded smooth
/// perturbations of size `amplitude` in every coordinate, projected back to
/// the sphere.
pub fn perturbed_great_circle(n: usize, dim: usize, amplitude: f64, seed: u64) -> Result<DiscreteCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = 3;
    let coeffs: Vec<Vec<(f64, f64)>> = (0..dim)
        .map(|_| {
            (1..=modes)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let period = 2.0 * std::f64::consts::PI;
    let samples = (0..n)
        .map(|j| {
            let t = j as f64 * period / n as f64;
            let coords = (0..dim)
                .map(|c| {
                    let base = match c {
                        0 => t.cos(),
                        1 => t.sin(),
                        _ => 0.0,
                    };
                    let wiggle: f64 = coeffs[c]
                        .iter()
                        .enumerate()
                        .map(|(m, (p, q))| {
                            let k = (m + 1) as f64;
                            p * (k * t).cos() + q * (k * t).sin()
                        })
                        .sum();
                    base + amplitude * wiggle
                })
                .collect();
            AmbientVector::from_vec(coords)
        })
        .collect();
    DiscreteCurve::from_projected(samples, period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_r_circle;

    #[test]
    fn closed_form_energies_of_critical_circles() {
        for (r, expected) in [(2, 1.0), (3, 4.0)] {
            let c: Curve = make_r_circle(r, 2).unwrap().into();
            let e = discrete_energy(&c, r, &EvalOptions::default()).unwrap();
            assert!((e.density - expected).abs() < 1e-10, "r={r}: {}", e.density);
        }
    }

    #[test]
    fn constrained_reduced_energy_is_monotone() {
        let l = ReducedLagrangian {
            r: 3,
            mode: ReducedMode::Constrained,
        };
        for k in 1..20 {
            let alpha = k as f64 / 20.0;
            assert!(l.derivative(alpha) < 0.0);
            let h = 1e-6;
            let fd = (l.value(alpha + h) - l.value(alpha - h)) / (2.0 * h);
            assert!((fd - l.derivative(alpha)).abs() < 1e-5 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn second_variation_examples() {
        let s2 = second_variation_reduced(2, 1.0).unwrap();
        assert!((s2.closed_form + 16.0).abs() < 1e-12);
        let s3 = second_variation_reduced(3, 1.0).unwrap();
        assert!((s3.closed_form + 72.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsupported_flow_orders() {
        let c = perturbed_great_circle(32, 3, 0.05, 1).unwrap();
        assert!(gradient_flow(&c, 4, &FlowOptions::default()).is_err());
        assert!(gradient_flow(&c, 5, &FlowOptions::default()).is_err());
    }
}
