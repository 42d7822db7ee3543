//! Fourier differentiation and trigonometric interpolation on uniform
//! periodic grids.
//!
//! A real signal sampled at `t_j = j L / N` is represented by its discrete
//! Fourier coefficients with wavenumbers `0, 1, .., N/2 - 1, -N/2, .., -1`.
//! The Nyquist mode is treated symmetrically (as a pure cosine), so odd
//! derivatives drop it and even derivatives keep it real.
//!
//! Coefficients below a relative noise floor are discarded before
//! differentiating; otherwise roundoff in the highest modes is amplified by
//! `(N w / 2)^m` and dominates derivatives of order six and above.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Default relative magnitude below which Fourier coefficients are treated
/// as roundoff.
pub const DEFAULT_NOISE_FLOOR: f64 = 1e-13;

/// `(i w)^m` for real `w`.
fn i_pow_times(w: f64, m: usize) -> Complex64 {
    let mag = w.powi(m as i32);
    match m % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, -mag),
    }
}

/// Planned forward/inverse transforms for one grid size and period.
#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    period: f64,
    noise_floor: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("period", &self.period)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(n: usize, period: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            period,
            noise_floor: DEFAULT_NOISE_FLOOR,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Sets the relative noise floor; `0.0` makes differentiation exactly linear.
    pub fn with_noise_floor(mut self, floor: f64) -> Self {
        self.noise_floor = floor;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Fundamental angular frequency `2 pi / L`.
    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    fn signed_wavenumber(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Normalised Fourier coefficients `c_k` with `f(t_j) = sum_k c_k e^{i w_k t_j}`.
    pub fn coefficients(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n, "signal length does not match grid");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        buf
    }

    fn synthesize(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut coeffs);
        coeffs.into_iter().map(|c| c.re).collect()
    }

    fn apply_derivative(&self, coeffs: &[Complex64], order: usize) -> Vec<Complex64> {
        let omega = self.omega();
        let nyquist = self.n / 2;
        let cutoff = self.noise_floor * coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if order == 0 {
                    return c;
                }
                if c.norm() <= cutoff || (k == nyquist && order % 2 == 1) {
                    return Complex64::new(0.0, 0.0);
                }
                let w = self.signed_wavenumber(k) as f64 * omega;
                c * i_pow_times(w, order)
            })
            .collect()
    }

    /// `order`-th derivative of a real periodic signal.
    pub fn differentiate(&self, values: &[f64], order: usize) -> Vec<f64> {
        if order == 0 {
            return values.to_vec();
        }
        let coeffs = self.coefficients(values);
        self.synthesize(self.apply_derivative(&coeffs, order))
    }

    /// Derivatives of orders `0..=max_order`, sharing one forward transform.
    pub fn derivatives(&self, values: &[f64], max_order: usize) -> Vec<Vec<f64>> {
        let coeffs = self.coefficients(values);
        (0..=max_order)
            .map(|m| {
                if m == 0 {
                    values.to_vec()
                } else {
                    self.synthesize(self.apply_derivative(&coeffs, m))
                }
            })
            .collect()
    }

    /// Trigonometric interpolant of the samples, evaluable anywhere.
    pub fn interpolant(&self, values: &[f64]) -> TrigInterpolant {
        let coeffs = self.coefficients(values);
        let half = self.n / 2;
        TrigInterpolant {
            omega: self.omega(),
            mean: coeffs[0].re,
            modes: coeffs[1..half].to_vec(),
            nyquist: coeffs[half].re,
            nyquist_index: half,
        }
    }
}

/// Band-limited interpolant `f(t) = c0 + 2 Re sum_k c_k e^{ikwt} + c_ny cos(N/2 w t)`.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    omega: f64,
    mean: f64,
    modes: Vec<Complex64>,
    nyquist: f64,
    nyquist_index: usize,
}

impl TrigInterpolant {
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_derivative(t, 0)
    }

    pub fn eval_derivative(&self, t: f64, order: usize) -> f64 {
        let mut acc = if order == 0 { self.mean } else { 0.0 };
        for (idx, c) in self.modes.iter().enumerate() {
            let w = (idx + 1) as f64 * self.omega;
            let phase = Complex64::from_polar(1.0, w * t);
            acc += 2.0 * (c * i_pow_times(w, order) * phase).re;
        }
        let wn = self.nyquist_index as f64 * self.omega;
        acc += match order % 4 {
            0 => self.nyquist * wn.powi(order as i32) * (wn * t).cos(),
            2 => -self.nyquist * wn.powi(order as i32) * (wn * t).cos(),
            _ => 0.0,
        };
        acc
    }

    /// `int_0^t f(u) du`.
    pub fn integral_from_zero(&self, t: f64) -> f64 {
        let mut acc = self.mean * t;
        for (idx, c) in self.modes.iter().enumerate() {
            let w = (idx + 1) as f64 * self.omega;
            let phase = Complex64::from_polar(1.0, w * t) - Complex64::new(1.0, 0.0);
            acc += 2.0 * (c * phase / Complex64::new(0.0, w)).re;
        }
        let wn = self.nyquist_index as f64 * self.omega;
        acc += self.nyquist * (wn * t).sin() / wn;
        acc
    }
}
