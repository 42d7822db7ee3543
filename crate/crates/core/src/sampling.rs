//! Evaluation of symbolic fields along a curve on a parameter grid.
//!
//! A `SampledCurve` holds ambient derivatives at each grid point together
//! with their inner-product tables. Derivatives in `s` of derived fields are
//! taken either by expanding symbolically (`FieldRoute::Expanded`) or by
//! Fourier-differentiating the sampled field (`FieldRoute::Grid`, periodic
//! grids only).

use serde::{Deserialize, Serialize};

use crate::ambient::{derivatives_analytic, derivatives_spectral, AmbientVector, Curve};
use crate::error::{PolycurveError, Result};
use crate::spectral::SpectralGrid;
use crate::symbolic::{DotTable, ScalarPoly, VectorExpr};
use crate::tolerances::{MAX_ANALYTIC_ORDER, MAX_SPECTRAL_ORDER};

/// Default grid size for analytic curves.
pub const DEFAULT_ANALYTIC_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldRoute {
    Expanded,
    Grid,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Grid size for analytic curves; discrete curves use their own samples.
    pub samples: Option<usize>,
    pub route: Option<FieldRoute>,
}

impl EvalOptions {
    pub fn with_route(route: FieldRoute) -> Self {
        Self {
            samples: None,
            route: Some(route),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampledCurve {
    parameters: Vec<f64>,
    derivs: Vec<Vec<AmbientVector>>,
    tables: Vec<DotTable>,
    span: f64,
    period: Option<f64>,
    grid: Option<SpectralGrid>,
    route: FieldRoute,
}

impl SampledCurve {
    /// Samples `curve` with ambient derivatives up to `order`.
    ///
    /// Analytic curves are sampled over one common period, or over
    /// `4 pi / min(a_j)` when no common period exists.
    pub fn new(curve: &Curve, order: usize, opts: &EvalOptions) -> Result<Self> {
        let route = opts.route.unwrap_or(FieldRoute::Expanded);
        let (stack, span, period) = match curve {
            Curve::Ansatz(c) => {
                if order > MAX_ANALYTIC_ORDER {
                    return Err(PolycurveError::UnsupportedOrder {
                        requested: order,
                        max: MAX_ANALYTIC_ORDER,
                    });
                }
                let n = opts.samples.unwrap_or(DEFAULT_ANALYTIC_SAMPLES);
                if n < 2 {
                    return Err(PolycurveError::BadSampleCount(n));
                }
                let period = c.common_period();
                let span = period.unwrap_or(4.0 * std::f64::consts::PI / c.min_frequency());
                let params: Vec<f64> = (0..n).map(|j| j as f64 * span / n as f64).collect();
                (derivatives_analytic(c, &params, order)?, span, period)
            }
            Curve::Discrete(c) => {
                if order > MAX_SPECTRAL_ORDER {
                    return Err(PolycurveError::UnsupportedOrder {
                        requested: order,
                        max: MAX_SPECTRAL_ORDER,
                    });
                }
                (derivatives_spectral(c, order)?, c.period(), Some(c.period()))
            }
        };
        if route == FieldRoute::Grid && period.is_none() {
            return Err(PolycurveError::IrrationalFrequencies);
        }
        let n = stack.len();
        let tables = (0..n)
            .map(|i| {
                let refs: Vec<&AmbientVector> = stack.values.iter().map(|v| &v[i]).collect();
                DotTable::new(&refs)
            })
            .collect();
        let grid = period.map(|p| SpectralGrid::new(n, p));
        Ok(Self {
            parameters: stack.parameters,
            derivs: stack.values,
            tables,
            span,
            period,
            grid,
            route,
        })
    }

    pub fn len(&self) -> usize {
        self.parameters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.derivs[0][0].dim()
    }

    pub fn parameters(&self) -> &[f64] {
        &self.parameters
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn route(&self) -> FieldRoute {
        self.route
    }

    /// `gamma^(l)` at sample `i`.
    pub fn derivative(&self, l: usize, i: usize) -> &AmbientVector {
        &self.derivs[l][i]
    }

    pub fn table(&self, i: usize) -> &DotTable {
        &self.tables[i]
    }

    /// Uniform quadrature weight.
    pub fn weight(&self) -> f64 {
        self.span / self.len() as f64
    }

    /// `sqrt(int |f|^2 ds)` for per-sample magnitudes.
    pub fn l2_norm(&self, magnitudes: &[f64]) -> f64 {
        (magnitudes.iter().map(|v| v * v).sum::<f64>() * self.weight()).sqrt()
    }

    fn check_order(&self, needed: usize) -> Result<()> {
        if needed > self.order() {
            return Err(PolycurveError::UnsupportedOrder {
                requested: needed,
                max: self.order(),
            });
        }
        Ok(())
    }

    pub fn eval_scalar(&self, p: &ScalarPoly) -> Result<Vec<f64>> {
        self.check_order(p.max_order())?;
        Ok(self.tables.iter().map(|t| p.eval(t)).collect())
    }

    pub fn eval_vector(&self, v: &VectorExpr) -> Result<Vec<AmbientVector>> {
        self.check_order(v.max_order())?;
        Ok((0..self.len())
            .map(|i| {
                let refs: Vec<&AmbientVector> = self.derivs.iter().map(|d| &d[i]).collect();
                v.eval(&refs, &self.tables[i])
            })
            .collect())
    }

    /// `d^k/ds^k` of a scalar field along the route of this sampling.
    pub fn d_scalar(&self, p: &ScalarPoly, k: usize) -> Result<Vec<f64>> {
        match (self.route, &self.grid) {
            (FieldRoute::Grid, Some(grid)) if k > 0 => Ok(grid.differentiate(&self.eval_scalar(p)?, k)),
            _ => self.eval_scalar(&p.nth_derivative(k)),
        }
    }

    /// `d^k/ds^k` of a vector field along the route of this sampling.
    pub fn d_vector(&self, v: &VectorExpr, k: usize) -> Result<Vec<AmbientVector>> {
        match (self.route, &self.grid) {
            (FieldRoute::Grid, Some(grid)) if k > 0 => {
                let values = self.eval_vector(v)?;
                Ok(self.grid_differentiate(grid, &values, k))
            }
            _ => self.eval_vector(&v.nth_derivative(k)),
        }
    }

    fn grid_differentiate(
        &self,
        grid: &SpectralGrid,
        values: &[AmbientVector],
        k: usize,
    ) -> Vec<AmbientVector> {
        let dim = self.dim();
        let comps: Vec<Vec<f64>> = (0..dim)
            .map(|c| grid.differentiate(&values.iter().map(|v| v[c]).collect::<Vec<_>>(), k))
            .collect();
        (0..self.len())
            .map(|i| AmbientVector::from_vec(comps.iter().map(|c| c[i]).collect()))
            .collect()
    }

    /// Fourier derivative of already sampled vectors; `None` on aperiodic grids.
    pub fn differentiate_samples(&self, values: &[AmbientVector], k: usize) -> Option<Vec<AmbientVector>> {
        self.grid
            .as_ref()
            .map(|g| self.grid_differentiate(g, values, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{CircleAnsatzCurve, CircleTerm};

    fn small_circle() -> Curve {
        // Circle of radius 1/sqrt(2) at height 1/sqrt(2), unit speed.
        let r = 0.5_f64.sqrt();
        Curve::Ansatz(
            CircleAnsatzCurve::new(
                vec![CircleTerm::new(
                    1.0 / r,
                    AmbientVector::axis(3, 0, r),
                    AmbientVector::axis(3, 1, r),
                )],
                AmbientVector::axis(3, 2, r),
            )
            .unwrap(),
        )
    }

    #[test]
    fn routes_agree_on_scalar_derivatives() {
        let c = small_circle();
        let p = &ScalarPoly::dot(2, 0) * &ScalarPoly::dot(1, 1);
        let a = SampledCurve::new(&c, 6, &EvalOptions::default()).unwrap();
        let b = SampledCurve::new(&c, 6, &EvalOptions::with_route(FieldRoute::Grid)).unwrap();
        let da = a.d_scalar(&p, 2).unwrap();
        let db = b.d_scalar(&p, 2).unwrap();
        for (x, y) in da.iter().zip(&db) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_orders_beyond_sampling() {
        let c = small_circle();
        let a = SampledCurve::new(&c, 2, &EvalOptions::default()).unwrap();
        assert!(a.eval_scalar(&ScalarPoly::dot(3, 3)).is_err());
    }

    #[test]
    fn l2_of_constant() {
        let c = small_circle();
        let a = SampledCurve::new(&c, 1, &EvalOptions::default()).unwrap();
        let ones = vec![1.0; a.len()];
        assert!((a.l2_norm(&ones) - a.span().sqrt()).abs() < 1e-12);
    }
}
