//! Residual scans over parameter grids of circle superpositions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::Curve;
use crate::error::{PolycurveError, Result};
use crate::families::{single_frequency_circle, two_frequency_circle};
use crate::geometry::SpaceForm;
use crate::residuals::{residual_biharmonic_ode, residual_intrinsic};
use crate::sampling::EvalOptions;

/// One grid point. Infeasible points (no arclength-parametrised curve)
/// carry `None` residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a_sq: f64,
    pub b_sq: Option<f64>,
    /// Squared radius of the first circle fixed by unit speed.
    pub alpha_sq: Option<f64>,
    pub feasible: bool,
    pub max_norm: Option<f64>,
    pub l2_norm: Option<f64>,
    /// Strictly below both feasible neighbours in a 1-D scan, or at most
    /// `1e-8`.
    pub local_minimum: bool,
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(PolycurveError::InvalidArgument("empty grid".into()));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(PolycurveError::InvalidArgument(format!("invalid grid bounds [{lo}, {hi}]")));
    }
    Ok((0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect())
}

const ZERO_RESIDUAL: f64 = 1e-8;

/// Intrinsic `r`-tension of the unit-speed circle of frequency `sqrt(a_sq)`
/// (`alpha^2 = 1 / a^2`) at each grid value; `a_sq < 1` is infeasible.
pub fn scan_single_frequency(r: usize, grid: &[f64], opts: &EvalOptions) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(PolycurveError::InvalidArgument("empty grid".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let space = SpaceForm::unit_sphere(3);
    let mut rows = sorted
        .par_iter()
        .map(|&a_sq| {
            if !(a_sq >= 1.0) {
                return Ok(infeasible(a_sq, None));
            }
            let curve: Curve = single_frequency_circle(a_sq, 1.0 / a_sq, 3)?.into();
            let rep = residual_intrinsic(&curve, r, &space, opts)?;
            Ok(ScanRow {
                a_sq,
                b_sq: None,
                alpha_sq: Some(1.0 / a_sq),
                feasible: true,
                max_norm: Some(rep.max_norm),
                l2_norm: Some(rep.l2_norm),
                local_minimum: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    mark_local_minima(&mut rows);
    Ok(rows)
}

fn infeasible(a_sq: f64, b_sq: Option<f64>) -> ScanRow {
    ScanRow {
        a_sq,
        b_sq,
        alpha_sq: None,
        feasible: false,
        max_norm: None,
        l2_norm: None,
        local_minimum: false,
    }
}

fn mark_local_minima(rows: &mut [ScanRow]) {
    let values: Vec<Option<f64>> = rows.iter().map(|r| r.max_norm).collect();
    for (i, row) in rows.iter_mut().enumerate() {
        let Some(v) = values[i] else { continue };
        let left = i.checked_sub(1).and_then(|j| values[j]);
        let right = values.get(i + 1).copied().flatten();
        row.local_minimum = v <= ZERO_RESIDUAL || (left.is_none_or(|l| v < l) && right.is_none_or(|r| v < r));
    }
}

/// Biharmonic residual of the unit-speed two-frequency superposition on the
/// product grid, sorted by `(a^2, b^2)`. Unit speed fixes
/// `alpha1^2 = (1 - b^2) / (a^2 - b^2)`; points where that is outside
/// `[0, 1]` or `a^2 = b^2` are infeasible.
pub fn scan_two_frequency_biharmonic(a_grid: &[f64], b_grid: &[f64], opts: &EvalOptions) -> Result<Vec<ScanRow>> {
    if a_grid.is_empty() || b_grid.is_empty() {
        return Err(PolycurveError::InvalidArgument("empty grid".into()));
    }
    let mut points: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| b_grid.iter().map(move |&b| (a, b)))
        .collect();
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    points
        .par_iter()
        .map(|&(a_sq, b_sq)| {
            if !(a_sq > 0.0 && b_sq > 0.0) || (a_sq - b_sq).abs() < 1e-12 {
                return Ok(infeasible(a_sq, Some(b_sq)));
            }
            let x = (1.0 - b_sq) / (a_sq - b_sq);
            if !(0.0..=1.0).contains(&x) {
                return Ok(infeasible(a_sq, Some(b_sq)));
            }
            let curve: Curve = two_frequency_circle(a_sq, b_sq, x, 3)?.into();
            let rep = residual_biharmonic_ode(&curve, opts)?;
            Ok(ScanRow {
                a_sq,
                b_sq: Some(b_sq),
                alpha_sq: Some(x),
                feasible: true,
                max_norm: Some(rep.max_norm),
                l2_norm: Some(rep.l2_norm),
                local_minimum: rep.max_norm <= ZERO_RESIDUAL,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triharmonic_scan_has_minima_at_the_roots() {
        let grid = linspace(0.5, 5.0, 91).unwrap();
        let rows = scan_single_frequency(3, &grid, &EvalOptions::default()).unwrap();
        let minima: Vec<f64> = rows.iter().filter(|r| r.local_minimum).map(|r| r.a_sq).collect();
        assert_eq!(minima.len(), 2, "{minima:?}");
        assert!((minima[0] - 1.0).abs() < 1e-12 && (minima[1] - 3.0).abs() < 1e-12);
        assert!(rows.iter().filter(|r| r.a_sq < 1.0).all(|r| !r.feasible));
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(scan_single_frequency(3, &[], &EvalOptions::default()).is_err());
        assert!(linspace(0.0, 1.0, 0).is_err());
    }
}
