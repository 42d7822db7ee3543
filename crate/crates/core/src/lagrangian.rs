//! Higher-order Lagrangians on the sphere and their mechanised
//! Euler-Lagrange operator.
//!
//! A Lagrangian `L(gamma, gamma', .., gamma^(r))` with the multiplier term
//! `lambda (|gamma|^2 - 1)` has critical points solving
//! `sum_{l=1}^r (-1)^l D^l (dL/dgamma^(l)) + dL/dgamma + 2 lambda gamma = 0`.
//! Projecting away the `gamma` component eliminates `lambda`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientVector, Curve};
use crate::error::{PolycurveError, Result};
use crate::geometry::{covariant_expressions, MAX_COVARIANT_ORDER};
use crate::residuals::{ResidualKind, ResidualReport};
use crate::sampling::{EvalOptions, SampledCurve};
use crate::symbolic::ScalarPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagrangianId {
    /// `|gamma'|^2`.
    Geodesic,
    /// `|gamma''|^2 - |gamma'|^4`.
    Biharmonic,
    /// `|nabla^2 T|^2` expanded on the sphere.
    Triharmonic,
    /// `|nabla^3 T|^2` expanded on the sphere.
    FourHarmonic,
    /// `|gamma^(r)|^2`.
    Extrinsic(usize),
    /// `|nabla^{r-1} T|^2` generated from the covariant recursion.
    Intrinsic(usize),
}

impl LagrangianId {
    /// Highest derivative of `gamma` in the Lagrangian.
    pub fn order(&self) -> usize {
        match *self {
            LagrangianId::Geodesic => 1,
            LagrangianId::Biharmonic => 2,
            LagrangianId::Triharmonic => 3,
            LagrangianId::FourHarmonic => 4,
            LagrangianId::Extrinsic(r) | LagrangianId::Intrinsic(r) => r,
        }
    }

    /// The Lagrangian as a polynomial in inner products of derivatives.
    pub fn polynomial(&self) -> Result<ScalarPoly> {
        let d = ScalarPoly::dot;
        let c = ScalarPoly::constant;
        Ok(match *self {
            LagrangianId::Geodesic => d(1, 1),
            LagrangianId::Biharmonic => &d(2, 2) - &d(1, 1).pow(2),
            LagrangianId::Triharmonic => sum(&[
                d(3, 3),
                &c(9.0) * &d(2, 1).pow(2),
                d(1, 1).pow(3),
                &c(6.0) * &(&d(2, 1) * &d(3, 0)),
                &c(2.0) * &(&d(1, 1) * &d(1, 3)),
            ]),
            LagrangianId::FourHarmonic => sum(&[
                d(4, 4),
                &c(16.0) * &d(3, 1).pow(2),
                &c(9.0) * &d(2, 2).pow(2),
                &c(35.0) * &(&d(2, 1).pow(2) * &d(1, 1)),
                &d(1, 1).pow(2) * &d(2, 2),
                -&d(1, 1).pow(4),
                &c(8.0) * &(&d(3, 1) * &d(4, 0)),
                &c(6.0) * &(&d(4, 0) * &d(2, 2)),
                &c(10.0) * &(&d(2, 1) * &d(4, 1)),
                &c(2.0) * &(&d(1, 1) * &d(4, 2)),
                &c(2.0) * &(&d(1, 1).pow(2) * &d(4, 0)),
                &c(24.0) * &(&d(3, 1) * &d(2, 2)),
            ]),
            LagrangianId::Extrinsic(r) => {
                if !(1..=8).contains(&r) {
                    return Err(PolycurveError::InvalidArgument(format!(
                        "extrinsic order must be in 1..=8, got {r}"
                    )));
                }
                d(r as u8, r as u8)
            }
            LagrangianId::Intrinsic(r) => {
                if !(1..=MAX_COVARIANT_ORDER + 1).contains(&r) {
                    return Err(PolycurveError::InvalidArgument(format!(
                        "intrinsic order must be in 1..={}, got {r}",
                        MAX_COVARIANT_ORDER + 1
                    )));
                }
                let e = &covariant_expressions()[r - 1];
                e.dot(e)
            }
        })
    }
}

fn sum(parts: &[ScalarPoly]) -> ScalarPoly {
    parts.iter().fold(ScalarPoly::zero(), |acc, p| &acc + p)
}

impl fmt::Display for LagrangianId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LagrangianId::Geodesic => write!(f, "geodesic"),
            LagrangianId::Biharmonic => write!(f, "biharmonic"),
            LagrangianId::Triharmonic => write!(f, "triharmonic"),
            LagrangianId::FourHarmonic => write!(f, "fourharmonic"),
            LagrangianId::Extrinsic(r) => write!(f, "extrinsic_{r}"),
            LagrangianId::Intrinsic(r) => write!(f, "intrinsic_{r}"),
        }
    }
}

impl FromStr for LagrangianId {
    type Err = PolycurveError;

    /// Accepts `geodesic`, `biharmonic`, `triharmonic`, `fourharmonic`,
    /// `extrinsic_<r>` and `intrinsic_<r>`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || PolycurveError::UnknownLagrangian(s.to_string());
        match s {
            "geodesic" => Ok(LagrangianId::Geodesic),
            "biharmonic" => Ok(LagrangianId::Biharmonic),
            "triharmonic" => Ok(LagrangianId::Triharmonic),
            "fourharmonic" => Ok(LagrangianId::FourHarmonic),
            _ => {
                let (prefix, r) = s.rsplit_once('_').ok_or_else(unknown)?;
                let r: usize = r.parse().map_err(|_| unknown())?;
                match prefix {
                    "extrinsic" if (1..=8).contains(&r) => Ok(LagrangianId::Extrinsic(r)),
                    "intrinsic" if (1..=MAX_COVARIANT_ORDER + 1).contains(&r) => Ok(LagrangianId::Intrinsic(r)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

/// Mechanised Euler-Lagrange residual with the multiplier projected out,
/// scaled by `(-1)^r / 2` so that its leading term is `+gamma^(2r)` as in
/// the hand-expanded equations.
pub fn euler_lagrange_residual_generic(id: LagrangianId, curve: &Curve, opts: &EvalOptions) -> Result<ResidualReport> {
    let poly = id.polynomial()?;
    let r = id.order();
    let sampled = SampledCurve::new(curve, 2 * r, opts)?;
    let n = sampled.len();
    let mut total: Vec<AmbientVector> = sampled.eval_vector(&poly.partial(0))?;
    for l in 1..=r {
        let term = sampled.d_vector(&poly.partial(l as u8), l)?;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        for (acc, t) in total.iter_mut().zip(&term) {
            acc.add_scaled(sign, t);
        }
    }
    let scale = if r.is_multiple_of(2) { 0.5 } else { -0.5 };
    let vectors = (0..n)
        .map(|i| {
            let g = sampled.derivative(0, i);
            let mut v = total[i].clone();
            v.add_scaled(-v.dot(g), g);
            v.scaled(scale)
        })
        .collect();
    Ok(ResidualReport::from_vectors(ResidualKind::EulerLagrange, r, &sampled, vectors, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ids() {
        assert_eq!("biharmonic".parse::<LagrangianId>().unwrap(), LagrangianId::Biharmonic);
        assert_eq!("extrinsic_3".parse::<LagrangianId>().unwrap(), LagrangianId::Extrinsic(3));
        assert!(matches!(
            "quintic".parse::<LagrangianId>(),
            Err(PolycurveError::UnknownLagrangian(_))
        ));
        assert!("extrinsic_0".parse::<LagrangianId>().is_err());
        for id in [LagrangianId::FourHarmonic, LagrangianId::Intrinsic(3)] {
            assert_eq!(id.to_string().parse::<LagrangianId>().unwrap(), id);
        }
    }
}
