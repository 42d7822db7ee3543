//! Intrinsic geometry of curves in the sphere: covariant derivatives of the
//! tangent, Frenet frames, and the iterated Frenet formulas in a
//! 3-dimensional space form of constant curvature `K`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientVector, CircleAnsatzCurve, CircleTerm, Curve, DiscreteCurve};
use crate::error::{PolycurveError, Result};
use crate::sampling::{EvalOptions, FieldRoute, SampledCurve};
use crate::symbolic::VectorExpr;
use crate::tolerances::TOL_FRENET;

/// Highest covariant derivative `nabla^l T` available from sampled curves.
pub const MAX_COVARIANT_ORDER: usize = 7;

/// Fraction of samples with vanishing curvature above which the strict
/// Frenet computation refuses to report torsion.
pub const UNDEFINED_TORSION_FRACTION: f64 = 0.25;

/// Simply connected space form of sectional curvature `curvature`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    pub curvature: f64,
    pub dim: usize,
}

impl SpaceForm {
    /// `S^n` with `K = 1`.
    pub fn unit_sphere(dim: usize) -> Self {
        Self { curvature: 1.0, dim }
    }

    /// Curves are embedded only in the unit sphere; other `K` are handled
    /// through Frenet-coordinate formulas.
    pub fn require_unit_sphere(&self) -> Result<()> {
        if self.curvature != 1.0 {
            return Err(PolycurveError::UnsupportedSpaceForm(self.curvature));
        }
        Ok(())
    }
}

/// Symbolic `nabla^l T` for `l = 0..=MAX_COVARIANT_ORDER`, as ambient
/// expressions in the derivatives of `gamma`.
pub fn covariant_expressions() -> &'static [VectorExpr] {
    static CACHE: OnceLock<Vec<VectorExpr>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = vec![VectorExpr::gamma(1)];
        for l in 0..MAX_COVARIANT_ORDER {
            let next = out[l].covariant_derivative();
            out.push(next);
        }
        out
    })
}

/// `values[l][i]` is `nabla^l T` at the `i`-th parameter value.
#[derive(Debug, Clone)]
pub struct CovariantStack {
    pub parameters: Vec<f64>,
    pub values: Vec<Vec<AmbientVector>>,
}

/// Covariant derivatives `nabla^l T` for `l <= max_order`.
///
/// With `FieldRoute::Grid` the recursion `X_{l+1} = X_l' + <X_l, gamma'> gamma`
/// is applied numerically on the periodic grid instead of symbolically.
pub fn covariant_stack(curve: &Curve, max_order: usize, opts: &EvalOptions) -> Result<CovariantStack> {
    if max_order > MAX_COVARIANT_ORDER {
        return Err(PolycurveError::UnsupportedOrder {
            requested: max_order,
            max: MAX_COVARIANT_ORDER,
        });
    }
    let sampled = SampledCurve::new(curve, max_order + 1, opts)?;
    covariant_stack_sampled(&sampled, max_order)
}

pub(crate) fn covariant_stack_sampled(sampled: &SampledCurve, max_order: usize) -> Result<CovariantStack> {
    let values = match sampled.route() {
        FieldRoute::Expanded => covariant_expressions()[..=max_order]
            .iter()
            .map(|e| sampled.eval_vector(e))
            .collect::<Result<Vec<_>>>()?,
        FieldRoute::Grid => {
            let n = sampled.len();
            let mut values = vec![(0..n).map(|i| sampled.derivative(1, i).clone()).collect::<Vec<_>>()];
            for l in 0..max_order {
                let d = sampled
                    .differentiate_samples(&values[l], 1)
                    .ok_or(PolycurveError::IrrationalFrequencies)?;
                let next = (0..n)
                    .map(|i| {
                        let mut v = d[i].clone();
                        v.add_scaled(values[l][i].dot(sampled.derivative(1, i)), sampled.derivative(0, i));
                        v
                    })
                    .collect();
                values.push(next);
            }
            values
        }
    };
    Ok(CovariantStack {
        parameters: sampled.parameters().to_vec(),
        values,
    })
}

/// Frenet data at one sample. Normal, binormal and torsion are `None` where
/// the geodesic curvature vanishes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrenetSample {
    pub s: f64,
    pub curvature: f64,
    pub torsion: Option<f64>,
    pub tangent: AmbientVector,
    pub normal: Option<AmbientVector>,
    pub binormal: Option<AmbientVector>,
    /// Largest violation of the three Frenet equations at this sample.
    pub equation_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrenetData {
    pub samples: Vec<FrenetSample>,
}

impl FrenetData {
    pub fn curvatures(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.curvature).collect()
    }

    pub fn torsions(&self) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.torsion).collect()
    }

    pub fn undefined_count(&self) -> usize {
        self.samples.iter().filter(|s| s.torsion.is_none()).count()
    }

    pub fn mean_curvature(&self) -> f64 {
        self.samples.iter().map(|s| s.curvature).sum::<f64>() / self.samples.len() as f64
    }

    /// Mean over samples where torsion is defined.
    pub fn mean_torsion(&self) -> Option<f64> {
        let defined: Vec<f64> = self.samples.iter().filter_map(|s| s.torsion).collect();
        if defined.is_empty() {
            None
        } else {
            Some(defined.iter().sum::<f64>() / defined.len() as f64)
        }
    }

    /// Largest deviation of `(T, N, B)` from an orthonormal frame.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for s in &self.samples {
            let (Some(n), Some(b)) = (&s.normal, &s.binormal) else {
                continue;
            };
            let frame = [&s.tangent, n, b];
            for i in 0..3 {
                for j in 0..3 {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((frame[i].dot(frame[j]) - target).abs());
                }
            }
        }
        worst
    }

    pub fn max_equation_residual(&self) -> f64 {
        self.samples
            .iter()
            .filter_map(|s| s.equation_residual)
            .fold(0.0, f64::max)
    }
}

/// Orthonormal basis of the linear span of the curve, padded to 4 vectors.
fn span_basis(points: &[&AmbientVector]) -> Result<Vec<AmbientVector>> {
    let dim = points[0].dim();
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    for p in points {
        for i in 0..dim {
            for j in 0..dim {
                gram[(i, j)] += p[i] * p[j];
            }
        }
    }
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]];
    let rank = order
        .iter()
        .filter(|&&k| eig.eigenvalues[k] > 1e-9 * top)
        .count();
    if rank > 4 {
        return Err(PolycurveError::NotInThreeSpaceForm(rank));
    }
    Ok(order[..4]
        .iter()
        .map(|&k| {
            let col = eig.eigenvectors.column(k);
            // Fix the sign so the largest entry is positive, for determinism.
            let pivot = (0..dim)
                .max_by(|&a, &b| col[a].abs().total_cmp(&col[b].abs()))
                .unwrap_or(0);
            let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            AmbientVector::from_vec(col.iter().map(|v| v * sign).collect())
        })
        .collect())
}

fn coords4(basis: &[AmbientVector], v: &AmbientVector) -> Vector4<f64> {
    Vector4::new(basis[0].dot(v), basis[1].dot(v), basis[2].dot(v), basis[3].dot(v))
}

fn from_coords4(basis: &[AmbientVector], c: &Vector4<f64>) -> AmbientVector {
    let mut out = AmbientVector::zeros(basis[0].dim());
    for k in 0..4 {
        out.add_scaled(c[k], &basis[k]);
    }
    out
}

/// Generalised cross product in `R^4`: the vector `w` with
/// `<w, x> = det[a, b, c, x]` for all `x`.
fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    let mut w = Vector4::zeros();
    for k in 0..4 {
        let mut m = Matrix4::zeros();
        m.set_column(0, a);
        m.set_column(1, b);
        m.set_column(2, c);
        m[(k, 3)] = 1.0;
        w[k] = m.determinant();
    }
    w
}

/// Frenet frame, curvature and torsion of a unit-speed curve lying in a
/// totally geodesic `S^3` of the unit sphere.
///
/// Fails with `UndefinedTorsion` when the curvature vanishes on more than a
/// quarter of the samples; see [`frenet_data_lenient`] for a variant that
/// only flags such samples.
pub fn frenet_data(curve: &Curve, space: &SpaceForm, opts: &EvalOptions) -> Result<FrenetData> {
    let data = frenet_data_lenient(curve, space, opts)?;
    let undefined = data.undefined_count();
    let total = data.samples.len();
    if undefined as f64 > UNDEFINED_TORSION_FRACTION * total as f64 {
        return Err(PolycurveError::UndefinedTorsion { undefined, total });
    }
    Ok(data)
}

/// Like [`frenet_data`] but never fails on vanishing curvature.
///
/// Curves in `S^2` are treated as curves in the equatorial `S^2` of `S^3`,
/// so their frame vectors have four coordinates.
pub fn frenet_data_lenient(curve: &Curve, space: &SpaceForm, opts: &EvalOptions) -> Result<FrenetData> {
    space.require_unit_sphere()?;
    let lifted;
    let curve = if curve.dim() < 4 {
        lifted = lift_dimension(curve, 4)?;
        &lifted
    } else {
        curve
    };
    let sampled = SampledCurve::new(curve, 3, opts)?;
    let cov = covariant_stack_sampled(&sampled, 2)?;
    let n = sampled.len();
    let mut span_points: Vec<&AmbientVector> = (0..n).map(|i| sampled.derivative(0, i)).collect();
    span_points.extend((0..n).map(|i| sampled.derivative(1, i)));
    let basis = span_basis(&span_points)?;

    let samples = (0..n)
        .map(|i| {
            let gamma = sampled.derivative(0, i);
            let tangent = cov.values[0][i].clone();
            let a1 = &cov.values[1][i];
            let a2 = &cov.values[2][i];
            let k = a1.norm();
            let s = sampled.parameters()[i];
            if k <= TOL_FRENET {
                return FrenetSample {
                    s,
                    curvature: k,
                    torsion: None,
                    tangent,
                    normal: None,
                    binormal: None,
                    equation_residual: None,
                };
            }
            let normal = a1.scaled(1.0 / k);
            let k_prime = a2.dot(a1) / k;
            let mut d_normal = a2.scaled(1.0 / k);
            d_normal.add_scaled(-k_prime / k, &normal);

            let g4 = coords4(&basis, gamma);
            let t4 = coords4(&basis, &tangent);
            let n4 = coords4(&basis, &normal);
            let b4 = cross4(&g4, &t4, &n4);
            let binormal = from_coords4(&basis, &b4);
            let torsion = d_normal.dot(&binormal);

            // Ambient derivative of the binormal; it is tangent to the sphere
            // and orthogonal to T, so it equals the covariant derivative.
            let dn4 = coords4(&basis, &d_normal);
            let acc4 = coords4(&basis, sampled.derivative(2, i));
            let d_binormal = from_coords4(&basis, &(cross4(&g4, &acc4, &n4) + cross4(&g4, &t4, &dn4)));

            let mut eq2 = d_normal.clone();
            eq2.add_scaled(k, &tangent);
            eq2.add_scaled(-torsion, &binormal);
            let mut eq3 = d_binormal;
            eq3.add_scaled(torsion, &normal);
            FrenetSample {
                s,
                curvature: k,
                torsion: Some(torsion),
                tangent,
                normal: Some(normal),
                binormal: Some(binormal),
                equation_residual: Some(eq2.norm().max(eq3.norm())),
            }
        })
        .collect();
    Ok(FrenetData { samples })
}

/// Same curve in `R^dim` with zero trailing coordinates.
pub fn lift_dimension(curve: &Curve, dim: usize) -> Result<Curve> {
    let pad = |v: &AmbientVector| {
        let mut c = v.coords().to_vec();
        c.resize(dim.max(v.dim()), 0.0);
        AmbientVector::from_vec(c)
    };
    Ok(match curve {
        Curve::Ansatz(c) => Curve::Ansatz(CircleAnsatzCurve::new(
            c.terms()
                .iter()
                .map(|t| CircleTerm::new(t.frequency, pad(&t.e_cos), pad(&t.e_sin)))
                .collect(),
            pad(c.constant()),
        )?),
        Curve::Discrete(c) => Curve::Discrete(DiscreteCurve::new(
            c.samples().iter().map(pad).collect(),
            c.period(),
        )?),
    })
}

/// Frame coefficients `(c_T, c_N, c_B)` of `nabla^l T` for a helix with
/// constant curvature `k` and torsion `tau`, valid for every `l >= 0`.
pub fn frenet_coefficients(k: f64, tau: f64, l: usize) -> [f64; 3] {
    if l == 0 {
        return [1.0, 0.0, 0.0];
    }
    let w = k * k + tau * tau;
    let m = l / 2;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    if l.is_multiple_of(2) {
        let base = w.powi(m as i32 - 1);
        [sign * k * k * base, 0.0, -sign * k * tau * base]
    } else {
        [0.0, sign * k * w.powi(m as i32), 0.0]
    }
}

/// Closed-form `nabla^l T` in the Frenet frame of a helix, for `l >= 2`.
pub fn iterated_frenet(k: f64, tau: f64, l: usize) -> Result<[f64; 3]> {
    if l < 2 {
        return Err(PolycurveError::InvalidArgument(format!(
            "iterated Frenet formula needs l >= 2, got {l}"
        )));
    }
    Ok(frenet_coefficients(k, tau, l))
}

/// Frame coefficients of the `r`-tension field of a helix in the space form
/// of curvature `K`.
pub fn tension_frenet(k: f64, tau: f64, r: usize, curvature: f64) -> Result<[f64; 3]> {
    if r < 2 {
        return Err(PolycurveError::InvalidArgument(format!("tension needs r >= 2, got {r}")));
    }
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let t = frenet_coefficients(k, tau, 0);
    let mut out = frenet_coefficients(k, tau, 2 * r - 1);
    for l in 0..=(r - 2) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let lo = frenet_coefficients(k, tau, l);
        let hi = frenet_coefficients(k, tau, 2 * r - 3 - l);
        let (p, q) = (dot(t, lo), dot(t, hi));
        for c in 0..3 {
            out[c] += curvature * sign * (p * hi[c] - q * lo[c]);
        }
    }
    Ok(out)
}

/// Writes Frenet data as CSV: `s, k, tau, T..., N..., B...`. Undefined
/// entries are left empty.
pub fn frenet_csv<W: std::io::Write>(data: &FrenetData, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let dim = data.samples.first().map(|s| s.tangent.dim()).unwrap_or(0);
    let mut header = vec!["s".to_string(), "k".to_string(), "tau".to_string()];
    for name in ["T", "N", "B"] {
        header.extend((0..dim).map(|c| format!("{name}{c}")));
    }
    let io_err = |e: csv::Error| PolycurveError::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(io_err)?;
    for s in &data.samples {
        let mut row = vec![
            s.s.to_string(),
            s.curvature.to_string(),
            s.torsion.map(|t| t.to_string()).unwrap_or_default(),
        ];
        row.extend(s.tangent.coords().iter().map(f64::to_string));
        for v in [&s.normal, &s.binormal] {
            match v {
                Some(v) => row.extend(v.coords().iter().map(f64::to_string)),
                None => row.extend((0..dim).map(|_| String::new())),
            }
        }
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}
