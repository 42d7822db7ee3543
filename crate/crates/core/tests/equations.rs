use polycurve::ambient::Curve;
use polycurve::families::{make_biharmonic_two_freq, make_r_circle, single_frequency_circle, two_frequency_circle};
use polycurve::geometry::SpaceForm;
use polycurve::lagrangian::{euler_lagrange_residual_generic, LagrangianId};
use polycurve::residuals::*;
use polycurve::sampling::EvalOptions;

fn test_curves() -> Vec<(String, Curve)> {
    let mut out = Vec::new();
    for r in 2..=4 {
        out.push((format!("r-circle {r}"), make_r_circle(r, 3).unwrap().into()));
    }
    out.push(("great circle".into(), single_frequency_circle(1.0, 1.0, 2).unwrap().into()));
    out.push(("circle a^2=2.5".into(), single_frequency_circle(2.5, 0.4, 2).unwrap().into()));
    out.push((
        "biharmonic two-frequency".into(),
        make_biharmonic_two_freq(1.5_f64.sqrt(), 3).unwrap().curve.into(),
    ));
    // Unit speed: 2.25 x + 0.25 (1 - x) = 1.
    out.push(("helix".into(), two_frequency_circle(2.25, 0.25, 0.375, 3).unwrap().into()));
    out
}

#[test]
fn mechanised_euler_lagrange_matches_hand_expanded_equations() {
    let opts = EvalOptions::default();
    for (name, c) in test_curves() {
        let pairs = [
            (LagrangianId::Geodesic, residual_geodesic(&c, &opts).unwrap()),
            (LagrangianId::Biharmonic, residual_biharmonic_ode(&c, &opts).unwrap()),
            (LagrangianId::Triharmonic, residual_triharmonic_ode(&c, &opts).unwrap()),
            (LagrangianId::FourHarmonic, residual_fourharmonic_ode(&c, &opts).unwrap()),
            (LagrangianId::Extrinsic(2), residual_extrinsic(&c, 2, &opts).unwrap()),
            (LagrangianId::Extrinsic(3), residual_extrinsic(&c, 3, &opts).unwrap()),
        ];
        for (id, dedicated) in pairs {
            let el = euler_lagrange_residual_generic(id, &c, &opts).unwrap();
            let gap = el
                .vectors
                .iter()
                .zip(&dedicated.vectors)
                .map(|(a, b)| (a - b).max_abs())
                .fold(0.0, f64::max);
            println!("{name} {id}: gap {gap:e}, dedicated max {:e}", dedicated.max_norm);
            assert!(gap <= 1e-7, "{name} {id}: gap {gap:e}");
        }
    }
}

#[test]
fn r_circles_solve_their_equations() {
    let opts = EvalOptions::default();
    let space = SpaceForm::unit_sphere(3);
    for r in 2..=4 {
        let c: Curve = make_r_circle(r, 3).unwrap().into();
        let intrinsic = residual_intrinsic(&c, r, &space, &opts).unwrap();
        assert!(intrinsic.max_norm <= 1e-8, "r={r}: {}", intrinsic.max_norm);
        let ode = match r {
            2 => residual_biharmonic_ode(&c, &opts),
            3 => residual_triharmonic_ode(&c, &opts),
            _ => residual_fourharmonic_ode(&c, &opts),
        }
        .unwrap();
        assert!(ode.max_norm <= 1e-8, "r={r}: {}", ode.max_norm);
    }
}
