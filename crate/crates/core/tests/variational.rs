use polycurve::ambient::{AmbientVector, Curve};
use polycurve::families::single_frequency_circle;
use polycurve::sampling::EvalOptions;
use polycurve::variational::{
    discrete_energy, gradient_flow, perturbed_great_circle, second_variation_reduced, EnergyKernel, FlowMode,
    FlowOptions, Termination,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_objective_nonincreasing(iterations: &[polycurve::variational::FlowIteration]) {
    for w in iterations.windows(2).skip(1) {
        assert!(
            w[1].objective <= w[0].objective,
            "objective rose at step {}: {} -> {}",
            w[1].step,
            w[0].objective,
            w[1].objective
        );
    }
}

#[test]
fn energy_matches_circle_density_on_sampled_circles() {
    for r in 2..=4 {
        for a_sq in [1.0, 2.0, 3.0, 4.0_f64] {
            let alpha_sq = 1.0 / a_sq;
            let curve: Curve = single_frequency_circle(a_sq, alpha_sq, 2)
                .unwrap()
                .sample(64)
                .unwrap()
                .into();
            let e = discrete_energy(&curve, r, &EvalOptions::default()).unwrap();
            let period = 2.0 * std::f64::consts::PI / a_sq.sqrt();
            let expected = period * a_sq.powi(r as i32) * alpha_sq * (1.0 - alpha_sq).powi(r as i32 - 1);
            let gap = (e.total - expected).abs();
            assert!(
                gap <= 1e-6 * expected.abs().max(1e-12) || (expected == 0.0 && gap < 1e-9),
                "r={r} a^2={a_sq}: {} vs {expected}",
                e.total
            );
        }
    }
}

#[test]
fn gradient_matches_secant_on_random_directions() {
    let curve = perturbed_great_circle(32, 3, 0.1, 7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in [2, 3] {
        let kernel = EnergyKernel::new(r, curve.len(), curve.period()).unwrap();
        let grad = kernel.gradient(curve.samples());
        for _ in 0..10 {
            let dir: Vec<AmbientVector> = (0..curve.len())
                .map(|_| AmbientVector::new((0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap())
                .collect();
            let predicted: f64 = grad.iter().zip(&dir).map(|(g, v)| g.dot(v)).sum();
            let eps = 1e-5;
            let shift = |s: f64| -> Vec<AmbientVector> {
                curve
                    .samples()
                    .iter()
                    .zip(&dir)
                    .map(|(x, v)| {
                        let mut y = x.clone();
                        y.add_scaled(s, v);
                        y
                    })
                    .collect()
            };
            let secant = (kernel.energy(&shift(eps)) - kernel.energy(&shift(-eps))) / (2.0 * eps);
            let rel = (predicted - secant).abs() / secant.abs();
            assert!(rel <= 1e-4, "r={r}: gradient {predicted} vs secant {secant}");
        }
    }
}

#[test]
fn second_variation_is_negative_and_consistent() {
    for r in 2..=8 {
        let sv = second_variation_reduced(r, 1.0).unwrap();
        assert!(sv.closed_form < 0.0 && sv.finite_difference < 0.0);
        assert!(sv.relative_gap <= 0.01, "r={r}: {sv:?}");
    }
}

#[test]
fn restricted_flow_finds_the_critical_radius() {
    let opts = FlowOptions::default();
    for (r, starts, target) in [(2, vec![0.2, 0.4, 0.8], 0.5), (3, vec![0.25, 0.45], 1.0 / 3.0)] {
        for alpha_sq in starts {
            let start = single_frequency_circle(1.0 / alpha_sq, alpha_sq, 2)
                .unwrap()
                .sample(128)
                .unwrap();
            let trace = gradient_flow(&start, r, &opts).unwrap();
            let found = trace.final_alpha_sq.unwrap();
            assert_eq!(trace.termination, Termination::Converged);
            assert!((found - target).abs() <= 0.01, "r={r} from {alpha_sq}: {found}");
            assert_objective_nonincreasing(&trace.iterations);
        }
    }
}

#[test]
fn restricted_flow_at_a_critical_circle_takes_no_steps() {
    let start = single_frequency_circle(2.0, 0.5, 2).unwrap().sample(128).unwrap();
    let trace = gradient_flow(&start, 2, &FlowOptions::default()).unwrap();
    assert_eq!(trace.accepted_steps(), 0);
    assert_eq!(trace.termination, Termination::Converged);
}

#[test]
fn full_flow_decreases_energy() {
    let start = perturbed_great_circle(32, 3, 0.05, 3).unwrap();
    let opts = FlowOptions {
        mode: FlowMode::Full,
        max_iters: 30,
        ..FlowOptions::default()
    };
    let trace = gradient_flow(&start, 2, &opts).unwrap();
    assert!(trace.accepted_steps() > 0);
    assert_objective_nonincreasing(&trace.iterations);
    assert!(trace.final_energy() < trace.iterations[0].energy);
    assert!(trace.iterations.iter().any(|i| i.reparametrized) || trace.accepted_steps() < 10);
}
