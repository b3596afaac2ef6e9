use purify::families::{PdfSpec, StateFamily};
use purify::optimizer::{
    average_cost, cost_and_gradient, multistart, recurrence_optimize, sample, Ensemble, GradientMode,
    OptimizerConfig, Selection, SequenceKind,
};
use purify::sun::{angle_bounds, cnot, su4_from_angles};
use purify::GateAngles;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ensemble(f: StateFamily, pdf: PdfSpec, m: usize) -> Ensemble {
    let s = sample(&pdf, m, 0, SequenceKind::LowDiscrepancy);
    Ensemble::new(s.points.iter().map(|&p| f.build(p).unwrap()).collect()).unwrap()
}

#[test]
fn steepest_descent_probe_lowers_the_cost() {
    let e = ensemble(StateFamily::RotatedWerner, PdfSpec::Uniform { lower: 0.5, upper: 1.0 }, 32);
    let b = angle_bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a: [f64; 15] = std::array::from_fn(|k| rng.gen_range(b[k].0 + 0.01..b[k].1 - 0.01));
        let g = cost_and_gradient(&e, &a, Selection::EnsembleArgmin, GradientMode::Dual, 1e-6).unwrap();
        let norm = g.gradient.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        let stepped: [f64; 15] = std::array::from_fn(|k| a[k] - 1e-4 * g.gradient[k] / norm);
        let selection = Selection::Branch(g.evaluation.selected_branch.unwrap());
        let after = average_cost(&e, &su4_from_angles(&GateAngles::new(stepped).unwrap()), selection).unwrap();
        assert!(after.cost < g.cost, "{} !< {}", after.cost, g.cost);
    }
}

#[test]
fn twenty_restarts_match_cnot_on_rotated_werner() {
    let e = ensemble(StateFamily::RotatedWerner, PdfSpec::Uniform { lower: 0.5, upper: 1.0 }, 64);
    let config = OptimizerConfig {
        restarts: 20,
        max_iterations: 100,
        ..OptimizerConfig::default()
    };
    let best = multistart(&e, Selection::EnsembleArgmin, &config).unwrap();
    let cnot_cost = average_cost(&e, &cnot(), Selection::EnsembleArgmin).unwrap().cost;
    assert!(best.cost <= cnot_cost + 1e-3);
    assert_eq!(best.starts.len(), 22);
}

#[test]
fn per_state_max_dominates_on_seeded_gates() {
    let e = ensemble(StateFamily::Maz, PdfSpec::Uniform { lower: 0.0, upper: 1.0 }, 24);
    let b = angle_bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let a = GateAngles::new(std::array::from_fn(|k| rng.gen_range(b[k].0..=b[k].1))).unwrap();
        let u = su4_from_angles(&a);
        let fixed = average_cost(&e, &u, Selection::EnsembleArgmin).unwrap().cost;
        let best = average_cost(&e, &u, Selection::PerStateMax).unwrap().cost;
        assert!(best <= fixed + 1e-12);
    }
}

#[test]
fn threads_do_not_change_results() {
    let base = OptimizerConfig {
        samples: 24,
        restarts: 1,
        max_iterations: 25,
        ..OptimizerConfig::default()
    };
    let pdf = PdfSpec::Uniform { lower: 0.5, upper: 1.0 };
    let one = recurrence_optimize(StateFamily::Werner, pdf, 2, &base).unwrap();
    let two = recurrence_optimize(StateFamily::Werner, pdf, 2, &OptimizerConfig { threads: 2, ..base }).unwrap();
    for (a, b) in one.cost_trajectory().iter().zip(two.cost_trajectory()) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn recorded_quantities_are_probabilities() {
    let config = OptimizerConfig {
        samples: 32,
        restarts: 1,
        max_iterations: 40,
        ..OptimizerConfig::default()
    };
    let r = recurrence_optimize(StateFamily::Qr, PdfSpec::UniformDisk, 2, &config).unwrap();
    for it in &r.iterations {
        assert!((0.0..=1.0).contains(&it.cost));
        for (c, p) in it.concurrence.iter().zip(&it.probability) {
            if let (Some(c), Some(p)) = (c, p) {
                assert!((0.0..=1.0).contains(c) && *p > 0.0 && *p <= 1.0 + 1e-12);
            }
        }
    }
    let bad: Vec<_> = (0..r.points.len())
        .filter(|&j| r.overall_success[j].is_some_and(|s| !(0.0..=1.0).contains(&s)))
        .map(|j| (r.overall_success[j], r.iterations.iter().map(|it| it.probability[j]).collect::<Vec<_>>()))
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(r.points.iter().all(|p| p.x * p.x + p.y * p.y <= 1.0));
}
