//! Repeated local searches from fixed and seeded starting points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::OptimizerConfig;
use super::cost::{cost_and_gradient, Angles, Ensemble, GradientMode, Selection};
use super::lbfgsb::{minimize, projected_gradient, Status};
use crate::error::Result;
use crate::sun::{angle_bounds, cnot_angles, GateAngles, ANGLE_COUNT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKind {
    Cnot,
    Identity,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub kind: StartKind,
    pub start_cost: f64,
    pub cost: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultistartResult {
    pub angles: GateAngles,
    pub cost: f64,
    pub best_start: usize,
    pub starts: Vec<StartSummary>,
    /// Samples needing finite differences at the returned point.
    pub fallback_samples: usize,
    /// Largest |dual − central difference| over projected-gradient entries at
    /// the returned point (dual mode only).
    pub gradient_disagreement: Option<f64>,
}

fn bounds() -> (Angles, Angles) {
    let b = angle_bounds();
    (std::array::from_fn(|k| b[k].0), std::array::from_fn(|k| b[k].1))
}

/// CNOT, then the identity, then `restarts` uniform points in the box. The
/// random points depend only on their position, so a longer list extends a
/// shorter one.
pub fn starting_points(restarts: usize, seed: u64) -> Vec<(StartKind, Angles)> {
    let (lo, hi) = bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![
        (StartKind::Cnot, *cnot_angles().as_array()),
        (StartKind::Identity, [0.0; ANGLE_COUNT]),
    ];
    for _ in 0..restarts {
        starts.push((StartKind::Random, std::array::from_fn(|k| rng.gen_range(lo[k]..=hi[k]))));
    }
    starts
}

pub fn multistart(ensemble: &Ensemble, selection: Selection, config: &OptimizerConfig) -> Result<MultistartResult> {
    let (lo, hi) = bounds();
    let lbfgs = config.lbfgs();
    let objective = |a: &Angles| {
        cost_and_gradient(ensemble, a, selection, config.gradient_mode, config.difference_step).map(|e| (e.cost, e.gradient))
    };
    let mut best: Option<(usize, Angles, f64)> = None;
    let mut starts = Vec::new();
    for (i, (kind, x0)) in starting_points(config.restarts, config.restart_seed).into_iter().enumerate() {
        let m = minimize(objective, &x0, &lo, &hi, &lbfgs)?;
        log::debug!("start {i} ({kind:?}): {} -> {} after {} iterations ({:?})", m.trace[0], m.f, m.iterations, m.status);
        starts.push(StartSummary {
            kind,
            start_cost: m.trace[0],
            cost: m.f,
            iterations: m.iterations,
            evaluations: m.evaluations,
            status: m.status,
        });
        if best.as_ref().is_none_or(|(_, _, f)| m.f < *f) {
            best = Some((i, m.x, m.f));
        }
    }
    let (best_start, x, cost) = best.expect("at least the two fixed starts");
    let at_best = cost_and_gradient(ensemble, &x, selection, config.gradient_mode, config.difference_step)?;
    let gradient_disagreement = match config.gradient_mode {
        GradientMode::Dual => {
            let cd = cost_and_gradient(ensemble, &x, selection, GradientMode::CentralDifference, config.difference_step)?;
            let a = projected_gradient(&x, &at_best.gradient, &lo, &hi);
            let b = projected_gradient(&x, &cd.gradient, &lo, &hi);
            Some(a.iter().zip(&b).fold(0.0_f64, |m, (p, q)| m.max((p - q).abs())))
        }
        GradientMode::CentralDifference => None,
    };
    Ok(MultistartResult {
        angles: GateAngles::new(x)?,
        cost,
        best_start,
        starts,
        fallback_samples: at_best.fallback_samples,
        gradient_disagreement,
    })
}
