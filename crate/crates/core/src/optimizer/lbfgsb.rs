//! Limited-memory BFGS on a box, by gradient projection.
//!
//! Variables sitting on a bound with the gradient pushing outward are held
//! fixed; the two-loop recursion runs on the remaining ones, and the step is
//! taken along the projected path P(x + t·d) with Armijo backtracking.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbfgsConfig {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop once the ∞-norm of the projected gradient is at most this.
    pub projected_gradient_tolerance: f64,
    /// Stop once an accepted step lowers f by less than this fraction of
    /// max(|f|, 1).
    pub relative_reduction_tolerance: f64,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iterations: 500,
            projected_gradient_tolerance: 1e-8,
            relative_reduction_tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    SmallReduction,
    IterationLimit,
    LineSearchFailed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum<const D: usize> {
    pub x: [f64; D],
    pub f: f64,
    pub gradient: [f64; D],
    pub iterations: usize,
    pub evaluations: usize,
    pub status: Status,
    /// f after each accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

fn project<const D: usize>(x: &[f64; D], lower: &[f64; D], upper: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|i| x[i].clamp(lower[i], upper[i]))
}

/// Gradient with components zeroed where a bound blocks descent.
pub fn projected_gradient<const D: usize>(x: &[f64; D], g: &[f64; D], lower: &[f64; D], upper: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|i| {
        if (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0) {
            0.0
        } else {
            g[i]
        }
    })
}

fn dot<const D: usize>(a: &[f64; D], b: &[f64; D], mask: &[bool; D]) -> f64 {
    (0..D).filter(|&i| mask[i]).map(|i| a[i] * b[i]).sum()
}

fn inf_norm<const D: usize>(v: &[f64; D]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// −H·g on the free variables by the two-loop recursion.
fn direction<const D: usize>(g: &[f64; D], free: &[bool; D], history: &VecDeque<([f64; D], [f64; D])>) -> [f64; D] {
    let mut q: [f64; D] = std::array::from_fn(|i| if free[i] { g[i] } else { 0.0 });
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y) in history.iter().rev() {
        let sy = dot(s, y, free);
        if sy <= 0.0 {
            alphas.push(0.0);
            continue;
        }
        let a = dot(s, &q, free) / sy;
        for i in 0..D {
            if free[i] {
                q[i] -= a * y[i];
            }
        }
        alphas.push(a);
    }
    let gamma = history
        .back()
        .map(|(s, y)| {
            let (sy, yy) = (dot(s, y, free), dot(y, y, free));
            if sy > 0.0 && yy > 0.0 {
                sy / yy
            } else {
                1.0
            }
        })
        .unwrap_or(1.0);
    for v in q.iter_mut() {
        *v *= gamma;
    }
    for ((s, y), a) in history.iter().zip(alphas.into_iter().rev()) {
        let sy = dot(s, y, free);
        if sy <= 0.0 {
            continue;
        }
        let b = dot(y, &q, free) / sy;
        for i in 0..D {
            if free[i] {
                q[i] += (a - b) * s[i];
            }
        }
    }
    std::array::from_fn(|i| if free[i] { -q[i] } else { 0.0 })
}

/// Minimizes `f` over the box [lower, upper] from `x0`. `f` returns the value
/// and gradient. The best point seen is returned even when the line search
/// fails.
pub fn minimize<const D: usize, F>(
    mut f: F,
    x0: &[f64; D],
    lower: &[f64; D],
    upper: &[f64; D],
    config: &LbfgsConfig,
) -> Result<Minimum<D>>
where
    F: FnMut(&[f64; D]) -> Result<(f64, [f64; D])>,
{
    let mut x = project(x0, lower, upper);
    let (mut fx, mut g) = f(&x)?;
    let mut evaluations = 1;
    let mut history: VecDeque<([f64; D], [f64; D])> = VecDeque::with_capacity(config.memory);
    let mut trace = vec![fx];
    let mut status = Status::IterationLimit;
    let mut iterations = 0;

    while iterations < config.max_iterations {
        let pg = projected_gradient(&x, &g, lower, upper);
        if inf_norm(&pg) <= config.projected_gradient_tolerance {
            status = Status::Converged;
            break;
        }
        let free: [bool; D] = std::array::from_fn(|i| pg[i] != 0.0 || (x[i] > lower[i] && x[i] < upper[i]));
        let mut d = direction(&g, &free, &history);
        if dot(&g, &d, &[true; D]) >= 0.0 {
            history.clear();
            d = pg.map(|v| -v);
        }

        let mut t = if history.is_empty() { (1.0 / inf_norm(&d)).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = project(&std::array::from_fn(|i| x[i] + t * d[i]), lower, upper);
            let step: [f64; D] = std::array::from_fn(|i| trial[i] - x[i]);
            if inf_norm(&step) == 0.0 {
                break;
            }
            let (ft, gt) = f(&trial)?;
            evaluations += 1;
            if ft.is_finite() && ft <= fx + ARMIJO * dot(&g, &step, &[true; D]) {
                accepted = Some((trial, ft, gt, step));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft, gt, step)) = accepted else {
            if history.is_empty() {
                status = Status::LineSearchFailed;
                break;
            }
            history.clear();
            continue;
        };
        iterations += 1;
        let y: [f64; D] = std::array::from_fn(|i| gt[i] - g[i]);
        let sy = dot(&step, &y, &[true; D]);
        if sy > f64::EPSILON * dot(&y, &y, &[true; D]) {
            if history.len() == config.memory {
                history.pop_front();
            }
            history.push_back((step, y));
        }
        let reduction = fx - ft;
        x = trial;
        fx = ft;
        g = gt;
        trace.push(fx);
        if reduction <= config.relative_reduction_tolerance * fx.abs().max(1.0) {
            status = Status::SmallReduction;
            break;
        }
    }
    Ok(Minimum {
        x,
        f: fx,
        gradient: g,
        iterations,
        evaluations,
        status,
        trace,
    })
}
