//! The recurrence driver: sample once, then per iteration optimize a gate on
//! the current ensemble and replace every state by its kept branch.

use serde::{Deserialize, Serialize};

use super::config::OptimizerConfig;
use super::cost::{average_cost, summarize, Ensemble, SampleBranches, Selection};
use super::multistart::{multistart, StartSummary};
use super::sampling::sample;
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::families::{PdfSpec, Point, StateFamily};
use crate::protocol::{branch_blocks, two_copies, PROBABILITY_FLOOR};
use crate::qmat::{validate_density, DensityMatrix, Mat4};
use crate::sun::{cnot, su4_from_angles, GateAngles};

/// Fraction of samples that may lose their kept branch before a run aborts.
pub const MAX_DROP_FRACTION: f64 = 0.1;

/// Past this many iterations results lose accuracy and a warning is emitted.
pub const ACCURATE_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub angles: GateAngles,
    /// 1 − average concurrence of the kept branch.
    pub cost: f64,
    pub branch: usize,
    pub branch_averages: [f64; 4],
    /// The same gate when every state keeps its own best branch.
    pub per_state_max_cost: f64,
    /// CNOT applied to this iteration's ensemble.
    pub cnot_cost: f64,
    /// CNOT at every iteration from the start.
    pub cnot_chain_cost: f64,
    /// Per original sample; `None` once a sample has been dropped.
    pub concurrence: Vec<Option<f64>>,
    pub probability: Vec<Option<f64>>,
    pub cnot_chain_concurrence: Vec<f64>,
    pub cnot_chain_probability: Vec<f64>,
    pub dropped: usize,
    pub starts: Vec<StartSummary>,
    pub fallback_samples: usize,
    pub gradient_disagreement: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceResult {
    pub family: StateFamily,
    pub pdf: PdfSpec,
    pub config: OptimizerConfig,
    pub points: Vec<Point>,
    pub input_concurrence: Vec<f64>,
    pub input_cost: f64,
    pub iterations: Vec<IterationRecord>,
    /// ∏ₖ Pₖ^(2^(N−k)) per sample.
    pub overall_success: Vec<Option<f64>>,
    pub cnot_chain_overall_success: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl RecurrenceResult {
    /// Input cost followed by the cost after each iteration.
    pub fn cost_trajectory(&self) -> Vec<f64> {
        std::iter::once(self.input_cost).chain(self.iterations.iter().map(|r| r.cost)).collect()
    }
}

/// Product of per-iteration success probabilities weighted by the number of
/// pairs consumed: iteration k of N runs 2^(N−k) times in parallel.
pub fn overall_success(probabilities: &[f64]) -> f64 {
    let n = probabilities.len();
    probabilities
        .iter()
        .enumerate()
        .map(|(k, p)| p.powi(1 << (n - 1 - k)))
        .product()
}

fn post_state(copies_of: &DensityMatrix<4>, u: &Mat4, branch: usize) -> Result<DensityMatrix<4>> {
    let block = branch_blocks(&two_copies(copies_of.matrix()), u)[branch];
    validate_density(block.scale_real(1.0 / block.trace().re))
}

/// One step under a fixed gate where each state keeps its lowest-index best
/// branch: (C′, tie-aggregated P, kept state).
fn per_state_step(rho: &DensityMatrix<4>, u: &Mat4) -> Result<(f64, f64, DensityMatrix<4>)> {
    let blocks = branch_blocks(&two_copies(rho.matrix()), u);
    let s: SampleBranches = summarize(&blocks)?;
    let l = s.best_branch();
    let block = blocks[l];
    let state = validate_density(block.scale_real(1.0 / block.trace().re))?;
    Ok((s.concurrence(l), s.tied_probability(l), state))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedGateRun {
    pub points: Vec<Point>,
    pub input_concurrence: Vec<f64>,
    /// `[iteration][point]`.
    pub concurrence: Vec<Vec<f64>>,
    pub probability: Vec<Vec<f64>>,
    pub overall_success: Vec<f64>,
}

impl FixedGateRun {
    /// 1 − mean concurrence after each iteration.
    pub fn costs(&self) -> Vec<f64> {
        let n = self.points.len() as f64;
        self.concurrence.iter().map(|c| 1.0 - c.iter().sum::<f64>() / n).collect()
    }
}

/// Runs `iterations` rounds with the same gate, each state keeping its best
/// branch.
pub fn fixed_gate_chain(family: StateFamily, points: &[Point], u: &Mat4, iterations: usize) -> Result<FixedGateRun> {
    let mut states = points.iter().map(|&p| family.build(p)).collect::<Result<Vec<_>>>()?;
    let input_concurrence = states
        .iter()
        .map(|s| concurrence(s).map(|c| c.value()))
        .collect::<Result<Vec<_>>>()?;
    let mut conc = Vec::with_capacity(iterations);
    let mut prob = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let steps = states.iter().map(|s| per_state_step(s, u)).collect::<Result<Vec<_>>>()?;
        conc.push(steps.iter().map(|s| s.0).collect::<Vec<_>>());
        prob.push(steps.iter().map(|s| s.1).collect::<Vec<_>>());
        states = steps.into_iter().map(|s| s.2).collect();
    }
    let overall = (0..points.len())
        .map(|j| overall_success(&prob.iter().map(|p| p[j]).collect::<Vec<_>>()))
        .collect();
    Ok(FixedGateRun {
        points: points.to_vec(),
        input_concurrence,
        concurrence: conc,
        probability: prob,
        overall_success: overall,
    })
}

/// Optimizes one gate per iteration for `iterations` rounds of the protocol
/// on samples of `family` drawn from `pdf`.
pub fn recurrence_optimize(
    family: StateFamily,
    pdf: PdfSpec,
    iterations: usize,
    config: &OptimizerConfig,
) -> Result<RecurrenceResult> {
    config.validate()?;
    if !pdf.fits(family) {
        return Err(Error::Config(format!("pdf {pdf} does not fit the domain of {family}")));
    }
    if iterations == 0 || iterations > config.max_depth {
        return Err(Error::Config(format!(
            "iterations must be in 1..={}, got {iterations}",
            config.max_depth
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| run(family, pdf, iterations, config))
}

fn run(family: StateFamily, pdf: PdfSpec, iterations: usize, config: &OptimizerConfig) -> Result<RecurrenceResult> {
    let mut diagnostics = Vec::new();
    if iterations > ACCURATE_DEPTH {
        let msg = format!("{iterations} iterations requested; results past {ACCURATE_DEPTH} are of limited accuracy");
        log::warn!("{msg}");
        diagnostics.push(msg);
    }
    let samples = sample(&pdf, config.samples, config.sample_seed, config.sequence);
    let m = samples.len();
    let initial = samples.points.iter().map(|&p| family.build(p)).collect::<Result<Vec<_>>>()?;
    let input_concurrence = initial
        .iter()
        .map(|s| concurrence(s).map(|c| c.value()))
        .collect::<Result<Vec<_>>>()?;
    let input_cost = 1.0 - input_concurrence.iter().sum::<f64>() / m as f64;

    let cnot_gate = cnot();
    let mut alive: Vec<(usize, DensityMatrix<4>)> = initial.iter().cloned().enumerate().collect();
    let mut chain = initial;
    let mut probabilities: Vec<Vec<Option<f64>>> = Vec::new();
    let mut chain_probabilities: Vec<Vec<f64>> = Vec::new();
    let mut records = Vec::with_capacity(iterations);

    for k in 1..=iterations {
        let ensemble = Ensemble::new(alive.iter().map(|(_, s)| *s).collect())?;
        let cnot_cost = average_cost(&ensemble, &cnot_gate, Selection::EnsembleArgmin)?.cost;
        let best = multistart(&ensemble, Selection::EnsembleArgmin, config)?;
        let u = su4_from_angles(&best.angles);
        let eval = average_cost(&ensemble, &u, Selection::EnsembleArgmin)?;
        let branch = eval.selected_branch.expect("ensemble selection picks a branch");
        let per_state_max_cost = average_cost(&ensemble, &u, Selection::PerStateMax)?.cost;
        log::info!(
            "iteration {k}: cost {:.6} (branch {branch}), CNOT {:.6}, start {} of {}",
            eval.cost,
            cnot_cost,
            best.best_start,
            best.starts.len()
        );
        if let Some(d) = best.gradient_disagreement.filter(|d| *d > 1e-3) {
            let msg = format!("iteration {k}: dual and finite-difference gradients differ by {d:.2e}");
            log::warn!("{msg}");
            diagnostics.push(msg);
        }

        let mut conc = vec![None; m];
        let mut prob = vec![None; m];
        let mut next = Vec::with_capacity(alive.len());
        for ((j, state), s) in alive.iter().zip(&eval.samples) {
            if s.probabilities[branch] <= PROBABILITY_FLOOR {
                continue;
            }
            conc[*j] = Some(s.concurrence(branch));
            prob[*j] = Some(s.tied_probability(branch));
            next.push((*j, post_state(state, &u, branch)?));
        }
        let dropped = m - next.len();
        if dropped > 0 {
            log::warn!("iteration {k}: {dropped} of {m} samples have lost their kept branch");
        }
        if dropped as f64 > MAX_DROP_FRACTION * m as f64 {
            return Err(Error::Degeneracy { dropped, total: m });
        }
        alive = next;

        let steps = chain.iter().map(|s| per_state_step(s, &cnot_gate)).collect::<Result<Vec<_>>>()?;
        let chain_conc: Vec<f64> = steps.iter().map(|s| s.0).collect();
        let chain_prob: Vec<f64> = steps.iter().map(|s| s.1).collect();
        chain = steps.into_iter().map(|s| s.2).collect();
        let cnot_chain_cost = 1.0 - chain_conc.iter().sum::<f64>() / m as f64;

        probabilities.push(prob.clone());
        chain_probabilities.push(chain_prob.clone());
        records.push(IterationRecord {
            iteration: k,
            angles: best.angles,
            cost: eval.cost,
            branch,
            branch_averages: eval.branch_averages,
            per_state_max_cost,
            cnot_cost,
            cnot_chain_cost,
            concurrence: conc,
            probability: prob,
            cnot_chain_concurrence: chain_conc,
            cnot_chain_probability: chain_prob,
            dropped,
            starts: best.starts,
            fallback_samples: best.fallback_samples,
            gradient_disagreement: best.gradient_disagreement,
        });
    }

    let overall = (0..m)
        .map(|j| {
            probabilities
                .iter()
                .map(|p| p[j])
                .collect::<Option<Vec<_>>>()
                .map(|ps| overall_success(&ps))
        })
        .collect();
    let chain_overall = (0..m)
        .map(|j| overall_success(&chain_probabilities.iter().map(|p| p[j]).collect::<Vec<_>>()))
        .collect();
    Ok(RecurrenceResult {
        family,
        pdf,
        config: config.clone(),
        points: samples.points,
        input_concurrence,
        input_cost,
        iterations: records,
        overall_success: overall,
        cnot_chain_overall_success: chain_overall,
        diagnostics,
    })
}
