//! Ensemble-averaged cost 1 − E[C′] and its gradient over the Euler angles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence_of, concurrence_tangent, ConcurrenceTangent};
use crate::error::{Error, Result};
use crate::protocol::{branch_blocks, branch_rows, left_apply, right_factor, two_copies, BranchRows, PROBABILITY_FLOOR, TIE_TOLERANCE};
use crate::qmat::{DensityMatrix, Mat16, Mat4};
use crate::sun::{angle_bounds, euler_product, euler_product_dual, ANGLE_COUNT};

pub type Angles = [f64; ANGLE_COUNT];

/// States to be purified, each paired with its two-copy product.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<DensityMatrix<4>>,
    copies: Vec<Mat16>,
}

impl Ensemble {
    pub fn new(states: Vec<DensityMatrix<4>>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Config("ensemble is empty".into()));
        }
        let copies = states.iter().map(|s| two_copies(s.matrix())).collect();
        Ok(Self { states, copies })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DensityMatrix<4>] {
        &self.states
    }
}

/// Which branch counts as the output of each state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// One branch for the whole ensemble: the one of highest average
    /// concurrence, lowest index on ties.
    EnsembleArgmin,
    /// Each state keeps its own best branch.
    PerStateMax,
    /// A fixed outcome index 0..4.
    Branch(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    /// Forward-mode derivatives through the whole pipeline, with central
    /// differences for samples at degenerate spectra.
    #[default]
    Dual,
    CentralDifference,
}

/// Branch probabilities and concurrences of one state under one gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBranches {
    pub probabilities: [f64; 4],
    /// `None` where the branch probability is at or below the floor.
    pub concurrences: [Option<f64>; 4],
}

impl SampleBranches {
    pub fn concurrence(&self, branch: usize) -> f64 {
        self.concurrences[branch].unwrap_or(0.0)
    }

    /// Lowest-index branch of maximal concurrence.
    pub fn best_branch(&self) -> usize {
        let mut best = 0;
        for l in 1..4 {
            if self.concurrences[l].unwrap_or(-1.0) > self.concurrences[best].unwrap_or(-1.0) + TIE_TOLERANCE {
                best = l;
            }
        }
        best
    }

    /// Total probability of the defined branches whose concurrence ties with
    /// `branch`'s.
    pub fn tied_probability(&self, branch: usize) -> f64 {
        let Some(c) = self.concurrences[branch] else {
            return self.probabilities[branch];
        };
        (0..4)
            .filter(|&l| self.concurrences[l].is_some_and(|x| (x - c).abs() <= TIE_TOLERANCE))
            .map(|l| self.probabilities[l])
            .sum::<f64>()
            .min(1.0)
    }
}

pub(crate) fn summarize(blocks: &[Mat4; 4]) -> Result<SampleBranches> {
    let mut probabilities = [0.0; 4];
    let mut concurrences = [None; 4];
    for (l, block) in blocks.iter().enumerate() {
        let p = block.trace().re;
        probabilities[l] = p.clamp(0.0, 1.0);
        if p > PROBABILITY_FLOOR {
            concurrences[l] = Some(concurrence_of(&block.scale_real(1.0 / p))?);
        }
    }
    Ok(SampleBranches {
        probabilities,
        concurrences,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostEvaluation {
    pub cost: f64,
    pub branch_averages: [f64; 4],
    /// The ensemble-wide branch, absent under [`Selection::PerStateMax`].
    pub selected_branch: Option<usize>,
    pub samples: Vec<SampleBranches>,
}

impl CostEvaluation {
    /// The branch each sample keeps.
    pub fn kept_branches(&self) -> Vec<usize> {
        match self.selected_branch {
            Some(l) => vec![l; self.samples.len()],
            None => self.samples.iter().map(SampleBranches::best_branch).collect(),
        }
    }
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

pub fn average_cost(ensemble: &Ensemble, u: &Mat4, selection: Selection) -> Result<CostEvaluation> {
    let samples = ensemble
        .copies
        .par_iter()
        .map(|s| summarize(&branch_blocks(s, u)))
        .collect::<Result<Vec<_>>>()?;
    let n = samples.len();
    let branch_averages: [f64; 4] = std::array::from_fn(|l| mean(samples.iter().map(|s| s.concurrence(l)), n));
    let (cost, selected_branch) = match selection {
        Selection::EnsembleArgmin => {
            let mut best = 0;
            for l in 1..4 {
                if branch_averages[l] > branch_averages[best] + 1e-12 {
                    best = l;
                }
            }
            (1.0 - branch_averages[best], Some(best))
        }
        Selection::Branch(l) if l < 4 => (1.0 - branch_averages[l], Some(l)),
        Selection::Branch(l) => return Err(Error::Config(format!("branch index {l} outside 0..4"))),
        Selection::PerStateMax => {
            let c = mean(samples.iter().map(|s| s.concurrence(s.best_branch())), n);
            (1.0 - c, None)
        }
    };
    Ok(CostEvaluation {
        cost,
        branch_averages,
        selected_branch,
        samples,
    })
}

fn add_rows(a: &BranchRows, b: &BranchRows) -> BranchRows {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][c] + b[r][c]))
}

fn branch_concurrence(copies: &Mat16, k: &BranchRows) -> Result<f64> {
    let block = left_apply(k, &right_factor(copies, k)).hermitian_part();
    let p = block.trace().re;
    if p > PROBABILITY_FLOOR {
        concurrence_of(&block.scale_real(1.0 / p))
    } else {
        Ok(0.0)
    }
}

/// Points α ± h·e_k clamped to the box, with the actual spacing.
fn stencil(alpha: &Angles, k: usize, h: f64) -> (Angles, Angles, f64) {
    let (lo, hi) = angle_bounds()[k];
    let mut plus = *alpha;
    let mut minus = *alpha;
    plus[k] = (alpha[k] + h).min(hi);
    minus[k] = (alpha[k] - h).max(lo);
    let width = plus[k] - minus[k];
    (plus, minus, width)
}

struct ShiftedRows {
    plus: Vec<BranchRows>,
    minus: Vec<BranchRows>,
    width: Vec<f64>,
}

impl ShiftedRows {
    fn new(alpha: &Angles, h: f64, branch: usize) -> Self {
        let mut out = ShiftedRows {
            plus: Vec::with_capacity(ANGLE_COUNT),
            minus: Vec::with_capacity(ANGLE_COUNT),
            width: Vec::with_capacity(ANGLE_COUNT),
        };
        for k in 0..ANGLE_COUNT {
            let (p, m, w) = stencil(alpha, k, h);
            let (up, um) = (euler_product(&p), euler_product(&m));
            out.plus.push(branch_rows(&up, &up, branch));
            out.minus.push(branch_rows(&um, &um, branch));
            out.width.push(w);
        }
        out
    }

    fn gradient(&self, copies: &Mat16) -> Result<Angles> {
        let mut g = [0.0; ANGLE_COUNT];
        for k in 0..ANGLE_COUNT {
            if self.width[k] > 0.0 {
                g[k] = (branch_concurrence(copies, &self.plus[k])? - branch_concurrence(copies, &self.minus[k])?) / self.width[k];
            }
        }
        Ok(g)
    }
}

enum SampleGradient {
    Smooth(Angles),
    Degenerate,
}

/// Derivative of the kept-branch concurrence of one sample.
fn sample_gradient(copies: &Mat16, k: &BranchRows, dk: &[BranchRows]) -> Result<SampleGradient> {
    let t = right_factor(copies, k);
    let a = left_apply(k, &t).hermitian_part();
    let p = a.trace().re;
    if p <= PROBABILITY_FLOOR {
        return Ok(SampleGradient::Smooth([0.0; ANGLE_COUNT]));
    }
    let rho = a.scale_real(1.0 / p);
    let drho: Vec<Mat4> = dk
        .iter()
        .map(|d| {
            let half = left_apply(d, &t);
            let da = half + half.dagger();
            let dp = da.trace().re;
            (da - rho.scale_real(dp)).scale_real(1.0 / p)
        })
        .collect();
    Ok(match concurrence_tangent(&rho, &drho)? {
        ConcurrenceTangent::Smooth { tangent, .. } => {
            SampleGradient::Smooth(std::array::from_fn(|i| tangent[i]))
        }
        ConcurrenceTangent::Degenerate { .. } => SampleGradient::Degenerate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientEvaluation {
    pub cost: f64,
    pub gradient: Angles,
    pub evaluation: CostEvaluation,
    /// Samples whose derivative came from finite differences.
    pub fallback_samples: usize,
}

/// Cost and gradient with the kept branches frozen at `alpha`.
pub fn cost_and_gradient(
    ensemble: &Ensemble,
    alpha: &Angles,
    selection: Selection,
    mode: GradientMode,
    step: f64,
) -> Result<GradientEvaluation> {
    let dual = euler_product_dual(alpha);
    let u = dual.value;
    let evaluation = average_cost(ensemble, &u, selection)?;
    let kept = evaluation.kept_branches();
    let n = ensemble.len() as f64;

    let (sum, fallback_samples) = match mode {
        GradientMode::CentralDifference => {
            let shifted: Vec<ShiftedRows> = (0..4).map(|l| ShiftedRows::new(alpha, step, l)).collect();
            let grads = ensemble
                .copies
                .par_iter()
                .zip(&kept)
                .map(|(s, &l)| shifted[l].gradient(s))
                .collect::<Result<Vec<_>>>()?;
            (grads, ensemble.len())
        }
        GradientMode::Dual => {
            let rows: Vec<BranchRows> = (0..4).map(|l| branch_rows(&u, &u, l)).collect();
            let drows: Vec<Vec<BranchRows>> = (0..4)
                .map(|l| {
                    dual.tangents
                        .iter()
                        .map(|du| add_rows(&branch_rows(du, &u, l), &branch_rows(&u, du, l)))
                        .collect()
                })
                .collect();
            let per_sample = ensemble
                .copies
                .par_iter()
                .zip(&kept)
                .map(|(s, &l)| sample_gradient(s, &rows[l], &drows[l]))
                .collect::<Result<Vec<_>>>()?;
            let degenerate = per_sample.iter().filter(|g| matches!(g, SampleGradient::Degenerate)).count();
            let mut shifted: [Option<ShiftedRows>; 4] = Default::default();
            let mut grads = Vec::with_capacity(per_sample.len());
            for ((g, s), &l) in per_sample.into_iter().zip(&ensemble.copies).zip(&kept) {
                grads.push(match g {
                    SampleGradient::Smooth(g) => g,
                    SampleGradient::Degenerate => shifted[l]
                        .get_or_insert_with(|| ShiftedRows::new(alpha, step, l))
                        .gradient(s)?,
                });
            }
            (grads, degenerate)
        }
    };
    let mut gradient = [0.0; ANGLE_COUNT];
    for g in &sum {
        for (acc, x) in gradient.iter_mut().zip(g) {
            *acc -= x / n;
        }
    }
    Ok(GradientEvaluation {
        cost: evaluation.cost,
        gradient,
        evaluation,
        fallback_samples,
    })
}

/// Cost with every sample's kept branch fixed in advance.
pub fn frozen_cost(ensemble: &Ensemble, alpha: &Angles, kept: &[usize]) -> Result<f64> {
    let u = euler_product(alpha);
    let rows: Vec<BranchRows> = (0..4).map(|l| branch_rows(&u, &u, l)).collect();
    let cs = ensemble
        .copies
        .par_iter()
        .zip(kept)
        .map(|(s, &l)| branch_concurrence(s, &rows[l]))
        .collect::<Result<Vec<_>>>()?;
    Ok(1.0 - mean(cs.into_iter(), ensemble.len()))
}
