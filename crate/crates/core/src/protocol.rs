//! One round of the recurrence protocol: two copies of a pair, the same gate
//! at both sites, a standard-basis measurement of the second pair and
//! post-selection.

use crate::entanglement::concurrence_of;
use crate::error::{Error, Result};
use crate::qmat::{kron, validate_density, DensityMatrix, Mat16, Mat4, C64, TOLERANCE, ZERO};
use serde::Serialize;

/// Branches with probability at or below this have no post-state.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Branch concurrences closer than this count as one maximum.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Layout of the 16-dimensional two-pair space: qubits (A₁, B₁, A₂, B₂), the
/// first one being the most significant bit. With this order ρ⊗ρ is a plain
/// Kronecker product.
#[derive(Clone, Copy, Debug)]
pub struct QubitOrdering;

impl QubitOrdering {
    pub const fn index(a1: usize, b1: usize, a2: usize, b2: usize) -> usize {
        8 * a1 + 4 * b1 + 2 * a2 + b2
    }

    pub const fn bits(index: usize) -> (usize, usize, usize, usize) {
        ((index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1)
    }

    /// Index of a full basis state given the kept pair's 2-bit index and the
    /// measured pair's outcome.
    pub const fn join(kept: usize, outcome: usize) -> usize {
        let (a1, b1) = (kept >> 1, kept & 1);
        let (a2, b2) = (outcome >> 1, outcome & 1);
        Self::index(a1, b1, a2, b2)
    }
}

/// U acting on (A₁, A₂) and on (B₁, B₂).
pub fn embed_bilateral(u: &Mat4) -> Result<Mat16> {
    let defect = u.unitarity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    Ok(embed_pair(u, u))
}

// Entry ((a1b1a2b2), (x1y1x2y2)) = U[(a1a2),(x1x2)] · V[(b1b2),(y1y2)].
fn embed_pair(u: &Mat4, v: &Mat4) -> Mat16 {
    Mat16::from_fn(|r, c| {
        let (a1, b1, a2, b2) = QubitOrdering::bits(r);
        let (x1, y1, x2, y2) = QubitOrdering::bits(c);
        u[(2 * a1 + a2, 2 * x1 + x2)] * v[(2 * b1 + b2, 2 * y1 + y2)]
    })
}

/// The four rows of the bilateral gate that survive measurement outcome
/// `outcome` of (A₂, B₂), as a 4×16 block. `u` acts at A and `v` at B, which
/// lets callers form derivatives as rows(dU, U) + rows(U, dU).
pub(crate) type BranchRows = [[C64; 16]; 4];

pub(crate) fn branch_rows(u: &Mat4, v: &Mat4, outcome: usize) -> BranchRows {
    let (a2, b2) = (outcome >> 1, outcome & 1);
    std::array::from_fn(|kept| {
        let (a1, b1) = (kept >> 1, kept & 1);
        std::array::from_fn(|c| {
            let (x1, y1, x2, y2) = QubitOrdering::bits(c);
            u[(2 * a1 + a2, 2 * x1 + x2)] * v[(2 * b1 + b2, 2 * y1 + y2)]
        })
    })
}

/// S·K† for a 16×16 S and 4×16 K.
pub(crate) fn right_factor(s: &Mat16, k: &BranchRows) -> [[C64; 4]; 16] {
    std::array::from_fn(|m| {
        std::array::from_fn(|c| {
            let row = &s.rows()[m];
            row.iter().zip(&k[c]).fold(ZERO, |acc, (x, y)| acc + x * y.conj())
        })
    })
}

/// K·T for a 4×16 K and 16×4 T.
pub(crate) fn left_apply(k: &BranchRows, t: &[[C64; 4]; 16]) -> Mat4 {
    Mat4::from_fn(|r, c| k[r].iter().zip(t).fold(ZERO, |acc, (x, row)| acc + x * row[c]))
}

/// Unnormalized post-measurement blocks ⟨i|U ρ⊗ρ U†|i⟩ of all four outcomes.
/// Their traces are the branch probabilities.
pub(crate) fn branch_blocks(two_copies: &Mat16, u: &Mat4) -> [Mat4; 4] {
    std::array::from_fn(|outcome| {
        let k = branch_rows(u, u, outcome);
        left_apply(&k, &right_factor(two_copies, &k)).hermitian_part()
    })
}

/// Two copies of a pair state under [`QubitOrdering`].
pub fn two_copies(rho: &Mat4) -> Mat16 {
    kron::<4, 4, 16>(rho, rho)
}

/// How the kept branch is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchPolicy {
    /// Keep the branch of highest concurrence for this state, summing the
    /// probabilities of tied maxima.
    PerStateMax,
    /// Keep a fixed outcome (0..4, as (A₂, B₂) = 00, 01, 10, 11).
    EnsembleBranch(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub probability: f64,
    pub state: Option<DensityMatrix<4>>,
    pub concurrence: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub branches: [Branch; 4],
    pub selected_concurrence: f64,
    pub success_probability: f64,
    pub selected_branches: Vec<usize>,
}

impl StepOutcome {
    pub fn probabilities(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.branches[i].probability)
    }
}

/// Indices of defined branches whose concurrence lies within
/// [`TIE_TOLERANCE`] of the best one, in index order.
pub fn tied_maxima(concurrences: &[Option<f64>; 4]) -> Vec<usize> {
    let Some(best) = concurrences.iter().flatten().cloned().reduce(f64::max) else {
        return Vec::new();
    };
    (0..4)
        .filter(|&i| concurrences[i].is_some_and(|c| best - c <= TIE_TOLERANCE))
        .collect()
}

pub fn purification_step(rho: &DensityMatrix<4>, u: &Mat4, policy: BranchPolicy) -> Result<StepOutcome> {
    let defect = u.unitarity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    let blocks = branch_blocks(&two_copies(rho.matrix()), u);
    let mut branches = Vec::with_capacity(4);
    for block in blocks {
        let p = block.trace().re;
        if p > PROBABILITY_FLOOR {
            let state = validate_density(block.scale_real(1.0 / p))?;
            let c = concurrence_of(state.matrix())?;
            branches.push(Branch {
                probability: p.min(1.0),
                state: Some(state),
                concurrence: Some(c),
            });
        } else {
            branches.push(Branch {
                probability: p.max(0.0),
                state: None,
                concurrence: None,
            });
        }
    }
    let branches: [Branch; 4] = branches.try_into().expect("four branches");
    let concs = std::array::from_fn(|i| branches[i].concurrence);
    let selected = match policy {
        BranchPolicy::PerStateMax => tied_maxima(&concs),
        BranchPolicy::EnsembleBranch(l) if l < 4 => concs[l].map(|_| vec![l]).unwrap_or_default(),
        BranchPolicy::EnsembleBranch(l) => {
            return Err(Error::Config(format!("branch index {l} outside 0..4")));
        }
    };
    if selected.is_empty() {
        return Err(Error::EmptyOutcome(PROBABILITY_FLOOR));
    }
    let selected_concurrence = selected.iter().filter_map(|&i| concs[i]).fold(0.0, f64::max);
    let success_probability = selected.iter().map(|&i| branches[i].probability).sum::<f64>().min(1.0);
    Ok(StepOutcome {
        branches,
        selected_concurrence,
        success_probability,
        selected_branches: selected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::ONE;
    use crate::sun::{cnot, euler_product, ANGLE_COUNT};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix<4> {
        let a = Mat4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let p = a * a.dagger();
        validate_density(p.scale(ONE / p.trace()).hermitian_part()).unwrap()
    }

    fn random_gate(rng: &mut ChaCha8Rng) -> Mat4 {
        euler_product(&std::array::from_fn::<f64, ANGLE_COUNT, _>(|_| rng.gen_range(0.0..6.3)))
    }

    // Permutes basis bits directly: P maps |a1 b1 a2 b2⟩ to |a1 a2 b1 b2⟩.
    fn permuted_oracle(u: &Mat4) -> Mat16 {
        let perm = Mat16::from_fn(|r, c| {
            let (a1, b1, a2, b2) = QubitOrdering::bits(c);
            if r == 8 * a1 + 4 * a2 + 2 * b1 + b2 {
                ONE
            } else {
                ZERO
            }
        });
        perm.dagger() * kron::<4, 4, 16>(u, u) * perm
    }

    #[test]
    fn identity_embeds_to_identity() {
        assert_eq!(embed_bilateral(&Mat4::identity()).unwrap(), Mat16::identity());
    }

    #[test]
    fn embedding_matches_permutation_oracle() {
        let e = embed_bilateral(&cnot()).unwrap();
        assert_eq!(e, permuted_oracle(&cnot()));
        assert!(e.rows().iter().flatten().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let u = random_gate(&mut rng);
            let e = embed_bilateral(&u).unwrap();
            assert!((e - permuted_oracle(&u)).max_abs() < 1e-12);
            let back = e * embed_bilateral(&u.dagger()).unwrap();
            assert!((back - Mat16::identity()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_unitary_gate() {
        let m = Mat4::identity().scale_real(2.0);
        assert!(matches!(embed_bilateral(&m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let out = purification_step(&random_state(&mut rng), &random_gate(&mut rng), BranchPolicy::PerStateMax).unwrap();
            let total: f64 = out.probabilities().iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
            assert!(out.success_probability <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn global_phase_is_irrelevant() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let rho = random_state(&mut rng);
            let u = random_gate(&mut rng);
            let phase = C64::from_polar(1.0, rng.gen_range(0.0..6.3));
            let a = purification_step(&rho, &u, BranchPolicy::PerStateMax).unwrap();
            let b = purification_step(&rho, &u.scale(phase), BranchPolicy::PerStateMax).unwrap();
            for (x, y) in a.branches.iter().zip(&b.branches) {
                assert!((x.probability - y.probability).abs() < 1e-12);
                let diff = *x.state.unwrap().matrix() - *y.state.unwrap().matrix();
                assert!(diff.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_summation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            let u = random_gate(&mut rng);
            let e = permuted_oracle(&u);
            let full = e * two_copies(rho.matrix()) * e.dagger();
            let out = purification_step(&rho, &u, BranchPolicy::PerStateMax).unwrap();
            for (outcome, branch) in out.branches.iter().enumerate() {
                let mut block = Mat4::zeros();
                let mut p = 0.0;
                for r in 0..4 {
                    p += full[(QubitOrdering::join(r, outcome), QubitOrdering::join(r, outcome))].re;
                    for c in 0..4 {
                        block[(r, c)] = full[(QubitOrdering::join(r, outcome), QubitOrdering::join(c, outcome))];
                    }
                }
                assert!((p - branch.probability).abs() < 1e-10);
                let diff = block.scale_real(1.0 / p) - *branch.state.unwrap().matrix();
                assert!(diff.max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ties_are_aggregated() {
        assert_eq!(tied_maxima(&[Some(0.5), Some(0.5 + 1e-10), None, Some(0.2)]), vec![0, 1]);
        assert!(tied_maxima(&[None; 4]).is_empty());
    }

    #[test]
    fn fixed_branch_policy_reports_that_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let rho = random_state(&mut rng);
        let u = random_gate(&mut rng);
        let out = purification_step(&rho, &u, BranchPolicy::EnsembleBranch(2)).unwrap();
        assert_eq!(out.selected_branches, vec![2]);
        assert_eq!(out.success_probability, out.branches[2].probability);
        assert!(purification_step(&rho, &u, BranchPolicy::EnsembleBranch(4)).is_err());
    }
}
