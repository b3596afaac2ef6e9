//! Wootters concurrence of two-qubit states.
//!
//! The λ_i of the concurrence formula are the square roots of the eigenvalues
//! of R = ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y). With ρ = WW† (W = V·diag(√μ) from the
//! eigen-decomposition of ρ) the same λ_i are the singular values of
//! τ = Wᵀ(σ_y⊗σ_y)W, which we compute directly: taking square roots of the
//! eigenvalues of R turns 1e-17 round-off into 1e-9 errors on rank-deficient
//! states.

use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, Mat4, ONE, TOLERANCE, ZERO};

/// Eigenvalues of ρ below this are treated as exact zeros.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// Below this λ_i (or relative gap between λ₁² and λ₂²) the derivative of the
/// concurrence is not trusted and callers fall back to finite differences.
const MIN_LAMBDA: f64 = 1e-6;
const MIN_EIGENVALUE: f64 = 1e-9;
const MIN_RELATIVE_GAP: f64 = 1e-8;

// σ_y⊗σ_y is antidiagonal with these signs: (YM)[i][j] = SIGNS[i]·M[3−i][j]
const SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Concurrence(f64);

impl Concurrence {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn concurrence(rho: &DensityMatrix<4>) -> Result<Concurrence> {
    concurrence_of(rho.matrix()).map(Concurrence)
}

/// (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn spin_flip(rho: &Mat4) -> Mat4 {
    Mat4::from_fn(|i, j| rho[(3 - i, 3 - j)].conj() * (SIGNS[i] * SIGNS[j]))
}

/// ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y), whose eigenvalues are the squared λ_i.
pub fn wootters_matrix(rho: &Mat4) -> Mat4 {
    rho * &spin_flip(rho)
}

/// The four λ_i in descending order.
pub fn wootters_lambdas(rho: &Mat4) -> [f64; 4] {
    let (mu, v) = rho.hermitian_eigen();
    let w = Mat4::from_fn(|r, c| {
        if mu[c] > RANK_THRESHOLD {
            v[(r, c)] * mu[c].sqrt()
        } else {
            ZERO
        }
    });
    let yw = Mat4::from_fn(|i, j| w[(3 - i, j)] * SIGNS[i]);
    (w.transpose() * yw).singular_values()
}

pub(crate) fn concurrence_of(rho: &Mat4) -> Result<f64> {
    let l = wootters_lambdas(rho);
    finish(l[0] - l[1] - l[2] - l[3])
}

fn finish(raw: f64) -> Result<f64> {
    if !raw.is_finite() {
        return Err(Error::NumericalFailure("non-finite concurrence".into()));
    }
    if raw > 1.0 + TOLERANCE {
        return Err(Error::NumericalFailure(format!("concurrence {raw} exceeds 1")));
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Concurrence together with its directional derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum ConcurrenceTangent {
    /// Derivatives along each supplied direction (zero where the max{0, ·}
    /// is inactive).
    Smooth { value: f64, tangent: Vec<f64> },
    /// Some λ_i vanishes or λ₁ meets λ₂, so perturbation theory does not apply.
    Degenerate { value: f64 },
}

impl ConcurrenceTangent {
    pub fn value(&self) -> f64 {
        match self {
            Self::Smooth { value, .. } | Self::Degenerate { value } => *value,
        }
    }
}

/// Derivative of the concurrence of `rho` along each Hermitian direction in
/// `directions`.
///
/// Uses the factor W = √ρ, whose derivative solves dW·W + W·dW = dρ, and
/// first-order perturbation of the singular values of τ = Wᵀ(σ_y⊗σ_y)W:
/// dλ_i = Re(v_i†τ†dτ v_i)/λ_i with v_i the right singular vectors. Needs a
/// full-rank ρ, nonzero λ_i and λ₁ clear of λ₂; otherwise reports degeneracy.
pub fn concurrence_tangent(rho: &Mat4, directions: &[Mat4]) -> Result<ConcurrenceTangent> {
    let l = wootters_lambdas(rho);
    let raw = l[0] - l[1] - l[2] - l[3];
    let value = finish(raw)?;
    if raw <= 0.0 {
        return Ok(ConcurrenceTangent::Smooth {
            value,
            tangent: vec![0.0; directions.len()],
        });
    }
    let (mu, v) = rho.hermitian_eigen();
    // λ₂, λ₃, λ₄ enter with the same sign, so only their gap to λ₁ matters:
    // the summed derivative over a cluster does not depend on the basis.
    let sq = l.map(|x| x * x);
    if mu[0] < MIN_EIGENVALUE || l[3] < MIN_LAMBDA || sq[0] - sq[1] < MIN_RELATIVE_GAP * sq[0] {
        return Ok(ConcurrenceTangent::Degenerate { value });
    }

    let root = mu.map(f64::sqrt);
    let vd = v.dagger();
    let w = v * Mat4::diagonal(root.map(|r| ONE * r)) * vd;
    let flip = |m: &Mat4| Mat4::from_fn(|i, j| m[(3 - i, j)] * SIGNS[i]);
    let yw = flip(&w);
    let tau = w.transpose() * yw;
    // right singular vectors: eigenvectors of τ†τ, ascending, so λ_i ↔ column 3 − i
    let (_, sv) = (tau.dagger() * tau).hermitian_eigen();
    let tau_v = tau * sv;

    let tangent = directions
        .iter()
        .map(|d| {
            let dhat = vd * *d * v;
            let dw_hat = Mat4::from_fn(|i, j| dhat[(i, j)] / (root[i] + root[j]));
            let dw = v * dw_hat * vd;
            let dtau = dw.transpose() * yw + w.transpose() * flip(&dw);
            let dtau_v = dtau * sv;
            let dlambda: [f64; 4] = std::array::from_fn(|i| {
                let c = 3 - i;
                let q = (0..4).fold(ZERO, |acc, r| acc + tau_v[(r, c)].conj() * dtau_v[(r, c)]);
                q.re / l[i]
            });
            dlambda[0] - dlambda[1] - dlambda[2] - dlambda[3]
        })
        .collect();
    Ok(ConcurrenceTangent::Smooth { value, tangent })
}
