//! Dense complex matrices of fixed small dimension.
//!
//! Everything in the toolkit lives in dimension 2 (single qubit), 4 (one
//! qubit pair) or 16 (two pairs), so the matrix type carries its dimension as
//! a const parameter and mismatched products fail to compile.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute tolerance used for density-matrix and spectrum checks.
pub const TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CMatrix<const N: usize> {
    data: [[C64; N]; N],
}

pub type Mat2 = CMatrix<2>;
pub type Mat4 = CMatrix<4>;
pub type Mat16 = CMatrix<16>;

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMatrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            data: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(data: [[C64; N]; N]) -> Self {
        Self { data }
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(diag: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = diag[i];
        }
        m
    }

    /// Projector |ψ⟩⟨ψ| (no normalization applied).
    pub fn outer(ket: &[C64; N]) -> Self {
        Self::from_fn(|i, j| ket[i] * ket[j].conj())
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|i, j| self.data[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.data[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.data[j][i])
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.data[i][i]).sum()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for i in 0..N {
            for k in 0..N {
                acc += self.data[i][k] * other.data[k][i];
            }
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.data[i][j] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.data[i][j] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flat_map(|r| r.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.dagger() - Self::identity()).max_abs()
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(|i, j| (self.data[i][j] + self.data[j][i].conj()) * 0.5)
    }

    /// Determinant via LU decomposition with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.data;
        let mut det = ONE;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
                .unwrap_or(col);
            if a[pivot][col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            for r in col + 1..N {
                let factor = a[r][col] / p;
                for c in col..N {
                    let v = a[col][c];
                    a[r][c] -= factor * v;
                }
            }
        }
        det
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Only the Hermitian part of `self` is used. Eigenvalues are returned in
    /// ascending order; column `k` of the returned matrix is the eigenvector of
    /// eigenvalue `k`.
    pub fn hermitian_eigen(&self) -> ([f64; N], Self) {
        let mut a = self.hermitian_part().data;
        let mut v = Self::identity().data;
        for _sweep in 0..64 {
            let mut off = 0.0;
            let mut diag = 0.0;
            for p in 0..N {
                diag += a[p][p].norm_sqr();
                for q in p + 1..N {
                    off += a[p][q].norm_sqr();
                }
            }
            if off <= 1e-32 * diag.max(1e-300) {
                break;
            }
            for p in 0..N {
                for q in p + 1..N {
                    let apq = a[p][q];
                    let b = apq.norm();
                    if b == 0.0 {
                        continue;
                    }
                    let phase = apq / b;
                    let (c, s) = jacobi_cs(a[p][p].re, a[q][q].re, b);
                    let sp = phase * s;
                    let spc = sp.conj();
                    // A ← A J, J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on (p, q)
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = akp * c - akq * spc;
                        row[q] = akp * sp + akq * c;
                    }
                    // A ← J† A
                    for k in 0..N {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = apk * c - aqk * sp;
                        a[q][k] = apk * spc + aqk * c;
                    }
                    a[p][q] = ZERO;
                    a[q][p] = ZERO;
                    a[p][p] = C64::new(a[p][p].re, 0.0);
                    a[q][q] = C64::new(a[q][q].re, 0.0);
                    for row in v.iter_mut() {
                        let (vkp, vkq) = (row[p], row[q]);
                        row[p] = vkp * c - vkq * spc;
                        row[q] = vkp * sp + vkq * c;
                    }
                }
            }
        }
        let mut order: [usize; N] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
        let values = std::array::from_fn(|k| a[order[k]][order[k]].re);
        let vectors = Self::from_fn(|i, k| v[i][order[k]]);
        (values, vectors)
    }

    /// Singular values in descending order (one-sided Jacobi).
    ///
    /// Small singular values are accurate to roughly machine precision times
    /// the largest one, which squaring-based routes cannot offer.
    pub fn singular_values(&self) -> [f64; N] {
        // work on columns: g[col][row]
        let mut g: [[C64; N]; N] = std::array::from_fn(|c| std::array::from_fn(|r| self.data[r][c]));
        for _sweep in 0..64 {
            let mut rotated = false;
            for p in 0..N {
                for q in p + 1..N {
                    let alpha: f64 = g[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = g[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = g[p].iter().zip(g[q].iter()).map(|(a, b)| a.conj() * b).sum();
                    let b = gamma.norm();
                    if b == 0.0 || b <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / b;
                    let (c, s) = jacobi_cs(alpha, beta, b);
                    let sp = phase * s;
                    let spc = sp.conj();
                    for r in 0..N {
                        let (x, y) = (g[p][r], g[q][r]);
                        g[p][r] = x * c - y * spc;
                        g[q][r] = x * sp + y * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut s: [f64; N] = std::array::from_fn(|c| g[c].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// All eigenvalues of a general (non-Hermitian) matrix via Hessenberg
    /// reduction and shifted complex QR iteration.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        let mut h = self.data;
        hessenberg(&mut h);
        let mut values = Vec::with_capacity(N);
        let mut hi = N;
        let mut iter = 0usize;
        let mut since_deflation = 0usize;
        while hi > 0 {
            if hi == 1 {
                values.push(h[0][0]);
                break;
            }
            // locate the start of the active unreduced block
            let mut lo = hi - 1;
            while lo > 0 {
                let sub = h[lo][lo - 1].norm();
                let scale = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
                if sub <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                    h[lo][lo - 1] = ZERO;
                    break;
                }
                lo -= 1;
            }
            if lo == hi - 1 {
                values.push(h[hi - 1][hi - 1]);
                hi -= 1;
                since_deflation = 0;
                continue;
            }
            iter += 1;
            since_deflation += 1;
            if iter > 100 * N {
                return Err(Error::NumericalFailure(format!(
                    "QR eigenvalue iteration did not converge in {} steps",
                    100 * N
                )));
            }
            let shift = if since_deflation % 11 == 10 {
                // exceptional shift to break cycles
                h[hi - 1][hi - 1] + C64::new(h[hi - 1][hi - 2].norm() * 0.75, 0.0)
            } else {
                wilkinson_shift(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1])
            };
            qr_step(&mut h, lo, hi, shift);
        }
        Ok(values)
    }
}

fn jacobi_cs(app: f64, aqq: f64, b: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

fn hessenberg<const N: usize>(a: &mut [[C64; N]; N]) {
    for k in 0..N.saturating_sub(2) {
        let norm: f64 = (k + 1..N).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v = [ZERO; N];
        v[k + 1] = x0 + phase * norm;
        for i in k + 2..N {
            v[i] = a[i][k];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vv†/v†v) A
        for j in 0..N {
            let dot: C64 = (k + 1..N).map(|i| v[i].conj() * a[i][j]).sum();
            let f = dot * (2.0 / vnorm2);
            for i in k + 1..N {
                a[i][j] -= v[i] * f;
            }
        }
        // A ← A (I − 2vv†/v†v)
        for row in a.iter_mut() {
            let dot: C64 = (k + 1..N).map(|j| row[j] * v[j]).sum();
            let f = dot * (2.0 / vnorm2);
            for j in k + 1..N {
                row[j] -= f * v[j].conj();
            }
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicitly shifted QR step on the Hessenberg window `lo..hi`.
fn qr_step<const N: usize>(h: &mut [[C64; N]; N], lo: usize, hi: usize, shift: C64) {
    for i in lo..hi {
        h[i][i] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let (a, b) = (h[k][k], h[k + 1][k]);
        let (c, s) = givens(a, b);
        for j in k..hi {
            let (x, y) = (h[k][j], h[k + 1][j]);
            h[k][j] = x * c + s * y;
            h[k + 1][j] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let top = (k + 2).min(hi - 1);
        for row in h.iter_mut().take(top + 1).skip(lo) {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * s.conj();
            row[k + 1] = -s * x + y * c;
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    if b.norm() == 0.0 {
        return (1.0, ZERO);
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let alpha = a / a.norm();
    (a.norm() / norm, alpha * b.conj() / norm)
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<const N: usize> Mul<&CMatrix<N>> for &CMatrix<N> {
    type Output = CMatrix<N>;
    fn mul(self, rhs: &CMatrix<N>) -> CMatrix<N> {
        let mut out = CMatrix::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] + rhs.data[i][j])
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] - rhs.data[i][j])
    }
}

impl<const N: usize> Neg for CMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.data[i][j])
    }
}

/// Kronecker product; `C` must equal `A * B`.
pub fn kron<const A: usize, const B: usize, const C: usize>(a: &CMatrix<A>, b: &CMatrix<B>) -> CMatrix<C> {
    const { assert!(A * B == C, "kron output dimension must be the product of the input dimensions") };
    CMatrix::from_fn(|r, c| a[(r / B, c / B)] * b[(r % B, c % B)])
}

/// Eigenvalues of a general matrix, unordered.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<C64>,
}

impl Spectrum {
    pub fn sum(&self) -> C64 {
        self.values.iter().sum()
    }
}

pub fn eig_general(m: &Mat4) -> Result<Spectrum> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Spectrum {
        values: m.eigenvalues()?,
    })
}

/// A Hermitian, unit-trace, positive-semidefinite matrix (4×4 for one pair,
/// 16×16 for two).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<const N: usize>(CMatrix<N>);

impl<const N: usize> DensityMatrix<N> {
    pub fn matrix(&self) -> &CMatrix<N> {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix<N> {
        self.0
    }
}

pub fn validate_density<const N: usize>(rho: CMatrix<N>) -> Result<DensityMatrix<N>> {
    const { assert!(N == 4 || N == 16, "density matrices are 4x4 or 16x16") };
    if !rho.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = rho.hermiticity_defect();
    if herm > TOLERANCE {
        return Err(Error::NotHermitian(herm));
    }
    let tr = (rho.trace() - ONE).norm();
    if tr > TOLERANCE {
        return Err(Error::NotUnitTrace(tr));
    }
    let (values, _) = rho.hermitian_eigen();
    if values[0] < -TOLERANCE {
        return Err(Error::NotPositive(values[0]));
    }
    Ok(DensityMatrix(rho))
}
