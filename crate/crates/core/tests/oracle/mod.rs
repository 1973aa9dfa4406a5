//! Reference computations that share no numerics with the library: eigenvalues and
//! pseudo-inverses from nalgebra's symmetric eigensolver on the real embedding,
//! shorted operators from the Anderson-Trapp formula.
//!
//! nalgebra's SVD is avoided: on rank-deficient inputs its null-space singular
//! vectors can be inconsistent, which corrupts `pseudo_inverse` at the 1e-4 level.

#![allow(dead_code)]

use loewner::{CMat, CVec, HermitianMatrix, PsdMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `[[Re M, -Im M], [Im M, Re M]]`, real symmetric with every eigenvalue of `M` twice.
fn embed(m: &CMat) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`embed`] on matrices of embedded form.
fn unembed(e: &DMatrix<f64>) -> CMat {
    let n = e.nrows() / 2;
    CMat::from_fn(n, n, |i, j| Complex64::new(e[(i, j)], e[(i + n, j)]))
}

fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    let mut all: Vec<f64> = embed(&hermitian_part(m))
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    all.sort_by(f64::total_cmp);
    all.into_iter().step_by(2).collect()
}

pub fn min_eig(m: &CMat) -> f64 {
    eigenvalues(m)[0]
}

pub fn max_eig(m: &CMat) -> f64 {
    *eigenvalues(m).last().unwrap()
}

pub fn spectral_norm(m: &CMat) -> f64 {
    eigenvalues(m).iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `max(1, max |eig|)` over the given matrices.
pub fn scale(ms: &[&CMat]) -> f64 {
    ms.iter().fold(1.0, |acc, m| acc.max(spectral_norm(m)))
}

/// `y - x` PSD up to `slack`.
pub fn leq(x: &CMat, y: &CMat, slack: f64) -> bool {
    min_eig(&(y - x)) >= -slack
}

/// Moore-Penrose inverse of the Hermitian part of `m`, dropping eigenvalues below
/// `1e-9 * max(1, ||m||)` in absolute value.
pub fn pinv(m: &CMat) -> CMat {
    let eps = 1e-9 * spectral_norm(m).max(1.0);
    spectral_map(m, |l| if l.abs() > eps { 1.0 / l } else { 0.0 })
}

/// `g(M)` for the Hermitian part of `m`.
fn spectral_map(m: &CMat, g: impl Fn(f64) -> f64) -> CMat {
    let eig = embed(&hermitian_part(m)).symmetric_eigen();
    let mut out = DMatrix::zeros(2 * m.nrows(), 2 * m.nrows());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        out += v * v.transpose() * g(l);
    }
    // the embedding is a homomorphism, so its spectral calculus commutes with it
    unembed(&out)
}

/// Orthogonal projector onto `ran m`.
pub fn range_projector(m: &CMat) -> CMat {
    hermitian_part(&(m * pinv(m)))
}

/// `B - B Q (Q B Q)^+ Q B` with `Q = I - P_A`: `B` shorted to `ran A`.
pub fn short(b: &CMat, a: &CMat) -> CMat {
    let n = a.nrows();
    let q = CMat::identity(n, n) - range_projector(a);
    let qbq = &q * b * &q;
    hermitian_part(&(b - b * &q * pinv(&qbq) * &q * b))
}

/// `A (A + B)^+ B`.
pub fn parallel_sum(a: &CMat, b: &CMat) -> CMat {
    hermitian_part(&(a * pinv(&(a + b)) * b))
}

/// Positive part `(M)_+` of a Hermitian matrix.
pub fn positive_part(m: &CMat) -> CMat {
    spectral_map(m, |l| l.max(0.0))
}

pub fn outer(f: &CVec) -> CMat {
    f * f.adjoint()
}

/// `1 / (f* A^+ f)` when `f ∈ ran A`, else 0.
pub fn strength_closed(a: &CMat, a_pinv: &CMat, f: &CVec) -> f64 {
    let p = a * a_pinv;
    let residual = (f - &p * f).norm();
    if residual > 1e-8 * f.norm().max(1.0) {
        return 0.0;
    }
    let m = f.dotc(&(a_pinv * f)).re;
    if m <= 0.0 {
        0.0
    } else {
        1.0 / m
    }
}

/// `sup { t : t f f* <= A }` by bisection on the oracle eigenvalues.
pub fn strength_bisect(a: &CMat, f: &CVec) -> f64 {
    let ff = outer(f);
    let floor = 1e-12 * scale(&[a]);
    let mut lo = 0.0;
    let mut hi = max_eig(a).max(0.0) / f.norm_squared() * (1.0 + 1e-9) + 1e-300;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if min_eig(&(a - &ff * Complex64::new(mid, 0.0))) >= -floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn mat(h: &HermitianMatrix) -> CMat {
    h.as_matrix().clone()
}

pub fn psd(m: &CMat) -> PsdMatrix {
    PsdMatrix::from_matrix(m.clone()).expect("oracle input is PSD")
}

pub fn real(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    CMat::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
