//! Seeded random instances: Gaussian vectors, Haar-like unitaries, PSD matrices
//! with prescribed rank, projectors.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::psd::{CMat, CVec, HermitianMatrix, PsdMatrix};

pub type InstanceRng = ChaCha8Rng;

/// Eigenvalue range for the positive part of generated PSD matrices.
pub const SPECTRUM: (f64, f64) = (0.25, 4.0);

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalar<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
    Complex64::new(re, im)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> CVec {
    CVec::from_fn(n, |_, _| scalar(rng, complex))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, complex: bool) -> CMat {
    CMat::from_fn(rows, cols, |_, _| scalar(rng, complex))
}

/// Unitary from modified Gram-Schmidt on a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> CMat {
    loop {
        let g = gaussian_matrix(rng, n, n, complex);
        if let Some(q) = orthonormalize(&g) {
            return q;
        }
    }
}

/// Orthonormal columns spanning the columns of `g`; `None` if `g` is numerically rank deficient.
pub fn orthonormalize(g: &CMat) -> Option<CMat> {
    let mut q = g.clone();
    for j in 0..q.ncols() {
        for k in 0..j {
            let qk = q.column(k).into_owned();
            let proj = qk.dotc(&q.column(j));
            let updated = q.column(j) - qk * proj;
            q.set_column(j, &updated);
        }
        let norm = q.column(j).norm();
        if norm < 1e-8 {
            return None;
        }
        let unit = q.column(j) / Complex64::new(norm, 0.0);
        q.set_column(j, &unit);
    }
    Some(q)
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n, n, complex);
    HermitianMatrix::symmetrized(g)
}

/// `Q diag(values) Q*` with `Q` unitary.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64], complex: bool) -> PsdMatrix {
    let n = values.len();
    let q = unitary(rng, n, complex);
    let mut scaled = q.clone();
    for (j, &v) in values.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= Complex64::new(v, 0.0);
        }
    }
    PsdMatrix::assume(HermitianMatrix::symmetrized(scaled * q.adjoint()))
}

/// PSD matrix of exact rank `rank`, positive eigenvalues uniform in [`SPECTRUM`].
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, complex: bool) -> PsdMatrix {
    assert!(rank <= n, "rank {rank} exceeds dimension {n}");
    let mut values = vec![0.0; n];
    for v in values.iter_mut().take(rank) {
        *v = rng.random_range(SPECTRUM.0..SPECTRUM.1);
    }
    with_spectrum(rng, &values, complex)
}

/// Orthogonal projector onto a random `rank`-dimensional subspace.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, complex: bool) -> PsdMatrix {
    let mut values = vec![0.0; n];
    for v in values.iter_mut().take(rank) {
        *v = 1.0;
    }
    with_spectrum(rng, &values, complex)
}

/// Orthogonal projector onto the span of the given columns.
pub fn projector_onto(columns: &CMat) -> PsdMatrix {
    let q = orthonormalize(columns).expect("columns must be linearly independent");
    PsdMatrix::assume(HermitianMatrix::symmetrized(&q * q.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{eig_hermitian, numeric_rank};
    use crate::tolerance::Tolerance;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        for complex in [false, true] {
            let q = unitary(&mut r, 5, complex);
            assert!((q.adjoint() * &q - CMat::identity(5, 5)).norm() < 1e-12);
        }
    }

    #[test]
    fn psd_has_requested_rank() {
        let mut r = rng(2);
        for n in 1..=6 {
            for rank in 0..=n {
                let a = psd(&mut r, n, rank, n % 2 == 0);
                assert_eq!(numeric_rank(&a, &Tolerance::default()), rank);
                assert!(eig_hermitian(&a).min() > -1e-12);
            }
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = psd(&mut rng(9), 4, 2, true);
        let b = psd(&mut rng(9), 4, 2, true);
        assert_eq!(a, b);
    }
}
