//! Absolute continuity, mutual singularity and the Lebesgue decomposition
//! `B = [A]B + B_s` with maximal absolutely continuous part.
//!
//! In finite dimensions `B << A` reduces to `ker A ⊆ ker B` (equivalently
//! `ran B ⊆ ran A`), and `A ⊥ B` to `ran A ∩ ran B = {0}`. The maximal part `[A]B`
//! is `R P R` with `R = B^{1/2}` and `P` the projector onto
//! `{m : R m ∈ ran A}`; the parallel sums `(nA) : B` increase to it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::psd::{
    eig_hermitian, numeric_rank, pinv_psd, range_basis, range_projector, sqrt_psd_with, CMat, HermitianMatrix,
    PsdMatrix,
};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueParts {
    /// `[A]B`, the maximal part of `B` absolutely continuous with respect to `A`.
    pub ac: PsdMatrix,
    /// `B - [A]B`, singular with respect to `A`.
    pub sing: PsdMatrix,
    /// Projector onto `{m : B^{1/2} m ∈ ran A}` used to split `B`.
    pub projector: HermitianMatrix,
}

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

fn complement(p: &HermitianMatrix) -> HermitianMatrix {
    &HermitianMatrix::identity(p.dim()) - p
}

/// `B << A`: the quadratic form of `B` vanishes on `ker A`, i.e.
/// `||(I - P_A) B (I - P_A)|| <= rel * max(1, ||B||)`.
pub fn absolutely_continuous(b: &PsdMatrix, a: &PsdMatrix, tol: &Tolerance) -> Result<bool> {
    same_dim(b, a)?;
    let q = complement(&range_projector(a, tol));
    let restricted = b.as_hermitian().congruence(&q);
    let leak = eig_hermitian(&restricted).max_abs();
    let scale = eig_hermitian(b).scale();
    Ok(leak <= tol.rel * scale)
}

/// `A ⊥ B`: `rank P_A + rank P_B = rank(P_A + P_B)`, i.e. the ranges meet only in 0.
pub fn mutually_singular(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<bool> {
    same_dim(a, b)?;
    let pa = range_projector(a, tol);
    let pb = range_projector(b, tol);
    let ra = numeric_rank(&pa, tol);
    let rb = numeric_rank(&pb, tol);
    let joint = numeric_rank(&(&pa + &pb), tol);
    Ok(ra + rb == joint)
}

/// Relative rank cutoff for the pseudo-inverse inside [`parallel_sum_direct`].
const PARALLEL_SUM_REL: f64 = 1e-13;

/// Parallel sum `A : B = A (A + B)^+ B`, evaluated by [`scaled_parallel_sum`] with
/// `n = 1` under the default tolerance.
pub fn parallel_sum(a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
    scaled_parallel_sum(a, b, 1.0, &Tolerance::default())
}

/// `A (A+B)^+ B` by the textbook formula, as `B - B (A+B)^+ B` when
/// `||A|| >= ||B||` and `A - A (A+B)^+ A` otherwise.
///
/// Loses accuracy when `A + B` is badly conditioned, e.g. `(2^30 A) : B`.
pub fn parallel_sum_direct(a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
    same_dim(a, b)?;
    let sum = a.add(b);
    let tol = Tolerance::new(PARALLEL_SUM_REL, f64::MIN_POSITIVE)?;
    let pinv = pinv_psd(&sum, &tol);
    let small = if a.frobenius_norm() >= b.frobenius_norm() {
        b
    } else {
        a
    };
    let m = small.as_matrix();
    let correction = m * pinv.as_matrix() * m;
    Ok(PsdMatrix::assume(HermitianMatrix::symmetrized(
        m - correction,
    )))
}

/// Lebesgue decomposition of `b` with respect to `a`, returning `[A]B` and the
/// singular remainder.
pub fn ac_part(b: &PsdMatrix, a: &PsdMatrix, tol: &Tolerance) -> Result<LebesgueParts> {
    same_dim(b, a)?;
    let n = b.dim();
    let r = sqrt_psd_with(b, tol)?;
    let q = complement(&range_projector(a, tol));
    // kernel of (I - P_A) R is the kernel of the PSD matrix R (I - P_A) R
    let k = q.congruence(&r);
    let eig = eig_hermitian(&k);
    let cutoff = tol.rank_cutoff(eig.max_abs().max(eig_hermitian(b).max_abs()));
    let p = eig.projector(|l| l <= cutoff);
    let ac = p.congruence(&r);
    let sing = complement(&p).congruence(&r);
    debug_assert_eq!(ac.dim(), n);
    Ok(LebesgueParts {
        ac: PsdMatrix::assume(ac),
        sing: PsdMatrix::assume(sing),
        projector: p,
    })
}

/// Alias for [`ac_part`].
pub fn lebesgue_decompose(b: &PsdMatrix, a: &PsdMatrix, tol: &Tolerance) -> Result<LebesgueParts> {
    ac_part(b, a, tol)
}

/// Shorted operator of `B` to `ran A` via the Schur complement in an adapted basis.
///
/// An independent third route to `[A]B`: with `U = [U_1 U_2]` splitting `ran A` and
/// `ker A`, the result is `U_1 (B_11 - B_12 B_22^+ B_21) U_1*`.
pub fn shorted_to_range(b: &PsdMatrix, a: &PsdMatrix, tol: &Tolerance) -> Result<PsdMatrix> {
    same_dim(b, a)?;
    let n = b.dim();
    let eig = eig_hermitian(a);
    let cutoff = eig.rank_cutoff(tol);
    let (inside, outside): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| eig.eigenvalues[i] > cutoff);
    if inside.is_empty() {
        return Ok(PsdMatrix::zeros(n));
    }
    let u1 = CMat::from_columns(&inside.iter().map(|&i| eig.column(i)).collect::<Vec<_>>());
    let b11 = u1.adjoint() * b.as_matrix() * &u1;
    let schur = if outside.is_empty() {
        b11
    } else {
        let u2 = CMat::from_columns(&outside.iter().map(|&i| eig.column(i)).collect::<Vec<_>>());
        let b12 = u1.adjoint() * b.as_matrix() * &u2;
        let b22 = PsdMatrix::assume(HermitianMatrix::symmetrized(
            u2.adjoint() * b.as_matrix() * &u2,
        ));
        let b22_pinv = pinv_psd(&b22, tol);
        b11 - &b12 * b22_pinv.as_matrix() * b12.adjoint()
    };
    let full = &u1 * schur * u1.adjoint();
    Ok(PsdMatrix::assume(HermitianMatrix::symmetrized(full)))
}

/// `(nA) : B`, accurate for any `n > 0`.
///
/// `nA : B` only sees `A` through its short `A'` to `ran B`. With `B_r` the
/// compression of `B` to `ran B` and `K = B_r^{-1/2} A' B_r^{-1/2}`, the result is
/// `B_r^{1/2} g(K) B_r^{1/2}` with `g(κ) = nκ / (1 + nκ)`. Eigenvalues of `K` below
/// the rank cutoff are treated as exact zeros, so roundoff on `ker A` is not
/// amplified by `n`.
pub fn scaled_parallel_sum(a: &PsdMatrix, b: &PsdMatrix, n: f64, tol: &Tolerance) -> Result<PsdMatrix> {
    same_dim(a, b)?;
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {n}")));
    }
    let u = range_basis(b, tol);
    if u.ncols() == 0 {
        return Ok(PsdMatrix::zeros(a.dim()));
    }
    let short = shorted_to_range(a, b, tol)?;
    let restrict = |m: &CMat| HermitianMatrix::symmetrized(u.adjoint() * m * &u);
    let eig_b = eig_hermitian(&restrict(b.as_matrix()));
    let root = eig_b.map(f64::sqrt);
    let root_inv = eig_b.map(|l| 1.0 / l.sqrt());
    let k = restrict(short.as_matrix()).congruence(&root_inv);
    let eig_k = eig_hermitian(&k);
    let cutoff = eig_k.rank_cutoff(tol);
    let g = eig_k.map(|x| if x <= cutoff { 0.0 } else { n * x / (1.0 + n * x) });
    let inner = g.congruence(&root);
    let full = &u * inner.as_matrix() * u.adjoint();
    Ok(PsdMatrix::assume(HermitianMatrix::symmetrized(full)))
}

/// `(2^k A) : B` for `k` in `exponents`, the increasing sequence converging to `[A]B`.
pub fn parallel_sum_sequence(
    a: &PsdMatrix,
    b: &PsdMatrix,
    exponents: &[i32],
    tol: &Tolerance,
) -> Result<Vec<PsdMatrix>> {
    exponents
        .iter()
        .map(|&k| scaled_parallel_sum(a, b, 2f64.powi(k), tol))
        .collect()
}

/// Lower bound `C <= B` with `C << A`: the parallel sum of `B` with a random PSD
/// operator supported on `ran A`.
pub fn sample_ac_minorant(
    b: &PsdMatrix,
    a: &PsdMatrix,
    weight: &PsdMatrix,
    tol: &Tolerance,
) -> Result<PsdMatrix> {
    let pa = range_projector(a, tol);
    let g = weight.congruence(&pa);
    parallel_sum(&g, b)
}

impl LebesgueParts {
    pub fn reconstruction_error(&self, b: &PsdMatrix) -> f64 {
        let sum = self.ac.add(&self.sing);
        let d = sum.as_matrix() - b.as_matrix();
        d.iter().fold(0.0f64, |acc, z: &Complex64| acc.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{loewner_leq, rank_one};
    use crate::random;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn d(v: &[f64]) -> PsdMatrix {
        PsdMatrix::diag(v).unwrap()
    }

    #[test]
    fn absolute_continuity_examples() {
        assert!(absolutely_continuous(&d(&[1.0, 0.0]), &d(&[2.0, 0.0]), &tol()).unwrap());
        assert!(!absolutely_continuous(&d(&[1.0, 1.0]), &d(&[1.0, 0.0]), &tol()).unwrap());
        let mut rng = random::rng(1);
        let b = random::psd(&mut rng, 4, 3, true);
        let a = random::psd(&mut rng, 4, 4, true);
        assert!(absolutely_continuous(&b, &a, &tol()).unwrap());
    }

    #[test]
    fn singularity_examples() {
        assert!(mutually_singular(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), &tol()).unwrap());
        let a = d(&[1.0, 2.0]);
        assert!(!mutually_singular(&a, &a, &tol()).unwrap());

        let mut rng = random::rng(2);
        let f = random::gaussian_vector(&mut rng, 3, true);
        let mut g = random::gaussian_vector(&mut rng, 3, true);
        let proj = f.dotc(&g) / Complex64::new(f.norm_squared(), 0.0);
        g -= &f * proj;
        assert!(mutually_singular(&rank_one(&f).unwrap(), &rank_one(&g).unwrap(), &tol()).unwrap());
    }

    #[test]
    fn parallel_sum_examples() {
        let i = PsdMatrix::identity(2);
        let half = parallel_sum(&i, &i).unwrap();
        assert!(half.max_abs_diff(&HermitianMatrix::diag(&[0.5, 0.5]).unwrap()) < 1e-15);
        let z = parallel_sum(&d(&[3.0, 1.0]), &PsdMatrix::zeros(2)).unwrap();
        assert!(z.max_abs_diff(&HermitianMatrix::zeros(2)) < 1e-15);
        let p = parallel_sum(&d(&[1.0, 0.0]), &d(&[1.0, 1.0])).unwrap();
        assert!(p.max_abs_diff(&HermitianMatrix::diag(&[0.5, 0.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn parallel_sum_is_symmetric_and_below_both() {
        let mut rng = random::rng(3);
        let a = random::psd(&mut rng, 4, 3, true);
        let b = random::psd(&mut rng, 4, 2, true);
        let ab = parallel_sum(&a, &b).unwrap();
        let ba = parallel_sum(&b, &a).unwrap();
        assert!(ab.max_abs_diff(&ba) < 1e-12);
        assert!(ab.max_abs_diff(&parallel_sum_direct(&a, &b).unwrap()) < 1e-12);
        // A (A+B)^+ B computed literally
        let sum = a.add(&b);
        let lit = a.as_matrix() * pinv_psd(&sum, &tol()).as_matrix() * b.as_matrix();
        assert!((lit - ab.as_matrix()).norm() < 1e-12);
        assert!(loewner_leq(&ab, &a, &tol()).unwrap());
        assert!(loewner_leq(&ab, &b, &tol()).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let parts = ac_part(&d(&[1.0, 1.0]), &d(&[1.0, 0.0]), &tol()).unwrap();
        assert!(parts.ac.max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.0]).unwrap()) < 1e-15);
        assert!(parts.sing.max_abs_diff(&HermitianMatrix::diag(&[0.0, 1.0]).unwrap()) < 1e-15);

        let mut rng = random::rng(4);
        let b = random::psd(&mut rng, 3, 2, true);
        let a = random::psd(&mut rng, 3, 3, true);
        let parts = ac_part(&b, &a, &tol()).unwrap();
        assert!(parts.ac.max_abs_diff(&b) < 1e-12);
        assert!(parts.sing.max_abs_diff(&HermitianMatrix::zeros(3)) < 1e-12);

        let parts = ac_part(&b, &PsdMatrix::zeros(3), &tol()).unwrap();
        assert!(parts.ac.max_abs_diff(&HermitianMatrix::zeros(3)) < 1e-12);
        assert!(parts.sing.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn three_routes_agree() {
        let mut rng = random::rng(5);
        for n in 2..=6 {
            let a = random::psd(&mut rng, n, n / 2, true);
            let b = random::psd(&mut rng, n, n - 1, true);
            let parts = ac_part(&b, &a, &tol()).unwrap();
            let short = shorted_to_range(&b, &a, &tol()).unwrap();
            let limit = parallel_sum(&a.scale_by(2f64.powi(30)).unwrap(), &b).unwrap();
            assert!(parts.ac.max_abs_diff(&short) < 1e-10, "n = {n}");
            assert!(parts.ac.max_abs_diff(&limit) < 1e-6, "n = {n}");
            assert!(parts.reconstruction_error(&b) < 1e-12);
            assert!(absolutely_continuous(&parts.ac, &a, &tol()).unwrap());
            assert!(mutually_singular(&parts.sing, &a, &tol()).unwrap());
        }
    }

    #[test]
    fn sampled_minorants_stay_below_ac_part() {
        let mut rng = random::rng(6);
        let a = random::psd(&mut rng, 4, 2, false);
        let b = random::psd(&mut rng, 4, 3, false);
        let ac = ac_part(&b, &a, &tol()).unwrap().ac;
        for _ in 0..20 {
            let w = random::psd(&mut rng, 4, 4, false).scale_by(10.0).unwrap();
            let c = sample_ac_minorant(&b, &a, &w, &tol()).unwrap();
            assert!(loewner_leq(&c, &b, &tol()).unwrap());
            assert!(absolutely_continuous(&c, &a, &tol()).unwrap());
            assert!(loewner_leq(&c, &ac, &tol()).unwrap());
        }
    }

    #[test]
    fn parallel_sums_increase() {
        let mut rng = random::rng(7);
        let a = random::psd(&mut rng, 4, 2, true);
        let b = random::psd(&mut rng, 4, 4, true);
        let seq = parallel_sum_sequence(&a, &b, &[0, 2, 4, 6, 8, 10], &tol()).unwrap();
        for w in seq.windows(2) {
            assert!(loewner_leq(&w[0], &w[1], &tol()).unwrap());
        }
    }

    #[test]
    fn scaled_parallel_sum_matches_direct_route() {
        let mut rng = random::rng(8);
        for n in 1..=6 {
            for (ra, rb) in [(n, n), (n / 2, n), (n, n / 2), (n - 1, n - 1)] {
                let a = random::psd(&mut rng, n, ra, n % 2 == 0);
                let b = random::psd(&mut rng, n, rb, n % 2 == 1);
                for k in [0.25, 1.0, 3.0, 16.0] {
                    let direct = parallel_sum_direct(&a.scale_by(k).unwrap(), &b).unwrap();
                    let stable = scaled_parallel_sum(&a, &b, k, &tol()).unwrap();
                    assert!(direct.max_abs_diff(&stable) < 1e-10, "n = {n}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn scaled_parallel_sum_ignores_kernel_roundoff() {
        // B is a ray outside ran A, so (nA) : B = 0 for every n
        let a = d(&[1.0, 2.0, 1e-17]);
        let b = rank_one(&crate::psd::real_vector(&[0.3, 0.4, 1.0])).unwrap();
        let far = scaled_parallel_sum(&a, &b, 2f64.powi(40), &tol()).unwrap();
        assert!(far.max_abs_diff(&HermitianMatrix::zeros(3)) < 1e-15);
        assert!(scaled_parallel_sum(&a, &b, 0.0, &tol()).is_err());
    }
}
