//! Strength of a positive operator along a ray.
//!
//! `strength(A, f)` is the largest `t >= 0` with `t * f f* <= A`. It is positive
//! exactly when `f` lies in the range of `A^{1/2}` (equivalently of `A`, in finite
//! dimensions), and then equals `1 / (f* A^+ f) = 1 / ||A^{+1/2} f||^2`. The vector
//! `xi = A^{+1/2} f` certifies membership: `A^{1/2} xi = f`.
//!
//! Comparing strength functions characterizes the Loewner order: `A <= B` iff
//! `strength(A, f) <= strength(B, f)` for every non-zero `f`. When the order fails,
//! [`order_witness`] produces a ray on which `A` is strictly stronger.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::psd::{
    eig_hermitian, loewner_leq, CVec, EigDecomp, HermitianMatrix, PsdMatrix,
};
use crate::random;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthResult {
    pub lambda: f64,
    /// Representing vector with `A^{1/2} xi = f`; present iff `lambda > 0`.
    pub xi: Option<CVec>,
    /// Optimal constant in `|<f|x>|^2 <= m * x*Ax`; present iff `lambda > 0`.
    pub m_f: Option<f64>,
}

impl StrengthResult {
    fn zero() -> Self {
        StrengthResult {
            lambda: 0.0,
            xi: None,
            m_f: None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lambda > 0.0
    }
}

pub fn strength(a: &PsdMatrix, f: &CVec, tol: &Tolerance) -> Result<StrengthResult> {
    strength_from_eig(&eig_hermitian(a), f, tol)
}

/// Strength with a precomputed eigendecomposition of `A`.
pub fn strength_from_eig(eig: &EigDecomp, f: &CVec, tol: &Tolerance) -> Result<StrengthResult> {
    if f.len() != eig.dim() {
        return Err(Error::DimensionMismatch {
            left: eig.dim(),
            right: f.len(),
        });
    }
    if f.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let cutoff = eig.rank_cutoff(tol);

    // coordinates of f in the eigenbasis
    let coords = eig.vectors.adjoint() * f;
    let mut outside = 0.0;
    let mut m_f = 0.0;
    let mut xi_coords = CVec::zeros(eig.dim());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        let c = coords[i];
        if l > cutoff {
            m_f += c.norm_sqr() / l;
            xi_coords[i] = c / Complex64::new(l.sqrt(), 0.0);
        } else {
            outside += c.norm_sqr();
        }
    }
    let f_norm = f.norm();
    if outside.sqrt() > tol.rel * f_norm.max(1.0) || m_f <= 0.0 {
        return Ok(StrengthResult::zero());
    }
    Ok(StrengthResult {
        lambda: 1.0 / m_f,
        xi: Some(&eig.vectors * xi_coords),
        m_f: Some(m_f),
    })
}

/// Cross-checks that strength dominance agrees with the Loewner order.
///
/// Returns the verdict of `loewner_leq(A, B)`. When it holds, `samples` random rays
/// (half generic, half drawn from the range of `A`) must never show
/// `strength(A, f) > strength(B, f)`; when it fails, [`order_witness`] must produce a
/// violating ray. Either inconsistency is reported as [`Error::Inconsistent`].
pub fn strength_dominates(
    a: &PsdMatrix,
    b: &PsdMatrix,
    tol: &Tolerance,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let leq = loewner_leq(a, b, tol)?;
    if !leq {
        return match order_witness(a, b, tol)? {
            Some(f) => {
                let la = strength(a, &f, tol)?.lambda;
                let lb = strength(b, &f, tol)?.lambda;
                if la > lb {
                    Ok(false)
                } else {
                    Err(Error::Inconsistent(format!(
                        "order witness does not separate strengths: {la} <= {lb}"
                    )))
                }
            }
            None => Err(Error::Inconsistent(
                "no order witness although A <= B failed".into(),
            )),
        };
    }

    let eig_a = eig_hermitian(a);
    let eig_b = eig_hermitian(b);
    let mut rng = random::rng(seed);
    let complex = !(a.is_real() && b.is_real());
    for i in 0..samples {
        let g = random::gaussian_vector(&mut rng, a.dim(), complex);
        let f = if i % 2 == 0 { g } else { a.apply(&g) };
        if f.norm() == 0.0 {
            continue;
        }
        let la = strength_from_eig(&eig_a, &f, tol)?.lambda;
        let lb = strength_from_eig(&eig_b, &f, tol)?.lambda;
        if la > lb + DOMINANCE_SLACK * (1.0 + lb) {
            return Err(Error::Inconsistent(format!(
                "A <= B but strength(A, f) = {la} exceeds strength(B, f) = {lb} on sample {i}"
            )));
        }
    }
    Ok(true)
}

/// Relative slack when comparing two computed strengths.
pub const DOMINANCE_SLACK: f64 = 1e-8;

/// A ray on which `A` is strictly stronger than `B`, or `None` when `A <= B`.
///
/// Takes an eigenvector `x` of `B - A` with negative eigenvalue and returns
/// `f = A x / sqrt(x*Ax)`. Then `strength(A, f) = 1` while
/// `strength(B, f) <= x*Bx / x*Ax < 1`.
pub fn order_witness(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<Option<CVec>> {
    if loewner_leq(a, b, tol)? {
        return Ok(None);
    }
    let diff: HermitianMatrix = b.as_hermitian() - a.as_hermitian();
    let eig = eig_hermitian(&diff);
    let floor = tol.psd_floor(eig.scale());
    let scale_a = eig_hermitian(a).scale();

    // eigenvalues ascending: most negative first
    for i in 0..eig.dim() {
        if eig.eigenvalues[i] >= -floor {
            break;
        }
        let x = eig.column(i);
        let q = a.quadratic_form(&x);
        if q > tol.psd_floor(scale_a) {
            let ax = a.apply(&x);
            return Ok(Some(ax / Complex64::new(q.sqrt(), 0.0)));
        }
    }
    // x*Bx < x*Ax <= tol would make B indefinite beyond tolerance
    Err(Error::Inconsistent(
        "every violating direction has x*Ax ~ 0; B is not PSD within tolerance".into(),
    ))
}

/// Independent route to the strength: bisection on `t -> is_psd(A - t f f*)`.
///
/// Bracket `[0, max eig(A) / ||f||^2 + 1]`, 60 halvings. Used as an oracle for the
/// closed form.
pub fn strength_by_bisection(a: &PsdMatrix, f: &CVec, tol: &Tolerance) -> Result<f64> {
    if f.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let ff = crate::psd::rank_one(f)?;
    let top = eig_hermitian(a).max().max(0.0);
    let mut lo = 0.0;
    let mut hi = top / f.norm_squared() + 1.0;
    let fits = |t: f64| crate::psd::is_psd(&(a.as_hermitian() - &ff.scaled(t)), tol);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{is_psd, rank_one, real_vector, sqrt_psd};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn identity_unit_ray() {
        let r = strength(&PsdMatrix::identity(2), &real_vector(&[1.0, 0.0]), &tol()).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-15);
        assert!((r.m_f.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ray_outside_range_has_zero_strength() {
        let a = PsdMatrix::diag(&[1.0, 0.0]).unwrap();
        let r = strength(&a, &real_vector(&[0.0, 1.0]), &tol()).unwrap();
        assert_eq!(r, StrengthResult::zero());
    }

    #[test]
    fn hand_inverse_example() {
        // A^{-1} = [[1, -1], [-1, 2]], f*A^{-1}f = 1 - 2 + 2 = 1
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let f = real_vector(&[1.0, 1.0]);
        let r = strength(&a, &f, &tol()).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-13);
        let bisect = strength_by_bisection(&a, &f, &tol()).unwrap();
        assert!((bisect - 1.0).abs() < 1e-6 * 2.0);
    }

    #[test]
    fn zero_ray_rejected() {
        let a = PsdMatrix::identity(2);
        assert!(matches!(
            strength(&a, &CVec::zeros(2), &tol()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn certificate_and_supremum() {
        let mut rng = random::rng(31);
        let a = random::psd(&mut rng, 4, 3, true);
        let f = a.apply(&random::gaussian_vector(&mut rng, 4, true));
        let r = strength(&a, &f, &tol()).unwrap();
        let xi = r.xi.clone().unwrap();
        assert!((r.lambda * xi.norm_squared() - 1.0).abs() < 1e-12);
        assert!((r.lambda * r.m_f.unwrap() - 1.0).abs() < 1e-12);
        let j = sqrt_psd(&a).unwrap();
        assert!((j.apply(&xi) - &f).norm() < 1e-10 * f.norm());

        let ff = rank_one(&f).unwrap();
        let delta = 1e-6 * (1.0 + r.lambda);
        assert!(is_psd(&(a.as_hermitian() - &ff.scaled(r.lambda)), &tol()));
        assert!(!is_psd(&(a.as_hermitian() - &ff.scaled(r.lambda + delta)), &tol()));
    }

    #[test]
    fn dominance_examples() {
        let t = tol();
        let i2 = PsdMatrix::identity(2);
        let d21 = PsdMatrix::diag(&[2.0, 1.0]).unwrap();
        let d12 = PsdMatrix::diag(&[1.0, 2.0]).unwrap();
        assert!(strength_dominates(&i2, &d21, &t, 16, 1).unwrap());
        assert!(!strength_dominates(&d21, &d12, &t, 16, 1).unwrap());
        assert!(strength_dominates(&d21, &d21, &t, 16, 1).unwrap());
        assert!(strength_dominates(&i2, &d21, &t, 0, 1).is_err());
    }

    #[test]
    fn equal_operators_have_equal_strengths() {
        let mut rng = random::rng(12);
        let a = random::psd(&mut rng, 3, 2, true);
        for _ in 0..10 {
            let f = a.apply(&random::gaussian_vector(&mut rng, 3, true));
            let x = strength(&a, &f, &tol()).unwrap().lambda;
            let y = strength(&a.clone(), &f, &tol()).unwrap().lambda;
            assert_eq!(x, y);
        }
    }

    #[test]
    fn witness_examples() {
        let t = tol();
        let d21 = PsdMatrix::diag(&[2.0, 1.0]).unwrap();
        let d12 = PsdMatrix::diag(&[1.0, 2.0]).unwrap();
        let f = order_witness(&d21, &d12, &t).unwrap().unwrap();
        // x = e1, f = A e1 / sqrt(2) = (sqrt 2, 0): strengths 1 and 1/2
        assert!(f[1].norm() < 1e-15);
        let la = strength(&d21, &f, &t).unwrap().lambda;
        let lb = strength(&d12, &f, &t).unwrap().lambda;
        assert!((la - 1.0).abs() < 1e-14);
        assert!((lb - 0.5).abs() < 1e-14);

        assert!(order_witness(&PsdMatrix::identity(2), &d21, &t).unwrap().is_none());

        // A = I + e e*, B = I, e = (1, 0): f along e1, strengths 2 vs 1 up to the f normalization
        let a = PsdMatrix::identity(2).add(&rank_one(&real_vector(&[1.0, 0.0])).unwrap());
        let b = PsdMatrix::identity(2);
        let f = order_witness(&a, &b, &t).unwrap().unwrap();
        assert!(f[1].norm() < 1e-15);
        let la = strength(&a, &f, &t).unwrap().lambda;
        let lb = strength(&b, &f, &t).unwrap().lambda;
        assert!((la - 1.0).abs() < 1e-14);
        assert!((lb - 0.5).abs() < 1e-14);
        // ratio is invariant under rescaling f: on the unit ray the strengths are 2 and 1
        let unit = real_vector(&[1.0, 0.0]);
        assert!((strength(&a, &unit, &t).unwrap().lambda - 2.0).abs() < 1e-14);
        assert!((strength(&b, &unit, &t).unwrap().lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn homogeneity_in_powers_of_two_is_exact() {
        let mut rng = random::rng(40);
        let a = random::psd(&mut rng, 4, 4, true);
        let f = random::gaussian_vector(&mut rng, 4, true);
        let base = strength(&a, &f, &tol()).unwrap().lambda;
        for alpha in [0.25, 0.5, 2.0, 8.0] {
            let scaled = strength(&a.scale_by(alpha).unwrap(), &f, &tol()).unwrap().lambda;
            assert_eq!(scaled, alpha * base);
        }
        assert_eq!(strength(&a.scale_by(0.0).unwrap(), &f, &tol()).unwrap().lambda, 0.0);
    }
}
