//! Hermitian and positive semidefinite matrix calculus.
//!
//! Everything here works over complex scalars; real symmetric input is the
//! zero-imaginary special case. The anti-duality pairing of a functional `f`
//! with a vector `x` is `<f|x> = sum_i f_i * conj(x_i)`, which makes the rank-one
//! operator `f (x) f` the matrix `f f*`.

use std::fmt;
use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{scale_of, Tolerance};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix equal to its conjugate transpose.
///
/// The stored matrix is exactly Hermitian: construction symmetrizes after the
/// asymmetry check passes.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tolerance(m, &Tolerance::default())
    }

    pub fn with_tolerance(m: CMat, tol: &Tolerance) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        let n = m.nrows();
        let mut max_entry = 0.0f64;
        let mut max_asymmetry = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "non-finite entry at ({i}, {j})"
                    )));
                }
                max_entry = max_entry.max(z.norm());
                max_asymmetry = max_asymmetry.max((z - m[(j, i)].conj()).norm());
            }
        }
        if max_asymmetry > tol.rel * max_entry.max(1.0) {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(m + m*) / 2`, for matrices that are Hermitian by construction.
    pub(crate) fn symmetrized(m: CMat) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj) * Complex64::new(0.5, 0.0))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        Self::new(CMat::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        let n = values.len();
        Ok(HermitianMatrix(CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(CMat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMat::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// `x* M x`, real for Hermitian `M`.
    pub fn quadratic_form(&self, x: &CVec) -> f64 {
        x.dotc(&(&self.0 * x)).re
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.0 * x
    }

    /// `J M J` for Hermitian `J`.
    pub fn congruence(&self, j: &HermitianMatrix) -> HermitianMatrix {
        Self::symmetrized(&j.0 * &self.0 * &j.0)
    }

    pub fn scaled(&self, alpha: f64) -> HermitianMatrix {
        HermitianMatrix(&self.0 * Complex64::new(alpha, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest absolute eigenvalue, i.e. the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        eig_hermitian(self).max_abs()
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    fn check_dims(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix{}", self.0)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scaled(rhs)
    }
}

/// Hermitian matrix whose spectrum lies above the PSD floor of its tolerance.
#[derive(Clone, PartialEq)]
pub struct PsdMatrix(HermitianMatrix);

impl PsdMatrix {
    pub fn new(h: HermitianMatrix, tol: &Tolerance) -> Result<Self> {
        let eig = eig_hermitian(&h);
        let floor = tol.psd_floor(eig.scale());
        let min = eig.min();
        if min < -floor {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
                floor,
            });
        }
        Ok(PsdMatrix(h))
    }

    pub fn from_matrix(m: CMat) -> Result<Self> {
        let tol = Tolerance::default();
        Self::new(HermitianMatrix::with_tolerance(m, &tol)?, &tol)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows)?, &Tolerance::default())
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diag(values)?, &Tolerance::default())
    }

    pub fn identity(n: usize) -> Self {
        PsdMatrix(HermitianMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        PsdMatrix(HermitianMatrix::zeros(n))
    }

    /// `G* G` for any (possibly rectangular) `G`.
    pub fn gram(g: &CMat) -> Self {
        PsdMatrix(HermitianMatrix::symmetrized(g.adjoint() * g))
    }

    /// For results that are PSD by construction (congruences, sums, spectral maps).
    pub(crate) fn assume(h: HermitianMatrix) -> Self {
        PsdMatrix(h)
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn add(&self, other: &PsdMatrix) -> PsdMatrix {
        PsdMatrix(&self.0 + &other.0)
    }

    /// Non-negative multiple.
    pub fn scale_by(&self, alpha: f64) -> Result<PsdMatrix> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "PSD cone is closed under non-negative scaling only, got {alpha}"
            )));
        }
        Ok(PsdMatrix(self.0.scaled(alpha)))
    }

    pub fn congruence(&self, j: &HermitianMatrix) -> PsdMatrix {
        PsdMatrix(self.0.congruence(j))
    }
}

impl Deref for PsdMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

impl fmt::Debug for PsdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PsdMatrix{}", self.0 .0)
    }
}

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors (columns).
///
/// Each eigenvector is phase-normalized: its largest-magnitude entry (first one on
/// ties) is real and positive.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMat,
    pub source_scale: f64,
}

impl EigDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `max(1, largest |eigenvalue|)`.
    pub fn scale(&self) -> f64 {
        scale_of(self.max_abs())
    }

    pub fn column(&self, i: usize) -> CVec {
        self.vectors.column(i).into_owned()
    }

    pub fn rank_cutoff(&self, tol: &Tolerance) -> f64 {
        tol.rank_cutoff(self.max_abs())
    }

    pub fn numeric_rank(&self, tol: &Tolerance) -> usize {
        let cutoff = self.rank_cutoff(tol);
        self.eigenvalues.iter().filter(|&&l| l > cutoff).count()
    }

    /// Functional calculus `V diag(f(l)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let w = Complex64::new(f(l), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        HermitianMatrix::symmetrized(scaled * self.vectors.adjoint())
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue passes `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> HermitianMatrix {
        self.map(|l| if keep(l) { 1.0 } else { 0.0 })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation. Sweeps run in fixed
/// row-major pivot order until the off-diagonal Frobenius norm drops below
/// `eps * ||M||_F`.
pub fn eig_hermitian(m: &HermitianMatrix) -> EigDecomp {
    let n = m.dim();
    let mut a = m.0.clone();
    let mut v = CMat::identity(n, n);
    let frob = a.norm();
    let target = f64::EPSILON * frob;

    if frob > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        normalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    let source_scale = scale_of(eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs())));
    EigDecomp {
        eigenvalues,
        vectors,
        source_scale,
    }
}

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    // smaller root of t^2 + 2 t theta - 1 = 0
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q)
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Rotate `x` so its largest-magnitude entry (first on near-ties) is real positive.
pub(crate) fn normalize_phase(x: &mut CVec) {
    let max = x.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = x
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let z = x[pivot];
    let rot = z.conj() / z.norm();
    for e in x.iter_mut() {
        *e *= rot;
    }
}

pub fn is_psd(m: &HermitianMatrix, tol: &Tolerance) -> bool {
    let eig = eig_hermitian(m);
    eig.min() >= -tol.psd_floor(eig.scale())
}

/// Smallest eigenvalue, useful as a signed PSD margin.
pub fn min_eigenvalue(m: &HermitianMatrix) -> f64 {
    eig_hermitian(m).min()
}

fn checked_eig(a: &HermitianMatrix, tol: &Tolerance) -> Result<EigDecomp> {
    let eig = eig_hermitian(a);
    let floor = tol.psd_floor(eig.scale());
    if eig.min() < -floor {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
            floor,
        });
    }
    Ok(eig)
}

/// The unique PSD square root.
pub fn sqrt_psd(a: &PsdMatrix) -> Result<PsdMatrix> {
    sqrt_psd_with(a, &Tolerance::default())
}

pub fn sqrt_psd_with(a: &PsdMatrix, tol: &Tolerance) -> Result<PsdMatrix> {
    let eig = checked_eig(a, tol)?;
    Ok(PsdMatrix(eig.map(|l| l.max(0.0).sqrt())))
}

/// Moore-Penrose pseudo-inverse: eigenvalues at or below the rank cutoff are nulled.
pub fn pinv_psd(a: &PsdMatrix, tol: &Tolerance) -> PsdMatrix {
    let eig = eig_hermitian(a);
    let cutoff = eig.rank_cutoff(tol);
    PsdMatrix(eig.map(|l| if l > cutoff { 1.0 / l } else { 0.0 }))
}

/// Pseudo-inverse of the square root, `(A^{1/2})^+`.
pub fn pinv_sqrt_psd(a: &PsdMatrix, tol: &Tolerance) -> PsdMatrix {
    let eig = eig_hermitian(a);
    let cutoff = eig.rank_cutoff(tol);
    PsdMatrix(eig.map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Orthogonal projector onto the numeric range of `A`.
pub fn range_projector(a: &PsdMatrix, tol: &Tolerance) -> HermitianMatrix {
    let eig = eig_hermitian(a);
    let cutoff = eig.rank_cutoff(tol);
    eig.projector(|l| l > cutoff)
}

pub fn numeric_rank(a: &HermitianMatrix, tol: &Tolerance) -> usize {
    eig_hermitian(a).numeric_rank(tol)
}

/// Orthonormal basis (columns) of the numeric range of `A`.
pub fn range_basis(a: &PsdMatrix, tol: &Tolerance) -> CMat {
    let eig = eig_hermitian(a);
    let cutoff = eig.rank_cutoff(tol);
    let cols: Vec<CVec> = (0..eig.dim())
        .filter(|&i| eig.eigenvalues[i] > cutoff)
        .map(|i| eig.column(i))
        .collect();
    if cols.is_empty() {
        CMat::zeros(a.dim(), 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// `A <= B` in the Loewner order: `B - A` passes [`is_psd`].
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerance) -> Result<bool> {
    a.check_dims(b)?;
    Ok(is_psd(&(b - a), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Comparison {
    Leq,
    Geq,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn is_comparable(self) -> bool {
        self != Comparison::Incomparable
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Comparison::Leq => "LEQ",
            Comparison::Geq => "GEQ",
            Comparison::Equal => "EQUAL",
            Comparison::Incomparable => "INCOMPARABLE",
        };
        f.write_str(s)
    }
}

pub fn comparable(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerance) -> Result<Comparison> {
    let leq = loewner_leq(a, b, tol)?;
    let geq = loewner_leq(b, a, tol)?;
    Ok(match (leq, geq) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Leq,
        (false, true) => Comparison::Geq,
        (false, false) => Comparison::Incomparable,
    })
}

/// `e f*`, the mixed tensor `e (x) f` under the pairing `<f|x> = sum f_i conj(x_i)`.
pub fn outer(e: &CVec, f: &CVec) -> CMat {
    e * f.adjoint()
}

/// The rank-one positive operator `f (x) f`, i.e. `x -> conj(<f|x>) f`, as the matrix `f f*`.
pub fn rank_one(f: &CVec) -> Result<PsdMatrix> {
    if f.is_empty() || f.iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroVector);
    }
    Ok(PsdMatrix(HermitianMatrix::symmetrized(outer(f, f))))
}

/// The canonical factor `J = A^{1/2}` with `A = J J*` and `x*Ax = ||Jx||^2`.
pub fn factor_ja(a: &PsdMatrix) -> Result<PsdMatrix> {
    sqrt_psd(a)
}

pub fn real_vector(values: &[f64]) -> CVec {
    CVec::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)))
}

pub fn basis_vector(n: usize, i: usize) -> CVec {
    let mut e = CVec::zeros(n);
    e[i] = ONE;
    e
}
