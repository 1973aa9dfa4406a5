//! Suprema and infima in the cone of PSD matrices.
//!
//! * The supremum of `A` and `B` exists only when they are comparable. For any
//!   proposed upper bound `T` strictly above both, [`kadison_witness`] builds another
//!   upper bound `S` that is not comparable with `T`.
//! * The infimum exists iff the absolutely continuous parts `[A]B` and `[B]A` are
//!   comparable, and is then the smaller of the two. Working on `H = ran(A+B)` with
//!   the contractions `Ã = S^{+1/2} A S^{+1/2}`, `B̃ = S^{+1/2} B S^{+1/2}`
//!   (`S = A + B`, `Ã + B̃ = I` on `H`), the candidate is `J min(Ã, I - Ã) J` with
//!   `J = S^{1/2}`, and existence reduces to the spectrum of `Ã` lying on one side
//!   of `1/2`. When it straddles, [`ando_witness`] builds a lower bound that is not
//!   comparable with the candidate.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::lebesgue::{absolutely_continuous, ac_part};
use crate::psd::{
    basis_vector, comparable, eig_hermitian, loewner_leq, normalize_phase, numeric_rank, outer,
    pinv_sqrt_psd, range_basis, range_projector, sqrt_psd_with, CMat, CVec, Comparison,
    HermitianMatrix, PsdMatrix,
};
use crate::strength::strength;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct SupremumVerdict {
    pub exists: bool,
    pub comparison: Comparison,
    pub sup: Option<PsdMatrix>,
    /// Upper bound of both that is not comparable with the supplied candidate.
    pub witness: Option<KadisonWitness>,
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

pub fn sup_exists(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<SupremumVerdict> {
    let comparison = comparable(a, b, tol)?;
    let sup = match comparison {
        Comparison::Leq | Comparison::Equal => Some(b.clone()),
        Comparison::Geq => Some(a.clone()),
        Comparison::Incomparable => None,
    };
    Ok(SupremumVerdict {
        exists: sup.is_some(),
        comparison,
        sup,
        witness: None,
    })
}

/// [`sup_exists`] that additionally refutes the candidate upper bound `t` when no
/// supremum exists.
pub fn sup_exists_against(
    a: &PsdMatrix,
    b: &PsdMatrix,
    t: &PsdMatrix,
    tol: &Tolerance,
) -> Result<SupremumVerdict> {
    let mut verdict = sup_exists(a, b, tol)?;
    if !verdict.exists {
        verdict.witness = Some(kadison_witness(a, b, t, tol)?);
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq)]
pub enum KadisonCase {
    /// `ran(T-A) ∩ ran(T-B)` contains the unit vector `e`; `S = T - λ e e* + f f*`.
    SharedRange { e: CVec, f: CVec, lambda: f64 },
    /// Ranges meet only in 0; `S = T + S₀/3` with `S₀ = ee* + 2ef* + 2fe* + ff*`.
    DisjointRanges { e: CVec, f: CVec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KadisonWitness {
    pub s: PsdMatrix,
    pub case: KadisonCase,
}

/// An upper bound of `a` and `b` that is not comparable with the upper bound `t`.
pub fn kadison_witness(
    a: &PsdMatrix,
    b: &PsdMatrix,
    t: &PsdMatrix,
    tol: &Tolerance,
) -> Result<KadisonWitness> {
    same_dim(a, b)?;
    same_dim(a, t)?;
    let n = a.dim();
    if n == 1 {
        return Err(Error::precondition(
            "dimension 1: every pair is comparable, no ray outside span(e) exists",
        ));
    }
    let ta = t.as_hermitian() - a.as_hermitian();
    let tb = t.as_hermitian() - b.as_hermitian();
    let ta = PsdMatrix::new(ta, tol)
        .map_err(|_| Error::precondition("T >= A fails"))?;
    let tb = PsdMatrix::new(tb, tol)
        .map_err(|_| Error::precondition("T >= B fails"))?;
    let eig_ta = eig_hermitian(&ta);
    let eig_tb = eig_hermitian(&tb);
    if eig_ta.numeric_rank(tol) == 0 {
        return Err(Error::precondition("T = A: T must differ from A"));
    }
    if eig_tb.numeric_rank(tol) == 0 {
        return Err(Error::precondition("T = B: T must differ from B"));
    }

    let pa = range_projector(&ta, tol);
    let pb = range_projector(&tb, tol);
    let sum = &pa + &pb;
    let eig_sum = eig_hermitian(&sum);
    let shared = numeric_rank(&pa, tol) + numeric_rank(&pb, tol) > eig_sum.numeric_rank(tol);

    if shared {
        // the top eigenvector of P_A + P_B (eigenvalue 2) lies in both ranges
        let e = eig_sum.column(n - 1);
        let lambda = strength(&ta, &e, tol)?
            .lambda
            .min(strength(&tb, &e, tol)?.lambda);
        if lambda <= 0.0 {
            return Err(Error::Inconsistent(
                "shared range vector has zero strength".into(),
            ));
        }
        let f = orthogonal_unit(&e);
        let s = t.as_matrix() - outer(&e, &e) * Complex64::new(lambda, 0.0) + outer(&f, &f);
        Ok(KadisonWitness {
            s: PsdMatrix::assume(HermitianMatrix::symmetrized(s)),
            case: KadisonCase::SharedRange { e, f, lambda },
        })
    } else {
        let e = scaled_top_vector(&ta, tol)?;
        let f = scaled_top_vector(&tb, tol)?;
        let s0 = s_zero(&e, &f);
        let s = t.as_matrix() + s0 * Complex64::new(1.0 / 3.0, 0.0);
        Ok(KadisonWitness {
            s: PsdMatrix::assume(HermitianMatrix::symmetrized(s)),
            case: KadisonCase::DisjointRanges { e, f },
        })
    }
}

/// `S₀ = e⊗e + 2 e⊗f + 2 f⊗e + f⊗f` with `e⊗f` read as `e f*`.
pub fn s_zero(e: &CVec, f: &CVec) -> CMat {
    let two = Complex64::new(2.0, 0.0);
    outer(e, e) + outer(e, f) * two + outer(f, e) * two + outer(f, f)
}

/// Top eigenvector `u` of `m`, scaled by `sqrt(strength(m, u))` so that `e e* <= m`.
fn scaled_top_vector(m: &PsdMatrix, tol: &Tolerance) -> Result<CVec> {
    let eig = eig_hermitian(m);
    let u = eig.column(eig.dim() - 1);
    let lambda = strength(m, &u, tol)?.lambda;
    Ok(u * Complex64::new(lambda.sqrt(), 0.0))
}

/// Standard basis vector least aligned with `e`, orthogonalized against `e` and normalized.
fn orthogonal_unit(e: &CVec) -> CVec {
    let n = e.len();
    let unit_e = e / Complex64::new(e.norm(), 0.0);
    let k = (0..n)
        .min_by(|&i, &j| unit_e[i].norm().total_cmp(&unit_e[j].norm()).then(i.cmp(&j)))
        .unwrap_or(0);
    let basis = basis_vector(n, k);
    let proj = unit_e.dotc(&basis);
    let mut f = basis - &unit_e * proj;
    f /= Complex64::new(f.norm(), 0.0);
    normalize_phase(&mut f);
    f
}

/// The pair `(A, B)` transported to `H = ran(A+B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    pub a_tilde: PsdMatrix,
    pub b_tilde: PsdMatrix,
    /// `J = (A+B)^{1/2}`, with `A = J Ã J` and `B = J B̃ J`.
    pub j: PsdMatrix,
    /// Projector onto `ran(A+B)`, the identity of `H`.
    pub range_proj: HermitianMatrix,
    /// Orthonormal basis of `ran(A+B)` (columns).
    pub range_basis: CMat,
}

/// Spectrum of `Ã` restricted to `ran(A+B)`, eigenvectors embedded in the ambient space.
#[derive(Debug, Clone)]
pub struct RestrictedSpectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<CVec>,
}

pub fn compress(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<Compression> {
    same_dim(a, b)?;
    let s = a.add(b);
    let s_inv_half = pinv_sqrt_psd(&s, tol);
    let a_tilde = a.congruence(&s_inv_half);
    let b_tilde = b.congruence(&s_inv_half);
    let j = sqrt_psd_with(&s, tol)?;
    Ok(Compression {
        a_tilde,
        b_tilde,
        j,
        range_proj: range_projector(&s, tol),
        range_basis: range_basis(&s, tol),
    })
}

impl Compression {
    pub fn rank(&self) -> usize {
        self.range_basis.ncols()
    }

    pub fn restricted_spectrum(&self) -> RestrictedSpectrum {
        let q = &self.range_basis;
        if q.ncols() == 0 {
            return RestrictedSpectrum {
                eigenvalues: Vec::new(),
                vectors: Vec::new(),
            };
        }
        let inner = HermitianMatrix::symmetrized(q.adjoint() * self.a_tilde.as_matrix() * q);
        let eig = eig_hermitian(&inner);
        let vectors = (0..eig.dim())
            .map(|i| {
                let mut v = q * eig.column(i);
                normalize_phase(&mut v);
                v
            })
            .collect();
        RestrictedSpectrum {
            eigenvalues: eig.eigenvalues,
            vectors,
        }
    }

    /// `J X J`, mapping an operator on `H` back to the original space.
    pub fn lift(&self, x: &HermitianMatrix) -> HermitianMatrix {
        x.congruence(&self.j)
    }
}

/// `J min(Ã, I - Ã) J`, always a lower bound of both `A` and `B`.
pub fn ando_candidate(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<PsdMatrix> {
    let c = compress(a, b, tol)?;
    Ok(candidate_from(&c))
}

fn candidate_from(c: &Compression) -> PsdMatrix {
    let g = eig_hermitian(&c.a_tilde).map(|t| t.min(1.0 - t).max(0.0));
    PsdMatrix::assume(c.lift(&g))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfimumVerdict {
    pub exists: bool,
    pub inf: Option<PsdMatrix>,
    /// `J min(Ã, I - Ã) J`; equals the infimum whenever it exists.
    pub candidate: PsdMatrix,
    /// Lower bound not comparable with the candidate; present iff the infimum does not exist.
    pub witness: Option<AndoWitness>,
    /// `[B]A` and `[A]B`.
    pub reduced: (PsdMatrix, PsdMatrix),
    pub parts_comparison: Comparison,
}

pub fn inf_exists(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<InfimumVerdict> {
    same_dim(a, b)?;
    let (ra, rb) = reduce(a, b, tol)?;
    let parts_comparison = comparable(&ra, &rb, tol)?;
    let candidate = ando_candidate(a, b, tol)?;
    let (inf, witness) = match parts_comparison {
        Comparison::Leq | Comparison::Equal => (Some(ra.clone()), None),
        Comparison::Geq => (Some(rb.clone()), None),
        Comparison::Incomparable => (None, Some(witness_on_reduced(&ra, &rb, tol)?)),
    };
    Ok(InfimumVerdict {
        exists: inf.is_some(),
        inf,
        candidate,
        witness,
        reduced: (ra, rb),
        parts_comparison,
    })
}

/// `([B]A, [A]B)`, a mutually absolutely continuous pair with the same infimum question.
pub fn reduce(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<(PsdMatrix, PsdMatrix)> {
    Ok((ac_part(a, b, tol)?.ac, ac_part(b, a, tol)?.ac))
}

/// Mutual absolute continuity `A << B` and `B << A`.
pub fn mutually_ac(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(absolutely_continuous(a, b, tol)? && absolutely_continuous(b, a, tol)?)
}

/// For a mutually absolutely continuous pair: the spectrum of `Ã` on `ran(A+B)`
/// lies in `[0, 1/2]` or in `[1/2, 1]` (within `rel`).
pub fn spectral_criterion(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<bool> {
    same_dim(a, b)?;
    if !mutually_ac(a, b, tol)? {
        return Err(Error::precondition(
            "A and B are not mutually absolutely continuous",
        ));
    }
    let spectrum = compress(a, b, tol)?.restricted_spectrum();
    let below = spectrum.eigenvalues.iter().all(|&t| t <= 0.5 + tol.rel);
    let above = spectrum.eigenvalues.iter().all(|&t| t >= 0.5 - tol.rel);
    Ok(below || above)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AndoWitness {
    /// `J D̃ J`: `0 <= D <= A, B`, not comparable with the candidate.
    pub d: PsdMatrix,
    /// `D̃` on `H`.
    pub d_tilde: HermitianMatrix,
    pub epsilon: f64,
    /// Ranks of the spectral windows `E([1/2+3ε, 1-3ε])` and `E([3ε, 1/2-3ε])`.
    pub window_ranks: (usize, usize),
}

/// Lower bound of `a` and `b` that is not comparable with [`ando_candidate`].
///
/// Rejects pairs whose infimum exists.
pub fn ando_witness(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<AndoWitness> {
    same_dim(a, b)?;
    let (ra, rb) = reduce(a, b, tol)?;
    witness_on_reduced(&ra, &rb, tol)
}

/// Slack for membership of an eigenvalue in a closed spectral window.
const WINDOW_SLACK: f64 = 1e-12;

fn witness_on_reduced(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerance) -> Result<AndoWitness> {
    let c = compress(a, b, tol)?;
    let spectrum = c.restricted_spectrum();
    let half = 0.5;

    // largest ε with both windows non-empty
    let upper = spectrum
        .eigenvalues
        .iter()
        .filter(|&&t| t > half + tol.rel && t < 1.0)
        .map(|&t| (t - half).min(1.0 - t) / 3.0)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |m| m.max(x))));
    let lower = spectrum
        .eigenvalues
        .iter()
        .filter(|&&t| t < half - tol.rel && t > 0.0)
        .map(|&t| t.min(half - t) / 3.0)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |m| m.max(x))));
    let eps = match (upper, lower) {
        (Some(u), Some(l)) => u.min(l),
        _ => {
            return Err(Error::precondition(
                "spectrum of the compression lies on one side of 1/2: the infimum exists",
            ))
        }
    };

    let in_window = |t: f64, lo: f64, hi: f64| t >= lo - WINDOW_SLACK && t <= hi + WINDOW_SLACK;
    let upper_window: Vec<usize> = (0..spectrum.eigenvalues.len())
        .filter(|&i| in_window(spectrum.eigenvalues[i], half + 3.0 * eps, 1.0 - 3.0 * eps))
        .collect();
    let lower_window: Vec<usize> = (0..spectrum.eigenvalues.len())
        .filter(|&i| in_window(spectrum.eigenvalues[i], 3.0 * eps, half - 3.0 * eps))
        .collect();

    let n = a.dim();
    let mut d_tilde = CMat::zeros(n, n);
    // (Ã - ε) on the lower window, (B̃ - ε) = (1 - Ã - ε) on the upper window
    for &i in &lower_window {
        let v = &spectrum.vectors[i];
        d_tilde += outer(v, v) * Complex64::new(spectrum.eigenvalues[i] - eps, 0.0);
    }
    for &i in &upper_window {
        let v = &spectrum.vectors[i];
        d_tilde += outer(v, v) * Complex64::new(1.0 - spectrum.eigenvalues[i] - eps, 0.0);
    }
    // partial isometry pairing eigenvectors of the smaller window into the larger one
    let coupling = Complex64::new(SQRT_2 * eps, 0.0);
    for (&i, &k) in lower_window.iter().zip(&upper_window) {
        let low = &spectrum.vectors[i];
        let up = &spectrum.vectors[k];
        d_tilde += (outer(up, low) + outer(low, up)) * coupling;
    }
    let d_tilde = HermitianMatrix::symmetrized(d_tilde);
    let d = PsdMatrix::assume(c.lift(&d_tilde));
    Ok(AndoWitness {
        d,
        d_tilde,
        epsilon: eps,
        window_ranks: (upper_window.len(), lower_window.len()),
    })
}

/// Checks of the four witness contracts, as signed eigenvalue margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessMargins {
    /// `min eig(D)`.
    pub d_min: f64,
    /// `min eig(A - D)`.
    pub a_minus_d_min: f64,
    /// `min eig(B - D)`.
    pub b_minus_d_min: f64,
    /// `min eig(candidate - D)` and `min eig(D - candidate)`; both negative when incomparable.
    pub candidate_gap: (f64, f64),
}

pub fn witness_margins(a: &PsdMatrix, b: &PsdMatrix, candidate: &PsdMatrix, d: &PsdMatrix) -> WitnessMargins {
    let min = |m: HermitianMatrix| eig_hermitian(&m).min();
    WitnessMargins {
        d_min: min(d.as_hermitian().clone()),
        a_minus_d_min: min(a.as_hermitian() - d.as_hermitian()),
        b_minus_d_min: min(b.as_hermitian() - d.as_hermitian()),
        candidate_gap: (
            min(candidate.as_hermitian() - d.as_hermitian()),
            min(d.as_hermitian() - candidate.as_hermitian()),
        ),
    }
}

/// True when `c <= a` and `c <= b`.
pub fn is_lower_bound(c: &HermitianMatrix, a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(loewner_leq(c, a, tol)? && loewner_leq(c, b, tol)?)
}
