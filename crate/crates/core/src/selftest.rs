//! Property suites over random instances, run by `loewner selftest`.
//!
//! Trial `i` uses seed `seed + i`, dimension `1 + i % 6`, and complex scalars on
//! alternate blocks of six, so twelve trials cover dims 1..6 over both fields.

use std::fmt::Display;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cli::{AndoReport, MatrixFile, Operands, Verdict, VerdictReport};
use crate::error::{Error, Result};
use crate::forms::{form_inf_exists, form_sup_exists, from_operator, to_operator, SesquilinearForm};
use crate::lattice::{
    ando_candidate, ando_witness, inf_exists, is_lower_bound, kadison_witness, reduce,
    spectral_criterion, sup_exists, witness_margins,
};
use crate::lebesgue::{
    absolutely_continuous, ac_part, mutually_singular, parallel_sum, parallel_sum_sequence,
    sample_ac_minorant,
};
use crate::psd::{
    comparable, eig_hermitian, factor_ja, loewner_leq, outer, pinv_psd, range_projector,
    sqrt_psd, CMat, Comparison, HermitianMatrix, PsdMatrix,
};
use crate::random::{self, InstanceRng};
use crate::strength::{strength, strength_by_bisection, strength_dominates};
use crate::tolerance::{scale_of, Tolerance};

pub const DEFAULT_TRIALS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestSummary {
    pub suites: Vec<SuiteSummary>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }
}

/// A failed property, with enough context to reproduce it.
#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Check = std::result::Result<(), Failure>;

fn ensure(ok: bool, msg: impl Display) -> Check {
    if ok {
        Ok(())
    } else {
        Err(Failure(msg.to_string()))
    }
}

struct Trial<'a> {
    rng: InstanceRng,
    n: usize,
    complex: bool,
    tol: &'a Tolerance,
}

impl Trial<'_> {
    fn psd(&mut self, rank: usize) -> PsdMatrix {
        random::psd(&mut self.rng, self.n, rank, self.complex)
    }

    fn any_rank(&mut self) -> usize {
        self.rng.random_range(0..=self.n)
    }

    fn positive_rank(&mut self) -> usize {
        self.rng.random_range(1..=self.n)
    }

    fn vector(&mut self) -> crate::psd::CVec {
        loop {
            let v = random::gaussian_vector(&mut self.rng, self.n, self.complex);
            if v.norm() > 1e-3 {
                return v;
            }
        }
    }

    fn leq(&self, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<bool> {
        loewner_leq(x, y, self.tol)
    }
}

type Suite = fn(&mut Trial<'_>) -> Check;

const SUITES: &[(&str, Suite)] = &[
    ("eigendecomposition", eigendecomposition),
    ("roots-and-pseudo-inverses", roots_and_pseudo_inverses),
    ("loewner-order", loewner_order),
    ("strength", strength_suite),
    ("order-by-strength", order_by_strength),
    ("lebesgue-decomposition", lebesgue_decomposition),
    ("kadison-anti-lattice", kadison_anti_lattice),
    ("ando-infimum", ando_infimum),
    ("forms", forms),
    ("report-round-trip", report_round_trip),
];

/// Runs every suite for `trials` trials each. Rejects `trials == 0`.
pub fn run(seed: u64, trials: usize, tol: &Tolerance) -> Result<SelftestSummary> {
    if trials == 0 {
        return Err(Error::precondition("trials must be at least 1"));
    }
    let suites = SUITES
        .iter()
        .map(|&(name, suite)| {
            let mut summary = SuiteSummary {
                name: name.into(),
                passed: 0,
                failed: 0,
                first_failure: None,
            };
            for i in 0..trials {
                let mut trial = Trial {
                    rng: random::rng(seed.wrapping_add(i as u64)),
                    n: 1 + i % 6,
                    complex: (i / 6) % 2 == 1,
                    tol,
                };
                match suite(&mut trial) {
                    Ok(()) => summary.passed += 1,
                    Err(Failure(msg)) => {
                        summary.failed += 1;
                        summary.first_failure.get_or_insert_with(|| {
                            format!(
                                "trial {i} (n = {}, complex = {}): {msg}",
                                trial.n, trial.complex
                            )
                        });
                    }
                }
            }
            summary
        })
        .collect();
    Ok(SelftestSummary { suites })
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn eigendecomposition(t: &mut Trial<'_>) -> Check {
    let m = random::hermitian(&mut t.rng, t.n, t.complex);
    let eig = eig_hermitian(&m);
    let scale = eig.scale();
    let v = &eig.vectors;
    let unitary_err = max_abs(&(v.adjoint() * v - CMat::identity(t.n, t.n)));
    ensure(unitary_err <= 1e-12 * t.n as f64, format!("V*V - I = {unitary_err:e}"))?;
    let err = eig.reconstruct().max_abs_diff(&m);
    ensure(err <= 1e-12 * scale * t.n as f64, format!("reconstruction error {err:e}"))?;
    ensure(
        eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]),
        "eigenvalues not ascending",
    )
}

fn roots_and_pseudo_inverses(t: &mut Trial<'_>) -> Check {
    let rank = t.any_rank();
    let a = t.psd(rank);
    let scale = scale_of(a.spectral_norm());
    let bound = 1e-10 * scale;
    let r = sqrt_psd(&a)?;
    let err = HermitianMatrix::symmetrized(r.as_matrix() * r.as_matrix()).max_abs_diff(&a);
    ensure(err <= bound, format!("R^2 - A = {err:e}"))?;
    let j = factor_ja(&a)?;
    ensure(
        (j.as_matrix() * j.as_matrix().adjoint() - a.as_matrix()).norm() <= bound * t.n as f64,
        "J J* != A",
    )?;
    let p = pinv_psd(&a, t.tol);
    let (am, pm) = (a.as_matrix(), p.as_matrix());
    ensure(max_abs(&(am * pm * am - am)) <= bound, "A A+ A != A")?;
    ensure(max_abs(&(pm * am * pm - pm)) <= 1e-10 * scale_of(p.spectral_norm()), "A+ A A+ != A+")?;
    let proj = range_projector(&a, t.tol);
    let pr = proj.as_matrix();
    ensure(max_abs(&(pr * pr - pr)) <= 1e-10, "range projector is not idempotent")?;
    ensure(max_abs(&(pr * am - am)) <= bound, "P A != A")?;
    ensure(
        eig_hermitian(&proj).numeric_rank(t.tol) == rank,
        "range projector has the wrong rank",
    )
}

fn loewner_order(t: &mut Trial<'_>) -> Check {
    let (ra, rg, rh) = (t.any_rank(), t.positive_rank(), t.any_rank());
    let a = t.psd(ra);
    let g = t.psd(rg);
    let h = t.psd(rh);
    let ag = a.add(&g);
    let agh = ag.add(&h);
    ensure(comparable(&a, &a, t.tol)? == Comparison::Equal, "A is not equal to itself")?;
    ensure(t.leq(&a, &ag)?, "A <= A + G fails")?;
    ensure(t.leq(&ag, &agh)? && t.leq(&a, &agh)?, "transitivity fails")?;
    ensure(!t.leq(&ag, &a)?, "A + G <= A with G != 0")?;
    ensure(
        comparable(&a, &ag, t.tol)? == Comparison::Leq,
        "comparison of A and A + G is not Leq",
    )
}

fn strength_suite(t: &mut Trial<'_>) -> Check {
    let rank = t.any_rank();
    let a = t.psd(rank);
    let b = t.psd(t.n);
    let g = t.vector();
    let f = if t.rng.random_bool(0.5) && rank > 0 {
        a.apply(&g)
    } else {
        g
    };
    if f.norm() == 0.0 {
        return Ok(());
    }
    let r = strength(&a, &f, t.tol)?;
    let lam = r.lambda;
    let bisect = strength_by_bisection(&a, &f, t.tol)?;
    ensure(
        (lam - bisect).abs() <= 1e-6 * (1.0 + lam),
        format!("closed form {lam} vs bisection {bisect}"),
    )?;
    let ff = HermitianMatrix::symmetrized(outer(&f, &f));
    ensure(t.leq(&ff.scaled(lam), &a)?, "lambda f f* <= A fails")?;
    if let Some(m) = r.m_f {
        ensure((lam * m - 1.0).abs() <= 1e-8, format!("lambda * m_f = {}", lam * m))?;
    }
    let scale = scale_of(a.spectral_norm().max(b.spectral_norm())) / f.norm_squared();
    let two_a = strength(&a.scale_by(2.0)?, &f, t.tol)?.lambda;
    ensure((two_a - 2.0 * lam).abs() <= 1e-12 * scale, "homogeneity in A")?;
    let lb = strength(&b, &f, t.tol)?.lambda;
    let sum = strength(&a.add(&b), &f, t.tol)?.lambda;
    ensure(
        sum >= lam + lb - 1e-8 * scale,
        format!("superadditivity: {sum} < {lam} + {lb}"),
    )
}

fn order_by_strength(t: &mut Trial<'_>) -> Check {
    let (ra, rb) = (t.any_rank(), t.any_rank());
    let a = t.psd(ra);
    let b = t.psd(rb);
    let seed = t.rng.random();
    let leq = t.leq(&a, &b)?;
    ensure(
        strength_dominates(&a, &b, t.tol, 16, seed)? == leq,
        "strength dominance disagrees with A <= B",
    )?;
    let above = a.add(&b);
    ensure(
        strength_dominates(&a, &above, t.tol, 16, seed)?,
        "strength of A exceeds strength of A + B",
    )
}

fn lebesgue_decomposition(t: &mut Trial<'_>) -> Check {
    let (ra, rb) = (t.any_rank(), t.any_rank());
    let a = t.psd(ra);
    let b = t.psd(rb);
    let scale = scale_of(a.spectral_norm().max(b.spectral_norm()));
    let parts = ac_part(&b, &a, t.tol)?;
    let err = parts.reconstruction_error(&b);
    ensure(err <= 1e-9 * scale, format!("ac + sing - B = {err:e}"))?;
    ensure(absolutely_continuous(&parts.ac, &a, t.tol)?, "[A]B is not << A")?;
    ensure(mutually_singular(&parts.sing, &a, t.tol)?, "B - [A]B is not singular to A")?;
    let again = ac_part(&parts.ac, &a, t.tol)?.ac;
    ensure(again.max_abs_diff(&parts.ac) <= 1e-9 * scale, "[A][A]B != [A]B")?;
    let half = a.scale_by(0.5)?;
    ensure(absolutely_continuous(&half, &a, t.tol)?, "A/2 <= A but not A/2 << A")?;

    // (2^k A) : B has condition number near 2^k, so monotonicity is only checked
    // where the computed sums are accurate to the PSD floor.
    let seq = parallel_sum_sequence(&a, &b, &[0, 4, 8], t.tol)?;
    for w in seq.windows(2) {
        ensure(t.leq(&w[0], &w[1])?, "parallel sums are not increasing")?;
    }
    ensure(t.leq(&seq[2], &parts.ac)?, "(2^8 A) : B exceeds [A]B")?;
    let limit = parallel_sum(&a.scale_by(2f64.powi(30))?, &b)?;
    let gap = limit.max_abs_diff(&parts.ac);
    ensure(gap <= 1e-6 * scale, format!("(2^30 A) : B vs [A]B = {gap:e}"))?;

    let rank = t.any_rank();
    let w = t.psd(rank);
    let c = sample_ac_minorant(&b, &a, &w, t.tol)?;
    ensure(t.leq(&c, &parts.ac)?, "an A-continuous minorant of B exceeds [A]B")?;
    let ab = parallel_sum(&a, &b)?;
    ensure(t.leq(&ab, &a)? && t.leq(&ab, &b)?, "A : B is not a lower bound")
}

fn incomparable_pair(t: &mut Trial<'_>) -> Result<Option<(PsdMatrix, PsdMatrix)>> {
    for _ in 0..16 {
        let (ra, rb) = (t.positive_rank(), t.positive_rank());
        let a = t.psd(ra);
        let b = t.psd(rb);
        if comparable(&a, &b, t.tol)? == Comparison::Incomparable {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

fn kadison_anti_lattice(t: &mut Trial<'_>) -> Check {
    if t.n == 1 {
        let a = t.psd(1);
        let b = t.psd(1);
        ensure(sup_exists(&a, &b, t.tol)?.exists, "1x1 pair without supremum")?;
        let top = a.add(&b).add(&PsdMatrix::identity(1));
        return ensure(
            kadison_witness(&a, &b, &top, t.tol).is_err_and(|e| e.is_precondition()),
            "dimension 1 witness was not rejected",
        );
    }
    let Some((a, b)) = incomparable_pair(t)? else {
        return Err(Failure("no incomparable pair in 16 draws".into()));
    };
    ensure(!sup_exists(&a, &b, t.tol)?.exists, "incomparable pair has a supremum")?;
    let id = PsdMatrix::identity(t.n);
    for top in [a.add(&b), a.add(&b).add(&id)] {
        let w = kadison_witness(&a, &b, &top, t.tol)?;
        ensure(t.leq(&a, &w.s)? && t.leq(&b, &w.s)?, "S is not an upper bound")?;
        ensure(
            comparable(&w.s, &top, t.tol)? == Comparison::Incomparable,
            "S is comparable with T",
        )?;
    }
    Ok(())
}

fn ando_pair(t: &mut Trial<'_>) -> Result<(PsdMatrix, PsdMatrix)> {
    Ok(match t.rng.random_range(0..4) {
        0 => {
            let rank = t.any_rank();
            let a = t.psd(rank);
            let c = t.rng.random_range(0.5..2.0);
            let b = a.scale_by(c)?;
            (a, b)
        }
        1 => {
            let r = t.rng.random_range(0..=t.n);
            let q = random::unitary(&mut t.rng, t.n, t.complex);
            let p = random::projector_onto(&q.columns(0, r.max(1)).into_owned());
            let rest = PsdMatrix::new(&HermitianMatrix::identity(t.n) - p.as_hermitian(), t.tol)?;
            (p, rest)
        }
        _ => {
            let (ra, rb) = (t.any_rank(), t.any_rank());
            (t.psd(ra), t.psd(rb))
        }
    })
}

fn ando_infimum(t: &mut Trial<'_>) -> Check {
    let (a, b) = ando_pair(t)?;
    let scale = scale_of(a.spectral_norm().max(b.spectral_norm()));
    let v = inf_exists(&a, &b, t.tol)?;
    let (ra, rb) = reduce(&a, &b, t.tol)?;
    let spectral = spectral_criterion(&ra, &rb, t.tol)?;
    let witness = ando_witness(&a, &b, t.tol);
    ensure(v.exists == spectral, "parts test and spectral criterion disagree")?;
    ensure(v.exists == witness.is_err(), "witness existence disagrees with the verdict")?;
    let cand = ando_candidate(&a, &b, t.tol)?;
    ensure(is_lower_bound(&cand, &a, &b, t.tol)?, "candidate is not a lower bound")?;
    let ab = parallel_sum(&a, &b)?;
    match (v.inf, witness) {
        (Some(inf), _) => {
            ensure(inf.max_abs_diff(&cand) <= 1e-8 * scale, "inf != candidate")?;
            ensure(t.leq(&ab, &inf)?, "A : B exceeds the infimum")
        }
        (None, Ok(w)) => {
            let m = witness_margins(&a, &b, &cand, &w.d);
            let floor = t.tol.psd_floor(scale);
            ensure(m.d_min >= -floor, format!("min eig D = {:e}", m.d_min))?;
            ensure(m.a_minus_d_min >= -floor, "D <= A fails")?;
            ensure(m.b_minus_d_min >= -floor, "D <= B fails")?;
            ensure(
                m.candidate_gap.0 < -floor && m.candidate_gap.1 < -floor,
                format!("D comparable with candidate: gaps {:?}", m.candidate_gap),
            )
        }
        (None, Err(e)) => Err(e.into()),
    }
}

fn forms(t: &mut Trial<'_>) -> Check {
    let (ra, rb) = (t.any_rank(), t.any_rank());
    let ga = random::gaussian_matrix(&mut t.rng, ra, t.n, t.complex);
    let gb = random::gaussian_matrix(&mut t.rng, rb, t.n, t.complex);
    let a = PsdMatrix::gram(&ga);
    let b = PsdMatrix::gram(&gb);
    let (fa, fb) = (from_operator(&a), SesquilinearForm::new(b.clone(), "s"));
    ensure(to_operator(&fa) == a, "form/operator round trip")?;
    ensure(fa.leq(&fb, t.tol)? == t.leq(&a, &b)?, "order differs between forms and operators")?;
    ensure(
        form_sup_exists(&fa, &fb, t.tol)? == sup_exists(&a, &b, t.tol)?.exists,
        "supremum verdicts differ",
    )?;
    ensure(
        form_inf_exists(&fa, &fb, t.tol)? == inf_exists(&a, &b, t.tol)?.exists,
        "infimum verdicts differ",
    )
}

fn report_round_trip(t: &mut Trial<'_>) -> Check {
    let (a, b) = ando_pair(t)?;
    let v = inf_exists(&a, &b, t.tol)?;
    let witness = v.witness.as_ref().map(|w| {
        let m = witness_margins(&a, &b, &v.candidate, &w.d);
        AndoReport::new(w, &v.candidate, &m)
    });
    let report = VerdictReport {
        verdict: Verdict::Inf {
            exists: v.exists,
            inf: v.inf.as_ref().map(|m| MatrixFile::from_hermitian(m)),
            candidate: MatrixFile::from_hermitian(&v.candidate),
            reduced: [
                MatrixFile::from_hermitian(&v.reduced.0),
                MatrixFile::from_hermitian(&v.reduced.1),
            ],
            parts_comparison: v.parts_comparison,
            witness,
        },
        inputs: Default::default(),
        tolerance: *t.tol,
        seed: None,
    };
    let back = VerdictReport::from_json(&report.to_json()).map_err(|e| Failure(e.to_string()))?;
    ensure(back == report, "report changed in a JSON round trip")?;
    let ops = Operands {
        a: Some(a.into_hermitian()),
        b: Some(b.into_hermitian()),
        ..Default::default()
    };
    back.verify(&ops).map_err(|e| Failure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let summary = run(0, 12, &Tolerance::default()).unwrap();
        for s in &summary.suites {
            assert_eq!(s.failed, 0, "{}: {:?}", s.name, s.first_failure);
        }
    }

    #[test]
    fn other_seed_passes() {
        assert!(run(977, 12, &Tolerance::default()).unwrap().passed());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run(0, 0, &Tolerance::default()).unwrap_err().is_precondition());
    }
}
