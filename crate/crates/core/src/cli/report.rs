//! Verdict reports and their re-verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{AndoWitness, KadisonCase, KadisonWitness, WitnessMargins};
use crate::lebesgue::{absolutely_continuous, mutually_singular};
use crate::psd::{
    comparable, eig_hermitian, loewner_leq, outer, sqrt_psd, CVec, Comparison, HermitianMatrix,
    PsdMatrix,
};
use crate::selftest::SuiteSummary;
use crate::strength::strength;
use crate::tolerance::{scale_of, Tolerance};

use super::files::{MatrixFile, VectorFile};
use super::CliError;

/// One JSON document per command run.
///
/// `inputs` maps operand names (`a`, `b`, `t`, `f`) to the SHA-256 of the file bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub inputs: BTreeMap<String, String>,
    pub tolerance: Tolerance,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Verdict {
    Strength {
        lambda: f64,
        xi: Option<VectorFile>,
        m_f: Option<f64>,
    },
    Leq {
        leq: bool,
        comparison: Comparison,
        /// Ray with `strength(A, f) > strength(B, f)` when `A <= B` fails.
        witness: Option<VectorFile>,
        strength_a: Option<f64>,
        strength_b: Option<f64>,
        dominance_samples: usize,
    },
    Sup {
        exists: bool,
        comparison: Comparison,
        sup: Option<MatrixFile>,
        witness: Option<KadisonReport>,
    },
    Inf {
        exists: bool,
        inf: Option<MatrixFile>,
        candidate: MatrixFile,
        reduced: [MatrixFile; 2],
        parts_comparison: Comparison,
        witness: Option<AndoReport>,
    },
    Lebesgue {
        absolutely_continuous: bool,
        mutually_singular: bool,
        ac: MatrixFile,
        sing: MatrixFile,
    },
    Parsum {
        result: MatrixFile,
    },
    KadisonWitness(KadisonReport),
    AndoWitness(AndoReport),
    Compress {
        rank: usize,
        mutually_ac: bool,
        spectrum: Vec<f64>,
        a_tilde: MatrixFile,
        b_tilde: MatrixFile,
        j: MatrixFile,
        candidate: MatrixFile,
    },
    Selftest {
        trials: usize,
        passed: bool,
        suites: Vec<SuiteSummary>,
    },
}

impl Verdict {
    pub fn command(&self) -> &'static str {
        match self {
            Verdict::Strength { .. } => "strength",
            Verdict::Leq { .. } => "leq",
            Verdict::Sup { .. } => "sup",
            Verdict::Inf { .. } => "inf",
            Verdict::Lebesgue { .. } => "lebesgue",
            Verdict::Parsum { .. } => "parsum",
            Verdict::KadisonWitness(_) => "kadison-witness",
            Verdict::AndoWitness(_) => "ando-witness",
            Verdict::Compress { .. } => "compress",
            Verdict::Selftest { .. } => "selftest",
        }
    }
}

/// Upper bound `s` of `A` and `B` that is not comparable with the upper bound `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KadisonReport {
    pub s: MatrixFile,
    pub t: MatrixFile,
    pub case: String,
    pub e: VectorFile,
    pub f: VectorFile,
    pub lambda: Option<f64>,
}

impl KadisonReport {
    pub fn new(w: &KadisonWitness, t: &PsdMatrix) -> Self {
        let (case, e, f, lambda) = match &w.case {
            KadisonCase::SharedRange { e, f, lambda } => ("shared-range", e, f, Some(*lambda)),
            KadisonCase::DisjointRanges { e, f } => ("disjoint-ranges", e, f, None),
        };
        KadisonReport {
            s: MatrixFile::from_hermitian(&w.s),
            t: MatrixFile::from_hermitian(t),
            case: case.into(),
            e: VectorFile::from_vector(e),
            f: VectorFile::from_vector(f),
            lambda,
        }
    }
}

/// Lower bound `d` of `A` and `B` that is not comparable with `candidate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AndoReport {
    pub d: MatrixFile,
    pub candidate: MatrixFile,
    pub epsilon: f64,
    /// Ranks of the eigenvalue windows above and below 1/2.
    pub window_ranks: [usize; 2],
    pub margins: MarginsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginsReport {
    pub d_min: f64,
    pub a_minus_d_min: f64,
    pub b_minus_d_min: f64,
    pub candidate_gap: [f64; 2],
}

impl AndoReport {
    pub fn new(w: &AndoWitness, candidate: &PsdMatrix, margins: &WitnessMargins) -> Self {
        AndoReport {
            d: MatrixFile::from_hermitian(&w.d),
            candidate: MatrixFile::from_hermitian(candidate),
            epsilon: w.epsilon,
            window_ranks: [w.window_ranks.0, w.window_ranks.1],
            margins: MarginsReport {
                d_min: margins.d_min,
                a_minus_d_min: margins.a_minus_d_min,
                b_minus_d_min: margins.b_minus_d_min,
                candidate_gap: [margins.candidate_gap.0, margins.candidate_gap.1],
            },
        }
    }
}

/// The operands a report was computed from, needed to re-check its claims.
#[derive(Debug, Clone, Default)]
pub struct Operands {
    pub a: Option<HermitianMatrix>,
    pub b: Option<HermitianMatrix>,
    pub t: Option<HermitianMatrix>,
    pub f: Option<CVec>,
}

struct Checker<'a> {
    tol: &'a Tolerance,
    failures: Vec<String>,
}

impl Checker<'_> {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn psd(&mut self, m: &HermitianMatrix, what: &str) {
        let eig = eig_hermitian(m);
        let ok = eig.min() >= -self.tol.psd_floor(eig.scale());
        self.check(ok, format!("{what} is not PSD (min eigenvalue {:e})", eig.min()));
    }

    fn leq(&mut self, x: &HermitianMatrix, y: &HermitianMatrix, what: &str) {
        let ok = loewner_leq(x, y, self.tol).unwrap_or(false);
        self.check(ok, format!("{what} fails"));
    }

    fn incomparable(&mut self, x: &HermitianMatrix, y: &HermitianMatrix, what: &str) {
        let ok = matches!(comparable(x, y, self.tol), Ok(Comparison::Incomparable));
        self.check(ok, format!("{what} are comparable"));
    }

    fn close(&mut self, x: &HermitianMatrix, y: &HermitianMatrix, what: &str) {
        let scale = scale_of(x.spectral_norm().max(y.spectral_norm()));
        let diff = x.max_abs_diff(y);
        let ok = diff <= self.tol.rel * scale + self.tol.abs;
        self.check(ok, format!("{what}: max difference {diff:e}"));
    }

    fn approx(&mut self, x: f64, y: f64, what: &str) {
        let ok = (x - y).abs() <= self.tol.rel * scale_of(x.abs().max(y.abs())) + self.tol.abs;
        self.check(ok, format!("{what}: {x} vs {y}"));
    }
}

fn need<'a, T>(x: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    x.as_ref()
        .ok_or_else(|| CliError::Verification(vec![format!("operand {name} is required")]))
}

fn matrix(m: &MatrixFile, tol: &Tolerance) -> Result<HermitianMatrix, CliError> {
    m.to_hermitian(tol)
}

impl VerdictReport {
    /// Re-checks every claim and embedded witness against `ops` under the report's
    /// own tolerance. All failures are collected into [`CliError::Verification`].
    pub fn verify(&self, ops: &Operands) -> Result<(), CliError> {
        let tol = &self.tolerance;
        let mut c = Checker {
            tol,
            failures: Vec::new(),
        };
        match &self.verdict {
            Verdict::Strength { lambda, xi, m_f } => {
                let a = need(&ops.a, "a")?;
                let f = need(&ops.f, "f")?;
                let ff = HermitianMatrix::symmetrized(outer(f, f));
                c.leq(&ff.scaled(*lambda), a, "lambda f f* <= A");
                if let (Some(xi), Some(m_f)) = (xi, m_f) {
                    let xi = xi.to_vector()?;
                    let root = sqrt_psd(&PsdMatrix::new(a.clone(), tol)?)?;
                    let residual = (root.apply(&xi) - f).norm();
                    c.check(
                        residual <= tol.rel * scale_of(f.norm()) * 10.0,
                        format!("A^(1/2) xi = f: residual {residual:e}"),
                    );
                    c.approx(xi.norm_squared(), *m_f, "|xi|^2 = m_f");
                    c.approx(lambda * m_f, 1.0, "lambda m_f = 1");
                } else {
                    c.check(*lambda == 0.0, "missing certificate for positive lambda");
                }
            }
            Verdict::Leq {
                leq,
                witness,
                strength_a,
                strength_b,
                ..
            } => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                if *leq {
                    c.psd(&(b - a), "B - A");
                }
                if let Some(w) = witness {
                    let f = w.to_vector()?;
                    let la = strength(&PsdMatrix::new(a.clone(), tol)?, &f, tol)?.lambda;
                    let lb = strength(&PsdMatrix::new(b.clone(), tol)?, &f, tol)?.lambda;
                    c.check(la > lb, format!("witness ray: strength(A) {la} <= strength(B) {lb}"));
                    c.check(
                        *strength_a == Some(la) && *strength_b == Some(lb),
                        "reported strengths differ from recomputed ones",
                    );
                }
                c.check(*leq != witness.is_some(), "leq verdict and witness disagree");
            }
            Verdict::Sup {
                exists,
                sup,
                witness,
                ..
            } => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                c.check(*exists == sup.is_some(), "exists flag and sup disagree");
                if let Some(s) = sup {
                    let s = matrix(s, tol)?;
                    c.leq(a, &s, "A <= sup");
                    c.leq(b, &s, "B <= sup");
                }
                if let Some(w) = witness {
                    self.verify_kadison(&mut c, w, a, b, ops.t.as_ref())?;
                }
            }
            Verdict::KadisonWitness(w) => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                self.verify_kadison(&mut c, w, a, b, ops.t.as_ref())?;
            }
            Verdict::Inf {
                exists,
                inf,
                candidate,
                witness,
                ..
            } => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                let cand = matrix(candidate, tol)?;
                c.psd(&cand, "candidate");
                c.leq(&cand, a, "candidate <= A");
                c.leq(&cand, b, "candidate <= B");
                c.check(*exists == inf.is_some(), "exists flag and inf disagree");
                c.check(*exists != witness.is_some(), "exists flag and witness disagree");
                if let Some(i) = inf {
                    c.close(&matrix(i, tol)?, &cand, "inf = candidate");
                }
                if let Some(w) = witness {
                    Self::verify_ando(&mut c, w, a, b, tol)?;
                }
            }
            Verdict::AndoWitness(w) => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                Self::verify_ando(&mut c, w, a, b, tol)?;
            }
            Verdict::Lebesgue {
                absolutely_continuous: claimed_ac,
                mutually_singular: claimed_sing,
                ac,
                sing,
            } => {
                let a = PsdMatrix::new(need(&ops.a, "a")?.clone(), tol)?;
                let b = PsdMatrix::new(need(&ops.b, "b")?.clone(), tol)?;
                let ac = PsdMatrix::new(matrix(ac, tol)?, tol)?;
                let sing = PsdMatrix::new(matrix(sing, tol)?, tol)?;
                c.close(&(ac.as_hermitian() + sing.as_hermitian()), &b, "ac + sing = B");
                c.check(absolutely_continuous(&ac, &a, tol)?, "ac part is not absolutely continuous");
                c.check(mutually_singular(&sing, &a, tol)?, "singular part is not singular");
                c.check(
                    *claimed_ac == absolutely_continuous(&b, &a, tol)?,
                    "absolute continuity verdict",
                );
                c.check(*claimed_sing == mutually_singular(&a, &b, tol)?, "singularity verdict");
            }
            Verdict::Parsum { result } => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                let p = matrix(result, tol)?;
                c.psd(&p, "A : B");
                c.leq(&p, a, "A : B <= A");
                c.leq(&p, b, "A : B <= B");
            }
            Verdict::Compress {
                a_tilde,
                b_tilde,
                j,
                candidate,
                ..
            } => {
                let a = need(&ops.a, "a")?;
                let b = need(&ops.b, "b")?;
                let j = matrix(j, tol)?;
                c.close(&matrix(a_tilde, tol)?.congruence(&j), a, "J A~ J = A");
                c.close(&matrix(b_tilde, tol)?.congruence(&j), b, "J B~ J = B");
                let cand = matrix(candidate, tol)?;
                c.leq(&cand, a, "candidate <= A");
                c.leq(&cand, b, "candidate <= B");
            }
            Verdict::Selftest { passed, suites, .. } => {
                let all = suites.iter().all(|s| s.failed == 0);
                c.check(*passed == all, "passed flag disagrees with suite counts");
            }
        }
        if c.failures.is_empty() {
            Ok(())
        } else {
            Err(CliError::Verification(c.failures))
        }
    }

    fn verify_kadison(
        &self,
        c: &mut Checker<'_>,
        w: &KadisonReport,
        a: &HermitianMatrix,
        b: &HermitianMatrix,
        t: Option<&HermitianMatrix>,
    ) -> Result<(), CliError> {
        let tol = self.tolerance;
        let s = matrix(&w.s, &tol)?;
        let t_embedded = matrix(&w.t, &tol)?;
        if let Some(t) = t {
            c.close(&t_embedded, t, "embedded T matches operand");
        }
        c.leq(a, &t_embedded, "A <= T");
        c.leq(b, &t_embedded, "B <= T");
        c.leq(a, &s, "A <= S");
        c.leq(b, &s, "B <= S");
        c.incomparable(&s, &t_embedded, "S and T");
        Ok(())
    }

    fn verify_ando(
        c: &mut Checker<'_>,
        w: &AndoReport,
        a: &HermitianMatrix,
        b: &HermitianMatrix,
        tol: &Tolerance,
    ) -> Result<(), CliError> {
        let d = matrix(&w.d, tol)?;
        let cand = matrix(&w.candidate, tol)?;
        c.psd(&d, "D");
        c.leq(&d, a, "D <= A");
        c.leq(&d, b, "D <= B");
        c.leq(&cand, a, "candidate <= A");
        c.leq(&cand, b, "candidate <= B");
        c.incomparable(&d, &cand, "D and candidate");
        c.check(w.epsilon > 0.0, "epsilon must be positive");
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}
