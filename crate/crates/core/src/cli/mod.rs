//! The `loewner` command line: one subcommand per question, JSON reports on stdout.
//!
//! Exit status is 0 on success, 2 when a precondition rejects the input (for example
//! `ando-witness` on a pair whose infimum exists), 1 on I/O, parse or usage errors,
//! and 3 when `selftest` finds a failing invariant.

pub mod files;
pub mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::lattice::{
    ando_candidate, ando_witness, compress, inf_exists, kadison_witness, mutually_ac,
    sup_exists_against, witness_margins,
};
use crate::lebesgue::{ac_part, absolutely_continuous, mutually_singular, parallel_sum};
use crate::psd::{HermitianMatrix, PsdMatrix};
use crate::random;
use crate::selftest;
use crate::strength::{order_witness, strength, strength_dominates};
use crate::tolerance::Tolerance;

pub use files::{load_matrix, load_vector, Entry, Loaded, MatrixFile, VectorFile};
pub use report::{AndoReport, KadisonReport, Operands, Verdict, VerdictReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("verification failed: {}", .0.join("; "))]
    Verification(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }
}

/// Exit status when the self-test finds a failing invariant.
pub const SELFTEST_FAILED: i32 = 3;

/// Number of random rays used by `leq` to cross-check the order against strengths.
pub const DOMINANCE_SAMPLES: usize = 32;

#[derive(Debug, Parser)]
#[command(name = "loewner", version, about = "Order questions for positive semidefinite matrices")]
pub struct Cli {
    /// Relative tolerance for PSD and rank decisions.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_REL)]
    pub tol: f64,
    /// Print the JSON report instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strength of A on the ray through f.
    Strength {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        f: PathBuf,
    },
    /// Is A <= B? Produces a separating ray when not.
    Leq {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Does sup{A, B} exist? Refutes the upper bound T (default A + B) when not.
    Sup {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: Option<PathBuf>,
    },
    /// Does inf{A, B} exist? Refutes the candidate when not.
    Inf {
        #[command(flatten)]
        pair: Pair,
    },
    /// Decomposes B into its A-absolutely continuous and A-singular parts.
    Lebesgue {
        #[command(flatten)]
        pair: Pair,
    },
    /// Parallel sum A : B.
    Parsum {
        #[command(flatten)]
        pair: Pair,
    },
    /// Upper bound of A and B not comparable with the upper bound T.
    KadisonWitness {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: PathBuf,
    },
    /// Lower bound of A and B not comparable with the infimum candidate.
    AndoWitness {
        #[command(flatten)]
        pair: Pair,
    },
    /// Compression of A and B to the range of A + B.
    Compress {
        #[command(flatten)]
        pair: Pair,
    },
    /// Random PSD matrix file with the given rank.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        complex: bool,
    },
    /// Runs every property suite on random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = selftest::DEFAULT_TRIALS)]
        trials: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let started = Instant::now();
    let code = match execute(&cli) {
        Ok(Output::Matrix(file)) => {
            let mut text = serde_json::to_string_pretty(&file).expect("matrix files serialize");
            text.push('\n');
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Output::Report(report)) => {
            let text = if cli.json {
                report.to_json()
            } else {
                render_text(&report)
            };
            let _ = out.write_all(text.as_bytes());
            match report.verdict {
                Verdict::Selftest { passed: false, .. } => SELFTEST_FAILED,
                _ => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    };
    let _ = writeln!(err, "runtime: {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
    code
}

pub enum Output {
    Matrix(MatrixFile),
    Report(Box<VerdictReport>),
}

struct Inputs<'a> {
    tol: &'a Tolerance,
    digests: BTreeMap<String, String>,
}

impl Inputs<'_> {
    fn matrix(&mut self, name: &str, path: &Path) -> Result<HermitianMatrix, CliError> {
        let Loaded { value, sha256 } = load_matrix(path, self.tol)?;
        self.digests.insert(name.into(), sha256);
        Ok(value)
    }

    fn psd(&mut self, name: &str, path: &Path) -> Result<PsdMatrix, CliError> {
        let h = self.matrix(name, path)?;
        PsdMatrix::new(h, self.tol).map_err(|e| match e {
            Error::NotPsd { min_eigenvalue, .. } => CliError::Domain(Error::Precondition(format!(
                "{name} must be PSD (min eigenvalue {min_eigenvalue:e})"
            ))),
            e => e.into(),
        })
    }

    fn pair(&mut self, pair: &Pair) -> Result<(PsdMatrix, PsdMatrix), CliError> {
        Ok((self.psd("a", &pair.a)?, self.psd("b", &pair.b)?))
    }
}

/// Runs a parsed command without printing anything.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let tol = Tolerance::with_rel(cli.tol)?;
    let mut inputs = Inputs {
        tol: &tol,
        digests: BTreeMap::new(),
    };
    let mut seed = None;
    let verdict = match &cli.command {
        Command::Strength { a, f } => {
            let a = inputs.psd("a", a)?;
            let Loaded { value: f, sha256 } = load_vector(f)?;
            inputs.digests.insert("f".into(), sha256);
            let r = strength(&a, &f, &tol)?;
            Verdict::Strength {
                lambda: r.lambda,
                xi: r.xi.as_ref().map(VectorFile::from_vector),
                m_f: r.m_f,
            }
        }
        Command::Leq { pair, seed: s } => {
            let (a, b) = inputs.pair(pair)?;
            seed = Some(*s);
            let leq = strength_dominates(&a, &b, &tol, DOMINANCE_SAMPLES, *s)?;
            let comparison = crate::psd::comparable(&a, &b, &tol)?;
            let witness = order_witness(&a, &b, &tol)?;
            let (strength_a, strength_b) = match &witness {
                Some(f) => (
                    Some(strength(&a, f, &tol)?.lambda),
                    Some(strength(&b, f, &tol)?.lambda),
                ),
                None => (None, None),
            };
            Verdict::Leq {
                leq,
                comparison,
                witness: witness.as_ref().map(VectorFile::from_vector),
                strength_a,
                strength_b,
                dominance_samples: DOMINANCE_SAMPLES,
            }
        }
        Command::Sup { pair, t } => {
            let (a, b) = inputs.pair(pair)?;
            let t = match t {
                Some(path) => inputs.psd("t", path)?,
                None => a.add(&b),
            };
            let v = sup_exists_against(&a, &b, &t, &tol)?;
            Verdict::Sup {
                exists: v.exists,
                comparison: v.comparison,
                sup: v.sup.as_ref().map(|s| MatrixFile::from_hermitian(s)),
                witness: v.witness.as_ref().map(|w| KadisonReport::new(w, &t)),
            }
        }
        Command::Inf { pair } => {
            let (a, b) = inputs.pair(pair)?;
            let v = inf_exists(&a, &b, &tol)?;
            let witness = v.witness.as_ref().map(|w| {
                let margins = witness_margins(&a, &b, &v.candidate, &w.d);
                AndoReport::new(w, &v.candidate, &margins)
            });
            Verdict::Inf {
                exists: v.exists,
                inf: v.inf.as_ref().map(|m| MatrixFile::from_hermitian(m)),
                candidate: MatrixFile::from_hermitian(&v.candidate),
                reduced: [
                    MatrixFile::from_hermitian(&v.reduced.0),
                    MatrixFile::from_hermitian(&v.reduced.1),
                ],
                parts_comparison: v.parts_comparison,
                witness,
            }
        }
        Command::Lebesgue { pair } => {
            let (a, b) = inputs.pair(pair)?;
            let parts = ac_part(&b, &a, &tol)?;
            Verdict::Lebesgue {
                absolutely_continuous: absolutely_continuous(&b, &a, &tol)?,
                mutually_singular: mutually_singular(&a, &b, &tol)?,
                ac: MatrixFile::from_hermitian(&parts.ac),
                sing: MatrixFile::from_hermitian(&parts.sing),
            }
        }
        Command::Parsum { pair } => {
            let (a, b) = inputs.pair(pair)?;
            let p = parallel_sum(&a, &b)?;
            Verdict::Parsum {
                result: MatrixFile::from_hermitian(&p),
            }
        }
        Command::KadisonWitness { pair, t } => {
            let (a, b) = inputs.pair(pair)?;
            let t = inputs.psd("t", t)?;
            let w = kadison_witness(&a, &b, &t, &tol)?;
            Verdict::KadisonWitness(KadisonReport::new(&w, &t))
        }
        Command::AndoWitness { pair } => {
            let (a, b) = inputs.pair(pair)?;
            let w = ando_witness(&a, &b, &tol)?;
            let candidate = ando_candidate(&a, &b, &tol)?;
            let margins = witness_margins(&a, &b, &candidate, &w.d);
            Verdict::AndoWitness(AndoReport::new(&w, &candidate, &margins))
        }
        Command::Compress { pair } => {
            let (a, b) = inputs.pair(pair)?;
            let c = compress(&a, &b, &tol)?;
            let candidate = ando_candidate(&a, &b, &tol)?;
            Verdict::Compress {
                rank: c.rank(),
                mutually_ac: mutually_ac(&a, &b, &tol)?,
                spectrum: c.restricted_spectrum().eigenvalues,
                a_tilde: MatrixFile::from_hermitian(&c.a_tilde),
                b_tilde: MatrixFile::from_hermitian(&c.b_tilde),
                j: MatrixFile::from_hermitian(&c.j),
                candidate: MatrixFile::from_hermitian(&candidate),
            }
        }
        Command::Gen {
            seed,
            dim,
            rank,
            complex,
        } => return gen(*seed, *dim, rank.unwrap_or(*dim), *complex).map(Output::Matrix),
        Command::Selftest { seed: s, trials } => {
            seed = Some(*s);
            let summary = selftest::run(*s, *trials, &tol)?;
            Verdict::Selftest {
                trials: *trials,
                passed: summary.passed(),
                suites: summary.suites,
            }
        }
    };
    Ok(Output::Report(Box::new(VerdictReport {
        verdict,
        inputs: inputs.digests,
        tolerance: tol,
        seed,
    })))
}

/// Seeded PSD matrix `Q diag(values, 0, ..., 0) Q*` of the given rank.
pub fn gen(seed: u64, dim: usize, rank: usize, complex: bool) -> Result<MatrixFile, CliError> {
    if dim == 0 {
        return Err(Error::precondition("dim must be at least 1").into());
    }
    if rank == 0 || rank > dim {
        return Err(Error::precondition(format!("rank must lie in 1..={dim}, got {rank}")).into());
    }
    let m = random::psd(&mut random::rng(seed), dim, rank, complex);
    Ok(MatrixFile::from_hermitian(&m))
}

fn fmt_matrix(out: &mut String, name: &str, m: &MatrixFile) {
    let _ = writeln!(out, "{name} =");
    for row in &m.data {
        let cells: Vec<String> = row
            .iter()
            .map(|e| match e {
                Entry::Real(x) => format!("{x:>10.6}"),
                Entry::Complex([re, im]) => format!("{re:>10.6}{im:+.6}i"),
            })
            .collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}

fn fmt_vector(out: &mut String, name: &str, v: &VectorFile) {
    let cells: Vec<String> = v
        .data
        .iter()
        .map(|e| match e {
            Entry::Real(x) => format!("{x:.6}"),
            Entry::Complex([re, im]) => format!("{re:.6}{im:+.6}i"),
        })
        .collect();
    let _ = writeln!(out, "{name} = ({})", cells.join(", "));
}

/// Human-readable summary of a report.
pub fn render_text(report: &VerdictReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}", report.verdict.command());
    match &report.verdict {
        Verdict::Strength { lambda, xi, m_f } => {
            let _ = writeln!(s, "lambda = {lambda}");
            if let Some(m) = m_f {
                let _ = writeln!(s, "f* A^+ f = {m}");
            }
            if let Some(xi) = xi {
                fmt_vector(&mut s, "xi", xi);
            }
        }
        Verdict::Leq {
            leq,
            comparison,
            witness,
            strength_a,
            strength_b,
            ..
        } => {
            let _ = writeln!(s, "A <= B: {leq} ({comparison})");
            if let Some(w) = witness {
                fmt_vector(&mut s, "separating ray f", w);
                let _ = writeln!(
                    s,
                    "strength(A, f) = {}, strength(B, f) = {}",
                    strength_a.unwrap_or(f64::NAN),
                    strength_b.unwrap_or(f64::NAN)
                );
            }
        }
        Verdict::Sup {
            exists,
            comparison,
            sup,
            witness,
        } => {
            let _ = writeln!(s, "supremum exists: {exists} ({comparison})");
            if let Some(m) = sup {
                fmt_matrix(&mut s, "sup", m);
            }
            if let Some(w) = witness {
                text_kadison(&mut s, w);
            }
        }
        Verdict::KadisonWitness(w) => text_kadison(&mut s, w),
        Verdict::Inf {
            exists,
            inf,
            candidate,
            parts_comparison,
            witness,
            ..
        } => {
            let _ = writeln!(s, "infimum exists: {exists}");
            let _ = writeln!(s, "parts [B]A vs [A]B: {parts_comparison}");
            match inf {
                Some(m) => fmt_matrix(&mut s, "inf", m),
                None => fmt_matrix(&mut s, "candidate", candidate),
            }
            if let Some(w) = witness {
                text_ando(&mut s, w);
            }
        }
        Verdict::AndoWitness(w) => text_ando(&mut s, w),
        Verdict::Lebesgue {
            absolutely_continuous,
            mutually_singular,
            ac,
            sing,
        } => {
            let _ = writeln!(s, "B << A: {absolutely_continuous}");
            let _ = writeln!(s, "A, B singular: {mutually_singular}");
            fmt_matrix(&mut s, "[A]B", ac);
            fmt_matrix(&mut s, "B - [A]B", sing);
        }
        Verdict::Parsum { result } => fmt_matrix(&mut s, "A : B", result),
        Verdict::Compress {
            rank,
            mutually_ac,
            spectrum,
            candidate,
            ..
        } => {
            let _ = writeln!(s, "rank(A + B) = {rank}");
            let _ = writeln!(s, "mutually absolutely continuous: {mutually_ac}");
            let _ = writeln!(s, "spectrum of A~ on ran(A + B): {spectrum:?}");
            fmt_matrix(&mut s, "candidate", candidate);
        }
        Verdict::Selftest {
            trials,
            passed,
            suites,
        } => {
            for suite in suites {
                let _ = writeln!(
                    s,
                    "{:<28} {:>5}/{:<5} {}",
                    suite.name,
                    suite.passed,
                    suite.passed + suite.failed,
                    if suite.failed == 0 { "ok" } else { "FAILED" }
                );
                if let Some(msg) = &suite.first_failure {
                    let _ = writeln!(s, "    first failure: {msg}");
                }
            }
            let _ = writeln!(s, "{trials} trials per suite: {}", if *passed { "all passed" } else { "FAILURES" });
        }
    }
    s
}

fn text_kadison(s: &mut String, w: &KadisonReport) {
    let _ = writeln!(s, "witness ({}): upper bound S not comparable with T", w.case);
    fmt_matrix(s, "S", &w.s);
    fmt_vector(s, "e", &w.e);
    fmt_vector(s, "f", &w.f);
}

fn text_ando(s: &mut String, w: &AndoReport) {
    let _ = writeln!(
        s,
        "witness: lower bound D not comparable with the candidate (epsilon = {})",
        w.epsilon
    );
    fmt_matrix(s, "D", &w.d);
    let _ = writeln!(
        s,
        "min eig: D {:e}, A - D {:e}, B - D {:e}, C - D {:e}, D - C {:e}",
        w.margins.d_min,
        w.margins.a_minus_d_min,
        w.margins.b_minus_d_min,
        w.margins.candidate_gap[0],
        w.margins.candidate_gap[1]
    );
}
