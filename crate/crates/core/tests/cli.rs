use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use loewner::cli::{self, load_matrix, load_vector, Operands, Verdict, VerdictReport};
use loewner::{HermitianMatrix, Tolerance};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("loewner").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn real(dir: &Path, name: &str, rows: &[&[f64]]) -> String {
    let data: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    write(
        dir,
        name,
        &format!(r#"{{"n": {}, "complex": false, "data": [{}]}}"#, rows.len(), data.join(", ")),
    )
}

fn gen(dir: &Path, name: &str, seed: u64, dim: usize, rank: usize, complex: bool) -> String {
    let mut args = vec![
        "gen".to_string(),
        "--seed".into(),
        seed.to_string(),
        "--dim".into(),
        dim.to_string(),
        "--rank".into(),
        rank.to_string(),
    ];
    if complex {
        args.push("--complex".into());
    }
    let r = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(r.code, 0, "{}", r.stderr);
    write(dir, name, &r.stdout)
}

fn report(args: &[&str]) -> VerdictReport {
    let mut full = args.to_vec();
    full.push("--json");
    let r = run(&full);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    VerdictReport::from_json(&r.stdout).unwrap()
}

fn operands(a: &str, b: Option<&str>, t: Option<&str>) -> Operands {
    let tol = Tolerance::default();
    let m = |p: &str| load_matrix(Path::new(p), &tol).unwrap().value;
    Operands {
        a: Some(m(a)),
        b: b.map(m),
        t: t.map(m),
        f: None,
    }
}

#[test]
fn strength_of_identity_on_unit_ray() {
    let dir = TempDir::new().unwrap();
    let id = real(dir.path(), "id2.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    let e1 = write(dir.path(), "e1.json", r#"{"n": 2, "complex": false, "data": [1, 0]}"#);
    let rep = report(&["strength", "--a", &id, "--f", &e1]);
    match &rep.verdict {
        Verdict::Strength { lambda, .. } => assert_eq!(*lambda, 1.0),
        v => panic!("unexpected verdict {v:?}"),
    }
    let mut ops = operands(&id, None, None);
    ops.f = Some(load_vector(Path::new(&e1)).unwrap().value);
    rep.verify(&ops).unwrap();
    assert_eq!(rep.inputs.len(), 2);
}

#[test]
fn infimum_of_disjoint_projections_is_zero() {
    let dir = TempDir::new().unwrap();
    let p = real(dir.path(), "p.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    let q = real(dir.path(), "q.json", &[&[0.0, 0.0], &[0.0, 1.0]]);
    let rep = report(&["inf", "--a", &p, "--b", &q]);
    let Verdict::Inf { exists, inf, .. } = &rep.verdict else {
        panic!("not an inf verdict");
    };
    assert!(*exists);
    let inf = inf.as_ref().unwrap().to_hermitian(&Tolerance::default()).unwrap();
    assert!(inf.max_abs_diff(&HermitianMatrix::zeros(2)) < 1e-12);
    rep.verify(&operands(&p, Some(&q), None)).unwrap();
}

#[test]
fn ando_witness_fixture() {
    let dir = TempDir::new().unwrap();
    let a = real(dir.path(), "d21.json", &[&[2.0, 0.0], &[0.0, 1.0]]);
    let b = real(dir.path(), "d12.json", &[&[1.0, 0.0], &[0.0, 2.0]]);
    let rep = report(&["ando-witness", "--a", &a, "--b", &b]);
    let Verdict::AndoWitness(w) = &rep.verdict else {
        panic!("not an ando witness");
    };
    let d = w.d.to_hermitian(&Tolerance::default()).unwrap();
    let s2 = 2f64.sqrt();
    let expected =
        HermitianMatrix::from_real_rows(&[&[5.0 / 6.0, s2 / 6.0], &[s2 / 6.0, 5.0 / 6.0]]).unwrap();
    assert!(d.max_abs_diff(&expected) < 1e-10);
    assert!((w.epsilon - 1.0 / 18.0).abs() < 1e-15);
    rep.verify(&operands(&a, Some(&b), None)).unwrap();
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = real(dir.path(), "p.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    let q = real(dir.path(), "q.json", &[&[0.0, 0.0], &[0.0, 1.0]]);
    let neg = real(dir.path(), "neg.json", &[&[1.0, 0.0], &[0.0, -1.0]]);
    let asym = real(dir.path(), "asym.json", &[&[1.0, 2.0], &[0.0, 1.0]]);
    let bad = write(dir.path(), "bad.json", "{not json");
    let one = real(dir.path(), "one.json", &[&[1.0]]);

    // comparable-parts pair: the infimum exists, so the witness is rejected
    let r = run(&["ando-witness", "--a", &p, "--b", &q]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("infimum exists"), "{}", r.stderr);

    assert_eq!(run(&["parsum", "--a", &neg, "--b", &p]).code, 2);
    assert_eq!(run(&["parsum", "--a", &one, "--b", &p]).code, 2);
    assert_eq!(run(&["parsum", "--a", &asym, "--b", &p]).code, 1);
    assert_eq!(run(&["parsum", "--a", &bad, "--b", &p]).code, 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["parsum", "--a", missing.to_str().unwrap(), "--b", &p]).code, 1);
    assert_eq!(run(&["gen", "--dim", "3", "--rank", "0"]).code, 2);
    assert_eq!(run(&["gen", "--dim", "3", "--rank", "4"]).code, 2);
    assert_eq!(run(&["selftest", "--trials", "0"]).code, 2);
    assert_eq!(run(&["kadison-witness", "--a", &one, "--b", &one, "--t", &one]).code, 2);
    assert_eq!(run(&["parsum", "--a", &p, "--b", &q, "--tol", "-1"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn gen_is_deterministic_and_has_requested_rank() {
    let tol = Tolerance::default();
    for complex in [false, true] {
        for (dim, rank) in [(1, 1), (4, 4), (5, 1), (6, 3)] {
            let args = [
                "gen",
                "--seed",
                "11",
                "--dim",
                &dim.to_string(),
                "--rank",
                &rank.to_string(),
            ];
            let mut args = args.to_vec();
            if complex {
                args.push("--complex");
            }
            let first = run(&args);
            let second = run(&args);
            assert_eq!(first.stdout, second.stdout);
            let file: cli::MatrixFile = serde_json::from_str(&first.stdout).unwrap();
            let m = file.to_hermitian(&tol).unwrap();
            let eig = loewner::eig_hermitian(&m);
            assert_eq!(eig.numeric_rank(&tol), rank);
            assert!(eig.min() > -1e-12);
            if rank == 1 {
                // rank one: m = λ v v* with λ the top eigenvalue
                let v = eig.column(dim - 1);
                let rebuilt = HermitianMatrix::new(
                    (&v * v.adjoint()) * num_complex::Complex64::new(eig.max(), 0.0),
                )
                .unwrap();
                assert!(rebuilt.max_abs_diff(&m) < 1e-12);
            }
        }
    }
}

fn all_commands(dir: &Path, complex: bool, seed: u64) -> Vec<(Vec<String>, Operands)> {
    let a = gen(dir, &format!("a{seed}.json"), seed, 4, 4, complex);
    let b = gen(dir, &format!("b{seed}.json"), seed + 100, 4, 3, complex);
    let t = {
        // T = A + B + I written by hand to exercise the --t path
        let tol = Tolerance::default();
        let am = load_matrix(Path::new(&a), &tol).unwrap().value;
        let bm = load_matrix(Path::new(&b), &tol).unwrap().value;
        let tm = &(&am + &bm) + &HermitianMatrix::identity(4);
        let file = cli::MatrixFile::from_hermitian(&tm);
        write(dir, &format!("t{seed}.json"), &serde_json::to_string(&file).unwrap())
    };
    let pair = |cmd: &str| vec![cmd.to_string(), "--a".into(), a.clone(), "--b".into(), b.clone()];
    let with_t = |mut v: Vec<String>| {
        v.extend(["--t".to_string(), t.clone()]);
        v
    };
    let ops = || operands(&a, Some(&b), Some(&t));
    let mut cmds = vec![];
    for c in ["leq", "inf", "lebesgue", "parsum", "ando-witness", "compress"] {
        cmds.push((pair(c), ops()));
    }
    cmds.push((with_t(pair("sup")), ops()));
    cmds.push((with_t(pair("kadison-witness")), ops()));
    cmds.push((pair("sup"), operands(&a, Some(&b), None)));
    cmds
}

#[test]
fn reports_round_trip_and_reverify() {
    let dir = TempDir::new().unwrap();
    for (seed, complex) in [(1, false), (2, true), (3, true)] {
        for (args, ops) in all_commands(dir.path(), complex, seed) {
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let rep = report(&argv);
            let text = rep.to_json();
            let back = VerdictReport::from_json(&text).unwrap();
            assert_eq!(back, rep, "{argv:?}");
            assert_eq!(back.to_json(), text);
            back.verify(&ops).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for (args, _) in all_commands(dir.path(), true, 7) {
        let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
        argv.push("--json");
        let first = run(&argv);
        let second = run(&argv);
        assert_eq!(first.code, second.code, "{argv:?}");
        assert_eq!(first.stdout, second.stdout, "{argv:?}");
    }
    let s1 = run(&["selftest", "--trials", "6", "--seed", "4", "--json"]);
    let s2 = run(&["selftest", "--trials", "6", "--seed", "4", "--json"]);
    assert_eq!(s1.code, 0, "{}", s1.stdout);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn tampered_witness_fails_verification() {
    let dir = TempDir::new().unwrap();
    let a = real(dir.path(), "d21.json", &[&[2.0, 0.0], &[0.0, 1.0]]);
    let b = real(dir.path(), "d12.json", &[&[1.0, 0.0], &[0.0, 2.0]]);
    let mut rep = report(&["ando-witness", "--a", &a, "--b", &b]);
    if let Verdict::AndoWitness(w) = &mut rep.verdict {
        w.d = cli::MatrixFile::from_hermitian(&HermitianMatrix::diag(&[1.5, 1.5]).unwrap());
    }
    assert!(rep.verify(&operands(&a, Some(&b), None)).is_err());
}

#[test]
fn csv_and_complex_inputs() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.csv", "2, 1\n1, 2\n");
    let b = write(
        dir.path(),
        "b.json",
        r#"{"n": 2, "complex": true, "data": [[[2, 0], [0, -1]], [[0, 1], [2, 0]]]}"#,
    );
    let rep = report(&["leq", "--a", &a, "--b", &b]);
    rep.verify(&operands(&a, Some(&b), None)).unwrap();
    let text = run(&["compress", "--a", &a, "--b", &b]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.starts_with("command: compress"));
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_loewner"))
}

#[test]
fn binary_exit_status() {
    let dir = TempDir::new().unwrap();
    let p = real(dir.path(), "p.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    let q = real(dir.path(), "q.json", &[&[0.0, 0.0], &[0.0, 1.0]]);
    let ok = Command::new(binary()).args(["inf", "--a", &p, "--b", &q, "--json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let rep = VerdictReport::from_json(std::str::from_utf8(&ok.stdout).unwrap()).unwrap();
    assert_eq!(rep.verdict.command(), "inf");
    let rejected = Command::new(binary()).args(["ando-witness", "--a", &p, "--b", &q]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(2));
    let io = Command::new(binary()).args(["inf", "--a", "nope.json", "--b", &q]).output().unwrap();
    assert_eq!(io.status.code(), Some(1));
}
