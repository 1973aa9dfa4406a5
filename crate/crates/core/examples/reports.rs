//! Verdicts as JSON reports: generate inputs, run a command in-process, parse the
//! report back and re-check every claim it makes.
//!
//! ```text
//! cargo run --example reports
//! ```

use clap::Parser;
use loewner::cli::report::{Operands, VerdictReport};
use loewner::cli::{self, Cli, Output};
use loewner::Tolerance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let a_path = dir.path().join("a.json");
    let b_path = dir.path().join("b.json");
    let a = cli::gen(3, 3, 3, false)?;
    let b = cli::gen(4, 3, 2, false)?;
    std::fs::write(&a_path, serde_json::to_string_pretty(&a)?)?;
    std::fs::write(&b_path, serde_json::to_string_pretty(&b)?)?;

    let tol = Tolerance::default();
    let ops = Operands {
        a: Some(a.to_hermitian(&tol)?),
        b: Some(b.to_hermitian(&tol)?),
        ..Default::default()
    };
    for command in ["leq", "lebesgue", "inf"] {
        let args = ["loewner", command, "--a", a_path.to_str().unwrap(), "--b", b_path.to_str().unwrap()];
        let parsed = Cli::try_parse_from(args)?;
        let Output::Report(report) = cli::execute(&parsed)? else {
            unreachable!("{command} produces a report")
        };
        let text = report.to_json();
        let back = VerdictReport::from_json(&text)?;
        back.verify(&ops)?;
        println!("{command}: {} bytes of JSON, re-verified", text.len());
    }

    // the same thing through the command-line entry point
    let args = ["loewner", "--json", "inf", "--a", a_path.to_str().unwrap(), "--b", b_path.to_str().unwrap()];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args, &mut out, &mut err);
    let text = String::from_utf8(out)?;
    println!("exit {code}");
    for line in text.lines().take(4) {
        println!("{line}");
    }
    println!("  ...");
    Ok(())
}
