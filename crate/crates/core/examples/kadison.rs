//! Two incomparable matrices have no least upper bound: every upper bound `T`
//! is matched by another upper bound `S` that is not comparable with it.
//!
//! ```text
//! cargo run --example kadison
//! ```

use loewner::lattice::sup_exists_against;
use loewner::{comparable, kadison_witness, KadisonCase, PsdMatrix, Tolerance};

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    let a = PsdMatrix::diag(&[1.0, 0.0])?;
    let b = PsdMatrix::diag(&[0.0, 1.0])?;

    for t in [
        PsdMatrix::identity(2),
        PsdMatrix::diag(&[3.0, 1.0])?,
        PsdMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 2.0]])?,
    ] {
        let w = kadison_witness(&a, &b, &t, &tol)?;
        let branch = match &w.case {
            KadisonCase::SharedRange { lambda, .. } => format!("shared range, lambda = {lambda:.4}"),
            KadisonCase::DisjointRanges { .. } => "disjoint ranges".to_string(),
        };
        let s = w.s.as_matrix();
        println!(
            "T = [[{:.2}, {:.2}], [{:.2}, {:.2}]] -> S = [[{:.4}, {:.4}], [{:.4}, {:.4}]] ({branch})",
            t.as_matrix()[(0, 0)].re,
            t.as_matrix()[(0, 1)].re,
            t.as_matrix()[(1, 0)].re,
            t.as_matrix()[(1, 1)].re,
            s[(0, 0)].re,
            s[(0, 1)].re,
            s[(1, 0)].re,
            s[(1, 1)].re,
        );
        println!(
            "  S vs A: {:?}, S vs B: {:?}, S vs T: {:?}",
            comparable(&w.s, &a, &tol)?,
            comparable(&w.s, &b, &tol)?,
            comparable(&w.s, &t, &tol)?
        );
    }

    let verdict = sup_exists_against(&a, &b, &PsdMatrix::identity(2), &tol)?;
    println!("supremum exists: {}", verdict.exists);
    Ok(())
}
