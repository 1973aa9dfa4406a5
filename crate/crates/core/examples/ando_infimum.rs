//! Greatest lower bounds: the infimum of `A` and `B` exists exactly when the parts
//! `[B]A` and `[A]B` are comparable, and then it is the smaller one.
//!
//! ```text
//! cargo run --example ando_infimum
//! ```

use loewner::lattice::{reduce, witness_margins};
use loewner::{ando_candidate, ando_witness, compress, inf_exists, PsdMatrix, Tolerance};

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    let cases = [
        ("diag(2,1), diag(1,2)", PsdMatrix::diag(&[2.0, 1.0])?, PsdMatrix::diag(&[1.0, 2.0])?),
        (
            "rank one vs full rank",
            PsdMatrix::diag(&[3.0, 0.0])?,
            PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]])?,
        ),
        (
            "two projections",
            PsdMatrix::diag(&[1.0, 0.0])?,
            PsdMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])?,
        ),
    ];

    for (name, a, b) in cases {
        println!("{name}");
        let spectrum = compress(&a, &b, &tol)?.restricted_spectrum();
        println!("  spectrum of A~ on ran(A+B): {:.4?}", spectrum.eigenvalues);
        let (ra, rb) = reduce(&a, &b, &tol)?;
        println!("  [B]A - [A]B max entry: {:.4}", ra.max_abs_diff(&rb));

        let verdict = inf_exists(&a, &b, &tol)?;
        println!("  infimum exists: {} ({:?})", verdict.exists, verdict.parts_comparison);
        if let Some(inf) = &verdict.inf {
            println!("  inf = {:.4?}", inf.as_matrix().iter().map(|z| z.re).collect::<Vec<_>>());
        } else {
            let cand = ando_candidate(&a, &b, &tol)?;
            let w = ando_witness(&a, &b, &tol)?;
            let m = witness_margins(&a, &b, &cand, &w.d);
            println!("  epsilon = {:.6}, D = {:.4?}", w.epsilon, w.d.as_matrix().iter().map(|z| z.re).collect::<Vec<_>>());
            println!(
                "  min eig: D {:.2e}, A-D {:.4}, B-D {:.4}, cand-D {:.4}, D-cand {:.4}",
                m.d_min, m.a_minus_d_min, m.b_minus_d_min, m.candidate_gap.0, m.candidate_gap.1
            );
        }
    }
    Ok(())
}
