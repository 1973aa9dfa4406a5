//! `A <= B` holds exactly when every ray is at least as strong under `B` as under `A`.
//! When the order fails, a single ray shows it.
//!
//! ```text
//! cargo run --example order_witness
//! ```

use loewner::{loewner_leq, order_witness, strength, strength_dominates, PsdMatrix, Tolerance};

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    let a = PsdMatrix::diag(&[1.0, 1.0])?;
    let b = PsdMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 2.0]])?;
    let c = PsdMatrix::diag(&[2.0, 0.5])?;

    for (name, x, y) in [("A <= B", &a, &b), ("A <= C", &a, &c), ("C <= B", &c, &b)] {
        let leq = loewner_leq(x, y, &tol)?;
        let dominated = strength_dominates(x, y, &tol, 64, 7)?;
        println!("{name}: loewner {leq}, strength dominance {dominated}");
        if let Some(f) = order_witness(x, y, &tol)? {
            let lx = strength(x, &f, &tol)?.lambda;
            let ly = strength(y, &f, &tol)?.lambda;
            println!("  witness f = [{:.4}, {:.4}]: {lx:.4} > {ly:.4}", f[0].re, f[1].re);
        }
    }
    Ok(())
}
