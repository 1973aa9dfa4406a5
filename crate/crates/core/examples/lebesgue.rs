//! Split `B` into the part absolutely continuous with respect to `A` and a singular rest,
//! and watch the parallel sums `(nA) : B` climb to the first part.
//!
//! ```text
//! cargo run --example lebesgue
//! ```

use loewner::lebesgue::shorted_to_range;
use loewner::{
    absolutely_continuous, ac_part, mutually_singular, parallel_sum, PsdMatrix, Tolerance,
};

fn show(name: &str, m: &PsdMatrix) {
    println!("{name}:");
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|j| format!("{:8.4}", m.as_matrix()[(i, j)].re)).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    // A lives on the first two coordinates, B leans out of that plane
    let a = PsdMatrix::diag(&[1.0, 2.0, 0.0])?;
    let b = PsdMatrix::from_real_rows(&[&[2.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 2.0]])?;

    println!("B << A: {}", absolutely_continuous(&b, &a, &tol)?);
    println!("A, B mutually singular: {}", mutually_singular(&a, &b, &tol)?);

    let parts = ac_part(&b, &a, &tol)?;
    show("[A]B", &parts.ac);
    show("B - [A]B", &parts.sing);
    println!(
        "[A]B << A: {}, reconstruction error {:.1e}",
        absolutely_continuous(&parts.ac, &a, &tol)?,
        parts.reconstruction_error(&b)
    );

    let shorted = shorted_to_range(&b, &a, &tol)?;
    println!("shorted operator agrees: {:.1e}", shorted.max_abs_diff(&parts.ac));

    for k in [0, 4, 8, 16, 30] {
        let n = 2f64.powi(k);
        let p = parallel_sum(&a.scale_by(n)?, &b)?;
        println!("n = 2^{k:<2}  |(nA):B - [A]B| = {:.3e}", p.max_abs_diff(&parts.ac));
    }
    Ok(())
}
