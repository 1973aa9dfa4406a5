//! How much of the ray `f f*` fits under a positive matrix.
//!
//! ```text
//! cargo run --example strength
//! ```

use loewner::psd::real_vector;
use loewner::{strength, PsdMatrix, Tolerance};

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 0.0]])?;

    for f in [
        real_vector(&[1.0, 0.0, 0.0]),
        real_vector(&[1.0, 1.0, 0.0]),
        real_vector(&[1.0, -1.0, 0.0]),
        // leaves ran A: no positive multiple of f f* fits under A
        real_vector(&[1.0, 0.0, 1.0]),
    ] {
        let s = strength(&a, &f, &tol)?;
        let fv: Vec<f64> = f.iter().map(|z| z.re).collect();
        print!("f = {fv:?}  lambda = {:.6}", s.lambda);
        if let (Some(xi), Some(m)) = (&s.xi, s.m_f) {
            // A^{1/2} xi = f and |<f|x>|^2 <= m x*Ax with m = 1/lambda
            print!("  |xi|^2 = {:.6}  m_f = {m:.6}", xi.norm_squared());
        }
        println!();
    }

    // lambda is exactly the largest t with A - t f f* still PSD
    let f = real_vector(&[1.0, 1.0, 0.0]);
    let lambda = strength(&a, &f, &tol)?.lambda;
    let ff = &f * f.adjoint();
    let below = a.as_matrix() - &ff * num_complex::Complex64::new(lambda, 0.0);
    let above = a.as_matrix() - &ff * num_complex::Complex64::new(lambda * 1.001, 0.0);
    println!(
        "A - lambda ff* PSD: {}, A - 1.001 lambda ff* PSD: {}",
        PsdMatrix::from_matrix(below).is_ok(),
        PsdMatrix::from_matrix(above).is_ok()
    );
    Ok(())
}
