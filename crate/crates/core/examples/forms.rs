//! The same lattice questions for nonnegative sesquilinear forms `t(x, y) = <Gx, Gy>`.
//!
//! ```text
//! cargo run --example forms
//! ```

use loewner::forms::{form_inf_exists, form_sup_exists, SesquilinearForm};
use loewner::{random, CVec, PsdMatrix, Tolerance};

fn main() -> loewner::Result<()> {
    let tol = Tolerance::default();
    let mut rng = random::rng(11);
    let g = random::gaussian_matrix(&mut rng, 2, 3, true);
    let h = random::gaussian_matrix(&mut rng, 2, 3, true);
    let t = SesquilinearForm::new(PsdMatrix::gram(&g), "t");
    let s = SesquilinearForm::new(PsdMatrix::gram(&h), "s");
    let ts = SesquilinearForm::new(t.gram.add(&s.gram), "t+s");

    let x: CVec = random::gaussian_vector(&mut rng, 3, true);
    println!("t[x, x] = {:.6}, |Gx|^2 = {:.6}", t.eval(&x, &x).re, (&g * &x).norm_squared());

    for (p, q) in [(&t, &s), (&t, &ts), (&s, &ts)] {
        println!(
            "{} <= {}: {}, sup exists: {}, inf exists: {}",
            p.label,
            q.label,
            p.leq(q, &tol)?,
            form_sup_exists(p, q, &tol)?,
            form_inf_exists(p, q, &tol)?
        );
    }
    Ok(())
}
