//! Nonnegative sesquilinear forms on `C^n`, represented by Gram matrices.
//!
//! A form `t` corresponds to the positive operator `T` with `<Tx|y> = t(x, y)`;
//! under the pairing `<f|y> = sum f_i conj(y_i)` this gives `t(x, y) = y* G x`
//! with `G` the Gram matrix. The correspondence is an order isomorphism, so
//! supremum and infimum questions for forms are answered on Gram matrices.

use crate::error::Result;
use crate::lattice::{inf_exists, sup_exists};
use crate::psd::{loewner_leq, CVec, PsdMatrix};
use crate::tolerance::Tolerance;

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct SesquilinearForm {
    pub gram: PsdMatrix,
    pub label: String,
}

impl SesquilinearForm {
    pub fn new(gram: PsdMatrix, label: impl Into<String>) -> Self {
        SesquilinearForm {
            gram,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// `t(x, y)`, linear in `x` and conjugate linear in `y`.
    pub fn eval(&self, x: &CVec, y: &CVec) -> Complex64 {
        y.dotc(&self.gram.apply(x))
    }

    pub fn leq(&self, other: &SesquilinearForm, tol: &Tolerance) -> Result<bool> {
        loewner_leq(&self.gram, &other.gram, tol)
    }
}

pub fn to_operator(t: &SesquilinearForm) -> PsdMatrix {
    t.gram.clone()
}

pub fn from_operator(op: &PsdMatrix) -> SesquilinearForm {
    SesquilinearForm::new(op.clone(), "")
}

pub fn form_sup_exists(t: &SesquilinearForm, s: &SesquilinearForm, tol: &Tolerance) -> Result<bool> {
    Ok(sup_exists(&to_operator(t), &to_operator(s), tol)?.exists)
}

pub fn form_inf_exists(t: &SesquilinearForm, s: &SesquilinearForm, tol: &Tolerance) -> Result<bool> {
    Ok(inf_exists(&to_operator(t), &to_operator(s), tol)?.exists)
}
