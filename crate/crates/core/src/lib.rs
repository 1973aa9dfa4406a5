//! Order structure of positive semidefinite matrices.
//!
//! The crate models positive operators on a finite-dimensional anti-dual pair as
//! Hermitian PSD matrices and provides:
//!
//! * [`psd`]: Jacobi eigensolver, square roots, pseudo-inverses, range projectors,
//!   Loewner comparisons and the factorization `A = J J*`;
//! * [`strength`]: the strength function `λ(A, f) = sup { t : t f f* <= A }`, its
//!   certificates, and the order characterization by strength dominance;
//! * [`lebesgue`]: absolute continuity, singularity, parallel sums and the maximal
//!   absolutely continuous part `[A]B`;
//! * [`lattice`]: existence of suprema and infima, with the counterexample
//!   constructions that refute candidates when they do not exist;
//! * [`forms`]: the same questions for nonnegative sesquilinear forms;
//! * [`cli`]: matrix files, verdict reports and the `loewner` command line.

pub mod cli;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod lebesgue;
pub mod psd;
pub mod random;
pub mod selftest;
pub mod strength;
pub mod tolerance;

pub use error::{Error, Result};
pub use lattice::{
    ando_candidate, ando_witness, compress, inf_exists, kadison_witness, spectral_criterion,
    sup_exists, AndoWitness, Compression, InfimumVerdict, KadisonCase, KadisonWitness,
    SupremumVerdict,
};
pub use lebesgue::{
    absolutely_continuous, ac_part, mutually_singular, parallel_sum, scaled_parallel_sum,
    LebesgueParts,
};
pub use psd::{
    comparable, eig_hermitian, factor_ja, is_psd, loewner_leq, pinv_psd, pinv_sqrt_psd,
    range_projector, rank_one, sqrt_psd, CMat, CVec, Comparison, EigDecomp, HermitianMatrix,
    PsdMatrix,
};
pub use strength::{order_witness, strength, strength_dominates, StrengthResult};
pub use tolerance::Tolerance;
