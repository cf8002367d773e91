//! Certified nilpotent generating pairs for `sl_n` over exact fields.
//!
//! Given a nonzero nilpotent matrix `X` over `Q` (or, best effort, over a
//! large prime field), [`construct::nilpotent_partner`] builds a nilpotent
//! `Y` and a [`construct::GeneratorCertificate`] showing that `X` and `Y`
//! generate the whole of `sl_n` as a Lie algebra. Generation is certified
//! by an exact closure computation in [`closure`].
//!
//! [`gallery`] reproduces a set of worked examples: explicit generating
//! pairs, the odd/even dichotomy for the cyclic shift pair together with
//! its invariant-form obstruction, and an exhaustive search showing that
//! `E_12` has no nilpotent partner in `sl_3(F_2)`.

pub mod cli;
pub mod closure;
pub mod construct;
pub mod error;
pub mod field;
pub mod gallery;
pub mod matrix;

pub use closure::{generated_subalgebra, generates_sln, ClosureBasis};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::{Matrix, SimilarityWitness};
