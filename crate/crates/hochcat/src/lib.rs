//! Exact-arithmetic computations with Hochschild cochain complexes of small
//! dg categories.
//!
//! The crate realizes, at a chosen truncation, the cochain complexes
//! `C(A)`, `C(X,X')`, `D(X,X')` and their multi-bimodule variants, the cup
//! and brace operations, the block decompositions of upper triangular
//! matrix dg categories, brace-type B-infinity structures with axiom
//! checkers, Gerstenhaber structures on cohomology, and span bicategories
//! over the category of bounded complexes. Every identity is checked as an
//! exact matrix identity over the rationals or a prime field.

pub mod linalg;
pub mod graded;
pub mod dgcat;
pub mod zoo;
pub mod triangular;
pub mod binf;
pub mod spans;
pub mod verify;
pub mod cli;
pub mod hochschild;

mod error;

pub use error::{Error, Result};
pub use linalg::{Field, Scalar, Matrix};
