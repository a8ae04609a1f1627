//! Exact scalar arithmetic and the sparse linear-algebra kernel.
//!
//! Everything downstream (complexes, Hochschild differentials, span
//! pullbacks) reduces to rank / kernel / solve computations over the
//! rationals or a prime field, so this module is the single place where
//! elimination happens. Pivoting is deterministic (smallest row, then
//! column index) so every basis the crate chooses is reproducible.

mod scalar;
mod matrix;

pub use scalar::{sign, Field, Scalar};
pub use matrix::{pullback_linear, Matrix, Pullback};
