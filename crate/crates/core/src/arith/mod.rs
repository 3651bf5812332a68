//! Exact arithmetic: integer matrices, permutations, Laurent polynomials and
//! rational functions.

pub mod fingerprint;
pub mod matrix;
mod packed;
pub mod perm;
pub mod poly;
pub mod ratfn;

use thiserror::Error;

pub use fingerprint::Fp;
pub use matrix::{extract_sigma, match_columns, IntMatrix};
pub use perm::{all_permutations, Permutation};
pub use poly::{indexed_names, ExponentVector, LaurentPoly};
pub use ratfn::{substitute, RationalFn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("variable-context mismatch: {left} vs {right} variables")]
    ContextMismatch { left: usize, right: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(usize),
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not invertible")]
    Singular,
    #[error("images do not form a bijection")]
    NotABijection,
    #[error("parse error: {0}")]
    Parse(String),
}
