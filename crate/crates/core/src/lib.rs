//! Secure distributed matrix multiplication over flexible finite fields.

pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod linalg;
pub mod records;
pub mod schemes;
pub mod simulator;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use linalg::{FieldMatrix, FieldPolynomial, MatrixPolynomial};
