//! Permutation polynomials over F_{q^n} built from coordinate maps along a
//! dual pair of bases, with their compositional inverses, fiber-extension
//! constructions and trace-shifted families G(x) + γTr(H(x)).
//!
//! All maps are dense tables over desk-scale fields, so every structural
//! claim can be checked exhaustively.

pub mod bases;
pub mod catalog;
pub mod error;
pub mod field;
pub mod funcspace;
mod linalg;
mod poly;

pub use error::{Error, Result};
pub use field::{ArithOp, Elem, Field, Scalar, ScalarField};
pub mod pp_struct;
pub mod report;
pub mod serial;
pub mod trace_shift;
