//! Finite-field matrices over GF(2^r) for diffusion-layer analysis.
//!
//! The crate builds Hadamard, circulant and circulant-like (Type-I, Type-II)
//! matrices, decides MDS / NMDS / involutory / orthogonal properties exactly,
//! and runs exhaustive census campaigns over the 4x4 and 2x2 classes.

pub mod error;
pub mod field;
pub mod io;
pub mod matrix;
pub mod parallel;
pub mod predicates;
pub mod census;
pub mod tables;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
pub use matrix::{Matrix, Type1Domain};
pub use predicates::{PredicateReport, Property, Witness};
