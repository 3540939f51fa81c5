//! Exact arithmetic for deciding whether integer matrices are of Frobenius
//! type and for telling apart the two-dimensional continued fractions of
//! small-norm hyperbolic matrices.

pub mod arith;
pub mod census;
pub mod commutant;
pub mod error;
pub mod forms;
pub mod frobenius;
pub mod lattice;
pub mod parallel;
pub mod repro;
pub mod sail;
pub mod solver;

pub use arith::{CharCubic, IntMatrix};
pub use error::{Error, Result};
