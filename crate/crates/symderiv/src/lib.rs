//! Exact-arithmetic construction of the graded Lie algebras of derivations of
//! free associative and free Lie algebras, together with the sparse rational
//! linear algebra needed to compute their weight-graded abelianizations.
//!
//! Everything is computed over the rationals with no rounding.  Large rank
//! computations run modulo word-sized primes first and are then certified
//! exactly; the two routes must always agree.

pub mod cache;
pub mod cli;
pub mod deriv;
pub mod error;
pub mod free_lie;
pub mod homology;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
