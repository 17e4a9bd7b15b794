//! Exact computer algebra for the θ-algebra structure on the p-complete
//! K-theory cooperation algebra K∨₀K.

pub mod arith;
pub mod comodule;
pub mod error;
pub mod expr;
pub mod free;
pub mod kk;
pub mod ko;
pub mod suites;

pub use error::{Error, Result};
