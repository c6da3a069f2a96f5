//! Exact arithmetic and experiment harness for semigroup dynamics of integer
//! polynomials over finite fields.

pub mod error;
pub mod ff_core;
pub mod intpoly;
pub mod orbits;
pub mod combinatorics;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
