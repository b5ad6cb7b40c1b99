//! Micro-macro decomposition solver for BGK (1D1V) and ES-BGK (2D2V) kinetic equations.

pub mod boundary;
pub mod error;
pub mod gas_state;
pub mod macro1d;
pub mod macro2d;
pub mod mesh;
pub mod micro1d;
pub mod micro2d;
pub mod mms;
pub mod projection;
pub mod runner;

pub use error::{Error, Result};
