//! Binary projective geometry, additive quaternary codes and strength-3
//! configurations of lines and points.

pub mod code;
pub mod error;
pub mod geometry;
pub mod gf2;
pub mod nmset;
pub mod quantum;

pub use error::{Error, Result};
