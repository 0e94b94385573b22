pub mod approx;
pub mod arith;
pub mod counting;
mod error;
pub mod geometry;
pub mod sequences;

pub use error::{Error, Result};
