//! Class-group torsion experiments for quadratic fields.

pub mod arith;
pub mod classgroup;
pub mod cli;
pub mod error;
pub mod eta;
pub mod exponents;
pub mod fit;
pub mod moments;
pub mod poly;
pub mod polycount;
pub mod splitprimes;

pub use error::{Error, Result};
