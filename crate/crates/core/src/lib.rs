//! Exact combinatorics and transforms for bi-monotonic independence.
//!
//! All arithmetic is over [`rational::Q`]; series are truncated formal power
//! series in `u = 1/z`, `v = 1/w`.

pub mod convolution;
pub mod cumulants;
pub mod distributions;
pub mod error;
pub mod io;
pub mod limits;
pub mod partitions;
pub mod poly;
pub mod positivity;
pub mod rational;
pub mod reproduce;
pub mod series;
pub mod type2;

pub use error::{Error, Result};
