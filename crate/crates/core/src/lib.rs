//! Explicit construction and spectral certification of almost-Ramanujan
//! expander families.
//!
//! A `k`-regular family is obtained from a `(p+1)`-regular LPS Ramanujan
//! family, `p` a prime below `k`, by raising the regularity one step at a
//! time, either by adding a perfect matching of the complement or by taking
//! the Cartesian product with K₂. The crate measures the resulting spectra,
//! evaluates the prime-gap bounds on the second eigenvalue, and emits
//! reproducible JSON certificates.

#[cfg(feature = "lapack")]
extern crate openblas_src;

pub mod bounds;
pub mod error;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod lps;
pub mod matching;
pub mod numtheory;
pub mod par;
pub mod planner;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, Matching};
