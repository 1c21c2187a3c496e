//! Exact calculus for characteristic classes of admissible-functor images.

pub mod adams;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod functor;
pub mod geometry;
pub mod graded;
pub mod pipeline;
pub mod rational;
pub mod selftest;
pub mod splitting;
pub mod vandermonde;

pub use error::{Error, Result};
