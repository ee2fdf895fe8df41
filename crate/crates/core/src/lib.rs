//! Exact p-adic arithmetic dynamics.

pub mod cli;
pub mod error;
pub mod family;
pub mod ff;
pub mod itlog;
pub mod lattes;
pub mod newton;
pub mod poly;
pub mod ratmap;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use poly::{BiPoly, ExactPoly};
pub use scalar::{CappedPadic, ExactScalar, LogRadius, Polarity, Valuation};
