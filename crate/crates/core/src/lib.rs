//! Exact verification toolkit for plane-slice factorization genericity over
//! small finite fields: the relaxed linear-system irreducibility test, the
//! closed-form slice-count bounds, brute-force oracles, and plane-curve
//! smooth-point censuses.

pub mod bertini;
pub mod curves;
pub mod error;
pub mod factortest;
pub mod ff;
pub mod lift;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
