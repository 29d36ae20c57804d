//! Control design and averaged simulation for parallel DC-DC converters
//! feeding a shared DC link.
//!
//! `lti` holds the transfer-function and state-space numerics, `design` the
//! inner current-loop synthesis and the outer-loop analysis objects,
//! `network` the m-converter closed loop (symbolic and simulated), `analysis`
//! the post-processing, and `cli` the library side of the `dclink` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod converter;
pub mod design;
pub mod error;
pub mod lti;
pub mod network;
pub mod scenario;

pub use error::{Error, Result};
