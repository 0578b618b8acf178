//! Numerical verification of continuity bounds for information quantities of
//! quantum channels.
//!
//! All entropic quantities are in bits. Channels are finite-dimensional and
//! carried as minimal Kraus list, Stinespring isometry and Choi matrix.

// Range checks are written `!(x >= lo)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod capacities;
pub mod channels;
pub mod distances;
pub mod ensembles;
pub mod entropic;
pub mod error;
pub mod linalg;
pub mod state;

pub use error::{Error, Result};
