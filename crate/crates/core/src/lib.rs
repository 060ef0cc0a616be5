//! Exact computations on fat point schemes in projective space: Hilbert
//! functions, degrees of minimal separators, separating sets, and the shifts
//! of the last syzygy module read off the socle of an artinian reduction.

pub mod cischeme;
pub mod corpus;
pub mod error;
pub mod exactlin;
pub mod polyring;
pub mod scheme;
pub mod resolution;
pub mod separator;

pub use error::{Error, Result};
