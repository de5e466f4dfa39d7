//! Spectral bounds for the Neumann Laplacian on convex domains: sharp upper
//! bounds for `D²μ_k`, their one-dimensional weighted limits, and the
//! stability of those bounds under flattening.

pub mod eigen;
pub mod error;
pub mod explicit;
pub mod fem2d;
pub mod geometry;
pub mod harness;
pub mod sparse;
pub mod specfun;
pub mod sturm;

pub use error::{Error, Result};
