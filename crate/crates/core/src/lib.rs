//! Spectral toolkit for continental-shelf waves on straight and curved coasts.
//!
//! The pencil `omega L - M` is studied on a strip of width `delta` whose
//! coastline has compactly supported curvature. The crate computes the
//! essential band `[-Omega*, Omega*]` from the transversal pencil, the
//! trapping constants of the small-curvature criterion, and Ritz values of
//! the discretized two-dimensional pencil.

pub mod config;
pub mod error;
pub mod essential;
pub mod linalg;
pub mod profiles;
pub mod quadrature;
pub mod report;
pub mod runner;
pub mod spline;
pub mod strip2d;
pub mod transversal;
pub mod trapping;

pub use error::{Error, Result};
