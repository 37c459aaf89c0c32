//! Graph-regularized image interpolation.
//!
//! The crate reconstructs missing pixels by fusing a fixed base
//! interpolator with two learnable graph priors: a signed directed graph
//! that perturbs the interpolation weights, and a positive undirected graph
//! whose Laplacian denoises the result. Everything reduces to small sparse
//! linear systems solved matrix-free, so the same code paths run both as a
//! classical solver and as an unrolled network with per-layer coefficients.

pub mod error;
pub mod graphmodel;
pub mod imaging;
pub mod linalg;
pub mod mapsolver;
pub mod model;
pub mod pipeline;
pub mod tuner;
pub mod verify;

pub use error::{Error, Result};
