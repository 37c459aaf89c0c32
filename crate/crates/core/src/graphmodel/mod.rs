//! Pixel partitioning, the base interpolator, hand-crafted features, and
//! the two learnable graphs built on top of them.
//!
//! A [`PixelPartition`] splits a patch into observed and missing pixels.
//! [`build_bilinear_theta`] produces the fixed averaging interpolator over
//! that split. Per-pixel features plus a PSD metric turn pixel pairs into
//! scalar affinities, from which two graphs are assembled: a signed
//! directed perturbation connecting observed to missing pixels, and a
//! positive undirected Laplacian over the missing pixels only.

mod edges;
mod features;
mod graphs;
mod metric;
mod partition;
mod theta;

pub use edges::{signed_weight, unsigned_weight, EdgeParams};
pub use features::{extract_features, FeatureSet, PixelSet, FEATURE_DIM};
pub use graphs::{
    build_denoising_laplacian, build_directed_perturbation, gsv_value, DenoisingLaplacian,
    DirectedPerturbation,
};
pub use metric::{feature_distance, MetricMatrix};
pub use partition::{checkerboard_partition, PixelPartition};
pub use theta::{build_bilinear_theta, load_custom_theta, BaseInterpolator, ThetaKind};
