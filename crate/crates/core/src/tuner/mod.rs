//! Finite-difference tuning of the model's exposed scalars.
//!
//! The solver stack is deterministic, so central differences on the
//! dataset loss give usable gradients without any autodiff machinery.
//! Training follows the usual mini-batch descent shape with bound
//! clamping, early stopping on a validation split, and an
//! accept-only-improvement rule: the returned model is the best
//! validation scorer seen, never worse than the starting point.

mod dataset;
mod handles;
mod train;

pub use dataset::PatchDataset;
pub use handles::Handle;
pub use train::{
    dataset_loss, fd_gradient, patch_loss, tune, EpochRow, TrainConfig, TuneHistory,
};
