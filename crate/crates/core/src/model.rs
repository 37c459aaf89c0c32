//! Serializable model: everything the interpolator learns or exposes to
//! tuning, in one versioned JSON document.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmodel::{EdgeParams, MetricMatrix, FEATURE_DIM};
use crate::mapsolver::SolverParams;

pub const MODEL_VERSION: u32 = 1;

/// Identifies the feature extractor the metric factor was calibrated
/// against. Loading a model with a different tag would silently pair the
/// metric with the wrong feature channels, so it is checked on load.
pub const FEATURE_TAG: &str = "handcrafted-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsvModel {
    pub version: u32,
    pub features: String,
    /// Gain on the signed directed graph, in [-1, 1]. Zero disables it.
    pub perturbation_gain: f64,
    /// Gain on the smoothing Laplacian, in [0, 1]. Zero disables it.
    pub smoothing_gain: f64,
    pub edges: EdgeParams,
    /// Lower-triangular factor of the feature metric, row by row.
    pub metric_factor: Vec<Vec<f64>>,
    pub solver: SolverParams,
}

impl Default for GsvModel {
    /// Inert starting point: both gains zero, identity metric. Running
    /// this model reproduces the base interpolation exactly, which is the
    /// guaranteed-safe initialization tuning starts from.
    fn default() -> Self {
        let metric_factor = (0..FEATURE_DIM)
            .map(|i| {
                (0..FEATURE_DIM)
                    .map(|j| if i == j { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        GsvModel {
            version: MODEL_VERSION,
            features: FEATURE_TAG.to_string(),
            perturbation_gain: 0.0,
            smoothing_gain: 0.0,
            edges: EdgeParams::default(),
            metric_factor,
            solver: SolverParams::default(),
        }
    }
}

impl GsvModel {
    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION {
            return Err(Error::ModelFile(format!(
                "unsupported model version {} (this build reads {MODEL_VERSION})",
                self.version
            )));
        }
        if self.features != FEATURE_TAG {
            return Err(Error::ModelFile(format!(
                "model was built for feature set '{}', this build provides '{FEATURE_TAG}'",
                self.features
            )));
        }
        if !self.perturbation_gain.is_finite()
            || !(-1.0..=1.0).contains(&self.perturbation_gain)
        {
            return Err(Error::ModelFile(format!(
                "perturbation gain must lie in [-1, 1], got {}",
                self.perturbation_gain
            )));
        }
        if !self.smoothing_gain.is_finite() || !(0.0..=1.0).contains(&self.smoothing_gain) {
            return Err(Error::ModelFile(format!(
                "smoothing gain must lie in [0, 1], got {}",
                self.smoothing_gain
            )));
        }
        self.edges.validate()?;
        self.metric()?;
        self.solver.validate()?;
        Ok(())
    }

    /// Materializes the metric factor, validating its shape and
    /// triangular structure.
    pub fn metric(&self) -> Result<MetricMatrix> {
        let k = self.metric_factor.len();
        if k != FEATURE_DIM {
            return Err(Error::ModelFile(format!(
                "metric factor has {k} rows, feature set needs {FEATURE_DIM}"
            )));
        }
        let mut flat = Vec::with_capacity(k * k);
        for (i, row) in self.metric_factor.iter().enumerate() {
            if row.len() != k {
                return Err(Error::ModelFile(format!(
                    "metric factor row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        MetricMatrix::from_factor(k, flat)
    }

    /// Writes the factor back from a metric, keeping the row layout.
    pub fn set_metric(&mut self, metric: &MetricMatrix) {
        let k = metric.k_dim();
        self.metric_factor = (0..k)
            .map(|i| (0..k).map(|j| metric.factor()[i * k + j]).collect())
            .collect();
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::ModelFile(format!("serialization failed: {e}")))?;
        fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<GsvModel> {
        let text = fs::read_to_string(path)?;
        let model: GsvModel = serde_json::from_str(&text).map_err(|e| {
            Error::ModelFile(format!("{} is not a valid model file: {e}", path.display()))
        })?;
        model.validate()?;
        Ok(model)
    }
}
