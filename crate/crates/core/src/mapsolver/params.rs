use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LayerSchedule;

/// Solver knobs shared by the matrix-free engines.
///
/// `n_bicg_layers` caps the inner solves (both the h-step system and the
/// g-step prox), `n_dr_layers` fixes how many splitting iterations a run
/// executes. When `bicg_schedule` is set, the h-step replays recorded
/// coefficients instead of computing them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    /// Prior weight in front of both regularizers. Must be positive.
    pub mu: f64,
    /// Splitting step size, constrained to (0, 1).
    pub gamma: f64,
    /// Inner-solve iteration budget per layer.
    pub n_bicg_layers: usize,
    /// Number of splitting iterations per run.
    pub n_dr_layers: usize,
    /// Optional recorded coefficients for the h-step solves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicg_schedule: Option<DrBicgSchedule>,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            mu: 1.0,
            gamma: 0.1,
            n_bicg_layers: 15,
            n_dr_layers: 15,
            bicg_schedule: None,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || self.mu <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive and finite, got {}",
                self.mu
            )));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 || self.gamma >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie strictly inside (0, 1), got {}",
                self.gamma
            )));
        }
        if self.n_bicg_layers == 0 {
            return Err(Error::InvalidParameter(
                "n_bicg_layers must be at least 1".into(),
            ));
        }
        if self.n_dr_layers == 0 {
            return Err(Error::InvalidParameter(
                "n_dr_layers must be at least 1".into(),
            ));
        }
        if let Some(schedule) = &self.bicg_schedule {
            schedule.validate(self.n_bicg_layers, self.n_dr_layers)?;
        }
        Ok(())
    }

    /// Schedule for splitting layer `k`, if any was configured.
    pub fn schedule_for_layer(&self, k: usize) -> Option<&LayerSchedule> {
        self.bicg_schedule.as_ref().map(|s| s.for_layer(k))
    }
}

/// Recorded inner-solve coefficients for a splitting run.
///
/// `Shared` replays the same coefficient sequence at every layer;
/// `PerLayer` carries one sequence per splitting iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrBicgSchedule {
    Shared(LayerSchedule),
    PerLayer(Vec<LayerSchedule>),
}

impl DrBicgSchedule {
    /// Checks internal consistency against the configured layer counts.
    pub fn validate(&self, n_bicg_layers: usize, n_dr_layers: usize) -> Result<()> {
        match self {
            DrBicgSchedule::Shared(s) => {
                s.validate()?;
                if s.len() != n_bicg_layers {
                    return Err(Error::InvalidParameter(format!(
                        "shared schedule has {} entries but n_bicg_layers is {}",
                        s.len(),
                        n_bicg_layers
                    )));
                }
            }
            DrBicgSchedule::PerLayer(per) => {
                if per.len() != n_dr_layers {
                    return Err(Error::InvalidParameter(format!(
                        "per-layer schedule covers {} layers but n_dr_layers is {}",
                        per.len(),
                        n_dr_layers
                    )));
                }
                for (k, s) in per.iter().enumerate() {
                    s.validate()?;
                    if s.len() != n_bicg_layers {
                        return Err(Error::InvalidParameter(format!(
                            "schedule for layer {} has {} entries but n_bicg_layers is {}",
                            k,
                            s.len(),
                            n_bicg_layers
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Coefficient sequence to use at splitting layer `k`.
    ///
    /// `Shared` ignores `k`; `PerLayer` panics if `k` is out of range,
    /// which `validate` rules out for in-range runs.
    pub fn for_layer(&self, k: usize) -> &LayerSchedule {
        match self {
            DrBicgSchedule::Shared(s) => s,
            DrBicgSchedule::PerLayer(per) => &per[k],
        }
    }
}
