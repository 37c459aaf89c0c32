use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{mse, GrayImage};
use crate::model::GsvModel;
use crate::pipeline::{interpolate_patch, Mode};
use crate::tuner::{Handle, PatchDataset};

/// Mini-batch descent settings. The defaults are the reference recipe:
/// step 1e-3, batches of 8, stop after 5 epochs without validation
/// improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience: usize,
    pub fd_epsilon: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            batch_size: 8,
            patience: 5,
            fd_epsilon: 1e-4,
            max_epochs: 50,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch size must be at least 1".into()));
        }
        if self.patience == 0 {
            return Err(Error::InvalidParameter("patience must be at least 1".into()));
        }
        // The probe stencil shifts into [lo+eps, hi-eps]; the narrowest
        // handle interval has width 1, so eps must stay below half of it.
        if !(self.fd_epsilon.is_finite() && self.fd_epsilon > 0.0 && self.fd_epsilon < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "difference step must lie in (0, 0.5), got {}",
                self.fd_epsilon
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParameter("max epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Reconstruction error of one ground-truth patch: the patch is masked
/// with the checkerboard, interpolated, and compared against the truth.
/// Observed pixels pass through the solver untouched, so only the missing
/// half contributes.
pub fn patch_loss(model: &GsvModel, truth: &GrayImage, mode: Mode) -> Result<f64> {
    let out = interpolate_patch(truth, (0, 0), model, mode)?;
    mse(&out, truth)
}

/// Mean patch loss over a set of ground-truth patches.
pub fn dataset_loss(model: &GsvModel, patches: &[GrayImage], mode: Mode) -> Result<f64> {
    if patches.is_empty() {
        return Err(Error::InvalidParameter(
            "loss over an empty patch set is undefined".into(),
        ));
    }
    let mut total = 0.0;
    for p in patches {
        total += patch_loss(model, p, mode)?;
    }
    Ok(total / patches.len() as f64)
}

/// Central-difference gradient of the dataset loss with respect to each
/// handle. Probes at a handle's bound are shifted inward so both stencil
/// points stay feasible; the model is left unchanged.
pub fn fd_gradient(
    model: &GsvModel,
    handles: &[Handle],
    patches: &[GrayImage],
    mode: Mode,
    eps: f64,
) -> Result<Vec<f64>> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "difference step must be positive and finite, got {eps}"
        )));
    }
    let mut probe = model.clone();
    let mut grad = Vec::with_capacity(handles.len());
    for h in handles {
        let theta = h.get(&probe)?;
        let (lo, hi) = h.bounds();
        let center = theta.clamp(lo + eps, hi - eps);
        h.set(&mut probe, center + eps)?;
        let plus = dataset_loss(&probe, patches, mode)?;
        h.set(&mut probe, center - eps)?;
        let minus = dataset_loss(&probe, patches, mode)?;
        h.set(&mut probe, theta)?;
        grad.push((plus - minus) / (2.0 * eps));
    }
    Ok(grad)
}

/// One epoch's losses after its descent steps. Epoch 0 records the
/// starting model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRow {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
}

/// Loss trajectory of one tuning run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TuneHistory {
    pub rows: Vec<EpochRow>,
}

impl TuneHistory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_mse,val_mse\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.epoch, r.train_mse, r.val_mse));
        }
        out
    }
}

/// Mini-batch finite-difference descent on the full interpolation path.
/// Returns the model with the best validation loss seen, so the result is
/// never worse than the start, together with the loss history. Stops
/// early once validation has not improved for `patience` epochs.
pub fn tune(
    start: &GsvModel,
    data: &PatchDataset,
    handles: &[Handle],
    config: &TrainConfig,
) -> Result<(GsvModel, TuneHistory)> {
    config.validate()?;
    start.validate()?;
    if handles.is_empty() {
        return Err(Error::InvalidParameter(
            "tuning needs at least one handle".into(),
        ));
    }
    let mode = Mode::Dr;
    let mut current = start.clone();
    let mut best = start.clone();
    let mut best_val = dataset_loss(&best, data.val(), mode)?;
    let mut history = TuneHistory::default();
    history.rows.push(EpochRow {
        epoch: 0,
        train_mse: dataset_loss(&best, data.train(), mode)?,
        val_mse: best_val,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut stall = 0usize;
    for epoch in 1..=config.max_epochs {
        let mut pool = data.train().to_vec();
        pool.shuffle(&mut rng);
        for batch in pool.chunks(config.batch_size) {
            let grad = fd_gradient(&current, handles, batch, mode, config.fd_epsilon)?;
            for (h, g) in handles.iter().zip(&grad) {
                let theta = h.get(&current)?;
                // set() clamps into the handle's bounds.
                h.set(&mut current, theta - config.learning_rate * g)?;
            }
        }
        let train_mse = dataset_loss(&current, data.train(), mode)?;
        let val_mse = dataset_loss(&current, data.val(), mode)?;
        history.rows.push(EpochRow {
            epoch,
            train_mse,
            val_mse,
        });
        if val_mse < best_val {
            best_val = val_mse;
            best = current.clone();
            stall = 0;
        } else {
            stall += 1;
            if stall >= config.patience {
                break;
            }
        }
    }
    Ok((best, history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Flat 0.5 with seeded noise: smoothing the estimates toward their
    /// neighbors reduces the reconstruction error, so the smoothing gain
    /// has a descent direction at zero.
    fn noisy_flat(n: usize, seed: u64) -> GrayImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = (0..n * n).map(|_| 0.5 + rng.gen_range(-0.05..0.05)).collect();
        GrayImage::new(n, n, pixels).unwrap()
    }

    fn noisy_set(count: usize, n: usize) -> Vec<GrayImage> {
        (0..count).map(|i| noisy_flat(n, 100 + i as u64)).collect()
    }

    #[test]
    fn defaults_match_reference_recipe() {
        let c = TrainConfig::default();
        assert_eq!(c.learning_rate, 1e-3);
        assert_eq!(c.batch_size, 8);
        assert_eq!(c.patience, 5);
        c.validate().unwrap();
    }

    #[test]
    fn config_rejections() {
        let mut c = TrainConfig::default();
        c.learning_rate = 0.0;
        assert!(c.validate().is_err());
        let mut c = TrainConfig::default();
        c.batch_size = 0;
        assert!(c.validate().is_err());
        let mut c = TrainConfig::default();
        c.fd_epsilon = 0.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_deserializes_with_partial_fields() {
        let c: TrainConfig = serde_json::from_str(r#"{"batch_size": 4}"#).unwrap();
        assert_eq!(c.batch_size, 4);
        assert_eq!(c.patience, 5);
        let bad = serde_json::from_str::<TrainConfig>(r#"{"momentum": 0.9}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn inert_model_loss_is_tiny_on_constant_patch() {
        let model = GsvModel::default();
        let truth = GrayImage::constant(8, 8, 0.35).unwrap();
        let loss = patch_loss(&model, &truth, Mode::Dr).unwrap();
        assert!(loss <= 1e-24, "constant patch loss {loss}");
    }

    #[test]
    fn smoothing_gain_descends_on_noisy_flat_patches() {
        let model = GsvModel::default();
        let patches = noisy_set(6, 8);
        let grad = fd_gradient(
            &model,
            &[Handle::SmoothingGain],
            &patches,
            Mode::Dr,
            1e-4,
        )
        .unwrap();
        assert!(
            grad[0] < -1e-5,
            "smoothing gradient should be clearly negative, got {}",
            grad[0]
        );
    }

    #[test]
    fn fd_gradient_leaves_model_unchanged() {
        let mut model = GsvModel::default();
        model.smoothing_gain = 0.3;
        let before = serde_json::to_string(&model).unwrap();
        let patches = noisy_set(2, 6);
        fd_gradient(
            &model,
            &Handle::default_set(),
            &patches,
            Mode::Dr,
            1e-4,
        )
        .unwrap();
        assert_eq!(serde_json::to_string(&model).unwrap(), before);
    }

    #[test]
    fn tune_never_returns_a_worse_model() {
        let data = PatchDataset::split(noisy_set(8, 8), 0.25, 1).unwrap();
        let start = GsvModel::default();
        let config = TrainConfig {
            learning_rate: 5.0,
            max_epochs: 3,
            ..TrainConfig::default()
        };
        let before = dataset_loss(&start, data.val(), Mode::Dr).unwrap();
        let (tuned, history) = tune(&start, &data, &[Handle::SmoothingGain], &config).unwrap();
        let after = dataset_loss(&tuned, data.val(), Mode::Dr).unwrap();
        assert!(after <= before, "tuned val {after} vs start {before}");
        assert_eq!(history.rows[0].epoch, 0);
        assert!((history.rows[0].val_mse - before).abs() <= 1e-18);
        assert!(history.rows.len() >= 2);
    }

    #[test]
    fn tune_moves_smoothing_gain_up_on_denoisable_set() {
        let data = PatchDataset::split(noisy_set(8, 8), 0.25, 1).unwrap();
        let start = GsvModel::default();
        let config = TrainConfig {
            learning_rate: 5.0,
            max_epochs: 4,
            ..TrainConfig::default()
        };
        let (tuned, _) = tune(&start, &data, &[Handle::SmoothingGain], &config).unwrap();
        assert!(
            tuned.smoothing_gain > 0.0,
            "expected positive smoothing gain, got {}",
            tuned.smoothing_gain
        );
    }

    #[test]
    fn history_csv_round_trips_shape() {
        let h = TuneHistory {
            rows: vec![
                EpochRow {
                    epoch: 0,
                    train_mse: 0.5,
                    val_mse: 0.25,
                },
                EpochRow {
                    epoch: 1,
                    train_mse: 0.125,
                    val_mse: 0.1,
                },
            ],
        };
        let csv = h.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("epoch,train_mse,val_mse"));
        assert_eq!(lines.next(), Some("0,0.5,0.25"));
        assert_eq!(lines.next(), Some("1,0.125,0.1"));
        assert_eq!(lines.next(), None);
    }
}
