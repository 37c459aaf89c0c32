use crate::error::{Error, Result};
use crate::graphmodel::FEATURE_DIM;
use crate::mapsolver::DrBicgSchedule;
use crate::model::GsvModel;

/// A tunable scalar inside a model, with its admissible interval.
///
/// Schedule handles address the shared inner-solve coefficient list and
/// only resolve when the model carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handle {
    PerturbationGain,
    SmoothingGain,
    Mu,
    Gamma,
    DStar,
    MetricDiag(usize),
    ScheduleAlpha(usize),
    ScheduleBeta(usize),
}

impl Handle {
    /// The five scalars tuned by default; cheap and the most influential.
    pub fn default_set() -> Vec<Handle> {
        vec![
            Handle::PerturbationGain,
            Handle::SmoothingGain,
            Handle::Mu,
            Handle::Gamma,
            Handle::DStar,
        ]
    }

    /// Default set plus the metric diagonal.
    pub fn extended_set() -> Vec<Handle> {
        let mut set = Handle::default_set();
        set.extend((0..FEATURE_DIM).map(Handle::MetricDiag));
        set
    }

    pub fn name(&self) -> String {
        match self {
            Handle::PerturbationGain => "perturbation_gain".into(),
            Handle::SmoothingGain => "smoothing_gain".into(),
            Handle::Mu => "mu".into(),
            Handle::Gamma => "gamma".into(),
            Handle::DStar => "d_star".into(),
            Handle::MetricDiag(i) => format!("metric_diag[{i}]"),
            Handle::ScheduleAlpha(i) => format!("schedule_alpha[{i}]"),
            Handle::ScheduleBeta(i) => format!("schedule_beta[{i}]"),
        }
    }

    /// Closed interval the parameter may occupy. Gamma stays strictly
    /// inside (0, 1) and mu strictly positive by construction of the
    /// bounds themselves.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Handle::PerturbationGain => (-1.0, 1.0),
            Handle::SmoothingGain => (0.0, 1.0),
            Handle::Mu => (1e-4, 100.0),
            Handle::Gamma => (0.02, 0.98),
            Handle::DStar => (1e-4, 100.0),
            Handle::MetricDiag(_) => (0.0, 10.0),
            Handle::ScheduleAlpha(_) | Handle::ScheduleBeta(_) => (-10.0, 10.0),
        }
    }

    pub fn get(&self, model: &GsvModel) -> Result<f64> {
        match self {
            Handle::PerturbationGain => Ok(model.perturbation_gain),
            Handle::SmoothingGain => Ok(model.smoothing_gain),
            Handle::Mu => Ok(model.solver.mu),
            Handle::Gamma => Ok(model.solver.gamma),
            Handle::DStar => Ok(model.edges.d_star),
            Handle::MetricDiag(i) => {
                check_metric_index(*i)?;
                Ok(model.metric_factor[*i][*i])
            }
            Handle::ScheduleAlpha(i) => schedule_entry(shared_schedule(model)?.0, *i),
            Handle::ScheduleBeta(i) => schedule_entry(shared_schedule(model)?.1, *i),
        }
    }

    /// Writes the parameter, clamping into bounds first.
    pub fn set(&self, model: &mut GsvModel, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cannot set {} to {value}",
                self.name()
            )));
        }
        let (lo, hi) = self.bounds();
        let v = value.clamp(lo, hi);
        match self {
            Handle::PerturbationGain => model.perturbation_gain = v,
            Handle::SmoothingGain => model.smoothing_gain = v,
            Handle::Mu => model.solver.mu = v,
            Handle::Gamma => model.solver.gamma = v,
            Handle::DStar => model.edges.d_star = v,
            Handle::MetricDiag(i) => {
                check_metric_index(*i)?;
                model.metric_factor[*i][*i] = v;
            }
            Handle::ScheduleAlpha(i) => {
                let i = *i;
                schedule_entry(shared_schedule(model)?.0, i)?;
                if let Some(DrBicgSchedule::Shared(s)) = &mut model.solver.bicg_schedule {
                    s.alpha[i] = v;
                }
            }
            Handle::ScheduleBeta(i) => {
                let i = *i;
                schedule_entry(shared_schedule(model)?.1, i)?;
                if let Some(DrBicgSchedule::Shared(s)) = &mut model.solver.bicg_schedule {
                    s.beta[i] = v;
                }
            }
        }
        Ok(())
    }
}

fn check_metric_index(i: usize) -> Result<()> {
    if i >= FEATURE_DIM {
        return Err(Error::InvalidParameter(format!(
            "metric diagonal index {i} out of range (feature dimension {FEATURE_DIM})"
        )));
    }
    Ok(())
}

fn schedule_entry(list: &[f64], i: usize) -> Result<f64> {
    list.get(i).copied().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "schedule index {i} out of range ({} entries)",
            list.len()
        ))
    })
}

fn shared_schedule(model: &GsvModel) -> Result<(&[f64], &[f64])> {
    match &model.solver.bicg_schedule {
        Some(DrBicgSchedule::Shared(s)) => Ok((&s.alpha, &s.beta)),
        Some(DrBicgSchedule::PerLayer(_)) => Err(Error::InvalidParameter(
            "schedule handles need a shared schedule, model has per-layer ones".into(),
        )),
        None => Err(Error::InvalidParameter(
            "schedule handles need a shared schedule, model has none".into(),
        )),
    }
}
