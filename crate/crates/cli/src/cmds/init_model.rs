use std::path::Path;

use gsv_interp::model::GsvModel;

use crate::failure::Failure;

/// Writes the inert default model: zero gains, identity metric, reference
/// solver settings. A safe starting point for hand edits or tuning.
pub fn init_model(output: &Path) -> Result<(), Failure> {
    GsvModel::default().save(output)?;
    log::info!("wrote default model to {}", output.display());
    Ok(())
}
