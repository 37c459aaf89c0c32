use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("singular matrix: no usable pivot in column {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("bicg breakdown at iteration {iteration}: {quantity} vanished")]
    Breakdown {
        iteration: usize,
        quantity: &'static str,
    },

    #[error("operator is not positive definite: non-positive curvature at iteration {iteration}")]
    IndefiniteOperator { iteration: usize },

    #[error("solver diverged at iteration {iteration}: residual is not finite")]
    Diverged { iteration: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("dr layer {layer}: {source}")]
    DrLayer {
        layer: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("patch at ({row}, {col}): {source}")]
    Patch {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model file: {0}")]
    ModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            actual,
        }
    }

    pub(crate) fn at_dr_layer(self, layer: usize) -> Self {
        Error::DrLayer {
            layer,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_patch(self, row: usize, col: usize) -> Self {
        Error::Patch {
            row,
            col,
            source: Box::new(self),
        }
    }
}
