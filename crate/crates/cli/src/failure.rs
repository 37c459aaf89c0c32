use gsv_interp::Error;

/// A command failure carrying its process exit code: 2 for bad input,
/// 1 for runtime trouble after inputs were accepted.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Runtime(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            // Malformed files, bad parameters, shape mismatches: the user
            // can fix these by changing the invocation.
            Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidConstruction(_)
            | Error::ModelFile(_)
            | Error::DimensionMismatch { .. }
            | Error::Io(_) => Failure::Input(e.to_string()),
            // Solver-side failures on accepted input.
            Error::SingularMatrix { .. }
            | Error::Breakdown { .. }
            | Error::IndefiniteOperator { .. }
            | Error::Diverged { .. }
            | Error::DrLayer { .. }
            | Error::Patch { .. } => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}
