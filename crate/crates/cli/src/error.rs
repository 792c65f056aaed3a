use std::fmt;

/// Failure of a run, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(bowstate::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<bowstate::Error> for CliError {
    fn from(e: bowstate::Error) -> Self {
        use bowstate::Error as E;
        match e {
            E::Io(io) => CliError::Io(io),
            E::InvalidModel(_)
            | E::InfiniteCoherence
            | E::UnknownKind(_)
            | E::InvalidGrid(_)
            | E::GridTooCoarse(_)
            | E::MissingTau(_)
            | E::OutOfRange(_)
            | E::InvalidScenario(_)
            | E::WrongRegime { .. }
            | E::ZeroVelocity
            | E::Json(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}
