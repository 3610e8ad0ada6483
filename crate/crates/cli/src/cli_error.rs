use std::fmt;

/// Errors surfaced to the shell with distinct exit codes: configuration
/// problems (2), data problems (3), i/o problems (4).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sudo_eval::Error> for CliError {
    fn from(err: sudo_eval::Error) -> Self {
        use sudo_eval::Error as E;
        match &err {
            E::Io { .. } => CliError::Io(err.to_string()),
            E::Csv { source, .. } if matches!(source.kind(), csv::ErrorKind::Io(_)) => {
                CliError::Io(err.to_string())
            }
            E::InvalidIntervals
            | E::InvalidRunConfig(_)
            | E::InvalidProbeConfig(_)
            | E::InvalidSimulationConfig(_)
            | E::InvalidNoiseRate(_)
            | E::InvalidVocabSize
            | E::InvalidThresholdPair(_)
            | E::InvalidStrata(_)
            | E::InvalidClassCount(_) => CliError::Config(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
