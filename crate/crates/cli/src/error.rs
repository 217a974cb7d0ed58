use thiserror::Error;

/// Failures of the runner, each mapped to a distinct exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("rank decision is ambiguous: {0}")]
    RankAmbiguous(tfpdo::Error),
    #[error("numerical failure: {0}")]
    Numerical(tfpdo::Error),
    #[error("i/o: {0}")]
    Io(String),
}

/// Exit status when every hard assertion passes or fails as expected.
pub const EXIT_OK: u8 = 0;
/// Exit status when a hard assertion fails.
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RANK_AMBIGUOUS: u8 = 3;
/// Any other numerical abort (singular operator, not a frame, ...).
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_IO: u8 = 5;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::RankAmbiguous(_) => EXIT_RANK_AMBIGUOUS,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<tfpdo::Error> for CliError {
    fn from(err: tfpdo::Error) -> Self {
        match err {
            tfpdo::Error::RankAmbiguous { .. } => CliError::RankAmbiguous(err),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
