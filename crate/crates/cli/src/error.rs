use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] pitree::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 usage, 3 resource cap, 4 precondition, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(pitree::Error::Parse(_)) => 2,
            CliError::Core(pitree::Error::CapExceeded { .. }) => 3,
            CliError::Core(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}
