use symtomo::TomoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// A numerical check on the result failed (e.g. a state that is not a
    /// valid density operator).
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Tomo(#[from] TomoError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad input, 2 for a failed numerical contract, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) | CliError::Tomo(TomoError::Io(_)) => 3,
            CliError::Tomo(e) if e.is_numerical() => 2,
            CliError::Tomo(_) => 1,
        }
    }
}
