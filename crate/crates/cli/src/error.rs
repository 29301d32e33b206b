use std::fmt;
use std::io;

use lsc_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_ASSERTION: i32 = 5;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Validation(String),
    Core(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Core(e) => match e {
                Error::ConvergenceFailure { .. }
                | Error::QuadratureFailure { .. }
                | Error::Overflow(_)
                | Error::TooLarge { .. } => EXIT_SOLVER,
                Error::NonPositiveHessian { .. } | Error::NotAZero { .. } => EXIT_VALIDATION,
                _ => EXIT_CONFIG,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Validation(m) => write!(f, "assumption check failed: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let solver = CliError::Core(Error::ConvergenceFailure {
            what: "x".into(),
            iterations: 1,
        });
        assert_eq!(solver.exit_code(), EXIT_SOLVER);
        assert_eq!(CliError::Core(Error::ZeroVector).exit_code(), EXIT_CONFIG);
        assert_eq!(CliError::Validation("v".into()).exit_code(), EXIT_VALIDATION);
    }
}
