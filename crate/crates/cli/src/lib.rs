//! Library surface of the benchmark runner; the `cba` binary is a thin shell
//! over [`config`] and [`runner`].

pub mod config;
pub mod runner;

/// Errors with the process exit codes the binary maps them to: 2 for
/// configuration problems, 3 for I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn from_core(err: cba_core::Error) -> Self {
        match err {
            cba_core::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}
