//! Output plumbing: result emission, machine-readable errors, exit codes.

use anharmonic::Error;
use std::io::Write;
use std::path::PathBuf;

/// Exit codes: 0 success, 1 verification failure, 2 usage error,
/// 3 numerical error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Either a core error or a CLI-level usage problem.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_usage() => EXIT_USAGE,
            CliError::Core(_) => EXIT_NUMERICAL,
        }
    }

    /// `{"error":{"kind":...,"message":...}}` on stderr.
    pub fn report(&self) {
        let (kind, message) = match self {
            CliError::Usage(m) => ("Usage", m.clone()),
            CliError::Core(e) => (e.kind(), e.to_string()),
        };
        eprintln!(
            "{{\"error\":{{\"kind\":\"{kind}\",\"message\":\"{}\"}}}}",
            message.replace('\\', "\\\\").replace('"', "\\\"")
        );
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Write to the path or stdout.
pub fn emit(payload: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .and_then(|_| {
                    if payload.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| CliError::usage(format!("cannot write stdout: {e}")))
        }
    }
}

/// Run a command body and translate errors into exit codes.
pub fn run(body: impl FnOnce() -> CliResult<u8>) -> u8 {
    match body() {
        Ok(code) => code,
        Err(e) => {
            e.report();
            e.exit_code()
        }
    }
}
