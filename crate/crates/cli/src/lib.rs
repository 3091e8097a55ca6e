//! Library side of the `congestion` binary: configuration parsing, command
//! dispatch and deterministic output.

// Negated comparisons are how domain checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use config::{Command, ConfigError, RunConfig};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Failure of a CLI run, mapped to an exit code by [`CliError::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// A parameter was rejected before any solver ran.
    #[error("invalid parameter: {0}")]
    Invalid(congestion::Error),
    #[error("solver failed: {0}")]
    Solver(congestion::Error),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    /// 2 for malformed or invalid configuration, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Invalid(_) => 2,
            CliError::Solver(_) | CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }

    /// Machine-readable error tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(ConfigError::Parse(_)) => "malformed_config",
            CliError::Config(ConfigError::CommandMismatch { .. }) => "command_mismatch",
            CliError::Invalid(e) | CliError::Solver(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::VerifyFailed(_) => "verify_failed",
        }
    }

    /// `{"error": kind, "message": text}` as written to stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

/// Everything that determines a run's output; its hash tags every file.
#[derive(Serialize)]
struct Effective<'a> {
    #[serde(flatten)]
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Parses the configuration, runs `command` and writes its outputs into
/// `out_dir`. The seed only affects `verify`.
pub fn run(
    command: Command,
    config_text: Option<&str>,
    out_dir: &Path,
    seed: u64,
) -> Result<Vec<PathBuf>, CliError> {
    let config = RunConfig::parse(command, config_text)?;
    let effective = Effective {
        config: &config,
        seed: (command == Command::Verify).then_some(seed),
    };
    let hash = output::config_hash(&effective);
    commands::execute(&config, &hash, seed, out_dir)
}
