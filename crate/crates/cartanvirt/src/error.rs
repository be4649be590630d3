use std::path::PathBuf;

/// Failures before any identity is evaluated; all map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid space spec {spec:?}: {reason}")]
    SpaceSpec { spec: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed space file {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cartanvirt_core::Error),
}

/// Exit status for a completed run.
pub const EXIT_PASS: i32 = 0;
/// Some identity exceeded its tolerance.
pub const EXIT_FAIL: i32 = 1;
/// Usage or configuration error.
pub const EXIT_CONFIG: i32 = 2;
