use std::path::PathBuf;

use serde_json::{json, Value};

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] twinfield_core::Error),
    #[error("{message}")]
    Degenerate { message: String, energy: f64, threshold_speed: Option<f64> },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {source}")]
    Json { context: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{failed} of {total} checks failed: {names}")]
    ChecksFailed { failed: usize, total: usize, names: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> &'static str {
        use twinfield_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::UnphysicalSpeed(_) => "UnphysicalSpeed",
                E::NotUnitDirection(_) => "NotUnitDirection",
                E::InvalidMass(_) => "InvalidMass",
                E::BelowMassShell { .. } => "BelowMassShell",
                E::DegenerateBoost { .. } => "DegenerateBoost",
                E::IncommensurateMode { .. } => "IncommensurateMode",
                E::InsufficientGrid { .. } => "InsufficientGrid",
                E::EmptyPacket => "EmptyPacket",
                E::TruncationOverflow { .. } => "TruncationOverflow",
                E::SingularPoint { .. } => "SingularPoint",
                E::NonConvergent { .. } => "NonConvergent",
                E::OffShellLeg { .. } => "OffShellLeg",
                E::InvalidProcess(_) => "InvalidProcess",
                E::InvalidParameter(_) => "InvalidParameter",
            },
            CliError::Degenerate { .. } => "DegenerateBoost",
            CliError::Config(_) => "Config",
            CliError::Usage(_) => "Usage",
            CliError::Io { .. } => "Io",
            CliError::Json { .. } => "Json",
            CliError::Csv { .. } => "Csv",
            CliError::ChecksFailed { .. } => "ChecksFailed",
        }
    }

    /// 1: a check failed; 2: bad input; 3: the computation itself failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Config(_) | CliError::Usage(_) | CliError::Json { .. } => 2,
            CliError::Core(twinfield_core::Error::NonConvergent { .. }) | CliError::Io { .. } | CliError::Csv { .. } => 3,
            _ => 2,
        }
    }

    /// `{"error": {"kind", "message", ...details}}`.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        let details = match self {
            CliError::Core(twinfield_core::Error::OffShellLeg { index, virtuality, expected }) => {
                json!({ "leg": index, "virtuality": virtuality, "expected": expected })
            }
            CliError::Core(twinfield_core::Error::DegenerateBoost { energy }) => json!({ "energy": energy }),
            CliError::Degenerate { energy, threshold_speed, .. } => json!({ "energy": energy, "threshold_speed": threshold_speed }),
            CliError::ChecksFailed { failed, total, .. } => json!({ "failed": failed, "total": total }),
            _ => Value::Null,
        };
        if !details.is_null() {
            body["details"] = details;
        }
        json!({ "error": body })
    }
}
