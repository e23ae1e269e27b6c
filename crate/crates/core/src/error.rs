use std::path::PathBuf;
use thiserror::Error;

/// Errors raised by the pure model functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("transmitter and receiver share the same position")]
    CoincidentPositions,
    #[error("gain must be positive, got {0}")]
    NonPositiveGain(f64),
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("sonar coverage is inconsistent: {0}")]
    Coverage(String),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
}

impl DomainError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        DomainError::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Scenario loading failures, one variant per category.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read scenario {path}: {source}")]
    Missing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Syntax(String),
    #[error("invalid scenario: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("tick {tick}: {source}")]
    Tick {
        tick: usize,
        #[source]
        source: DomainError,
    },
    #[error("trace i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace format: {0}")]
    Csv(#[from] csv::Error),
    #[error("summary format: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown export kind `{0}` (expected throughput, bearing, path or rssi)")]
    UnknownExportKind(String),
}

impl SimError {
    /// Process exit status for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(ConfigError::Missing { .. }) => 3,
            SimError::Config(ConfigError::Syntax(_)) => 4,
            SimError::Config(ConfigError::Invalid(_) | ConfigError::UnknownPreset(_)) => 5,
            SimError::Tick { .. } => 6,
            SimError::Io(_) | SimError::Csv(_) | SimError::Json(_) => 7,
            SimError::UnknownExportKind(_) => 8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let errors = [
            SimError::Config(ConfigError::Missing {
                path: "x".into(),
                source: std::io::Error::from(std::io::ErrorKind::NotFound),
            }),
            SimError::Config(ConfigError::Syntax("x".into())),
            SimError::Config(ConfigError::Invalid(vec![])),
            SimError::Tick {
                tick: 1,
                source: DomainError::CoincidentPositions,
            },
            SimError::Io(std::io::Error::from(std::io::ErrorKind::PermissionDenied)),
            SimError::UnknownExportKind("x".into()),
        ];
        let mut codes: Vec<i32> = errors.iter().map(SimError::exit_code).collect();
        assert!(codes.iter().all(|&c| c > 2));
        codes.dedup();
        assert_eq!(codes.len(), errors.len());
    }
}
