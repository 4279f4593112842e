use natmod_core::fincat::ValidationReport;

/// Errors of the file layer and the driver.
#[derive(Debug, thiserror::Error)]
pub enum NatmodError {
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in `{path}`: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("input refers to base {expected} but the given base hashes to {found}")]
    BaseMismatch { expected: String, found: String },
    #[error("search budget exhausted: {0}")]
    Budget(String),
}

impl NatmodError {
    pub fn malformed(e: impl std::fmt::Display) -> Self {
        NatmodError::Malformed(e.to_string())
    }
}

impl From<ValidationReport> for NatmodError {
    fn from(r: ValidationReport) -> Self {
        let v: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
        NatmodError::Malformed(format!("invalid category: {}", v.join("; ")))
    }
}
