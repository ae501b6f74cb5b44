use std::path::PathBuf;

/// Errors raised by the numerical kernels, the samplers and the CLI layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} is outside its domain (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error(
        "matching system is numerically degenerate (relative determinant residual {residual:e})"
    )]
    Degenerate { residual: f64 },

    #[error(
        "angular-momentum sum did not converge before l = {l_cap} \
         (last term {last_term:e}, partial sum {partial_sum:e})"
    )]
    Truncation {
        l_cap: u32,
        last_term: f64,
        partial_sum: f64,
    },

    #[error(
        "quadrature did not converge: estimated error {error_estimate:e} above target {target:e}; \
         worst subinterval [{worst_lo}, {worst_hi}] carries {worst_error:e}"
    )]
    Quadrature {
        error_estimate: f64,
        target: f64,
        worst_lo: f64,
        worst_hi: f64,
        worst_error: f64,
    },

    #[error("at least {needed} samples are required, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("unknown ensemble kind '{0}'")]
    UnknownKind(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("failed to parse configuration: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::InvalidConfig { .. } => "invalid_config",
            Error::Degenerate { .. } => "degenerate",
            Error::Truncation { .. } => "truncation",
            Error::Quadrature { .. } => "quadrature",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::UnknownKind(_) => "unknown_kind",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}
