use std::fmt;

/// One field-level config problem: the offending key path plus a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    /// Mathematical domain violation (non-finite or out-of-range argument).
    #[error("domain error: {0}")]
    Domain(String),

    /// Scenario or scheme configuration violates an invariant.
    #[error("config error: {}", format_diagnostics(.0))]
    Config(Vec<Diagnostic>),

    /// Channel vector is identically zero where a direction is required.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),

    /// Stacked user channels are rank-deficient; the trial must be resampled.
    #[error("singular channel: zero-forcing leakage exceeds tolerance")]
    SingularChannel,

    /// Resampling exceeded the 1% budget; the channel model is misconfigured.
    #[error("resample budget exceeded: {resampled} resamples over {trials} trials")]
    ResampleBudget { resampled: u64, trials: u64 },

    #[error("malformed table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        SimError::Config(vec![Diagnostic::new(path, message)])
    }

    /// Config diagnostics carried by this error, if any.
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            SimError::Config(d) => d,
            _ => &[],
        }
    }
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
