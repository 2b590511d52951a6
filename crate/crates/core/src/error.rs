use std::fmt;
use std::path::PathBuf;

/// One validation problem found in an input artifact.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Finding {
    /// Which artifact the problem was found in (`items`, `distributions`, `predictions`, `join`, ...).
    pub artifact: String,
    /// Record locator: item id, record index or line number.
    pub locator: String,
    pub message: String,
}

impl Finding {
    pub fn new(
        artifact: impl Into<String>,
        locator: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            artifact: artifact.into(),
            locator: locator.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.artifact, self.locator, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: parse error at {locator}: {message}")]
    Parse {
        path: PathBuf,
        locator: String,
        message: String,
    },

    #[error("validation failed with {} finding(s):\n{}", .0.len(), render_findings(.0))]
    Validation(Vec<Finding>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("level {level:?} not present; available levels: {}", .available.join(", "))]
    UnknownLevel {
        level: String,
        available: Vec<String>,
    },

    #[error("undefined recall: no positive (poor) distractors among {0} records")]
    UndefinedRecall(usize),

    #[error("missing reshape parameters for level {0:?}")]
    MissingParams(String),

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("output error: {0}")]
    Output(String),

    #[error("usage: {0}")]
    Usage(String),
}

fn render_findings(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(|f| format!("  {f}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 2 for I/O, environment and usage
    /// failures, 1 for everything else (validation and domain failures).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Validation findings carried by this error, if any.
    pub fn findings(&self) -> Vec<Finding> {
        match self {
            Error::Validation(f) => f.clone(),
            Error::Parse { path, locator, .. } => {
                vec![Finding::new(path.display().to_string(), locator.clone(), self.to_string())]
            }
            other => vec![Finding::new("input", "-", other.to_string())],
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
