use serde::Serialize;
use selfmetric::io::IoError;
use selfmetric::GeometryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Input(#[from] IoError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::File { .. } => "file",
            CliError::Input(e) => e.kind(),
            CliError::Geometry(GeometryError::OriginNotInterior) => "origin-not-interior",
            CliError::Geometry(GeometryError::NoConvergence { .. }) => "no-convergence",
            CliError::Geometry(GeometryError::Domain(_)) => "domain",
            CliError::Geometry(_) => "geometry",
            CliError::Csv(_) => "csv",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::File { .. } | CliError::Input(_) => 3,
            _ => 4,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorReport {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
            },
        })
        .expect("error report serializes")
    }
}
