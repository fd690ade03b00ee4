use std::path::PathBuf;

use thiserror::Error;

use crate::topology::NetworkIssue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid network:\n{}", format_issues(.0))]
    Network(Vec<NetworkIssue>),

    #[error("unknown branch id {0}")]
    UnknownBranch(u32),

    #[error("time {time} h outside horizon [0, {horizon}] h")]
    TimeOutOfRange { time: f64, horizon: f64 },

    #[error("transition vectors disagree on horizon: {expected} h vs {found} h")]
    HorizonMismatch { expected: f64, found: f64 },

    #[error("cannot aggregate an empty sample set")]
    EmptySamples,

    #[error("baseline value of {index} is zero or not finite")]
    ZeroBaseline { index: &'static str },

    #[error("availability {0} outside [0, 1]")]
    Availability(f64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("invalid scenario:\n{}", .0.join("\n"))]
    Scenario(Vec<String>),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

fn format_issues(issues: &[NetworkIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}
