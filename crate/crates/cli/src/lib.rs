//! Command implementations behind the `gradecs` binary. Every command builds a
//! serializable document; Markdown is rendered from its JSON form.

pub mod classify;
pub mod render;
pub mod report;
pub mod verify;

use std::ops::RangeInclusive;

use gradecs_core::rootdata::TypeLabel;
use thiserror::Error;

pub const SCHEMA_VERSION: &str = "gradecs/v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Md,
    Json,
}

/// "5", "4..6" or "4..=6"; both ends inclusive.
pub fn parse_rank_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad rank range {:?}", s));
    match s.split_once("..") {
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
        Some((a, b)) => {
            let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty rank range {:?}", s));
            }
            Ok(lo..=hi)
        }
    }
}

pub fn parse_type(s: &str) -> Result<TypeLabel, String> {
    s.parse::<TypeLabel>().map_err(|_| format!("unknown type {:?}", s))
}

/// Brute-force bound on |W|, overridable through the environment.
pub fn oracle_bound() -> u64 {
    std::env::var("GRADECS_MAX_WEYL_ORACLE")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .map(|v| v as u64)
        .unwrap_or(gradecs_core::verify::DEFAULT_ORACLE_BOUND)
}

pub fn to_json<T: serde::Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
