use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument fell outside the domain of the operation.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0}")]
    Degenerate(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("input file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("row {row}, column {column}: cannot parse {cell:?} as a number")]
    NonNumeric {
        row: usize,
        column: usize,
        cell: String,
    },

    #[error("row {row}, column {column}: value {value} is not positive")]
    NonPositive {
        row: usize,
        column: usize,
        value: f64,
    },

    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("column `{column}`: {source}")]
    Column {
        column: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn ensure_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}
