//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while validating raw covariate/reward matrices.
#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("dataset has no rows")]
    Empty,
    #[error("dataset has no covariates")]
    NoCovariates,
    #[error("need at least 2 actions, got {0}")]
    TooFewActions(usize),
    #[error("covariate matrix has {covariate_rows} rows but reward matrix has {reward_rows}")]
    RowCountMismatch {
        covariate_rows: usize,
        reward_rows: usize,
    },
    #[error("{matrix} row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        matrix: &'static str,
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{matrix} entry at row {row}, column {col} is not finite")]
    NonFinite {
        matrix: &'static str,
        row: usize,
        col: usize,
    },
    #[error("dataset has {0} rows, more than the supported maximum of 2^32 - 1")]
    TooManyRows(usize),
}

/// Errors raised by the search entry points.
#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("unit set is empty")]
    EmptyUnitSet,
    #[error("unit index {0} out of range for dataset with {1} rows")]
    UnitOutOfRange(u32, usize),
}

/// Errors raised by the sorted-family split advance.
#[derive(Debug, Error, PartialEq)]
pub enum AdvanceError {
    #[error("new threshold {new} is not above the current threshold {current}")]
    ThresholdNotIncreasing { current: f64, new: f64 },
}

/// Errors raised when loading CSV inputs.
#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Malformed { path: String, source: csv::Error },
    #[error("{path}: expected header {expected:?}, found {found:?}")]
    HeaderMismatch {
        path: String,
        expected: String,
        found: String,
    },
    #[error("{path}: line {line}, column {column}: cannot parse {value:?} as a number")]
    NonNumericCell {
        path: String,
        line: u64,
        column: usize,
        value: String,
    },
    #[error("{path}: file has no data rows")]
    NoRows { path: String },
    #[error("covariate file has {covariate_rows} rows but reward file has {reward_rows}")]
    RowCountMismatch {
        covariate_rows: usize,
        reward_rows: usize,
    },
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Errors raised when parsing a policy tree from JSON.
#[derive(Debug, Error)]
pub enum TreeParseError {
    #[error("invalid tree at {path}: {message}")]
    Schema { path: String, message: String },
}

/// Errors raised by the simulation module.
#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("simulation needs at least 3 covariates, got {0}")]
    TooFewCovariates(usize),
    #[error("simulation needs at least 2 actions, got {0}")]
    TooFewActions(usize),
    #[error("simulation needs at least 1 unit")]
    NoUnits,
    #[error("noise half-width must be non-negative and finite, got {0}")]
    BadNoiseHalfWidth(f64),
    #[error("sequences have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sequences are empty")]
    EmptySequence,
}
