//! Error types. Each error carries a stable machine-readable code (the
//! kebab-case string returned by `code()`) so reports and tests can match
//! on failure kinds without parsing display text.

use crate::reorder::ReorderStep;
use crate::value::Setting;
use thiserror::Error;

/// Errors from the elementary value and correlation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueError {
    #[error("empty-sample: correlation requires a non-empty pair sequence")]
    EmptySample,
    #[error("out-of-bounds: |{0}| > 1")]
    OutOfBounds(f64),
    #[error("invalid-setting: index {0} not in 1..=4")]
    InvalidSetting(u8),
    #[error("non-sequential-index: row {position} carries trial index {found}")]
    NonSequentialIndex { position: usize, found: usize },
}

impl ValueError {
    pub fn code(&self) -> &'static str {
        match self {
            ValueError::EmptySample => "empty-sample",
            ValueError::OutOfBounds(_) => "out-of-bounds",
            ValueError::InvalidSetting(_) => "invalid-setting",
            ValueError::NonSequentialIndex { .. } => "non-sequential-index",
        }
    }
}

/// Errors raised by model constructors and model contract methods.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid-strategy: {0}")]
    InvalidStrategy(String),
    #[error("locality-breach-in-local-model: {0}")]
    LocalityBreach(String),
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::InvalidStrategy(_) => "invalid-strategy",
            ModelError::LocalityBreach(_) => "locality-breach-in-local-model",
            ModelError::InvalidParameter(_) => "invalid-parameter",
        }
    }
}

/// Errors from experiment execution and table-level correlation queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("setting-leakage: model emitted a message after the setting choice in trial {trial}")]
    SettingLeakage { trial: usize },
    #[error("contract-breach: model declared dichotomy but emitted {value} in trial {trial}")]
    ContractBreach { trial: usize, value: f64 },
    #[error("missing-setting: {0}")]
    MissingSetting(Setting),
    #[error("empty-sample: table has no rows")]
    EmptySample,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

impl RunError {
    pub fn code(&self) -> &'static str {
        match self {
            RunError::InvalidParameter(_) => "invalid-parameter",
            RunError::SettingLeakage { .. } => "setting-leakage",
            RunError::ContractBreach { .. } => "contract-breach",
            RunError::MissingSetting(_) => "missing-setting",
            RunError::EmptySample => "empty-sample",
            RunError::Model(e) => e.code(),
            RunError::Value(e) => e.code(),
        }
    }
}

/// Errors from the reordering engine and the chain verifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReorderError {
    #[error("pi-mismatch: step {step:?} left {discrepancy} unmatched rows (tolerance {tolerance})")]
    PiMismatch {
        step: ReorderStep,
        discrepancy: usize,
        tolerance: usize,
    },
    #[error(
        "oi-mismatch: {d_plus} unmatched rows in the +1 subtable, {d_minus} in the -1 subtable \
         (tolerance {tolerance})"
    )]
    OiMismatch {
        d_plus: usize,
        d_minus: usize,
        tolerance: usize,
    },
    #[error("requires-dichotomic: reordering is defined for dichotomic tables only")]
    RequiresDichotomic,
    #[error("pi-steps-not-applied: B'2 and B'4 disagree on {disagreement} rows")]
    PiStepsNotApplied { disagreement: usize },
    #[error("unbounded-value: |{0}| > 1 in joint table")]
    UnboundedValue(f64),
}

impl ReorderError {
    pub fn code(&self) -> &'static str {
        match self {
            ReorderError::PiMismatch { .. } => "pi-mismatch",
            ReorderError::OiMismatch { .. } => "oi-mismatch",
            ReorderError::RequiresDichotomic => "requires-dichotomic",
            ReorderError::PiStepsNotApplied { .. } => "pi-steps-not-applied",
            ReorderError::UnboundedValue(_) => "unbounded-value",
        }
    }
}

/// Errors from the finite-sample statistics module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatError {
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("length-mismatch: columns have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("insufficient-iterations: {0} < 100")]
    InsufficientIterations(usize),
    #[error("empty-subtable: {0}")]
    EmptySubtable(String),
    #[error(transparent)]
    Run(#[from] RunError),
}

impl StatError {
    pub fn code(&self) -> &'static str {
        match self {
            StatError::InvalidParameter(_) => "invalid-parameter",
            StatError::LengthMismatch(..) => "length-mismatch",
            StatError::InsufficientIterations(_) => "insufficient-iterations",
            StatError::EmptySubtable(_) => "empty-subtable",
            StatError::Run(e) => e.code(),
        }
    }
}

/// Errors from CSV import of outcome tables.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("csv-defect at row {row}, column {column}: {message}")]
pub struct CsvError {
    /// 1-based line number (the header is line 1).
    pub row: usize,
    /// Column name, or the 1-based column position when the name is unknown.
    pub column: String,
    pub message: String,
}

impl CsvError {
    pub fn new(row: usize, column: impl Into<String>, message: impl Into<String>) -> Self {
        CsvError {
            row,
            column: column.into(),
            message: message.into(),
        }
    }
}
