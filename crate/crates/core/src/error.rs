use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Several variants are "verified negative" outcomes rather than failures:
/// a computation finished and the answer is no (see [`Error::is_negative_outcome`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,
    #[error("zero input")]
    ZeroInput,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("product window is empty")]
    EmptyResultWindow,
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("precision exhausted: result would carry no known x-adic digits")]
    PrecisionExhausted,
    #[error("operator is zero")]
    ZeroOperator,
    #[error("operator vanishes at stored precision {0}")]
    PrecisionZero(u32),
    #[error("operator {0} does not have a constant principal symbol")]
    NonConstantSymbol(usize),
    #[error("symbol condition fails: characteristic divisors have a common point")]
    SymbolConditionFailed,
    #[error("generators do not commute: pair ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Hilbert function has not stabilized on the window: {0}")]
    NotStabilized(String),
    #[error("no data rank r <= {0} fits the dimension condition")]
    NoRankFits(u32),
    #[error("no Noether normalization pair found within budget")]
    NoNoetherPair,
    #[error("no nonzero conductor element found up to degree {0}")]
    NoConductorFound(u32),
    #[error("number of variables mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// True for outcomes where the computation ran and the answer is negative.
    pub fn is_negative_outcome(&self) -> bool {
        matches!(
            self,
            Error::NotStabilized(_)
                | Error::NoRankFits(_)
                | Error::SymbolConditionFailed
                | Error::NotCommutative(..)
                | Error::NoNoetherPair
                | Error::NoConductorFound(_)
        )
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
