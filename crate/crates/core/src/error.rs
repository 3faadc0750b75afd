use thiserror::Error;

use crate::field::Field;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine.
///
/// [`Error::Hypothesis`] is kept separate from the other variants so that
/// callers can tell "a standing assumption does not hold for this input"
/// apart from malformed data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mixed fields: {0} and {1}")]
    MixedField(Field, Field),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("operation needs a finite field")]
    InfiniteField,
    #[error("enumeration cap exceeded: {needed} candidates, cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),
}
