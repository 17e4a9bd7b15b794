use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("not p-local: {value} has negative {p}-adic valuation")]
    NotPLocal { value: String, p: u32 },

    #[error("not a {p}-adic unit: {value}")]
    NotUnit { value: String, p: u32 },

    #[error("cannot evaluate negative powers of w at a non-unit ({0})")]
    NegativePowerAtNonUnit(String),

    #[error("precision insufficient: need {needed} digits, have {available}")]
    PrecisionInsufficient { needed: i64, available: i64 },

    #[error("basis solve failed: increase level")]
    BasisSolveFailed,

    #[error("level insufficient for requested precision")]
    LevelInsufficient,

    #[error("samples inconsistent with level")]
    SamplesInconsistent,

    #[error("coaction data inconsistent: {0}")]
    CoactionInconsistent(String),

    #[error("not numerical at p = {p}: value at {witness} is {value}")]
    NotNumerical { p: u32, witness: String, value: String },

    #[error("the Theta family is only defined at p = 2 (got p = {0})")]
    ThetaFamilyNeedsTwo(u32),

    #[error("inexact division by {0}")]
    InexactDivision(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
