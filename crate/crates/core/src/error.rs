use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate ray id {0:?}")]
    DuplicateRay(String),
    #[error("duplicate cone {0:?}")]
    DuplicateCone(String),
    #[error("unknown ray {0:?}")]
    UnknownRay(String),
    #[error("unknown cone {0:?}")]
    UnknownCone(String),
    #[error("cone {cone:?} is missing its face {face:?}")]
    NonClosedUnderFaces { cone: String, face: String },
    #[error("subdivision ray is not primitive (gcd {0})")]
    NonPrimitiveRay(i64),
    #[error("subdivision ray is not in the relative interior of {0:?}")]
    NotInterior(String),
    #[error("cone {0:?} is outside the function's domain")]
    OutsideDomain(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid cell {sigma:?}/{tau:?}")]
    InvalidCell { sigma: String, tau: String },
    #[error("fundamental weight is not balanced at {0:?}")]
    UnbalancedFundamentalClass(String),
    #[error("intersection product is not balanced at {0:?}")]
    UnbalancedProduct(String),
    #[error("complex is not pure dimensional")]
    NotPure,
    #[error("function is not combinatorially principal at {0:?}")]
    NotCombinatoriallyPrincipal(String),
    #[error("morphism is structurally invalid: {0}")]
    StructurallyInvalid(String),
    #[error("morphism has not been certified linear")]
    NotCertified,
    #[error("sample point is not generic: {0}")]
    NonGenericSample(String),
    #[error("n = {0} is outside the supported range 4..=8")]
    OutOfRange(usize),
    #[error("invalid marks: {0}")]
    InvalidMarks(String),
    #[error("bad exponent vector: {0}")]
    BadExponents(String),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

impl From<ParseRationalError> for Error {
    fn from(e: ParseRationalError) -> Self {
        Error::schema("$", e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
