use std::fmt;

use thiserror::Error;

/// Which of the three T-decodability conditions a syndrome failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FailureFlags {
    /// `dim <FE> = dim F * dim E` does not hold.
    pub product_rank: bool,
    /// `dim (F1^-1 S ∩ F2^-1 S) = dim E` does not hold.
    pub intersection: bool,
    /// The syndrome does not generate `<FE>` together with `<FT>`.
    pub generation: bool,
}

impl FailureFlags {
    pub fn any(&self) -> bool {
        self.product_rank || self.intersection || self.generation
    }
}

impl fmt::Display for FailureFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.product_rank {
            parts.push("(i) product rank");
        }
        if self.intersection {
            parts.push("(ii) intersection");
        }
        if self.generation {
            parts.push("(iii) generation");
        }
        if parts.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("polynomial is reducible")]
    Reducible,
    #[error("basis is not linearly independent")]
    DependentBasis,
    #[error("cannot invert zero")]
    ZeroInverse,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("instance too large for exhaustive enumeration")]
    TooLarge,
    #[error("gave up after {0} attempts")]
    ResourceExhausted(usize),
    #[error("decoding failure: {0}")]
    DecodingFailure(FailureFlags),
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("invalid key: {0}")]
    InvalidKey(String),
}

pub type Result<T> = std::result::Result<T, Error>;
