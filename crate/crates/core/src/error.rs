use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("group is infinite")]
    Infinite,

    #[error("group of size {size} exceeds the enumeration bound {bound}")]
    TooLarge { size: String, bound: u64 },

    #[error("level {level} exceeds the configured ceiling {ceiling}")]
    LevelCeiling { level: usize, ceiling: usize },

    #[error("field with {size} elements exceeds the resource ceiling {ceiling}")]
    FieldCeiling { size: String, ceiling: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("multiplication by {prime}^{exponent} needs {prime} to be inverted")]
    NegativeTwist { prime: u64, exponent: i64 },

    #[error("maps do not commute: {0}")]
    NonCommuting(String),

    #[error("ind-group has no endomorphism")]
    MissingEndo,

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular curve: discriminant vanishes")]
    SingularCurve,

    #[error("corpus: {0}")]
    Corpus(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the failure is a resource limit rather than a math or usage error.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::LevelCeiling { .. } | Error::FieldCeiling { .. })
    }
}
