use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sieve limit too small: {0} (need at least 2)")]
    SieveLimitTooSmall(u64),
    #[error("sieve covers primes up to {have}, but {needed} is required")]
    SieveTooSmall { needed: u64, have: u64 },
    #[error("non-prime base: {0}")]
    NonPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent: {prime}^{exponent}")]
    NegativeExponent { prime: u64, exponent: i64 },
    #[error("logarithm of a non-positive value")]
    NonPositive,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("hypothesis p > 3 violated: p = {0}")]
    HypothesisViolated(u64),
    #[error("falsified: {0}")]
    Falsified(Box<Counterexample>),
}

impl Error {
    pub(crate) fn falsified(
        operation: &str,
        parameters: &[(&str, u64)],
        detail: impl Into<String>,
    ) -> Self {
        Error::Falsified(Box::new(Counterexample::new(operation, parameters, detail)))
    }

    pub(crate) fn out_of_range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Error::Falsified(c) => Some(c),
            _ => None,
        }
    }
}

/// Machine-readable record of a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub operation: String,
    pub parameters: Vec<(String, u64)>,
    pub detail: String,
}

impl Counterexample {
    pub fn new(operation: &str, parameters: &[(&str, u64)], detail: impl Into<String>) -> Self {
        Counterexample {
            operation: operation.to_string(),
            parameters: parameters
                .iter()
                .map(|(name, value)| (name.to_string(), *value))
                .collect(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.operation)?;
        for (i, (name, value)) in self.parameters.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        write!(f, "): {}", self.detail)
    }
}
