use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("malformed decimal literal {text:?}: {reason}")]
    MalformedDecimal { text: String, reason: &'static str },

    #[error("composition syntax error at byte {offset}: {message}")]
    CompositionSyntax { offset: usize, message: String },

    #[error("n = {n} exceeds the sieve limit {limit}")]
    SieveLimit { n: u64, limit: u64 },

    #[error("no prime at or below {0}")]
    NoPrimeBelow(u64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact evaluation of n = {n}, r = {r} exceeds the cost threshold {threshold}")]
    CostExceeded { n: u64, r: usize, threshold: u64 },

    #[error("largest prime {p} <= n - r + 1 does not exceed n/2 (n = {n})")]
    PrimeTooSmall { p: u64, n: u64 },

    #[error("table data: line {line}: {message}")]
    TableData { line: usize, message: String },
}
