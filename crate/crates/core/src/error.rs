use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("{0} is not a prime")]
    NotPrime(i64),
    #[error("q = {q} must differ from p = {p}")]
    SamePrime { p: u64, q: u64 },
    #[error("{a} is not a unit modulo {modulus}")]
    NotUnit { a: i64, modulus: u64 },
    #[error("level {level} exceeds the configured cap {cap}")]
    LevelCap { level: u64, cap: u64 },
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("target level {target} is not a multiple of {level}")]
    NotMultiple { level: u64, target: u64 },
    #[error("element is not rational (non-constant coefficient at degree {0})")]
    NotRational(usize),
    #[error("expected an integer, got {0}")]
    NotInteger(String),
    #[error("expected a finite valuation (value is zero)")]
    InfiniteValuation,
    #[error("closed form requires n + 1 >= m (n = {n}, m = {m})")]
    OutsideClosedForm { n: u32, m: u32 },
    #[error("hypothesis n > m violated (n = {n}, m = {m})")]
    HypothesisViolated { n: u32, m: u32 },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("{0}")]
    Inconsistent(String),
    #[error("need at least two points at or after n = {0}")]
    InsufficientRecords(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
