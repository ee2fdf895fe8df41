use thiserror::Error;

/// Errors raised by the exact p-adic machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("negative valuation: the value is not a p-adic integer")]
    NegativeValuation,
    #[error("seed does not satisfy seed^k = 1 mod p")]
    BadSeed,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("tail bound does not dominate the truncated coefficients")]
    TailNotDominated,
    #[error("series is constant after removing its constant term")]
    ConstantSeries,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("point is not fixed by the map")]
    NotFixed,
    #[error("degenerate quadruple: two of the points coincide")]
    DegenerateQuadruple,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("map is not in the attracting case")]
    NotAttracting,
    #[error("map is not in the indifferent case")]
    NotIndifferent,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("multiplication by m = {0} is not supported (m must be 2 or 3)")]
    UnsupportedM(u32),
    #[error("division by a non-unit")]
    NotAUnit,
    #[error("inseparable reduction")]
    InseparableReduction,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
