use thiserror::Error;

/// Everything that can go wrong between parsing a curve and printing its zeta function.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("p = 2 is not supported; the characteristic must be an odd prime")]
    EvenPrime,
    #[error("precision exponent must be at least 1, got {0}")]
    BadExponent(i64),
    #[error("{0} is not a unit in the residue ring")]
    NotAUnit(String),
    #[error("exact division impossible: v_p(divisor) = {divisor_val} exceeds v_p(dividend) = {dividend_val}")]
    DivisibilityViolated { dividend_val: u32, divisor_val: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Q must be monic of odd degree 2g+1 (got {0})")]
    EvenDegreeOrNotMonic(String),
    #[error("curve is singular: Q has a repeated root modulo p")]
    SingularCurve,
    #[error("precision assumption violated: need p > (2N-1)(2g+1) = {bound}, got p = {p}")]
    PrecisionAssumptionViolated { p: u64, bound: u128 },
    #[error("Q has degree 1; the curve has genus zero")]
    GenusZero,
    #[error("no unit pivot found while solving for Bezout cofactors")]
    InternalNonUnitPivot,
    #[error("interval too long for the ring: sqrt({k}) + 1 >= p = {p}")]
    IntervalTooLong { k: u64, p: u64 },
    #[error("malformed interval request: {0}")]
    MalformedRequest(String),
    #[error("evaluation shift needs a non-unit abscissa difference")]
    NonUnitAbscissa,
    #[error("valuation invariant failed: {0}")]
    ValuationAssertionFailed(String),
    #[error("precision invariant failed: {0}")]
    InvariantViolated(String),
    #[error("brute-force count too large: p^k = {0} exceeds 10^6")]
    TooLarge(u128),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionAssumptionViolated { .. } => 3,
            Error::DivisibilityViolated { .. }
            | Error::InternalNonUnitPivot
            | Error::NonUnitAbscissa
            | Error::ValuationAssertionFailed(_)
            | Error::InvariantViolated(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
