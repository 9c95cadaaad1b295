use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("subsystem dimensions must both be at least 2, got {m}x{n}")]
    InvalidDims { m: u32, n: u32 },

    #[error("diagonal length mismatch: expected {expected}, got {got}")]
    DiagLength { expected: usize, got: usize },

    #[error("anti-diagonal length mismatch: expected {expected}, got {got}")]
    OffdiagLength { expected: usize, got: usize },

    #[error("entry ({row},{col}) is not on the anti-diagonal of an order-{order} matrix")]
    NotAntiDiagonal {
        row: usize,
        col: usize,
        order: usize,
    },

    #[error("dimension mismatch: state is {state_m}x{state_n}, classification is {cls_m}x{cls_n}")]
    DimsMismatch {
        state_m: u32,
        state_n: u32,
        cls_m: u32,
        cls_n: u32,
    },

    #[error("beta function arguments must be >= 1, got ({a},{b})")]
    BetaDomain { a: u64, b: u64 },

    #[error("exponent vector must be non-empty with all entries >= 1")]
    DirichletDomain,

    #[error("argument must lie in [0,1], got {value}")]
    UnitInterval { value: String },

    #[error("cannot add values with different pi powers ({left} vs {right})")]
    PiPowerMismatch { left: u32, right: u32 },

    #[error("sample count must be at least {min}, got {got}")]
    CountTooSmall { min: u64, got: u64 },

    #[error("sweep requires a non-empty list of {what}")]
    EmptySweep { what: &'static str },

    #[error("exact construction: trace must be exactly 1, got {got}")]
    TraceNotOne { got: String },

    #[error("exact construction: diagonal entry {index} is negative")]
    NegativeDiagonal { index: usize },

    #[error("exact construction: positivity violated at anti-diagonal pair {pair}")]
    PairNotPositive { pair: usize },

    #[error("matrix is not hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix order {got} does not match subsystem product {expected}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
