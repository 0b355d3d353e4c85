//! Numerical laboratory for low-lying zero statistics of symmetric-power
//! families: exact Kloosterman/Bessel/trace-formula arithmetic, the
//! Chebyshev-Hecke eigenvalue algebra, partition combinatorics,
//! Katz-Sarnak density kernels and Haar random-matrix Monte Carlo.

pub mod arith;
pub mod chebyshev;
pub mod cli;
pub mod deltasym;
pub mod kernels;
pub mod partitions;
pub(crate) mod quad;
pub mod rmt;
pub mod testfn;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("missing Hecke eigenvalue for prime {0}")]
    MissingPrime(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("size guard violated: {0}")]
    SizeGuard(String),
    #[error("truncation tolerance {requested:e} unreachable within c <= {c_limit}; achievable: {achievable:e}")]
    TailBudget {
        requested: f64,
        achievable: f64,
        c_limit: u64,
    },
    #[error("eigenphase pairing failed: {0}")]
    PairingFailure(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
