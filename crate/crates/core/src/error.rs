use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("not a counting function: {0}")]
    NotCountingFunction(String),

    #[error("not an indicator fraction (maximum replication {maxrep})")]
    NotIndicator { maxrep: u32 },

    #[error("vector is not a member of the solution monoid")]
    NotMember,

    #[error("no decomposition over the basis exists (basis is incomplete)")]
    Infeasible,

    #[error("budget exhausted ({reason}) after finding {found} elements")]
    BudgetExhausted { reason: String, found: usize },

    #[error("brute-force oracle infeasible: node cap {cap} exceeded")]
    OracleInfeasible { cap: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
