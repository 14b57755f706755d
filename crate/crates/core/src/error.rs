//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n_max {n_max} exceeds the capacity limit {cap}")]
    CapacityExceeded { n_max: usize, cap: usize },

    #[error("table mismatch: table has k = {table_k}, n_max = {table_n_max}, query needs k = {k}, n = {n}")]
    TableMismatch {
        table_k: u32,
        table_n_max: usize,
        k: u32,
        n: usize,
    },

    #[error("n = {n} exceeds the enumeration guard {guard}")]
    EnumerationGuard { n: usize, guard: usize },

    #[error("index {n} exceeds the Bernoulli index guard {guard}")]
    BernoulliGuard { n: usize, guard: usize },

    #[error("precision {prec} exceeds the guard {guard}")]
    PrecisionGuard { prec: u32, guard: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("k = {k} and t = {t} are not coprime")]
    NotCoprime { k: u32, t: u32 },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("tolerance not achievable within the iteration cap ({cap} terms)")]
    ToleranceUnachievable { cap: usize },

    #[error("truncation budget exceeded ({cap} factors)")]
    TruncationBudget { cap: usize },

    #[error("comparison unresolved at the precision cap for (k={k}, t={t}): pairs {pairs:?}")]
    Unresolved {
        k: u32,
        t: u32,
        pairs: Vec<(u32, u32)>,
    },

    #[error("table cache codec error: {0}")]
    Codec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
