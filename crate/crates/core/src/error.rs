use thiserror::Error;

use crate::search::SearchStats;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at offset {offset} in token `{token}`: {reason}")]
    Parse {
        token: String,
        offset: usize,
        reason: String,
    },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("color {color} has only {available} element(s) in the interval, {required} required")]
    NotFound {
        color: u8,
        available: usize,
        required: usize,
    },

    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),

    #[error("invalid search config: {0}")]
    InvalidConfig(String),

    #[error("coloring uses {found} colors but the problem spec expects {expected}")]
    ColorCountMismatch { expected: u8, found: u8 },

    #[error("brute-force oracle refuses N = {n} (cap {cap})")]
    OracleCap { n: usize, cap: usize },

    #[error("incremental checker contract violated: {0}")]
    ContractViolation(String),

    #[error(
        "FORMULA CONTRADICTED for {spec}: closed form gives {expected}, search found {found}"
    )]
    FormulaContradicted {
        spec: String,
        expected: u32,
        found: String,
        witness: Option<String>,
    },

    #[error("node budget of {budget} exceeded after {} nodes", stats.nodes_expanded)]
    BudgetExceeded { budget: u64, stats: SearchStats },

    #[error("LEMMA VIOLATION ({lemma}) on coloring {coloring}: {detail}")]
    LemmaViolation {
        lemma: &'static str,
        coloring: String,
        detail: String,
    },
}
