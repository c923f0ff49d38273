//! Exact values, certificates and structural checks for Ramsey functions of
//! chains of monochromatic sets with nondecreasing diameter.
//!
//! `f(m_1, ..., m_t; r)` is the least `N` such that every `r`-coloring of
//! `[1, N]` contains monochromatic sets `B_1 <_p ... <_p B_t` with
//! `|B_i| = m_i` and `diam(B_1) <= ... <= diam(B_t)`.

pub mod checker;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod formulas;
pub mod lemma;
pub mod report;
pub mod search;

pub use checker::{
    brute_force_exists, exists_solution, has_solution, min_max_feasible, IncrementalState, ProblemSpec, Witness,
};
pub use coloring::{diam, format_run_string, parse_run_string, precedes, Color, Coloring, IntSet};
pub use constructions::{lower_bound_coloring, verify_avoiding, LowerBoundFamily, VerificationReport};
pub use error::{Error, Result};
pub use formulas::{formula_f_mmm2, known_value};
pub use search::{compute_f, enumerate_avoiding, CertificateMode, SearchConfig, SearchResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
