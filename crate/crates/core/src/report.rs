//! JSON records emitted by the command-line tool.
//!
//! Every command prints one [`Envelope`]:
//! `{command, spec, result, stats, version}`. Run-dependent numbers live only
//! in `stats`, so two runs that differ only in worker count produce identical
//! `result` blocks.

use serde::{Deserialize, Serialize};

use crate::checker::ProblemSpec;
use crate::search::{Outcome, SearchResult, SearchStats};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    pub spec: Option<ProblemSpec>,
    pub result: T,
    pub stats: Option<SearchStats>,
    pub version: String,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, spec: Option<ProblemSpec>, result: T, stats: Option<SearchStats>) -> Self {
        Envelope {
            command: command.to_string(),
            spec,
            result,
            stats,
            version: crate::VERSION.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconclusive {
    /// An avoiding coloring of this length was found, so `f > n_cap`.
    pub n_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub spec: ProblemSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inconclusive: Option<Inconclusive>,
    pub known_value: Option<usize>,
    /// Run-length strings, sorted lexicographically by color sequence.
    pub certificates: Vec<String>,
    pub orbit_sizes: Vec<u64>,
}

impl SearchReport {
    pub fn from_result(res: &SearchResult) -> Self {
        let (f_value, inconclusive) = match res.outcome {
            Outcome::Exact(f) => (Some(f), None),
            Outcome::Inconclusive { n_cap } => (None, Some(Inconclusive { n_cap })),
        };
        SearchReport {
            spec: res.spec.clone(),
            f_value,
            inconclusive,
            known_value: crate::formulas::known_value(&res.spec),
            certificates: res.certificates.iter().map(|c| c.coloring.to_run_string()).collect(),
            orbit_sizes: res.certificates.iter().map(|c| c.orbit_size).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: usize,
    pub spec: ProblemSpec,
    pub closed_form: usize,
    pub computed: Option<usize>,
    /// Set when the search stopped at its cap or budget.
    pub note: Option<String>,
    pub agrees: Option<bool>,
}
