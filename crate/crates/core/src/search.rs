//! Exact values of `f` by exhaustive depth-first extension of avoiding
//! colorings.
//!
//! A prefix is extended one position at a time and abandoned as soon as the
//! incremental checker reports a solution; containment of a solution is
//! preserved under extension, so the longest surviving prefix has length
//! `f - 1`. With symmetry reduction on, only colorings whose colors first
//! appear in increasing order are visited (one per color-permutation orbit).
//! Prefixes of the split depth become independent subtrees handed to a
//! rayon pool; results are merged and sorted, so every value and certificate
//! list is independent of the worker count.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::{exists_solution, IncrementalState, ProblemSpec};
use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::formulas::known_value;

pub const DEFAULT_SPLIT_DEPTH: usize = 12;

const BUDGET_FLUSH: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    ValueOnly,
    OneCertificate,
    AllCertificates,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Longest prefix explored. `None` means "closed form + 2", which
    /// requires a known closed form.
    pub n_cap: Option<usize>,
    pub mode: CertificateMode,
    pub symmetry_reduction: bool,
    pub worker_count: usize,
    pub split_depth: usize,
    /// Abort after this many expanded nodes.
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_cap: None,
            mode: CertificateMode::OneCertificate,
            symmetry_reduction: true,
            worker_count: 1,
            split_depth: DEFAULT_SPLIT_DEPTH,
            node_budget: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub max_depth: usize,
    pub wall_time_secs: f64,
    pub worker_count: usize,
    pub subtrees: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Exact(usize),
    /// An avoiding coloring of length `n_cap` exists, so `f > n_cap`.
    Inconclusive { n_cap: usize },
}

/// An avoiding coloring and the size of its color-permutation orbit
/// (1 when symmetry reduction is off).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Certificate {
    pub coloring: Coloring,
    pub orbit_size: u64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub spec: ProblemSpec,
    pub outcome: Outcome,
    pub certificates: Vec<Certificate>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn f_value(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Exact(f) => Some(f),
            Outcome::Inconclusive { .. } => None,
        }
    }

    /// Sum of orbit sizes, i.e. the number of certificates before reduction.
    pub fn expanded_certificate_count(&self) -> u64 {
        self.certificates.iter().map(|c| c.orbit_size).sum()
    }
}

/// `r! / (r - k)!`: the orbit size of a coloring that uses `k` of `r` colors.
pub fn orbit_size(num_colors: u8, used: usize) -> u64 {
    let r = num_colors as u64;
    (0..used as u64).map(|k| r - k).product()
}

struct Shared {
    nodes: AtomicU64,
    best_depth: AtomicUsize,
    abort: AtomicBool,
    budget: Option<u64>,
}

#[derive(Default)]
struct Subtree {
    max_len: usize,
    certs: Vec<Vec<Color>>,
    nodes: u64,
}

struct Explorer<'a> {
    num_colors: u8,
    symmetry: bool,
    mode: CertificateMode,
    cap: usize,
    /// Prefixes of this length are handed off instead of explored.
    split_at: Option<usize>,
    shared: &'a Shared,
    out: Subtree,
    pending: u64,
    stubs: Vec<Vec<Color>>,
}

impl Explorer<'_> {
    fn record(&mut self, state: &IncrementalState) {
        let len = state.len();
        if len > self.out.max_len {
            self.out.max_len = len;
            self.out.certs.clear();
            self.shared.best_depth.fetch_max(len, Ordering::Relaxed);
        }
        if len == self.out.max_len {
            match self.mode {
                CertificateMode::ValueOnly => {}
                CertificateMode::OneCertificate => {
                    if self.out.certs.is_empty() {
                        self.out.certs.push(state.colors().to_vec());
                    }
                }
                CertificateMode::AllCertificates => self.out.certs.push(state.colors().to_vec()),
            }
        }
    }

    fn tick(&mut self) {
        self.out.nodes += 1;
        self.pending += 1;
        if self.pending == BUDGET_FLUSH {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if self.shared.budget.is_some_and(|b| total > b) {
            self.shared.abort.store(true, Ordering::Relaxed);
        }
    }

    fn color_limit(&self, state: &IncrementalState) -> Color {
        if self.symmetry {
            state
                .max_color_used()
                .map_or(1, |c| (c + 2).min(self.num_colors))
        } else {
            self.num_colors
        }
    }

    fn explore(&mut self, state: &mut IncrementalState) {
        if self.shared.abort.load(Ordering::Relaxed) {
            return;
        }
        if Some(state.len()) == self.split_at {
            self.stubs.push(state.colors().to_vec());
            return;
        }
        self.record(state);
        if state.len() >= self.cap {
            return;
        }
        for color in 0..self.color_limit(state) {
            self.tick();
            let solved = state.push(color).expect("search extends only avoiding prefixes");
            if !solved {
                self.explore(state);
            }
            state.pop();
        }
    }
}

fn run_subtree(
    spec: &ProblemSpec,
    config: &SearchConfig,
    cap: usize,
    shared: &Shared,
    prefix: &[Color],
) -> Subtree {
    let mut state = IncrementalState::new(spec);
    for &c in prefix {
        let solved = state.push(c).expect("stub colors are in range");
        debug_assert!(!solved);
    }
    let mut ex = Explorer {
        num_colors: spec.num_colors(),
        symmetry: config.symmetry_reduction,
        mode: config.mode,
        cap,
        split_at: None,
        shared,
        out: Subtree::default(),
        pending: 0,
        stubs: Vec::new(),
    };
    ex.explore(&mut state);
    ex.flush();
    ex.out
}

/// Exhaustive search up to `cap`. Returns the longest avoiding length found
/// (capped), its certificates in lexicographic order, and the stats.
fn search_longest(
    spec: &ProblemSpec,
    config: &SearchConfig,
    cap: usize,
) -> Result<(usize, Vec<Vec<Color>>, SearchStats)> {
    if config.worker_count == 0 {
        return Err(Error::InvalidConfig("worker_count must be positive".into()));
    }
    let started = Instant::now();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        best_depth: AtomicUsize::new(0),
        abort: AtomicBool::new(false),
        budget: config.node_budget,
    };

    // Sequential top of the tree down to the split depth.
    let split_at = (config.split_depth > 0 && config.split_depth <= cap).then_some(config.split_depth);
    let mut top = Explorer {
        num_colors: spec.num_colors(),
        symmetry: config.symmetry_reduction,
        mode: config.mode,
        cap,
        split_at,
        shared: &shared,
        out: Subtree::default(),
        pending: 0,
        stubs: Vec::new(),
    };
    top.explore(&mut IncrementalState::new(spec));
    top.flush();
    let stubs = std::mem::take(&mut top.stubs);
    let mut parts = vec![top.out];

    if !stubs.is_empty() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.worker_count)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
        let results: Vec<Subtree> = pool.install(|| {
            stubs
                .par_iter()
                .map(|prefix| run_subtree(spec, config, cap, &shared, prefix))
                .collect()
        });
        parts.extend(results);
    }

    let max_len = parts.iter().map(|p| p.max_len).max().unwrap_or(0);
    let nodes = parts.iter().map(|p| p.nodes).sum();
    let mut certs: Vec<Vec<Color>> = parts
        .into_iter()
        .filter(|p| p.max_len == max_len)
        .flat_map(|p| p.certs)
        .collect();
    certs.sort();
    certs.dedup();
    if config.mode == CertificateMode::OneCertificate {
        certs.truncate(1);
    }
    let stats = SearchStats {
        nodes_expanded: nodes,
        max_depth: shared.best_depth.load(Ordering::Relaxed).max(max_len),
        wall_time_secs: started.elapsed().as_secs_f64(),
        worker_count: config.worker_count,
        subtrees: stubs.len(),
    };
    if shared.abort.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            budget: config.node_budget.unwrap_or(0),
            stats,
        });
    }
    Ok((max_len, certs, stats))
}

fn certificates_from(spec: &ProblemSpec, symmetry: bool, raw: Vec<Vec<Color>>) -> Result<Vec<Certificate>> {
    raw.into_iter()
        .map(|colors| {
            let coloring = Coloring::new(colors, spec.num_colors())?;
            if let Some(w) = exists_solution(&coloring, spec) {
                return Err(Error::ContractViolation(format!(
                    "certificate {coloring} contains the solution {w}"
                )));
            }
            let orbit = if symmetry {
                orbit_size(spec.num_colors(), coloring.colors_used())
            } else {
                1
            };
            Ok(Certificate {
                coloring,
                orbit_size: orbit,
            })
        })
        .collect()
}

/// Computes `f(spec)` exactly, or reports that `f > n_cap`.
///
/// When the spec has a closed form, any disagreement between it and the
/// search is returned as [`Error::FormulaContradicted`].
pub fn compute_f(spec: &ProblemSpec, config: &SearchConfig) -> Result<SearchResult> {
    let known = known_value(spec);
    let cap = match (config.n_cap, known) {
        (Some(cap), _) => cap,
        (None, Some(v)) => v + 2,
        (None, None) => {
            return Err(Error::InvalidConfig(format!(
                "no closed form for {spec}; an explicit n_cap is required"
            )))
        }
    };
    if cap == 0 {
        return Err(Error::InvalidConfig("n_cap must be at least 1".into()));
    }
    let (max_len, raw, stats) = search_longest(spec, config, cap)?;
    let certificates = certificates_from(spec, config.symmetry_reduction, raw)?;
    let outcome = if max_len >= cap {
        Outcome::Inconclusive { n_cap: cap }
    } else {
        Outcome::Exact(max_len + 1)
    };
    if let Some(expected) = known {
        let contradicted = match outcome {
            Outcome::Exact(f) => f != expected,
            Outcome::Inconclusive { n_cap } => n_cap >= expected,
        };
        if contradicted {
            let found = match outcome {
                Outcome::Exact(f) => format!("f = {f}"),
                Outcome::Inconclusive { n_cap } => format!("f > {n_cap}"),
            };
            return Err(Error::FormulaContradicted {
                spec: spec.to_string(),
                expected: expected as u32,
                found,
                witness: certificates.first().map(|c| c.coloring.to_run_string()),
            });
        }
    }
    Ok(SearchResult {
        spec: spec.clone(),
        outcome,
        certificates,
        stats,
    })
}

/// Avoiding colorings of `[1, length]` in lexicographic order, at most `limit`.
/// With `symmetry_reduction`, one representative per color-permutation orbit.
pub fn enumerate_avoiding(
    spec: &ProblemSpec,
    length: usize,
    limit: usize,
    symmetry_reduction: bool,
) -> Vec<Certificate> {
    fn walk(
        state: &mut IncrementalState,
        spec: &ProblemSpec,
        length: usize,
        limit: usize,
        symmetry: bool,
        out: &mut Vec<Certificate>,
    ) {
        if out.len() >= limit {
            return;
        }
        if state.len() == length {
            let coloring = Coloring::new(state.colors().to_vec(), spec.num_colors()).expect("valid colors");
            let orbit = if symmetry {
                orbit_size(spec.num_colors(), coloring.colors_used())
            } else {
                1
            };
            out.push(Certificate {
                coloring,
                orbit_size: orbit,
            });
            return;
        }
        let top = if symmetry {
            state.max_color_used().map_or(1, |c| (c + 2).min(spec.num_colors()))
        } else {
            spec.num_colors()
        };
        for color in 0..top {
            if !state.push(color).expect("in range") {
                walk(state, spec, length, limit, symmetry, out);
            }
            state.pop();
        }
    }
    let mut out = Vec::new();
    if length == 0 || limit == 0 {
        return out;
    }
    walk(
        &mut IncrementalState::new(spec),
        spec,
        length,
        limit,
        symmetry_reduction,
        &mut out,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::has_solution;

    fn spec(sizes: &[usize], r: u8) -> ProblemSpec {
        ProblemSpec::new(sizes.to_vec(), r, false).unwrap()
    }

    #[test]
    fn small_exact_values() {
        let cfg = SearchConfig::default();
        assert_eq!(compute_f(&spec(&[2, 2], 2), &cfg).unwrap().f_value(), Some(7));
        assert_eq!(compute_f(&spec(&[2, 2, 2], 2), &cfg).unwrap().f_value(), Some(12));
        assert_eq!(compute_f(&spec(&[3, 3], 2), &cfg).unwrap().f_value(), Some(12));
    }

    #[test]
    fn certificates_have_length_f_minus_one_and_avoid() {
        let s = spec(&[2, 2, 2], 2);
        let cfg = SearchConfig {
            mode: CertificateMode::AllCertificates,
            ..SearchConfig::default()
        };
        let res = compute_f(&s, &cfg).unwrap();
        assert!(!res.certificates.is_empty());
        for cert in &res.certificates {
            assert_eq!(cert.coloring.len(), 11);
            assert!(!has_solution(&cert.coloring, &s));
            assert_eq!(cert.coloring.color(1), 0);
        }
        let reference: Coloring = "10101101110".parse().unwrap();
        let rep = reference.complement().unwrap();
        assert!(res.certificates.iter().any(|c| c.coloring == rep));
    }

    #[test]
    fn cap_reached_is_inconclusive() {
        let s = spec(&[2, 3], 2);
        let cfg = SearchConfig {
            n_cap: Some(5),
            ..SearchConfig::default()
        };
        let res = compute_f(&s, &cfg).unwrap();
        assert_eq!(res.outcome, Outcome::Inconclusive { n_cap: 5 });
        assert_eq!(res.certificates[0].coloring.len(), 5);
    }

    #[test]
    fn cap_below_known_value_is_inconclusive_not_contradiction() {
        let s = spec(&[2, 2, 2], 2);
        let cfg = SearchConfig {
            n_cap: Some(8),
            ..SearchConfig::default()
        };
        assert_eq!(compute_f(&s, &cfg).unwrap().outcome, Outcome::Inconclusive { n_cap: 8 });
    }

    #[test]
    fn missing_cap_without_closed_form_is_rejected() {
        assert!(matches!(
            compute_f(&spec(&[2, 3], 2), &SearchConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let s = spec(&[3, 3, 3], 2);
        let cfg = SearchConfig {
            node_budget: Some(10_000),
            split_depth: 4,
            worker_count: 2,
            ..SearchConfig::default()
        };
        match compute_f(&s, &cfg) {
            Err(Error::BudgetExceeded { stats, .. }) => assert!(stats.nodes_expanded > 10_000),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(2, 1), 2);
        assert_eq!(orbit_size(2, 2), 2);
        assert_eq!(orbit_size(4, 2), 12);
        assert_eq!(orbit_size(4, 4), 24);
    }

    #[test]
    fn enumerate_matches_brute_force_count() {
        let s = spec(&[2, 2], 2);
        let all = enumerate_avoiding(&s, 6, usize::MAX, false);
        let brute = (0u32..64)
            .filter(|mask| {
                let c = Coloring::new((0..6).map(|k| (mask >> (5 - k) & 1) as u8).collect(), 2).unwrap();
                !has_solution(&c, &s)
            })
            .count();
        assert!(brute > 0);
        assert_eq!(all.len(), brute);
        assert!(all.windows(2).all(|w| w[0].coloring < w[1].coloring));
        let reduced = enumerate_avoiding(&s, 6, usize::MAX, true);
        assert_eq!(reduced.iter().map(|c| c.orbit_size).sum::<u64>() as usize, brute);
        assert!(enumerate_avoiding(&s, 7, 1, false).is_empty());
    }

    #[test]
    fn enumerate_respects_limit() {
        let s = spec(&[2, 2, 2], 2);
        assert_eq!(enumerate_avoiding(&s, 5, 3, false).len(), 3);
        let reference: Coloring = "10101101110".parse().unwrap();
        assert!(enumerate_avoiding(&s, 11, usize::MAX, false).iter().any(|c| c.coloring == reference));
    }
}
