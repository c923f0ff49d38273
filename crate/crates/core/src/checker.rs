//! Deciding whether a coloring contains a solution chain
//! `B_1 <_p B_2 <_p ... <_p B_t` of monochromatic sets with `|B_i| = m_i`
//! and nondecreasing (or, in strict mode, increasing) diameters.
//!
//! Everything rests on one observation: a monochromatic `m`-set with minimum
//! `i`, maximum `j` and color `k` exists iff `i` and `j` are colored `k` and
//! `[i, j]` holds at least `m` elements of color `k`. A set is therefore
//! described by its endpoints, and the middle is filled with the earliest
//! same-colored positions.
//!
//! The forward pass keeps, per stage `s`, the function
//! `best[s][e]` = least `diam(B_s)` over valid partial chains `B_1..B_s` with
//! `max(B_s) <= e`. It is nonincreasing in `e`, so its breakpoints are exactly
//! the Pareto frontier of `(end, diameter)` pairs. Appending one position only
//! appends one entry per stage, which makes the state cheap to extend and to
//! roll back during a depth-first search.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring, IntSet};
use crate::error::{Error, Result};

const INF: u32 = u32::MAX;

/// Largest `N` the brute-force oracle accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    sizes: Vec<usize>,
    num_colors: u8,
    strict: bool,
}

impl ProblemSpec {
    pub fn new(sizes: Vec<usize>, num_colors: u8, strict: bool) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSpec("at least one set size is required".into()));
        }
        if let Some(m) = sizes.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidSpec(format!("set sizes must be at least 2, got {m}")));
        }
        if sizes.iter().any(|&m| m > u32::MAX as usize / 4) {
            return Err(Error::InvalidSpec("set size too large".into()));
        }
        if num_colors < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 colors, got {num_colors}"
            )));
        }
        Ok(ProblemSpec {
            sizes,
            num_colors,
            strict,
        })
    }

    /// `t` copies of `m` with `r` colors, nonstrict.
    pub fn uniform(m: usize, t: usize, num_colors: u8) -> Result<Self> {
        Self::new(vec![m; t], num_colors, false)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn t(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_colors(&self) -> u8 {
        self.num_colors
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    /// The common size when every `m_i` is equal.
    pub fn diagonal_size(&self) -> Option<usize> {
        let m = self.sizes[0];
        self.sizes.iter().all(|&x| x == m).then_some(m)
    }

    fn step(&self) -> u32 {
        self.strict as u32
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(|m| m.to_string()).collect();
        let star = if self.strict { "*" } else { "" };
        write!(f, "p{star}({};{})", sizes.join(","), self.num_colors)
    }
}

/// An ordered chain of monochromatic sets certifying a solution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub sets: Vec<IntSet>,
    pub colors: Vec<Color>,
}

/// Serialized form of a [`Witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub sets: Vec<Vec<usize>>,
    pub colors: Vec<Color>,
    pub diams: Vec<usize>,
}

impl Witness {
    pub fn diams(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.diam().unwrap_or(0)).collect()
    }

    pub fn to_record(&self) -> WitnessRecord {
        WitnessRecord {
            sets: self.sets.iter().map(|s| s.elements().to_vec()).collect(),
            colors: self.colors.clone(),
            diams: self.diams(),
        }
    }

    /// Re-checks conditions (a)-(d) against `c` straight from the definitions.
    pub fn validate(&self, c: &Coloring, spec: &ProblemSpec) -> std::result::Result<(), String> {
        if self.sets.len() != spec.t() || self.colors.len() != spec.t() {
            return Err(format!(
                "chain has {} sets and {} colors, expected {}",
                self.sets.len(),
                self.colors.len(),
                spec.t()
            ));
        }
        for (k, set) in self.sets.iter().enumerate() {
            let el = set.elements();
            if el.len() != spec.sizes()[k] {
                return Err(format!("B{} has {} elements, expected {}", k + 1, el.len(), spec.sizes()[k]));
            }
            if el.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("B{} is not strictly increasing", k + 1));
            }
            if el.iter().any(|&p| p < 1 || p > c.len()) {
                return Err(format!("B{} leaves [1, {}]", k + 1, c.len()));
            }
            if el.iter().any(|&p| c.color(p) != self.colors[k]) {
                return Err(format!("B{} is not monochromatic of color {}", k + 1, self.colors[k]));
            }
        }
        for k in 1..self.sets.len() {
            let (a, b) = (&self.sets[k - 1], &self.sets[k]);
            if a.max() >= b.min() {
                return Err(format!("B{} does not precede B{}", k, k + 1));
            }
            let (da, db) = (a.max().unwrap() - a.min().unwrap(), b.max().unwrap() - b.min().unwrap());
            if da > db || (spec.strict() && da == db) {
                return Err(format!("diam(B{k}) = {da} vs diam(B{}) = {db} breaks the order", k + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (set, color)) in self.sets.iter().zip(&self.colors).enumerate() {
            if k > 0 {
                f.write_str(" <_p ")?;
            }
            write!(f, "{set}[c={color},d={}]", set.diam().unwrap_or(0))?;
        }
        Ok(())
    }
}

/// Per-color occurrence lists plus each position's index in its list.
struct Occurrences {
    lists: Vec<Vec<usize>>,
    index: Vec<usize>,
}

impl Occurrences {
    fn new(c: &Coloring) -> Self {
        let r = c.as_slice().iter().copied().max().unwrap_or(0) as usize + 1;
        let mut lists = vec![Vec::new(); r.max(c.num_colors() as usize)];
        let mut index = vec![0; c.len() + 1];
        for p in 1..=c.len() {
            let list = &mut lists[c.color(p) as usize];
            index[p] = list.len();
            list.push(p);
        }
        Occurrences { lists, index }
    }
}

/// Smallest `j` such that some monochromatic `m`-set `B ⊆ [start, N]` has
/// `diam(B) >= min_diam` and `max(B) = j`, with the least diameter reachable
/// at that `j`.
pub fn min_max_feasible(c: &Coloring, start: usize, min_diam: usize, m: usize) -> Option<(usize, usize)> {
    if start == 0 || m < 1 {
        return None;
    }
    let occ = Occurrences::new(c);
    (start..=c.len()).find_map(|j| {
        let list = &occ.lists[c.color(j) as usize];
        let k = occ.index[j];
        if k + 1 < m || j < min_diam {
            return None;
        }
        let head = &list[..=k + 1 - m];
        let bound = j - min_diam;
        let idx = head.partition_point(|&x| x <= bound);
        if idx == 0 {
            return None;
        }
        let i = head[idx - 1];
        (i >= start).then_some((j, j - i))
    })
}

/// Forward frontier over a growing prefix, for depth-first search.
#[derive(Clone, Debug)]
pub struct IncrementalState {
    sizes: Vec<usize>,
    strict: bool,
    num_colors: u8,
    colors: Vec<Color>,
    occ: Vec<Vec<u32>>,
    best: Vec<Vec<u32>>,
    solved: bool,
}

impl IncrementalState {
    /// The state of the empty prefix.
    pub fn new(spec: &ProblemSpec) -> Self {
        IncrementalState {
            sizes: spec.sizes().to_vec(),
            strict: spec.strict(),
            num_colors: spec.num_colors(),
            colors: Vec::new(),
            occ: vec![Vec::new(); spec.num_colors() as usize],
            best: vec![vec![INF]; spec.t()],
            solved: false,
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Whether the current prefix contains a solution.
    pub fn is_solved(&self) -> bool {
        self.solved
    }

    /// Highest color index used so far, if any.
    pub fn max_color_used(&self) -> Option<Color> {
        self.occ.iter().rposition(|o| !o.is_empty()).map(|c| c as Color)
    }

    /// Least diameter of `B_{stage+1}` over valid partial chains ending by `end`.
    pub fn best_diam(&self, stage: usize, end: usize) -> Option<usize> {
        let v = *self.best.get(stage)?.get(end)?;
        (v != INF).then_some(v as usize)
    }

    /// Breakpoints `(end, diameter)` of a stage's frontier.
    pub fn frontier(&self, stage: usize) -> Vec<(usize, usize)> {
        let row = &self.best[stage];
        (1..row.len())
            .filter(|&e| row[e] != INF && row[e] < row[e - 1])
            .map(|e| (e, row[e] as usize))
            .collect()
    }

    /// Appends `color` at position `len + 1` and reports whether the
    /// extended prefix contains a solution.
    pub fn push(&mut self, color: Color) -> Result<bool> {
        if self.solved {
            return Err(Error::ContractViolation(
                "extending a prefix that already contains a solution".into(),
            ));
        }
        if color >= self.num_colors {
            return Err(Error::ContractViolation(format!(
                "color {color} outside [0, {}]",
                self.num_colors - 1
            )));
        }
        let j = self.colors.len() as u32 + 1;
        self.colors.push(color);
        let list = &mut self.occ[color as usize];
        list.push(j);
        let list = &self.occ[color as usize];
        let cnt = list.len();
        let step = self.strict as u32;
        for s in 0..self.sizes.len() {
            let m = self.sizes[s];
            let mut g = INF;
            if cnt >= m {
                if s == 0 {
                    g = j - list[cnt - m];
                } else {
                    let prev_row = &self.best[s - 1];
                    for &i in list[..=cnt - m].iter().rev() {
                        let prev = prev_row[i as usize - 1];
                        if prev == INF {
                            break;
                        }
                        if j - i >= prev + step {
                            g = j - i;
                            break;
                        }
                    }
                }
            }
            let row = &mut self.best[s];
            let carried = row[j as usize - 1];
            row.push(carried.min(g));
        }
        self.solved = *self.best.last().unwrap().last().unwrap() != INF;
        Ok(self.solved)
    }

    /// Removes the last position.
    pub fn pop(&mut self) -> Option<Color> {
        let color = self.colors.pop()?;
        self.occ[color as usize].pop();
        for row in &mut self.best {
            row.pop();
        }
        self.solved = *self.best.last().unwrap().last().unwrap() != INF;
        Some(color)
    }

    /// Functional form of [`push`](Self::push).
    pub fn extend(&self, color: Color) -> Result<(IncrementalState, bool)> {
        let mut next = self.clone();
        let flag = next.push(color)?;
        Ok((next, flag))
    }
}

/// Whether any solution exists, without building a witness.
pub fn has_solution(c: &Coloring, spec: &ProblemSpec) -> bool {
    let r = spec.num_colors().max(c.num_colors());
    let widened;
    let spec = if r != spec.num_colors() {
        widened = ProblemSpec::new(spec.sizes().to_vec(), r, spec.strict()).expect("valid");
        &widened
    } else {
        spec
    };
    let mut state = IncrementalState::new(spec);
    for &color in c.as_slice() {
        if state.push(color).expect("colors fit the widened spec") {
            return true;
        }
    }
    false
}

/// Returns the canonical witness if the coloring contains a solution.
///
/// The canonical chain minimizes `(max B_1, diam B_1, max B_2, diam B_2, ...)`
/// lexicographically; with both endpoints fixed the color is fixed too, and
/// the interior of each set is the earliest same-colored positions.
pub fn exists_solution(c: &Coloring, spec: &ProblemSpec) -> Option<Witness> {
    if !has_solution(c, spec) {
        return None;
    }
    let w = canonical_witness(c, spec);
    debug_assert!(w.is_some(), "forward and backward passes disagree");
    w
}

fn canonical_witness(c: &Coloring, spec: &ProblemSpec) -> Option<Witness> {
    let n = c.len();
    let t = spec.t();
    let step = spec.step() as i64;
    let occ = Occurrences::new(c);

    // reach[s][i]: largest diam(B_s) over valid chains B_s..B_t with min(B_s) >= i.
    let mut reach = vec![vec![-1i64; n + 2]; t];
    for s in (0..t).rev() {
        let m = spec.sizes()[s];
        for i in (1..=n).rev() {
            let list = &occ.lists[c.color(i) as usize];
            let k = occ.index[i];
            let mut here = -1i64;
            if k + m - 1 < list.len() {
                if s == t - 1 {
                    here = (*list.last().unwrap() - i) as i64;
                } else {
                    let next = &reach[s + 1];
                    for &j in list[k + m - 1..].iter().rev() {
                        let d = (j - i) as i64;
                        if next[j + 1] >= d + step {
                            here = d;
                            break;
                        }
                    }
                }
            }
            reach[s][i] = reach[s][i + 1].max(here);
        }
    }
    if reach[0][1] < 0 {
        return None;
    }

    let mut sets = Vec::with_capacity(t);
    let mut colors = Vec::with_capacity(t);
    let mut start = 1usize;
    let mut min_diam = 0usize;
    for s in 0..t {
        let m = spec.sizes()[s];
        let mut chosen = None;
        for j in start..=n {
            let list = &occ.lists[c.color(j) as usize];
            let k = occ.index[j];
            if k + 1 < m || j < min_diam {
                continue;
            }
            let head = &list[..=k + 1 - m];
            let idx = head.partition_point(|&x| x <= j - min_diam);
            if idx == 0 || head[idx - 1] < start {
                continue;
            }
            let d = j - head[idx - 1];
            if s + 1 < t && reach[s + 1][j + 1] < d as i64 + step {
                continue;
            }
            chosen = Some((idx - 1, j));
            break;
        }
        let (first, j) = chosen?;
        let list = &occ.lists[c.color(j) as usize];
        let mut elements = list[first..first + m - 1].to_vec();
        elements.push(j);
        let d = j - list[first];
        sets.push(IntSet::new(elements));
        colors.push(c.color(j));
        start = j + 1;
        min_diam = d + spec.step() as usize;
    }
    Some(Witness { sets, colors })
}

/// Reference oracle: enumerates chains straight from the definition, each
/// set given by its endpoints and color. Returns the lexicographically first
/// chain in `(max, diam)` order per stage, which is the canonical witness.
pub fn brute_force_exists(c: &Coloring, spec: &ProblemSpec) -> Result<Option<Witness>> {
    brute_force_exists_capped(c, spec, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_exists_capped(c: &Coloring, spec: &ProblemSpec, cap: usize) -> Result<Option<Witness>> {
    if c.len() > cap {
        return Err(Error::OracleCap { n: c.len(), cap });
    }
    let colors = c.as_slice();
    let mut chain = Vec::with_capacity(spec.t());
    if oracle_stage(colors, spec, 0, 1, 0, &mut chain) {
        let colors = chain.iter().map(|s: &IntSet| c.color(s.min().unwrap())).collect();
        Ok(Some(Witness { sets: chain, colors }))
    } else {
        Ok(None)
    }
}

fn oracle_stage(
    colors: &[Color],
    spec: &ProblemSpec,
    stage: usize,
    start: usize,
    min_diam: usize,
    chain: &mut Vec<IntSet>,
) -> bool {
    if stage == spec.t() {
        return true;
    }
    let n = colors.len();
    let m = spec.sizes()[stage];
    let at = |p: usize| colors[p - 1];
    for j in start..=n {
        for i in (start..j).rev() {
            if at(i) != at(j) || j - i < min_diam {
                continue;
            }
            let members: Vec<usize> = (i..=j).filter(|&p| at(p) == at(j)).collect();
            if members.len() < m {
                continue;
            }
            let mut set = members[..m - 1].to_vec();
            set.push(j);
            chain.push(IntSet::new(set));
            let next_min = j - i + spec.strict() as usize;
            if oracle_stage(colors, spec, stage + 1, j + 1, next_min, chain) {
                return true;
            }
            chain.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::parse_run_string;

    fn col(s: &str) -> Coloring {
        parse_run_string(s, 2).unwrap()
    }

    fn spec(sizes: &[usize], r: u8) -> ProblemSpec {
        ProblemSpec::new(sizes.to_vec(), r, false).unwrap()
    }

    fn all_colorings(n: usize) -> impl Iterator<Item = Coloring> {
        (0u32..1 << n).map(move |mask| {
            Coloring::new((0..n).map(|k| (mask >> (n - 1 - k) & 1) as u8).collect(), 2).unwrap()
        })
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(vec![], 2, false).is_err());
        assert!(ProblemSpec::new(vec![2, 1], 2, false).is_err());
        assert!(ProblemSpec::new(vec![2, 2], 1, false).is_err());
        assert_eq!(spec(&[2, 2, 2], 2).to_string(), "p(2,2,2;2)");
        assert_eq!(ProblemSpec::new(vec![2, 2], 2, true).unwrap().to_string(), "p*(2,2;2)");
    }

    #[test]
    fn extremal_string_avoids_222() {
        assert!(exists_solution(&col("10101101110"), &spec(&[2, 2, 2], 2)).is_none());
    }

    #[test]
    fn monochromatic_interval_gives_first_pairs() {
        let w = exists_solution(&col("0^{12}"), &spec(&[2, 2, 2], 2)).unwrap();
        let sets: Vec<Vec<usize>> = w.sets.iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(sets, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(w.diams(), vec![1, 1, 1]);
    }

    #[test]
    fn oracle_small_cases() {
        let s22 = spec(&[2, 2], 2);
        // {1,3} and {2,4} interleave, every other pair has diameter 2 and overlaps
        assert!(brute_force_exists(&col("0101"), &s22).unwrap().is_none());
        let w = brute_force_exists(&col("1^7"), &s22).unwrap().unwrap();
        assert_eq!(w.sets, vec![IntSet::new(vec![1, 2]), IntSet::new(vec![3, 4])]);
        assert!(matches!(
            brute_force_exists(&col("0^{21}"), &s22),
            Err(Error::OracleCap { n: 21, cap: 20 })
        ));
    }

    #[test]
    fn min_max_feasible_examples() {
        assert_eq!(min_max_feasible(&col("0^6"), 1, 0, 3), Some((3, 2)));
        assert_eq!(min_max_feasible(&col("0^210^3"), 1, 3, 3), Some((4, 3)));
        assert_eq!(min_max_feasible(&col("0^210^3"), 1, 9, 3), None);
        assert_eq!(min_max_feasible(&col("0^210^3"), 4, 0, 3), Some((6, 2)));
    }

    fn min_max_oracle(c: &Coloring, start: usize, d: usize, m: usize) -> Option<(usize, usize)> {
        // enumerate every m-subset of [start, N] via bitmasks
        let n = c.len();
        let mut best: Option<(usize, usize)> = None;
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != m {
                continue;
            }
            let el: Vec<usize> = (1..=n).filter(|p| mask >> (p - 1) & 1 == 1).collect();
            if el[0] < start || el.iter().any(|&p| c.color(p) != c.color(el[0])) {
                continue;
            }
            let (lo, hi) = (el[0], *el.last().unwrap());
            if hi - lo >= d && best.is_none_or(|b| (hi, hi - lo) < b) {
                best = Some((hi, hi - lo));
            }
        }
        best
    }

    #[test]
    fn min_max_feasible_matches_subset_enumeration() {
        for c in all_colorings(10) {
            for (start, d, m) in [(1, 0, 2), (1, 4, 3), (2, 6, 2), (3, 2, 4), (1, 9, 2)] {
                assert_eq!(
                    min_max_feasible(&c, start, d, m),
                    min_max_oracle(&c, start, d, m),
                    "{c} start={start} d={d} m={m}"
                );
            }
        }
    }

    #[test]
    fn checker_matches_oracle_exhaustively_for_222_at_12() {
        let s = spec(&[2, 2, 2], 2);
        for c in all_colorings(12) {
            let fast = exists_solution(&c, &s);
            let slow = brute_force_exists(&c, &s).unwrap();
            assert_eq!(fast, slow, "{c}");
        }
    }

    #[test]
    fn checker_matches_oracle_on_mixed_sizes_and_strict() {
        for (sizes, strict) in [(vec![2, 3], false), (vec![3, 2], true), (vec![2, 2, 2], true), (vec![4], false)] {
            let s = ProblemSpec::new(sizes, 2, strict).unwrap();
            for c in all_colorings(11) {
                let fast = exists_solution(&c, &s);
                assert_eq!(fast, brute_force_exists(&c, &s).unwrap(), "{c} {s}");
                if let Some(w) = fast {
                    w.validate(&c, &s).unwrap();
                }
            }
        }
    }

    #[test]
    fn incremental_rejects_push_after_solution() {
        let s = spec(&[2], 2);
        let mut st = IncrementalState::new(&s);
        assert!(!st.push(0).unwrap());
        assert!(st.push(0).unwrap());
        assert!(matches!(st.push(1), Err(Error::ContractViolation(_))));
        st.pop();
        assert!(!st.is_solved());
        assert!(!st.push(1).unwrap());
        assert!(matches!(st.push(2), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn incremental_first_extension_never_solves() {
        let s = spec(&[2, 2], 3);
        for color in 0..3 {
            let (st, flag) = IncrementalState::new(&s).extend(color).unwrap();
            assert!(!flag);
            assert_eq!(st.len(), 1);
        }
    }

    #[test]
    fn incremental_stream_over_extremal_string() {
        let s = spec(&[2, 2, 2], 2);
        let mut st = IncrementalState::new(&s);
        for &color in col("10101101110").as_slice() {
            assert!(!st.push(color).unwrap());
        }
        assert_eq!(st.len(), 11);
        assert!(st.push(0).unwrap());
        st.pop();
        assert!(st.push(1).unwrap());
    }

    #[test]
    fn frontier_is_strictly_decreasing() {
        let s = spec(&[2, 2, 2], 2);
        let mut st = IncrementalState::new(&s);
        for &color in col("10101101110").as_slice() {
            st.push(color).unwrap();
        }
        for stage in 0..2 {
            let f = st.frontier(stage);
            assert!(!f.is_empty());
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
        }
        assert!(st.frontier(2).is_empty());
    }

    #[test]
    fn wider_coloring_than_spec_is_handled() {
        let s = spec(&[2, 2], 2);
        let c = parse_run_string("0120", 3).unwrap();
        assert!(exists_solution(&c, &s).is_none());
        let c = parse_run_string("00122", 3).unwrap();
        assert!(exists_solution(&c, &s).is_some());
    }
}
