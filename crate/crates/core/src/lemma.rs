//! Executable forms of the two structural lemmas about 2-colorings of
//! `[1, 3m - 2]`, and exhaustive sweeps over every such coloring.
//!
//! The extremal set `B_1` is a monochromatic `m`-set with `diam >= 2m - 2`
//! whose `(max, diam)` is lexicographically least. Writing
//! `max B_1 = 3m - 2 - β` and `diam B_1 = 2m - 2 + α`, the region
//! `R = [1, 3m - 2 - β]` must match one of three patterns (i), (ii), (iii),
//! read after relabeling colors so that `B_1` has color 1. The second lemma
//! (check `2.2`) then promises small-diameter sets whose bounds depend on the
//! matched pattern.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring, IntSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalB1 {
    pub m: usize,
    pub b1: IntSet,
    pub color: Color,
    pub beta: usize,
    pub alpha: usize,
    /// Least `(max, diam)` achievable with each color separately.
    pub per_color: [Option<(usize, usize)>; 2],
}

impl ExtremalB1 {
    pub fn max(&self) -> usize {
        3 * self.m - 2 - self.beta
    }

    pub fn diam(&self) -> usize {
        2 * self.m - 2 + self.alpha
    }

    /// True when the other color also has a candidate (necessarily with a
    /// different `(max, diam)`, since `max B_1` fixes the color).
    pub fn other_color_candidate(&self) -> Option<(usize, usize)> {
        self.per_color[1 - self.color as usize]
    }
}

fn check_lemma_input(c: &Coloring, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be at least 2, got {m}")));
    }
    if c.num_colors() != 2 {
        return Err(Error::Domain("the lemmas concern 2-colorings".into()));
    }
    if c.len() != 3 * m - 2 {
        return Err(Error::Domain(format!(
            "coloring has length {}, expected 3m - 2 = {}",
            c.len(),
            3 * m - 2
        )));
    }
    Ok(())
}

/// Least `(max, diam)` over monochromatic `m`-sets of `color` with
/// `diam >= min_diam`, plus the set itself (earliest interior elements).
fn least_max_set(c: &Coloring, color: Color, m: usize, min_diam: usize) -> Option<(usize, usize, IntSet)> {
    let occ = c.positions(color, 1..=c.len());
    for k in m - 1..occ.len() {
        let j = occ[k];
        if j < min_diam {
            continue;
        }
        let head = &occ[..=k + 1 - m];
        let idx = head.partition_point(|&x| x <= j - min_diam);
        if idx == 0 {
            continue;
        }
        let mut el = occ[idx - 1..idx - 1 + m - 1].to_vec();
        el.push(j);
        return Some((j, j - occ[idx - 1], IntSet::new(el)));
    }
    None
}

/// Least-diameter monochromatic `m`-set inside `[1, bound]`, either color;
/// ties go to the earlier maximum, then color 0.
fn tightest_set(c: &Coloring, m: usize, bound: usize) -> Option<(IntSet, Color)> {
    let mut best: Option<(usize, usize, Color, IntSet)> = None;
    for color in 0..2 {
        let occ = c.positions(color, 1..=bound.min(c.len()));
        for w in occ.windows(m) {
            let key = (w[m - 1] - w[0], w[m - 1], color);
            if best.as_ref().is_none_or(|b| key < (b.0, b.1, b.2)) {
                best = Some((key.0, key.1, color, IntSet::new(w.to_vec())));
            }
        }
    }
    best.map(|b| (b.3, b.2))
}

/// Finds the extremal `B_1` of a 2-coloring of `[1, 3m - 2]`, if any
/// monochromatic `m`-set with `diam >= 2m - 2` exists.
pub fn find_extremal_b1(c: &Coloring, m: usize) -> Result<Option<ExtremalB1>> {
    check_lemma_input(c, m)?;
    let big = 2 * m - 2;
    let per: Vec<Option<(usize, usize, IntSet)>> = (0..2).map(|k| least_max_set(c, k, m, big)).collect();
    let per_color = [
        per[0].as_ref().map(|p| (p.0, p.1)),
        per[1].as_ref().map(|p| (p.0, p.1)),
    ];
    let choice = per
        .into_iter()
        .enumerate()
        .filter_map(|(k, p)| p.map(|p| (p.0, p.1, k as Color, p.2)))
        .min_by_key(|p| (p.0, p.1, p.2));
    Ok(choice.map(|(max, d, color, b1)| ExtremalB1 {
        m,
        b1,
        color,
        beta: 3 * m - 2 - max,
        alpha: d - big,
        per_color,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
}

impl CaseTag {
    pub const ALL: [CaseTag; 3] = [CaseTag::I, CaseTag::II, CaseTag::III];

    pub fn bit(self) -> u8 {
        match self {
            CaseTag::I => 1,
            CaseTag::II => 2,
            CaseTag::III => 4,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "i",
            CaseTag::II => "ii",
            CaseTag::III => "iii",
        })
    }
}

/// A named substring of `R`, in relabeled colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HString {
    pub name: String,
    /// First position covered; meaningless when `colors` is empty.
    pub start: usize,
    pub colors: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma21Case {
    pub tag: CaseTag,
    /// Bit set of every matching case (`CaseTag::bit`).
    pub mask: u8,
    pub mu: usize,
    pub nu: usize,
    pub h_strings: Vec<HString>,
    /// Whether colors were swapped so that `B_1` reads as color 1.
    pub relabeled: bool,
}

impl Lemma21Case {
    pub fn holds(&self, tag: CaseTag) -> bool {
        self.mask & tag.bit() != 0
    }
}

struct CaseOne {
    nu: usize,
    mu: usize,
    h0: (usize, usize),
    h1: (usize, usize),
}

/// Region `R` in relabeled colors: index `p - 1` holds position `p`.
struct Region<'a> {
    r: &'a [Color],
    m: usize,
    alpha: usize,
    beta: usize,
}

impl Region<'_> {
    fn zeros(&self) -> usize {
        self.r.iter().filter(|&&x| x == 0).count()
    }

    fn ones_in(&self, a: usize, len: usize) -> usize {
        self.r[a - 1..a - 1 + len].iter().filter(|&&x| x == 1).count()
    }

    fn all(&self, a: usize, len: usize, color: Color) -> bool {
        self.r[a - 1..a - 1 + len].iter().all(|&x| x == color)
    }

    /// `R = 1^{m-1-β-ν} H_0 0 H_1 1^{1+ν}` with the stated counts.
    fn case_one(&self) -> Option<CaseOne> {
        let (m, alpha, beta) = (self.m, self.alpha, self.beta);
        if beta > m.saturating_sub(2) || m < 2 || self.zeros() < m {
            return None;
        }
        for nu in 0..=m - 1 - beta {
            for mu in 0..=m - 1 - alpha {
                if !(beta + alpha == m - 1 || (nu == 0 && mu == 0)) {
                    continue;
                }
                let lead = m - 1 - beta - nu;
                let h0_len = m - 1 + beta - mu;
                let h1_len = m - 2 - beta + mu;
                let tail = 1 + nu;
                if lead + h0_len + 1 + h1_len + tail != self.r.len() {
                    continue;
                }
                let h0 = lead + 1;
                let zero_at = h0 + h0_len;
                let h1 = zero_at + 1;
                let tail_at = h1 + h1_len;
                if self.all(1, lead, 1)
                    && self.ones_in(h0, h0_len) == m - 1 - alpha - mu
                    && self.r[zero_at - 1] == 0
                    && self.ones_in(h1, h1_len) == mu
                    && self.all(tail_at, tail, 1)
                {
                    return Some(CaseOne {
                        nu,
                        mu,
                        h0: (h0, h0_len),
                        h1: (h1, h1_len),
                    });
                }
            }
        }
        None
    }

    /// `R = 0^{m-α-β-1} 1 H_2 1^{m-β}`; returns `H_2` as `(start, len)`.
    fn case_two(&self) -> Option<(usize, usize)> {
        let (m, alpha, beta) = (self.m, self.alpha, self.beta);
        if !(beta + alpha < m - 1 || beta == m - 1) {
            return None;
        }
        let lead = m - alpha - beta - 1;
        let h2_len = m - 2 + beta + alpha;
        let tail = m - beta;
        if lead + 1 + h2_len + tail != self.r.len() {
            return None;
        }
        let h2 = lead + 2;
        if !self.all(1, lead, 0) || self.r[lead] != 1 || !self.all(h2 + h2_len, tail, 1) {
            return None;
        }
        if beta + 2 <= m && self.zeros() < m {
            return None;
        }
        if alpha > 0 && (beta < 1 || self.ones_in(h2, h2_len) != beta - 1) {
            return None;
        }
        Some((h2, h2_len))
    }

    fn case_three(&self) -> bool {
        let (m, alpha, beta) = (self.m, self.alpha, self.beta);
        if beta < alpha || self.zeros() >= m {
            return false;
        }
        let ones: Vec<usize> = (1..=self.r.len()).filter(|&p| self.r[p - 1] == 1).collect();
        if ones.len() < m {
            return false;
        }
        let (first1, first_m) = (ones[0], ones[m - 1]);
        if first_m + beta + alpha > 3 * m - 3 {
            return false;
        }
        let zeros_between = (first1..=first_m).filter(|&p| self.r[p - 1] == 0).count();
        zeros_between <= beta
    }
}

fn relabeled_colors(c: &Coloring, b1: &ExtremalB1) -> Vec<Color> {
    c.as_slice()
        .iter()
        .map(|&x| if b1.color == 1 { x } else { 1 - x })
        .collect()
}

/// Matches the region `R` against cases (i), (ii), (iii) in that order.
///
/// Fails with [`Error::LemmaViolation`] if none applies.
pub fn classify_lemma21(c: &Coloring, b1: &ExtremalB1) -> Result<Lemma21Case> {
    check_lemma_input(c, b1.m)?;
    let m = b1.m;
    let colors = relabeled_colors(c, b1);
    let len = 3 * m - 2 - b1.beta;
    let region = Region {
        r: &colors[..len],
        m,
        alpha: b1.alpha,
        beta: b1.beta,
    };
    let h = |name: &str, (start, l): (usize, usize)| HString {
        name: name.to_string(),
        start,
        colors: region.r[start - 1..start - 1 + l].to_vec(),
    };
    let one = region.case_one();
    let two = region.case_two();
    let three = region.case_three();
    let mask = u8::from(one.is_some()) | u8::from(two.is_some()) << 1 | u8::from(three) << 2;
    let relabeled = b1.color != 1;
    if let Some(one) = one {
        return Ok(Lemma21Case {
            tag: CaseTag::I,
            mask,
            mu: one.mu,
            nu: one.nu,
            h_strings: vec![h("H0", one.h0), h("H1", one.h1)],
            relabeled,
        });
    }
    if let Some(h2) = two {
        return Ok(Lemma21Case {
            tag: CaseTag::II,
            mask,
            mu: 0,
            nu: 0,
            h_strings: vec![h("H2", h2)],
            relabeled,
        });
    }
    if three {
        return Ok(Lemma21Case {
            tag: CaseTag::III,
            mask,
            mu: 0,
            nu: 0,
            h_strings: Vec::new(),
            relabeled,
        });
    }
    Err(Error::LemmaViolation {
        lemma: "2.1",
        coloring: c.to_run_string(),
        detail: format!(
            "no case matches with B1 = {}, color {}, beta = {}, alpha = {}",
            b1.b1, b1.color, b1.beta, b1.alpha
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Lemma22Finding {
    NoBigSet {
        d1: IntSet,
        d2: IntSet,
    },
    BigSet {
        a1: IntSet,
        a2: IntSet,
        a3: Option<IntSet>,
        case: Lemma21Case,
        extremal: ExtremalB1,
    },
}

/// Least `m`-window of one color starting at or after `from`.
fn first_run(c: &Coloring, m: usize, from: usize) -> Option<IntSet> {
    (from..=c.len().checked_sub(m - 1)?)
        .find(|&p| (p..p + m).all(|q| c.color(q) == c.color(p)))
        .map(|p| IntSet::from(p..=p + m - 1))
}

/// Produces the small-diameter sets of check `2.2` and tests every bound.
pub fn check_lemma22(c: &Coloring, m: usize) -> Result<Lemma22Finding> {
    let violation = |detail: String| Error::LemmaViolation {
        lemma: "2.2",
        coloring: c.to_run_string(),
        detail,
    };
    let Some(ext) = find_extremal_b1(c, m)? else {
        let d1 = first_run(c, m, 1).ok_or_else(|| violation("no monochromatic run of length m".into()))?;
        let d2 = first_run(c, m, d1.max().unwrap() + 1)
            .ok_or_else(|| violation(format!("no second run of length m after D1 = {d1}")))?;
        return Ok(Lemma22Finding::NoBigSet { d1, d2 });
    };
    let case = classify_lemma21(c, &ext)?;
    let (alpha, beta) = (ext.alpha, ext.beta);
    let region = 3 * m - 2 - alpha - beta;

    let mut a1_bound = 2 * m - 2 - alpha;
    if case.holds(CaseTag::III) || (alpha >= 1 && case.holds(CaseTag::II)) {
        a1_bound = a1_bound.min(m - 1 + beta);
    }
    if case.holds(CaseTag::I) {
        a1_bound = a1_bound.min(2 * m - 2 - alpha - case.mu);
    }
    let a2_bound = m + (m - 1 + beta) / 2 - 1;

    let (a1, _) = tightest_set(c, m, region)
        .ok_or_else(|| violation(format!("no monochromatic m-set inside [1, {region}]")))?;
    let d = a1.diam()?;
    if d > a1_bound {
        return Err(violation(format!(
            "tightest A1 = {a1} in [1, {region}] has diam {d} > {a1_bound}"
        )));
    }
    if d > a2_bound {
        return Err(violation(format!(
            "tightest A2 = {a1} in [1, {region}] has diam {d} > {a2_bound}"
        )));
    }
    let a3 = if case.holds(CaseTag::I) {
        let bound = m + alpha + beta;
        let (a3, _) = tightest_set(c, m, bound)
            .ok_or_else(|| violation(format!("no monochromatic m-set inside [1, {bound}]")))?;
        if a3.diam()? > bound - 1 {
            return Err(violation(format!("A3 = {a3} has diam above {}", bound - 1)));
        }
        Some(a3)
    } else {
        None
    };
    Ok(Lemma22Finding::BigSet {
        a1: a1.clone(),
        a2: a1,
        a3,
        case,
        extremal: ext,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    #[serde(rename = "2.1")]
    Lemma21,
    #[serde(rename = "2.2")]
    Lemma22,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub m: usize,
    pub instances: u64,
    /// Colorings without a monochromatic m-set of diameter at least 2m - 2.
    pub no_big_set: u64,
    /// Counts by first matching case: i, ii, iii.
    pub first_case: [u64; 3],
    /// Counts by full match mask, indexed by mask value 0..8.
    pub mask_counts: [u64; 8],
    pub violations: Vec<String>,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.instances += other.instances;
        self.no_big_set += other.no_big_set;
        for k in 0..3 {
            self.first_case[k] += other.first_case[k];
        }
        for k in 0..8 {
            self.mask_counts[k] += other.mask_counts[k];
        }
        self.violations.extend(other.violations);
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sweep_one(c: &Coloring, m: usize, which: Which, rep: &mut SweepReport) {
    rep.instances += 1;
    let ext = match find_extremal_b1(c, m) {
        Ok(e) => e,
        Err(e) => return rep.violations.push(e.to_string()),
    };
    let case = match &ext {
        None => {
            rep.no_big_set += 1;
            None
        }
        Some(b1) => match classify_lemma21(c, b1) {
            Ok(case) => Some(case),
            Err(e) => return rep.violations.push(e.to_string()),
        },
    };
    if let Some(case) = &case {
        rep.first_case[case.tag as usize] += 1;
        rep.mask_counts[case.mask as usize] += 1;
    }
    if which == Which::Lemma22 {
        if let Err(e) = check_lemma22(c, m) {
            rep.violations.push(e.to_string());
        }
    }
}

/// Validates a lemma on every 2-coloring of `[1, 3m - 2]`, in parallel.
pub fn sweep(m: usize, which: Which) -> Result<SweepReport> {
    if !(2..=11).contains(&m) {
        return Err(Error::Domain(format!("exhaustive sweeps support 2 <= m <= 11, got {m}")));
    }
    let n = 3 * m - 2;
    let split = n.min(8);
    let rest = n - split;
    let report = (0u64..1 << split)
        .into_par_iter()
        .map(|hi| {
            let mut rep = SweepReport {
                m,
                ..SweepReport::default()
            };
            let mut colors = vec![0u8; n];
            for lo in 0u64..1 << rest {
                let mask = hi << rest | lo;
                for (k, slot) in colors.iter_mut().enumerate() {
                    *slot = (mask >> (n - 1 - k) & 1) as u8;
                }
                let c = Coloring::new(colors.clone(), 2).expect("binary colors");
                sweep_one(&c, m, which, &mut rep);
            }
            rep
        })
        .reduce(
            || SweepReport {
                m,
                ..SweepReport::default()
            },
            SweepReport::merge,
        );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Coloring {
        Coloring::parse(s, 2).unwrap()
    }

    #[test]
    fn extremal_examples_for_m2() {
        let e = find_extremal_b1(&col("1001"), 2).unwrap().unwrap();
        assert_eq!((e.b1.clone(), e.color, e.beta, e.alpha), (IntSet::new(vec![1, 4]), 1, 0, 1));

        // {1,3} (color 0) ends before {2,4} (color 1)
        let e = find_extremal_b1(&col("0101"), 2).unwrap().unwrap();
        assert_eq!((e.b1.clone(), e.color, e.beta, e.alpha), (IntSet::new(vec![1, 3]), 0, 1, 0));
        assert_eq!(e.other_color_candidate(), Some((4, 2)));

        let e = find_extremal_b1(&col("0110"), 2).unwrap().unwrap();
        assert_eq!((e.b1.clone(), e.color, e.beta, e.alpha), (IntSet::new(vec![1, 4]), 0, 0, 1));

        assert!(find_extremal_b1(&col("0011"), 2).unwrap().is_none());
        assert!(find_extremal_b1(&col("00110"), 2).is_err());
    }

    #[test]
    fn extremal_matches_subset_enumeration() {
        for m in 2..=4 {
            let n = 3 * m - 2;
            for mask in 0u32..1 << n {
                let c = Coloring::new((0..n).map(|k| (mask >> k & 1) as u8).collect(), 2).unwrap();
                let mut best: Option<(usize, usize)> = None;
                for sub in 0u32..1 << n {
                    if sub.count_ones() as usize != m {
                        continue;
                    }
                    let el: Vec<usize> = (1..=n).filter(|p| sub >> (p - 1) & 1 == 1).collect();
                    if el.iter().any(|&p| c.color(p) != c.color(el[0])) {
                        continue;
                    }
                    let key = (*el.last().unwrap(), el.last().unwrap() - el[0]);
                    if key.1 >= 2 * m - 2 && best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
                let got = find_extremal_b1(&c, m).unwrap().map(|e| (e.max(), e.diam()));
                assert_eq!(got, best, "m={m} {c}");
                if let Some(e) = find_extremal_b1(&c, m).unwrap() {
                    assert_eq!(e.b1.max(), Some(e.max()));
                    assert_eq!(e.b1.min(), Some(m - e.alpha - e.beta));
                    assert_eq!(e.b1.mono_color(&c), Some(e.color));
                    assert!(e.alpha + e.beta < m);
                }
            }
        }
    }

    #[test]
    fn all_ones_is_case_three() {
        let c = col("1111");
        let e = find_extremal_b1(&c, 2).unwrap().unwrap();
        // {1,3} has diam 2 = 2m - 2 and max 3
        assert_eq!((e.beta, e.alpha), (1, 0));
        let case = classify_lemma21(&c, &e).unwrap();
        assert!(case.holds(CaseTag::III) || case.holds(CaseTag::II));
        assert!(!case.holds(CaseTag::I));
    }

    #[test]
    fn no_big_set_branch() {
        match check_lemma22(&col("0011"), 2).unwrap() {
            Lemma22Finding::NoBigSet { d1, d2 } => {
                assert_eq!(d1, IntSet::new(vec![1, 2]));
                assert_eq!(d2, IntSet::new(vec![3, 4]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn big_set_branch_for_all_ones() {
        match check_lemma22(&col("1111"), 2).unwrap() {
            Lemma22Finding::BigSet { a1, extremal, .. } => {
                assert!(a1.diam().unwrap() <= 2 - extremal.alpha);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complement_gives_same_case() {
        for m in 2..=4 {
            let n = 3 * m - 2;
            for mask in 0u32..1 << n {
                let c = Coloring::new((0..n).map(|k| (mask >> k & 1) as u8).collect(), 2).unwrap();
                let d = c.complement().unwrap();
                let (Some(e1), Some(e2)) = (find_extremal_b1(&c, m).unwrap(), find_extremal_b1(&d, m).unwrap())
                else {
                    continue;
                };
                assert_eq!(e1.b1, e2.b1);
                let (k1, k2) = (classify_lemma21(&c, &e1).unwrap(), classify_lemma21(&d, &e2).unwrap());
                assert_eq!(k1.tag, k2.tag);
                assert_eq!(k1.mask, k2.mask);
                assert_ne!(k1.relabeled, k2.relabeled);
            }
        }
    }

    #[test]
    fn case_one_reassembles_region() {
        for m in 2..=5 {
            let n = 3 * m - 2;
            for mask in 0u32..1 << n {
                let c = Coloring::new((0..n).map(|k| (mask >> k & 1) as u8).collect(), 2).unwrap();
                let Some(e) = find_extremal_b1(&c, m).unwrap() else { continue };
                let case = classify_lemma21(&c, &e).unwrap();
                if case.tag != CaseTag::I {
                    continue;
                }
                let (h0, h1) = (&case.h_strings[0], &case.h_strings[1]);
                let mut rebuilt = vec![1u8; m - 1 - e.beta - case.nu];
                rebuilt.extend(&h0.colors);
                rebuilt.push(0);
                rebuilt.extend(&h1.colors);
                rebuilt.extend(std::iter::repeat_n(1, 1 + case.nu));
                let relabeled = relabeled_colors(&c, &e);
                assert_eq!(rebuilt, relabeled[..3 * m - 2 - e.beta], "{c}");
                assert!(case.mu <= m - 1 - e.alpha && case.nu <= m - 1 - e.beta);
            }
        }
    }

    #[test]
    fn sweeps_small_m() {
        for m in 2..=4 {
            for which in [Which::Lemma21, Which::Lemma22] {
                let rep = sweep(m, which).unwrap();
                assert_eq!(rep.instances, 1 << (3 * m - 2));
                assert!(rep.passed(), "m={m}: {:?}", &rep.violations[..rep.violations.len().min(5)]);
                assert_eq!(
                    rep.first_case.iter().sum::<u64>() + rep.no_big_set,
                    rep.instances
                );
            }
        }
    }
}
