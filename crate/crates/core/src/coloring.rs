//! Colorings of `[1, N]`, integer sets, and the run-length string codec.
//!
//! Positions are 1-based everywhere. A coloring keeps its color sequence
//! together with one bitmask plane per color; per-color prefix counts are
//! built lazily on first use and shared by every clone made afterwards.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Color = u8;

/// Largest color count the string codec can express (single digits).
pub const MAX_CODEC_COLORS: u8 = 10;

#[derive(Clone)]
pub struct Coloring {
    colors: Vec<Color>,
    num_colors: u8,
    planes: Vec<Vec<u64>>,
    prefix: OnceLock<Vec<Vec<u32>>>,
}

impl Coloring {
    /// Builds a coloring from 0-indexed color values (`colors[0]` is position 1).
    pub fn new(colors: Vec<Color>, num_colors: u8) -> Result<Self> {
        if num_colors < 2 {
            return Err(Error::InvalidColoring(format!(
                "need at least 2 colors, got {num_colors}"
            )));
        }
        if colors.is_empty() {
            return Err(Error::InvalidColoring("length must be at least 1".into()));
        }
        if let Some((idx, &c)) = colors.iter().enumerate().find(|(_, &c)| c >= num_colors) {
            return Err(Error::InvalidColoring(format!(
                "position {} has color {c}, outside [0, {}]",
                idx + 1,
                num_colors - 1
            )));
        }
        Ok(Self::from_parts(colors, num_colors))
    }

    fn from_parts(colors: Vec<Color>, num_colors: u8) -> Self {
        let words = colors.len().div_ceil(64);
        let mut planes = vec![vec![0u64; words]; num_colors as usize];
        for (idx, &c) in colors.iter().enumerate() {
            planes[c as usize][idx / 64] |= 1 << (idx % 64);
        }
        Coloring {
            colors,
            num_colors,
            planes,
            prefix: OnceLock::new(),
        }
    }

    /// A single-color coloring of length `len`.
    pub fn constant(color: Color, len: usize, num_colors: u8) -> Result<Self> {
        Self::new(vec![color; len], num_colors)
    }

    /// Builds a coloring from `(color, run_length)` pairs.
    pub fn from_runs(runs: &[(Color, usize)], num_colors: u8) -> Result<Self> {
        let mut colors = Vec::with_capacity(runs.iter().map(|r| r.1).sum());
        for &(c, k) in runs {
            colors.extend(std::iter::repeat_n(c, k));
        }
        Self::new(colors, num_colors)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn num_colors(&self) -> u8 {
        self.num_colors
    }

    /// Color of 1-based position `pos`.
    pub fn color(&self, pos: usize) -> Color {
        self.colors[pos - 1]
    }

    /// The color sequence, 0-indexed.
    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    /// Bitmask plane for `color`: bit `p - 1` is set iff position `p` has that color.
    pub fn plane(&self, color: Color) -> &[u64] {
        &self.planes[color as usize]
    }

    fn prefix_table(&self) -> &[Vec<u32>] {
        self.prefix.get_or_init(|| {
            self.planes
                .iter()
                .map(|plane| {
                    let mut acc = Vec::with_capacity(self.colors.len() + 1);
                    acc.push(0u32);
                    let mut running = 0u32;
                    for idx in 0..self.colors.len() {
                        running += ((plane[idx / 64] >> (idx % 64)) & 1) as u32;
                        acc.push(running);
                    }
                    acc
                })
                .collect()
        })
    }

    /// Number of positions in `[a, b]` colored `color`; empty when `a > b`.
    pub fn count(&self, color: Color, a: usize, b: usize) -> usize {
        if a > b || color >= self.num_colors {
            return 0;
        }
        let b = b.min(self.len());
        let a = a.max(1);
        if a > b {
            return 0;
        }
        let table = &self.prefix_table()[color as usize];
        (table[b] - table[a - 1]) as usize
    }

    /// Popcount over the bit plane; independent of the prefix table.
    pub fn count_popcount(&self, color: Color, a: usize, b: usize) -> usize {
        let b = b.min(self.len());
        let a = a.max(1);
        if a > b || color >= self.num_colors {
            return 0;
        }
        let plane = &self.planes[color as usize];
        let (lo, hi) = (a - 1, b - 1);
        let (wlo, whi) = (lo / 64, hi / 64);
        let low_mask = !0u64 << (lo % 64);
        let high_mask = if hi % 64 == 63 {
            !0u64
        } else {
            (1u64 << (hi % 64 + 1)) - 1
        };
        if wlo == whi {
            return (plane[wlo] & low_mask & high_mask).count_ones() as usize;
        }
        let mut total = (plane[wlo] & low_mask).count_ones() + (plane[whi] & high_mask).count_ones();
        for w in &plane[wlo + 1..whi] {
            total += w.count_ones();
        }
        total as usize
    }

    /// Sorted positions of `color` inside `range`.
    pub fn positions(&self, color: Color, range: RangeInclusive<usize>) -> Vec<usize> {
        let lo = (*range.start()).max(1);
        let hi = (*range.end()).min(self.len());
        (lo..=hi).filter(|&p| self.color(p) == color).collect()
    }

    /// `first_i(c, Y)`: the `i`-th smallest element of color `c` in `Y` (1-based `i`).
    pub fn nth_first(&self, color: Color, range: RangeInclusive<usize>, i: usize) -> Result<usize> {
        let pos = self.positions(color, range);
        if i == 0 || i > pos.len() {
            return Err(Error::NotFound {
                color,
                available: pos.len(),
                required: i.max(1),
            });
        }
        Ok(pos[i - 1])
    }

    /// `last_i(c, Y)`: the `i`-th largest element of color `c` in `Y`.
    pub fn nth_last(&self, color: Color, range: RangeInclusive<usize>, i: usize) -> Result<usize> {
        let pos = self.positions(color, range);
        if i == 0 || i > pos.len() {
            return Err(Error::NotFound {
                color,
                available: pos.len(),
                required: i.max(1),
            });
        }
        Ok(pos[pos.len() - i])
    }

    /// `first_i^j(c, Y)`: the `i`-th through `j`-th smallest elements of color `c`.
    pub fn first_range(
        &self,
        color: Color,
        range: RangeInclusive<usize>,
        i: usize,
        j: usize,
    ) -> Result<IntSet> {
        if i == 0 || i > j {
            return Err(Error::Domain(format!("first_range needs 1 <= i <= j, got i={i}, j={j}")));
        }
        let pos = self.positions(color, range);
        if j > pos.len() {
            return Err(Error::NotFound {
                color,
                available: pos.len(),
                required: j,
            });
        }
        Ok(IntSet(pos[i - 1..j].to_vec()))
    }

    /// `last_i^j(c, Y)`: the `i`-th through `j`-th largest elements of color `c`.
    pub fn last_range(
        &self,
        color: Color,
        range: RangeInclusive<usize>,
        i: usize,
        j: usize,
    ) -> Result<IntSet> {
        if i == 0 || i > j {
            return Err(Error::Domain(format!("last_range needs 1 <= i <= j, got i={i}, j={j}")));
        }
        let pos = self.positions(color, range);
        let n = pos.len();
        if j > n {
            return Err(Error::NotFound {
                color,
                available: n,
                required: j,
            });
        }
        Ok(IntSet(pos[n - j..=n - i].to_vec()))
    }

    /// Applies `perm[c]` to every position.
    pub fn permuted(&self, perm: &[Color]) -> Result<Self> {
        if perm.len() != self.num_colors as usize {
            return Err(Error::Domain("permutation length must equal color count".into()));
        }
        Self::new(self.colors.iter().map(|&c| perm[c as usize]).collect(), self.num_colors)
    }

    /// Swaps colors 0 and 1 of a 2-coloring.
    pub fn complement(&self) -> Result<Self> {
        if self.num_colors != 2 {
            return Err(Error::Domain("complement is defined for 2-colorings".into()));
        }
        self.permuted(&[1, 0])
    }

    /// Restriction to `[1, len]`.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::Domain(format!("prefix length {len} outside [1, {}]", self.len())));
        }
        Ok(Self::from_parts(self.colors[..len].to_vec(), self.num_colors))
    }

    /// The coloring of `[1, N + 1]` obtained by appending `color`.
    pub fn extended(&self, color: Color) -> Result<Self> {
        let mut colors = self.colors.clone();
        colors.push(color);
        Self::new(colors, self.num_colors)
    }

    /// Maximal runs as `(color, length)` pairs.
    pub fn runs(&self) -> Vec<(Color, usize)> {
        let mut runs: Vec<(Color, usize)> = Vec::new();
        for &c in &self.colors {
            match runs.last_mut() {
                Some((prev, k)) if *prev == c => *k += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        self.planes.iter().filter(|p| p.iter().any(|&w| w != 0)).count()
    }

    pub fn parse(s: &str, num_colors: u8) -> Result<Self> {
        parse_run_string(s, num_colors)
    }

    pub fn to_run_string(&self) -> String {
        format_run_string(self)
    }
}

impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        self.num_colors == other.num_colors && self.colors == other.colors
    }
}

impl Eq for Coloring {}

impl Hash for Coloring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num_colors.hash(state);
        self.colors.hash(state);
    }
}

impl PartialOrd for Coloring {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order of color sequences.
impl Ord for Coloring {
    fn cmp(&self, other: &Self) -> Ordering {
        self.colors
            .cmp(&other.colors)
            .then(self.num_colors.cmp(&other.num_colors))
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring({:?}, r={})", format_run_string(self), self.num_colors)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_run_string(self))
    }
}

/// Parses with the smallest color count that covers every digit (at least 2).
impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let c = parse_run_string(s, MAX_CODEC_COLORS)?;
        let r = c.colors.iter().copied().max().unwrap_or(0).saturating_add(1).max(2);
        Ok(Coloring::from_parts(c.colors, r))
    }
}

/// Parses the run-length notation: tokens `c`, `c^k` (single-digit `k`) or
/// `c^{k}` (any decimal `k`), optionally separated by whitespace.
///
/// An unbraced exponent is exactly one digit, so `0^210^3` reads as
/// `0^2 1 0^3`. Exponents of 10 or more must be braced: `0^{12}`.
pub fn parse_run_string(s: &str, num_colors: u8) -> Result<Coloring> {
    if !(2..=MAX_CODEC_COLORS).contains(&num_colors) {
        return Err(Error::Parse {
            token: String::new(),
            offset: 0,
            reason: format!("the string codec supports 2..=10 colors, got {num_colors}"),
        });
    }
    let bytes = s.as_bytes();
    let mut colors = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token_at = |end: usize| s[start..end.min(s.len())].to_string();
        if !b.is_ascii_digit() {
            let end = s[start..].chars().next().map_or(start + 1, |ch| start + ch.len_utf8());
            return Err(Error::Parse {
                token: token_at(end),
                offset: start,
                reason: "expected a color digit".into(),
            });
        }
        let color = b - b'0';
        i += 1;
        let mut run = 1usize;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            if i < bytes.len() && bytes[i] == b'{' {
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i >= bytes.len() || bytes[i] != b'}' || i == digits_start {
                    return Err(Error::Parse {
                        token: token_at(i + 1),
                        offset: start,
                        reason: "malformed braced exponent, expected `^{digits}`".into(),
                    });
                }
                run = s[digits_start..i].parse().map_err(|_| Error::Parse {
                    token: token_at(i + 1),
                    offset: start,
                    reason: "exponent out of range".into(),
                })?;
                i += 1;
            } else if i < bytes.len() && bytes[i].is_ascii_digit() {
                run = (bytes[i] - b'0') as usize;
                i += 1;
            } else {
                return Err(Error::Parse {
                    token: token_at(i + 1),
                    offset: start,
                    reason: "missing exponent after `^`".into(),
                });
            }
            if run == 0 {
                return Err(Error::Parse {
                    token: token_at(i),
                    offset: start,
                    reason: "run length must be at least 1".into(),
                });
            }
        }
        if color >= num_colors {
            return Err(Error::Parse {
                token: token_at(i),
                offset: start,
                reason: format!("color {color} outside [0, {}]", num_colors - 1),
            });
        }
        colors.extend(std::iter::repeat_n(color, run));
    }
    if colors.is_empty() {
        return Err(Error::Parse {
            token: String::new(),
            offset: 0,
            reason: "empty coloring".into(),
        });
    }
    Ok(Coloring::from_parts(colors, num_colors))
}

/// Canonical maximal-run form without whitespace, e.g. `0^210^3`.
pub fn format_run_string(c: &Coloring) -> String {
    let mut out = String::new();
    for (color, k) in c.runs() {
        out.push(char::from(b'0' + color));
        match k {
            1 => {}
            2..=9 => {
                out.push('^');
                out.push(char::from(b'0' + k as u8));
            }
            _ => {
                out.push_str("^{");
                out.push_str(&k.to_string());
                out.push('}');
            }
        }
    }
    out
}

/// A finite set of positions, kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntSet(Vec<usize>);

impl IntSet {
    pub fn new(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        IntSet(elements)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn diam(&self) -> Result<usize> {
        diam(self)
    }

    /// The single color of every element, if the set is nonempty and monochromatic.
    pub fn mono_color(&self, c: &Coloring) -> Option<Color> {
        let first = *self.0.first()?;
        if self.0.iter().any(|&p| p == 0 || p > c.len()) {
            return None;
        }
        let color = c.color(first);
        self.0.iter().all(|&p| c.color(p) == color).then_some(color)
    }
}

impl From<RangeInclusive<usize>> for IntSet {
    fn from(r: RangeInclusive<usize>) -> Self {
        IntSet(r.collect())
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `max(x) - min(x)`.
pub fn diam(x: &IntSet) -> Result<usize> {
    match (x.min(), x.max()) {
        (Some(lo), Some(hi)) => Ok(hi - lo),
        _ => Err(Error::Domain("diameter of the empty set".into())),
    }
}

/// `x <_p y`: every element of `x` is below every element of `y`.
/// Empty operands never precede or follow anything.
pub fn precedes(x: &IntSet, y: &IntSet) -> bool {
    match (x.max(), y.min()) {
        (Some(a), Some(b)) => a < b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Coloring {
        parse_run_string(s, 2).unwrap()
    }

    #[test]
    fn parses_exponent_notation() {
        let c = col("0^2 1 0^3");
        assert_eq!(c.as_slice(), &[0, 0, 1, 0, 0, 0]);
        assert_eq!(col("0^210^3"), c);
        let one = col("1");
        assert_eq!(one.len(), 1);
        assert_eq!(one.color(1), 1);
    }

    #[test]
    fn braced_exponents() {
        let c = col("0^{12}");
        assert_eq!(c.len(), 12);
        assert_eq!(format_run_string(&c), "0^{12}");
        assert_eq!(col("1^{3}0").as_slice(), &[1, 1, 1, 0]);
        assert_eq!(col(" 0^{2}\t1 ").len(), 3);
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_run_string(&col("001000")), "0^210^3");
        assert_eq!(format_run_string(&col("0")), "0");
        assert_eq!(format_run_string(&col("0101")), "0101");
        assert_eq!(format_run_string(&col("0^2 0^3")), "0^5");
    }

    #[test]
    fn parse_errors_name_token_and_offset() {
        match parse_run_string("01^02", 2) {
            Err(Error::Parse { token, offset, .. }) => {
                assert_eq!(token, "1^0");
                assert_eq!(offset, 1);
            }
            other => panic!("{other:?}"),
        }
        match parse_run_string("0 0 2", 2) {
            Err(Error::Parse { token, offset, .. }) => {
                assert_eq!(token, "2");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_run_string("0^", 2).is_err());
        assert!(parse_run_string("0^{}", 2).is_err());
        assert!(parse_run_string("0^{3", 2).is_err());
        assert!(parse_run_string("x", 2).is_err());
        assert!(parse_run_string("   ", 2).is_err());
        assert!(parse_run_string("0", 11).is_err());
        assert!(parse_run_string("3", 4).is_ok());
    }

    #[test]
    fn diam_and_precedes() {
        assert_eq!(diam(&IntSet::new(vec![1, 5, 7])).unwrap(), 6);
        assert_eq!(diam(&IntSet::new(vec![4])).unwrap(), 0);
        for k in 0..10 {
            assert_eq!(diam(&IntSet::from(3..=3 + k)).unwrap(), k);
        }
        assert!(diam(&IntSet::new(vec![])).is_err());
        assert!(precedes(&IntSet::new(vec![1, 2]), &IntSet::new(vec![3, 4])));
        assert!(!precedes(&IntSet::new(vec![1, 4]), &IntSet::new(vec![3, 9])));
        assert!(!precedes(&IntSet::new(vec![]), &IntSet::new(vec![3])));
    }

    #[test]
    fn precedes_matches_definition_on_subsets_of_1_to_6() {
        let subsets: Vec<IntSet> = (1u32..64)
            .map(|mask| IntSet::new((1..=6).filter(|p| mask >> (p - 1) & 1 == 1).collect()))
            .collect();
        for x in &subsets {
            for y in &subsets {
                let by_def = x.elements().iter().all(|a| y.elements().iter().all(|b| a < b));
                assert_eq!(precedes(x, y), by_def, "{x} {y}");
            }
        }
    }

    #[test]
    fn first_and_last_selection() {
        let c = col("0^210^3");
        assert_eq!(c.nth_first(1, 1..=6, 1).unwrap(), 3);
        assert_eq!(c.first_range(0, 1..=6, 1, 2).unwrap(), IntSet::new(vec![1, 2]));
        assert_eq!(c.nth_last(0, 1..=6, 1).unwrap(), 6);
        assert_eq!(c.last_range(0, 1..=6, 1, 3).unwrap(), IntSet::new(vec![4, 5, 6]));
        assert_eq!(c.last_range(0, 1..=6, 2, 4).unwrap(), IntSet::new(vec![2, 4, 5]));
        match c.nth_first(1, 1..=6, 2) {
            Err(Error::NotFound { available, .. }) => assert_eq!(available, 1),
            other => panic!("{other:?}"),
        }
        assert!(c.first_range(0, 4..=6, 1, 4).is_err());
    }

    #[test]
    fn nth_last_matches_reverse_scan_on_all_colorings_of_10() {
        for mask in 0u32..(1 << 10) {
            let c = Coloring::new((0..10).map(|k| (mask >> k & 1) as u8).collect(), 2).unwrap();
            for color in 0..2u8 {
                for (a, b) in [(1, 10), (3, 8), (5, 5)] {
                    let mut found = Vec::new();
                    let mut p = b;
                    while p >= a {
                        if c.color(p) == color {
                            found.push(p);
                        }
                        p -= 1;
                    }
                    for i in 1..=found.len() + 1 {
                        match c.nth_last(color, a..=b, i) {
                            Ok(x) => assert_eq!(x, found[i - 1]),
                            Err(Error::NotFound { available, .. }) => {
                                assert_eq!(i, found.len() + 1);
                                assert_eq!(available, found.len());
                            }
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counts_agree_between_prefix_table_and_popcount() {
        let colors: Vec<u8> = (0..200).map(|k| ((k * 7 + k / 3) % 3) as u8).collect();
        let c = Coloring::new(colors.clone(), 3).unwrap();
        for a in (1..=200).step_by(7) {
            for b in (a..=200).step_by(5) {
                for color in 0..3 {
                    let naive = colors[a - 1..b].iter().filter(|&&x| x == color).count();
                    assert_eq!(c.count(color, a, b), naive);
                    assert_eq!(c.count_popcount(color, a, b), naive);
                }
            }
        }
        assert_eq!(c.count(0, 5, 4), 0);
    }

    #[test]
    fn rejects_bad_colorings() {
        assert!(Coloring::new(vec![], 2).is_err());
        assert!(Coloring::new(vec![0, 2], 2).is_err());
        assert!(Coloring::new(vec![0], 1).is_err());
    }

    #[test]
    fn from_str_infers_color_count() {
        let c: Coloring = "0120".parse().unwrap();
        assert_eq!(c.num_colors(), 3);
        let d: Coloring = "0^3".parse().unwrap();
        assert_eq!(d.num_colors(), 2);
    }
}
