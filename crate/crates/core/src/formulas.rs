//! Closed-form values of `f` for the families whose exact value is known.

use crate::checker::ProblemSpec;
use crate::error::{Error, Result};

/// `⌊(2m − 2)/3⌋`, the correction term shared by the three-set formula and
/// the lower-bound construction.
pub fn third_term(m: usize) -> usize {
    (2 * m - 2) / 3
}

/// `f(m,m,m;2) = 8m − 5 + ⌊(2m − 2)/3⌋ + δ` with `δ = 1` iff `m ∈ {2, 5}`.
pub fn formula_f_mmm2(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::Domain(format!("f(m,m,m;2) needs m >= 2, got {m}")));
    }
    let delta = usize::from(m == 2 || m == 5);
    Ok(8 * m - 5 + third_term(m) + delta)
}

/// `f(m,m;2) = 5m − 3`.
pub fn formula_f_mm2(m: usize) -> usize {
    5 * m - 3
}

/// `f(m,m;3) = 9m − 7`.
pub fn formula_f_mm3(m: usize) -> usize {
    9 * m - 7
}

/// `f(m,m;4) = 12m − 9`.
pub fn formula_f_mm4(m: usize) -> usize {
    12 * m - 9
}

/// `f*(2,2;2^k) = 4·2^k + 1`.
pub fn formula_fstar_22(r: usize) -> Option<usize> {
    (r >= 2 && r.is_power_of_two()).then_some(4 * r + 1)
}

/// The closed-form value for `spec` when it belongs to a known family.
pub fn known_value(spec: &ProblemSpec) -> Option<usize> {
    let m = spec.diagonal_size()?;
    let r = spec.num_colors();
    if spec.strict() {
        return if spec.t() == 2 && m == 2 {
            formula_fstar_22(r as usize)
        } else {
            None
        };
    }
    match (spec.t(), r) {
        (2, 2) => Some(formula_f_mm2(m)),
        (2, 3) => Some(formula_f_mm3(m)),
        (2, 4) => Some(formula_f_mm4(m)),
        (3, 2) => formula_f_mmm2(m).ok(),
        _ => None,
    }
}

/// Named closed-form families, as used by the `table` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Mm2,
    Mm3,
    Mm4,
    Mmm2,
}

impl Family {
    pub fn spec(self, m: usize) -> Result<ProblemSpec> {
        match self {
            Family::Mm2 => ProblemSpec::uniform(m, 2, 2),
            Family::Mm3 => ProblemSpec::uniform(m, 2, 3),
            Family::Mm4 => ProblemSpec::uniform(m, 2, 4),
            Family::Mmm2 => ProblemSpec::uniform(m, 3, 2),
        }
    }

    pub fn value(self, m: usize) -> Result<usize> {
        if m < 2 {
            return Err(Error::Domain(format!("m must be at least 2, got {m}")));
        }
        Ok(match self {
            Family::Mm2 => formula_f_mm2(m),
            Family::Mm3 => formula_f_mm3(m),
            Family::Mm4 => formula_f_mm4(m),
            Family::Mmm2 => formula_f_mmm2(m)?,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Mm2 => "mm2",
            Family::Mm3 => "mm3",
            Family::Mm4 => "mm4",
            Family::Mmm2 => "mmm2",
        }
    }
}
