//! Explicit avoiding colorings for `p(m,m,m;2)` of length `f(m,m,m;2) - 1`.

use serde::{Deserialize, Serialize};

use crate::checker::{exists_solution, ProblemSpec, Witness, WitnessRecord};
use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::formulas::third_term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    General,
    SpecialM2,
    SpecialM5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBoundFamily {
    m: usize,
    variant: Variant,
}

impl LowerBoundFamily {
    /// Picks the variant from `m`: the sporadic strings at `m = 2` and `m = 5`,
    /// the general string otherwise.
    pub fn for_m(m: usize) -> Result<Self> {
        let variant = match m {
            2 => Variant::SpecialM2,
            5 => Variant::SpecialM5,
            _ => Variant::General,
        };
        Self::new(m, variant)
    }

    pub fn new(m: usize, variant: Variant) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("constructions need m >= 2, got {m}")));
        }
        match (variant, m) {
            (Variant::SpecialM2, 2) | (Variant::SpecialM5, 5) | (Variant::General, _) => {
                Ok(LowerBoundFamily { m, variant })
            }
            (v, _) => Err(Error::Domain(format!("{v:?} only exists for its own m, got {m}"))),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `(color, length)` runs of the construction.
    pub fn runs(&self) -> Result<Vec<(Color, usize)>> {
        let m = self.m;
        let runs = match self.variant {
            Variant::SpecialM2 => vec![(1, 1), (0, 1), (1, 1), (0, 1), (1, 2), (0, 1), (1, 3), (0, 1)],
            Variant::SpecialM5 => vec![
                (0, 1),
                (1, 4),
                (0, 4),
                (1, 4),
                (0, 8),
                (1, 4),
                (0, 2),
                (1, 7),
                (0, 3),
            ],
            Variant::General => {
                let k = third_term(m);
                let middle = (m - 1).checked_sub(k).ok_or_else(|| {
                    Error::Domain(format!("negative run length m - ⌊(2m-2)/3⌋ - 1 at m = {m}"))
                })?;
                vec![
                    (0, 1),
                    (1, m - 1),
                    (0, m - 1),
                    (1, m - 1),
                    (0, k),
                    (1, middle),
                    (0, m - 1),
                    (1, 2 * m - 1 + k),
                    (0, m - 1),
                ]
            }
        };
        Ok(runs.into_iter().filter(|&(_, k)| k > 0).collect())
    }

    /// Total length, without materializing the coloring.
    pub fn length(&self) -> Result<usize> {
        Ok(self.runs()?.iter().map(|r| r.1).sum())
    }

    pub fn coloring(&self) -> Result<Coloring> {
        Coloring::from_runs(&self.runs()?, 2)
    }
}

/// The avoiding coloring for `p(m,m,m;2)` of length `f(m,m,m;2) - 1`.
pub fn lower_bound_coloring(m: usize) -> Result<Coloring> {
    LowerBoundFamily::for_m(m)?.coloring()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub avoids: bool,
    pub witness: Option<WitnessRecord>,
    pub length: usize,
    pub spec: ProblemSpec,
    pub coloring: String,
}

/// Runs the polynomial checker and packages the outcome.
pub fn verify_avoiding(c: &Coloring, spec: &ProblemSpec) -> VerificationReport {
    let witness: Option<Witness> = exists_solution(c, spec);
    VerificationReport {
        avoids: witness.is_none(),
        witness: witness.map(|w| w.to_record()),
        length: c.len(),
        spec: spec.clone(),
        coloring: c.to_run_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::formula_f_mmm2;

    #[test]
    fn sporadic_strings() {
        assert_eq!(lower_bound_coloring(2).unwrap().to_run_string(), "10101^201^30");
        assert_eq!(
            lower_bound_coloring(2).unwrap(),
            "10101101110".parse::<Coloring>().unwrap()
        );
        assert_eq!(lower_bound_coloring(5).unwrap().to_run_string(), "01^40^41^40^81^40^21^70^3");
    }

    #[test]
    fn general_string_at_three() {
        let c = lower_bound_coloring(3).unwrap();
        assert_eq!(c, Coloring::parse("0 1^2 0^2 1^2 0 1 0^2 1^6 0^2", 2).unwrap());
        assert_eq!(c.len(), 19);
        assert!(verify_avoiding(&c, &ProblemSpec::uniform(3, 3, 2).unwrap()).avoids);
    }

    #[test]
    fn lengths_match_formula() {
        for m in 2..=2000 {
            let fam = LowerBoundFamily::for_m(m).unwrap();
            assert_eq!(fam.length().unwrap(), formula_f_mmm2(m).unwrap() - 1, "m = {m}");
        }
        // the general string is one short of optimal at the sporadic values
        for m in [2, 5] {
            let fam = LowerBoundFamily::new(m, Variant::General).unwrap();
            assert_eq!(fam.length().unwrap(), formula_f_mmm2(m).unwrap() - 2);
        }
    }

    #[test]
    fn variant_checks() {
        assert!(lower_bound_coloring(1).is_err());
        assert!(LowerBoundFamily::new(3, Variant::SpecialM2).is_err());
        assert!(LowerBoundFamily::new(2, Variant::SpecialM5).is_err());
    }

    #[test]
    fn verify_reports_witness() {
        let spec = ProblemSpec::uniform(2, 3, 2).unwrap();
        let rep = verify_avoiding(&lower_bound_coloring(2).unwrap(), &spec);
        assert!(rep.avoids && rep.witness.is_none());
        assert_eq!(rep.length, 11);
        let rep = verify_avoiding(&Coloring::constant(0, 12, 2).unwrap(), &spec);
        assert!(!rep.avoids);
        assert_eq!(rep.witness.unwrap().sets, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
    }
}
