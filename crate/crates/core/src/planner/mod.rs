//! Break sequences of infinite towers built level by level, and whether the
//! towers they describe are arithmetically profinite.
//!
//! A tower of the kind studied here is APF exactly when its upper breaks are
//! unbounded. Verdicts are never read off a finite prefix: every
//! [`BreakSequence`] carries the [`Certificate`] its plan can prove, and
//! [`verdict`] only looks at that.

mod admissibility;
mod apf;
mod merge;
mod nonapf;
mod plan;

pub use admissibility::{
    break_bound, cyclic_break_admissible, lemma32_feasible, Feasibility, FeasibilityQuery,
};
pub use apf::{
    apf_plan, apf_step, closed_form_check, closed_form_value, ApfRun, ChainStep, ClosedFormReport,
};
pub use merge::{compositum_merge, half_linear_family, repair_merge, FamilyBound, LinearBound};
pub use nonapf::{nonapf_plan, AffineRule};
pub use plan::{ApfBase, BaseBreak, LevelMode, PlanKind, Schedule, TowerPlan};

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::herbrand::HerbrandError;
use crate::rat::{format_rat, Exact, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("inadmissible break {break_value} at n = {n} (e = {e}): {reason}")]
    Inadmissible {
        n: usize,
        break_value: u64,
        e: u64,
        reason: String,
    },
    #[error("at n = {n}, depth {depth}: inner break {u} is below the step break {i1}")]
    BelowStepBreak {
        n: usize,
        depth: u32,
        u: String,
        i1: String,
    },
    #[error("p e/(p-1) = {value} is not an integer for p = {p}, e = {e}")]
    NonIntegralBound { p: u64, e: u64, value: String },
    #[error("no epsilon given for depth {0}")]
    MissingEps(u32),
    #[error("schedule is not increasing at n = {n}: {previous} then {next}")]
    NonIncreasing {
        n: usize,
        previous: String,
        next: String,
    },
    #[error("sequences have different horizons: {0} and {1}")]
    HorizonMismatch(usize, usize),
    #[error(transparent)]
    Herbrand(#[from] HerbrandError),
    #[error("malformed plan: {0}")]
    Malformed(String),
}

impl PlanError {
    /// Whether the error is a property of the plan's numbers rather than of
    /// its encoding.
    pub fn is_infeasible(&self) -> bool {
        !matches!(self, PlanError::Malformed(_) | PlanError::NotPrime(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Apf,
    NonApf,
    Undetermined,
}

/// Which verdicts a plan kind may claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictRule {
    /// Both directions.
    Full,
    /// Only non-APF; growth certificates are reported but not acted on.
    NonApfOnly,
}

/// What a plan proves about its infinite continuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// No structural information.
    None,
    /// `u_{n+1} - u_n = increment > 0` for all `n`.
    ConstantIncrement { increment: Exact },
    /// `u_{n+1} - u_n = first * ratio^(n-1)` with `0 <= ratio < 1`; the
    /// sequence increases to `limit`.
    Geometric {
        first: Exact,
        ratio: Exact,
        limit: Exact,
    },
    /// `u_n = (n - 1) e_0 - v_n` with `|v_{n+1} - v_n| <= cauchy / p^n`.
    LinearGrowth { e0: u64, p: u64, cauchy: Exact },
    /// Exactly one input unbounded, all others bounded by `bound`.
    DominatedMerge { unbounded: usize, bound: Exact },
    /// All inputs bounded.
    BoundedMerge { bound: Exact },
    /// Values dominate `slope * n + intercept` with `slope > 0`.
    LinearLowerBound { slope: Exact, intercept: Exact },
}

impl Certificate {
    pub fn describe(&self) -> String {
        let r = |x: &Exact| format_rat(&x.0);
        match self {
            Certificate::None => "no certificate".into(),
            Certificate::ConstantIncrement { increment } => {
                format!(
                    "constant increment {} between consecutive upper breaks",
                    r(increment)
                )
            }
            Certificate::Geometric {
                first,
                ratio,
                limit,
            } => format!(
                "increments {} * {}^(n-1) are summable; upper breaks increase to {}",
                r(first),
                r(ratio),
                r(limit)
            ),
            Certificate::LinearGrowth { e0, p, cauchy } => format!(
                "u_n = (n-1)*{e0} - v_n with |v_(n+1) - v_n| <= {}/{p}^n",
                r(cauchy)
            ),
            Certificate::DominatedMerge { unbounded, bound } => format!(
                "input {} is unbounded, every other input stays below {}",
                unbounded + 1,
                r(bound)
            ),
            Certificate::BoundedMerge { bound } => format!("every input stays below {}", r(bound)),
            Certificate::LinearLowerBound { slope, intercept } => {
                format!("merged breaks dominate {}*n + {}", r(slope), r(intercept))
            }
        }
    }

    /// Upper bound of the whole infinite sequence, when one is proven.
    pub fn bound(&self) -> Option<&Rat> {
        match self {
            Certificate::Geometric { limit, .. } => Some(&limit.0),
            Certificate::BoundedMerge { bound } => Some(&bound.0),
            _ => None,
        }
    }

    fn proves_unbounded(&self) -> bool {
        matches!(
            self,
            Certificate::ConstantIncrement { .. }
                | Certificate::LinearGrowth { .. }
                | Certificate::DominatedMerge { .. }
                | Certificate::LinearLowerBound { .. }
        )
    }
}

/// Marker attached to individual rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowFlag {
    /// `p` divides `t_n - t_(n-1)`.
    PDividesIncrement,
    /// Two merged inputs agree here, so the maximum is not certified.
    Collision,
}

impl RowFlag {
    pub fn name(self) -> &'static str {
        match self {
            RowFlag::PDividesIncrement => "p-divides-increment",
            RowFlag::Collision => "collision",
        }
    }
}

/// Lower and upper breaks of a tower (or family) with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BreakSequence {
    /// Relative lower breaks, one per level; empty for merged sequences.
    pub lower: Vec<u64>,
    /// Upper breaks `u_1 < u_2 < ...`; for an apf family, the top upper break
    /// of each member.
    pub upper: Vec<Exact>,
    pub verdict: Verdict,
    /// Proven bound of the supremum, for non-APF verdicts.
    pub limit_bound: Option<Exact>,
    pub certificate: Certificate,
    /// 1-based indices of flagged rows.
    pub flagged: BTreeSet<usize>,
    pub flag: Option<RowFlag>,
}

impl BreakSequence {
    /// Builds a sequence of strictly increasing upper breaks and computes its
    /// verdict from the certificate.
    pub fn new(
        lower: Vec<u64>,
        upper: Vec<Rat>,
        certificate: Certificate,
        rule: VerdictRule,
    ) -> Result<Self, PlanError> {
        Self::build(lower, upper, certificate, rule, true)
    }

    /// As [`BreakSequence::new`]; with `strict` off the values need not
    /// increase (members of a family, or lower bounds).
    pub(crate) fn build(
        lower: Vec<u64>,
        upper: Vec<Rat>,
        certificate: Certificate,
        rule: VerdictRule,
        strict: bool,
    ) -> Result<Self, PlanError> {
        for (k, w) in upper.windows(2).enumerate() {
            if strict && w[1] <= w[0] {
                return Err(PlanError::NonIncreasing {
                    n: k + 2,
                    previous: format_rat(&w[0]),
                    next: format_rat(&w[1]),
                });
            }
        }
        let mut seq = BreakSequence {
            lower,
            upper: upper.into_iter().map(Exact).collect(),
            verdict: Verdict::Undetermined,
            limit_bound: None,
            certificate,
            flagged: BTreeSet::new(),
            flag: None,
        };
        seq.verdict = verdict(&seq, rule);
        seq.limit_bound = match seq.verdict {
            Verdict::NonApf => seq.certificate.bound().cloned().map(Exact),
            _ => None,
        };
        Ok(seq)
    }

    /// Raw upper breaks with no certificate.
    pub fn raw(upper: Vec<Rat>) -> Result<Self, PlanError> {
        Self::new(Vec::new(), upper, Certificate::None, VerdictRule::Full)
    }

    pub fn horizon(&self) -> usize {
        self.upper.len()
    }

    pub fn upper_values(&self) -> Vec<Rat> {
        self.upper.iter().map(|x| x.0.clone()).collect()
    }

    pub fn with_flags(mut self, flag: RowFlag, flagged: BTreeSet<usize>) -> Self {
        self.flag = (!flagged.is_empty()).then_some(flag);
        self.flagged = flagged;
        self
    }
}

/// APF only with a proof of unboundedness, non-APF only with a proven bound;
/// everything else is undetermined.
pub fn verdict(seq: &BreakSequence, rule: VerdictRule) -> Verdict {
    let c = &seq.certificate;
    if c.bound().is_some() {
        Verdict::NonApf
    } else if c.proves_unbounded() && rule == VerdictRule::Full {
        Verdict::Apf
    } else {
        Verdict::Undetermined
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn verdict_needs_a_certificate() {
        let unit = BreakSequence::new(
            vec![],
            (1..=5).map(int).collect(),
            Certificate::ConstantIncrement {
                increment: Exact(int(1)),
            },
            VerdictRule::Full,
        )
        .unwrap();
        assert_eq!(unit.verdict, Verdict::Apf);
        assert_eq!(
            verdict(&unit, VerdictRule::NonApfOnly),
            Verdict::Undetermined
        );

        let geo = BreakSequence::new(
            vec![],
            vec![int(1), int(2), rat(5, 2)],
            Certificate::Geometric {
                first: Exact(int(1)),
                ratio: Exact(rat(1, 2)),
                limit: Exact(int(3)),
            },
            VerdictRule::NonApfOnly,
        )
        .unwrap();
        assert_eq!(geo.verdict, Verdict::NonApf);
        assert_eq!(geo.limit_bound, Some(Exact(int(3))));

        let raw = BreakSequence::raw((1..=5).map(int).collect()).unwrap();
        assert_eq!(raw.verdict, Verdict::Undetermined);
        assert!(BreakSequence::raw(vec![int(2), int(1)]).is_err());
    }
}
