//! Combining break sequences.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{BreakSequence, Certificate, PlanError, RowFlag, Verdict, VerdictRule};
use crate::rat::{from_u64, Exact, Rat};

/// Upper breaks of a compositum of towers with independent Galois groups: at
/// each index the largest input break. Indices where two inputs agree are
/// flagged, since there the break of the product element may drop.
pub fn compositum_merge(seqs: &[BreakSequence]) -> Result<BreakSequence, PlanError> {
    let first = seqs
        .first()
        .ok_or_else(|| PlanError::Malformed("nothing to merge".into()))?;
    if seqs.len() == 1 {
        return Ok(first.clone());
    }
    let horizon = first.horizon();
    if let Some(s) = seqs.iter().find(|s| s.horizon() != horizon) {
        return Err(PlanError::HorizonMismatch(horizon, s.horizon()));
    }
    let mut upper = Vec::with_capacity(horizon);
    let mut flagged = BTreeSet::new();
    for k in 0..horizon {
        let column: Vec<&Rat> = seqs.iter().map(|s| &s.upper[k].0).collect();
        let distinct: BTreeSet<&Rat> = column.iter().copied().collect();
        if distinct.len() < column.len() {
            flagged.insert(k + 1);
        }
        upper.push((*distinct.last().expect("nonempty")).clone());
    }

    let apf: Vec<usize> = (0..seqs.len())
        .filter(|&k| seqs[k].verdict == Verdict::Apf)
        .collect();
    let bounded: Vec<&Rat> = seqs
        .iter()
        .filter_map(|s| s.limit_bound.as_ref().map(|b| &b.0))
        .collect();
    let certificate = if bounded.len() == seqs.len() {
        Certificate::BoundedMerge {
            bound: Exact(bounded.into_iter().max().expect("nonempty").clone()),
        }
    } else if apf.len() == 1 && bounded.len() == seqs.len() - 1 {
        Certificate::DominatedMerge {
            unbounded: apf[0],
            bound: Exact(bounded.into_iter().max().expect("nonempty").clone()),
        }
    } else {
        Certificate::None
    };
    Ok(
        BreakSequence::new(Vec::new(), upper, certificate, VerdictRule::Full)?
            .with_flags(RowFlag::Collision, flagged),
    )
}

/// `slope * n + intercept`, a lower bound the caller has proven for every
/// member of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearBound {
    pub slope: Exact,
    pub intercept: Exact,
}

/// Top upper breaks of an auxiliary family, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyBound {
    pub values: Vec<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<LinearBound>,
}

/// Family with `k`-th value `ceil(k/2) e_0`, which dominates `(e_0/2) k`.
pub fn half_linear_family(e0: u64, horizon: usize) -> FamilyBound {
    FamilyBound {
        values: (1..=horizon as u64)
            .map(|k| Exact(from_u64(k.div_ceil(2) * e0)))
            .collect(),
        bound: Some(LinearBound {
            slope: Exact(from_u64(e0) / from_u64(2)),
            intercept: Exact(Rat::zero()),
        }),
    }
}

/// Merges a tower with an auxiliary family. The result at index `k` is
/// `max(base_k, family_k)`, a lower bound for the break of the repaired
/// tower. If the family provably grows linearly the repaired tower is APF;
/// otherwise the base verdict stands.
pub fn repair_merge(
    base: &BreakSequence,
    family: &FamilyBound,
) -> Result<BreakSequence, PlanError> {
    if family.values.len() != base.horizon() {
        return Err(PlanError::HorizonMismatch(
            base.horizon(),
            family.values.len(),
        ));
    }
    let upper: Vec<Rat> = base
        .upper
        .iter()
        .zip(&family.values)
        .map(|(b, f)| if f.0 > b.0 { f.0.clone() } else { b.0.clone() })
        .collect();
    let grows = family.bound.as_ref().is_some_and(|lb| {
        lb.slope.0 > Rat::zero()
            && family
                .values
                .iter()
                .enumerate()
                .all(|(k, v)| v.0 >= &lb.slope.0 * from_u64(k as u64 + 1) + &lb.intercept.0)
    });
    if grows {
        let lb = family.bound.clone().expect("checked");
        BreakSequence::build(
            base.lower.clone(),
            upper,
            Certificate::LinearLowerBound {
                slope: lb.slope,
                intercept: lb.intercept,
            },
            VerdictRule::Full,
            false,
        )
    } else if upper.iter().zip(&base.upper).all(|(u, b)| *u == b.0) {
        Ok(base.clone())
    } else {
        let mut seq = base.clone();
        seq.upper = upper.into_iter().map(Exact).collect();
        Ok(seq)
    }
}
