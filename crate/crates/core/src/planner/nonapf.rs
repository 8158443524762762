//! Towers given by an explicit schedule of relative lower breaks.
//!
//! Step `n` of the tower is a degree-p extension of `K_{n-1}`, whose
//! ramification index is `p^(n-1) e_0`, with break `t_n` in the numbering of
//! `K_{n-1}`. Because every earlier break of `psi_{K_{n-1}/K}` lies below
//! `u_n`,
//!
//! ```text
//! u_{n+1} - u_n = (t_{n+1} - t_n) / p^n.
//! ```
//!
//! For an affine schedule `t_{n+1} = m t_n + c` the increments `t_{n+1} - t_n`
//! are geometric with ratio `m`, so the upper breaks converge when `m < p` and
//! grow by a constant when `m = p`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::admissibility::{break_bound, cyclic_break_admissible};
use super::plan::{PlanKind, Schedule, TowerPlan};
use super::{BreakSequence, Certificate, PlanError, RowFlag, VerdictRule};
use crate::herbrand::tower_psi;
use crate::rat::{from_u64, Exact, Rat};

/// `t_1 = start`, `t_{n+1} = mult * t_n + add`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineRule {
    pub start: u64,
    pub mult: u64,
    pub add: i64,
}

impl AffineRule {
    pub fn terms(&self, count: usize) -> Result<Vec<u64>, PlanError> {
        let mut out = Vec::with_capacity(count);
        let mut t = self.start;
        for n in 1..=count {
            out.push(t);
            if n < count {
                t = i128::from(t)
                    .checked_mul(i128::from(self.mult))
                    .and_then(|x| x.checked_add(i128::from(self.add)))
                    .and_then(|x| u64::try_from(x).ok())
                    .ok_or_else(|| {
                        PlanError::Malformed(format!("schedule leaves the u64 range after t_{n}"))
                    })?;
            }
        }
        Ok(out)
    }
}

fn level_e(p: u64, e0: u64, n: usize) -> Result<u64, PlanError> {
    p.checked_pow(n as u32 - 1)
        .and_then(|q| q.checked_mul(e0))
        .ok_or_else(|| PlanError::Malformed(format!("ramification index overflows at n = {n}")))
}

/// Why an affine rule that passed on the horizon stays admissible forever,
/// or `None`.
///
/// * `m < p`: if `t_N <= B_N` and `c <= B_N` then
///   `t_{N+1} = m t_N + c <= (p - 1) B_N + B_N = B_{N+1}` and so on.
/// * `m = p`: `t_n = p^(n-1) (t_1 + c/(p-1)) - c/(p-1)`, below
///   `B_n = p^n e_0/(p-1)` for all `n` when `c >= 0` and `(p-1) t_1 + c <= p e_0`.
/// * Residues mod `p` follow `x -> m x + c`; for `m < p` this is a permutation,
///   so a horizon of at least `p` terms has seen the whole orbit; for `m = p`
///   every later residue is `c`.
fn continues_forever(rule: &AffineRule, plan: &TowerPlan, t: &[u64]) -> bool {
    let p = plan.p;
    let m = rule.mult;
    let n = t.len();
    let b_n = break_bound(p, level_e(p, plan.e0, n).unwrap_or(u64::MAX));
    let bounded = if m < p {
        rule.add <= 0 || from_u64(rule.add as u64) <= b_n
    } else if m == p {
        rule.add >= 0
            && i128::from(p - 1) * i128::from(rule.start) + i128::from(rule.add)
                <= i128::from(p * plan.e0)
    } else {
        false
    };
    let residues = !plan.strict || (m < p && n >= p as usize) || (m == p && n >= 2);
    bounded && residues
}

fn certificate(rule: &AffineRule, plan: &TowerPlan, t: &[u64]) -> Certificate {
    if t.len() < 2 || rule.mult == 0 || !continues_forever(rule, plan, t) {
        return Certificate::None;
    }
    let p = from_u64(plan.p);
    let m = from_u64(rule.mult);
    let d1 = from_u64(t[1]) - from_u64(t[0]);
    let first = &d1 / &p;
    if m < p {
        let limit = from_u64(t[0]) + &d1 / (&p - &m);
        Certificate::Geometric {
            first: Exact(first),
            ratio: Exact(m / p),
            limit: Exact(limit),
        }
    } else {
        Certificate::ConstantIncrement {
            increment: Exact(first),
        }
    }
}

/// Upper breaks of a scheduled tower, with a verdict when the schedule is an
/// affine rule. The `nonapf` kind only ever claims non-APF; `custom` may
/// claim either.
pub fn nonapf_plan(plan: &TowerPlan) -> Result<BreakSequence, PlanError> {
    let (schedule, rule) = match &plan.kind {
        PlanKind::NonApf(s) => (s, VerdictRule::NonApfOnly),
        PlanKind::Custom(s) => (s, VerdictRule::Full),
        PlanKind::Apf { .. } => return Err(PlanError::Malformed("not a scheduled plan".into())),
    };
    let t = match schedule {
        Schedule::Explicit(v) => v[..plan.depth.min(v.len())].to_vec(),
        Schedule::Rule(r) => r.terms(plan.depth)?,
    };
    if t.is_empty() {
        return Err(PlanError::Malformed("empty schedule".into()));
    }
    for (k, w) in t.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(PlanError::NonIncreasing {
                n: k + 2,
                previous: w[0].to_string(),
                next: w[1].to_string(),
            });
        }
    }
    for (k, &tn) in t.iter().enumerate() {
        let n = k + 1;
        let e = level_e(plan.p, plan.e0, n)?;
        if !cyclic_break_admissible(tn, plan.p, e, plan.strict) {
            return Err(PlanError::Inadmissible {
                n,
                break_value: tn,
                e,
                reason: format!(
                    "t_n must be at most p e/(p-1){}",
                    if plan.strict {
                        " and prime to p below it"
                    } else {
                        ""
                    }
                ),
            });
        }
    }
    let tower = tower_psi(&t, plan.p)?;
    let flagged: BTreeSet<usize> = t
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]) % plan.p == 0)
        .map(|(k, _)| k + 2)
        .collect();
    let cert = match schedule {
        Schedule::Rule(r) => certificate(r, plan, &t),
        Schedule::Explicit(_) => Certificate::None,
    };
    let upper: Vec<Rat> = tower.upper_breaks;
    Ok(BreakSequence::new(t, upper, cert, rule)?.with_flags(RowFlag::PDividesIncrement, flagged))
}
