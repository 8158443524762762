//! Families of towers whose top upper break grows linearly.
//!
//! The `n`-th member is a nested chain. Its core is a `C_3` extension
//! `E/K_1/F` over a field `F` at nesting depth `n - 1`, with top upper break
//!
//! ```text
//! u_3 = i_1 (p - 1)/p + i/p.
//! ```
//!
//! It is then pushed down one cyclic step at a time through depths
//! `n - 2, ..., 0`. A step with break `i_1` sends the upper break `u` of the
//! extension above it to
//!
//! ```text
//! i_1 (p - 1)/p + u/p,
//! ```
//!
//! which is `phi` of the step evaluated at `u`, valid as long as `u >= i_1`.
//! At depth `m` the step is taken `epsilon_m` below its largest admissible
//! value, `i_1 = p e_m/(p - 1) - epsilon_m`, where `e_m` is the ramification
//! index at that depth.

use num_traits::{One, Zero};
use serde::Serialize;

use super::admissibility::{break_bound, cyclic_break_admissible};
use super::plan::{ApfBase, BaseBreak, LevelMode, PlanKind, TowerPlan};
use super::{BreakSequence, Certificate, PlanError, VerdictRule};
use crate::rat::{format_rat, from_u64, pow, to_u64, Exact, Rat};

/// One push-down step of one chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// Family member.
    pub n: usize,
    pub depth: u32,
    pub e: u64,
    pub i1: u64,
    pub u_in: Exact,
    pub u_out: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApfRun {
    pub sequence: BreakSequence,
    /// Core value `u_3` of each member.
    pub cores: Vec<Exact>,
    pub trace: Vec<ChainStep>,
}

/// `i_1 (p - 1)/p + u/p`.
pub fn apf_step(i1: u64, u: &Rat, p: u64) -> Rat {
    let p = from_u64(p);
    from_u64(i1) * (&p - Rat::one()) / &p + u / &p
}

struct Levels<'a> {
    plan: &'a TowerPlan,
    eps: &'a [u64],
    base: ApfBase,
    mode: LevelMode,
}

impl<'a> Levels<'a> {
    fn from_plan(plan: &'a TowerPlan) -> Self {
        match &plan.kind {
            PlanKind::Apf { eps, base, levels } => Levels {
                plan,
                eps,
                base: *base,
                mode: *levels,
            },
            _ => unreachable!("checked by caller"),
        }
    }

    fn e(&self, depth: u32) -> Result<u64, PlanError> {
        match self.mode {
            LevelMode::Flat => Ok(self.plan.e0),
            LevelMode::Scaled => self
                .plan
                .p
                .checked_pow(depth)
                .and_then(|q| q.checked_mul(self.plan.e0))
                .ok_or_else(|| {
                    PlanError::Malformed(format!("ramification index overflows at depth {depth}"))
                }),
        }
    }

    /// `p e/(p - 1)`, required to be an integer.
    fn bound(&self, e: u64) -> Result<u64, PlanError> {
        let b = break_bound(self.plan.p, e);
        to_u64(&b).ok_or_else(|| PlanError::NonIntegralBound {
            p: self.plan.p,
            e,
            value: format_rat(&b),
        })
    }

    /// Epsilon at a depth; a short list repeats its last entry.
    fn eps(&self, depth: u32) -> Result<u64, PlanError> {
        self.eps
            .get(depth as usize)
            .or(self.eps.last())
            .copied()
            .ok_or(PlanError::MissingEps(depth))
    }

    fn admit(&self, n: usize, j: u64, e: u64, what: &str) -> Result<(), PlanError> {
        if cyclic_break_admissible(j, self.plan.p, e, self.plan.strict) {
            Ok(())
        } else {
            Err(PlanError::Inadmissible {
                n,
                break_value: j,
                e,
                reason: format!(
                    "{what} must be at most p e/(p-1){}",
                    if self.plan.strict {
                        " and prime to p below it"
                    } else {
                        ""
                    }
                ),
            })
        }
    }

    /// Core `u_3` of member `n`, over depth `n - 1`.
    fn core(&self, n: usize) -> Result<Rat, PlanError> {
        let p = self.plan.p;
        let e = self.e(n as u32 - 1)?;
        let e1 = e
            .checked_mul(p)
            .ok_or_else(|| PlanError::Malformed("ramification index overflows".into()))?;
        let i1 = self.base.i1;
        let i = match self.base.i {
            BaseBreak::Value(i) => i,
            BaseBreak::Bound(_) => self.bound(e1)?,
        };
        self.admit(n, i1, e, "i1")?;
        self.admit(n, i, e1, "i")?;
        if i <= i1 {
            return Err(PlanError::Inadmissible {
                n,
                break_value: i,
                e: e1,
                reason: format!("i must exceed i1 = {i1}"),
            });
        }
        if (i - i1).is_multiple_of(p) {
            return Err(PlanError::Inadmissible {
                n,
                break_value: i,
                e: e1,
                reason: format!("p divides i - i1 = {}, so the core would be normal", i - i1),
            });
        }
        Ok(apf_step(i1, &from_u64(i), p))
    }

    /// Break of the step at `depth`.
    fn step_break(&self, n: usize, depth: u32) -> Result<(u64, u64), PlanError> {
        let e = self.e(depth)?;
        let bound = self.bound(e)?;
        let eps = self.eps(depth)?;
        let i1 =
            bound
                .checked_sub(eps)
                .filter(|&x| x > 0)
                .ok_or_else(|| PlanError::Inadmissible {
                    n,
                    break_value: 0,
                    e,
                    reason: format!("epsilon {eps} leaves no positive break below {bound}"),
                })?;
        self.admit(n, i1, e, "i1")?;
        Ok((e, i1))
    }
}

/// Evaluates members `1..=depth` of an apf plan, recording every step.
pub fn apf_plan(plan: &TowerPlan) -> Result<ApfRun, PlanError> {
    if !matches!(plan.kind, PlanKind::Apf { .. }) {
        return Err(PlanError::Malformed("not an apf plan".into()));
    }
    let lv = Levels::from_plan(plan);
    let p = plan.p;
    let mut upper = Vec::with_capacity(plan.depth);
    let mut lower = Vec::with_capacity(plan.depth);
    let mut cores = Vec::with_capacity(plan.depth);
    let mut trace = Vec::new();
    for n in 1..=plan.depth {
        let core = lv.core(n)?;
        let mut u = core.clone();
        let mut bottom = lv.base.i1;
        for depth in (0..n as u32 - 1).rev() {
            let (e, i1) = lv.step_break(n, depth)?;
            if u < from_u64(i1) {
                return Err(PlanError::BelowStepBreak {
                    n,
                    depth,
                    u: format_rat(&u),
                    i1: i1.to_string(),
                });
            }
            let out = apf_step(i1, &u, p);
            trace.push(ChainStep {
                n,
                depth,
                e,
                i1,
                u_in: Exact(u),
                u_out: Exact(out.clone()),
            });
            u = out;
            bottom = i1;
        }
        lower.push(bottom);
        upper.push(u);
        cores.push(Exact(core));
    }
    let certificate = growth_certificate(&lv);
    let sequence = BreakSequence::build(lower, upper, certificate, VerdictRule::Full, false)?;
    Ok(ApfRun {
        sequence,
        cores,
        trace,
    })
}

fn eps_bound(lv: &Levels) -> u64 {
    lv.eps.iter().copied().max().unwrap_or(0)
}

/// `C` with `|v_{n+1} - v_n| <= C/p^n`.
fn cauchy_constant(lv: &Levels) -> Rat {
    let p = from_u64(lv.plan.p);
    let b = from_u64(eps_bound(lv));
    match lv.base.i {
        BaseBreak::Value(i) => {
            (&p - Rat::one()) * (b + apf_step(lv.base.i1, &from_u64(i), lv.plan.p))
        }
        BaseBreak::Bound(_) => (&p - Rat::one()) * (b + from_u64(lv.base.i1)),
    }
}

/// With scaled levels and the core at the bound, every member extends: the
/// value entering the step at depth `m` stays at least `e_{m+1}/(p - 1)`
/// as long as `p e_0 >= (p - 1) max epsilon`. A fixed numeric core falls
/// below the innermost step break once `n` is large, so it proves nothing.
fn growth_certificate(lv: &Levels) -> Certificate {
    let p = lv.plan.p;
    let scaled_bound = lv.mode == LevelMode::Scaled && matches!(lv.base.i, BaseBreak::Bound(_));
    if scaled_bound && p * lv.plan.e0 >= (p - 1) * eps_bound(lv) {
        Certificate::LinearGrowth {
            e0: lv.plan.e0,
            p,
            cauchy: Exact(cauchy_constant(lv)),
        }
    } else {
        Certificate::None
    }
}

/// `sum_{m<n-1} e_m/p^m - (p-1)/p sum_{m<n-1} epsilon_m/p^m + u_3/p^(n-1)`,
/// the unrolled recursion for member `n`.
pub fn closed_form_value(plan: &TowerPlan, n: usize) -> Result<Rat, PlanError> {
    let lv = Levels::from_plan(plan);
    let p = plan.p;
    let pr = from_u64(p);
    let mut levels = Rat::zero();
    let mut eps = Rat::zero();
    for m in 0..n as u32 - 1 {
        levels += from_u64(lv.e(m)?) / pow(p, m);
        eps += from_u64(lv.eps(m)?) / pow(p, m);
    }
    Ok(levels - (&pr - Rat::one()) / &pr * eps + lv.core(n)? / pow(p, n as u32 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    /// First member where recursion and closed form differ.
    pub first_failure: Option<usize>,
    /// `v_n = (n - 1) e_0 - u_n`.
    pub v: Vec<Exact>,
    pub cauchy: Exact,
    /// Whether `|v_{n+1} - v_n| <= C/p^n` on the whole horizon.
    pub cauchy_holds: bool,
}

impl ClosedFormReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares the upper breaks of `seq` with the closed form of `plan`.
pub fn closed_form_check(
    seq: &BreakSequence,
    plan: &TowerPlan,
) -> Result<ClosedFormReport, PlanError> {
    if !matches!(plan.kind, PlanKind::Apf { .. }) {
        return Err(PlanError::Malformed("not an apf plan".into()));
    }
    let lv = Levels::from_plan(plan);
    let mut first_failure = None;
    let mut v = Vec::with_capacity(seq.horizon());
    for (k, u) in seq.upper.iter().enumerate() {
        let n = k + 1;
        if first_failure.is_none() && closed_form_value(plan, n)? != u.0 {
            first_failure = Some(n);
        }
        v.push(from_u64((n as u64 - 1) * plan.e0) - &u.0);
    }
    let cauchy = cauchy_constant(&lv);
    let cauchy_holds = v.windows(2).enumerate().all(|(k, w)| {
        let diff = &w[1] - &w[0];
        let diff = if diff < Rat::zero() { -diff } else { diff };
        diff <= &cauchy / pow(plan.p, k as u32 + 1)
    });
    Ok(ClosedFormReport {
        first_failure,
        v: v.into_iter().map(Exact).collect(),
        cauchy: Exact(cauchy),
        cauchy_holds,
    })
}
