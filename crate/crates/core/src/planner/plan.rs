//! Plan descriptions and their JSON form.

use serde::{Deserialize, Serialize};

use super::apf::apf_plan;
use super::nonapf::{nonapf_plan, AffineRule};
use super::{BreakSequence, PlanError};
use crate::rat::is_prime;

/// Break `i` of the top step of the base `C_3` extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseBreak {
    Value(u64),
    /// The largest admissible value `p e(K_1) / (p - 1)`.
    Bound(BoundMarker),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMarker {
    Bound,
}

impl BaseBreak {
    pub fn bound() -> Self {
        BaseBreak::Bound(BoundMarker::Bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApfBase {
    /// Break of the bottom step `K_1/K`.
    pub i1: u64,
    /// Break of the top step `E/K_1`.
    pub i: BaseBreak,
}

/// Ramification index of the field a step sits over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelMode {
    /// `e = p^m e_0` at nesting depth `m`.
    #[default]
    Scaled,
    /// `e = e_0` at every depth.
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `t_1, t_2, ...` given outright.
    Explicit(Vec<u64>),
    /// `t_{n+1} = mult * t_n + add`.
    Rule(AffineRule),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanKind {
    Apf {
        eps: Vec<u64>,
        base: ApfBase,
        levels: LevelMode,
    },
    NonApf(Schedule),
    Custom(Schedule),
}

/// A finite, explicit construction schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlanJson", into = "PlanJson")]
pub struct TowerPlan {
    pub p: u64,
    /// Absolute ramification index of the base field.
    pub e0: u64,
    pub kind: PlanKind,
    /// Number of levels to evaluate.
    pub depth: usize,
    /// Strengthened admissibility (breaks below the bound prime to `p`).
    pub strict: bool,
}

impl TowerPlan {
    pub fn run(&self) -> Result<BreakSequence, PlanError> {
        match &self.kind {
            PlanKind::Apf { .. } => Ok(apf_plan(self)?.sequence),
            PlanKind::NonApf(_) | PlanKind::Custom(_) => nonapf_plan(self),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    Apf,
    Nonapf,
    Custom,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanJson {
    kind: KindTag,
    p: u64,
    e0: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<ApfBase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<LevelMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<AffineRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strict: Option<bool>,
}

impl TryFrom<PlanJson> for TowerPlan {
    type Error = PlanError;

    fn try_from(js: PlanJson) -> Result<Self, PlanError> {
        let bad = |m: &str| PlanError::Malformed(m.to_string());
        if !is_prime(js.p) {
            return Err(PlanError::NotPrime(js.p));
        }
        if js.e0 == 0 {
            return Err(bad("e0 must be positive"));
        }
        let schedule = |js: &PlanJson| -> Result<(Schedule, usize), PlanError> {
            if js.eps.is_some() || js.base.is_some() || js.levels.is_some() {
                return Err(bad("eps, base and levels only apply to apf plans"));
            }
            match (&js.schedule, &js.rule) {
                (Some(s), None) => {
                    let depth = js.depth.unwrap_or(s.len());
                    if depth > s.len() {
                        return Err(bad("depth exceeds the schedule length"));
                    }
                    Ok((Schedule::Explicit(s[..depth].to_vec()), depth))
                }
                (None, Some(r)) => Ok((
                    Schedule::Rule(*r),
                    js.depth.ok_or_else(|| bad("a rule needs a depth"))?,
                )),
                _ => Err(bad("give exactly one of schedule and rule")),
            }
        };
        let (kind, depth) = match js.kind {
            KindTag::Apf => {
                if js.schedule.is_some() || js.rule.is_some() {
                    return Err(bad("schedule and rule do not apply to apf plans"));
                }
                let base = js.base.ok_or_else(|| bad("apf plans need a base"))?;
                let depth = js.depth.ok_or_else(|| bad("apf plans need a depth"))?;
                let kind = PlanKind::Apf {
                    eps: js.eps.clone().unwrap_or_default(),
                    base,
                    levels: js.levels.unwrap_or_default(),
                };
                (kind, depth)
            }
            KindTag::Nonapf => {
                let (s, d) = schedule(&js)?;
                (PlanKind::NonApf(s), d)
            }
            KindTag::Custom => {
                let (s, d) = schedule(&js)?;
                (PlanKind::Custom(s), d)
            }
        };
        if depth == 0 {
            return Err(bad("depth must be positive"));
        }
        Ok(TowerPlan {
            p: js.p,
            e0: js.e0,
            kind,
            depth,
            strict: js.strict.unwrap_or(true),
        })
    }
}

impl From<TowerPlan> for PlanJson {
    fn from(plan: TowerPlan) -> Self {
        let mut js = PlanJson {
            kind: KindTag::Apf,
            p: plan.p,
            e0: plan.e0,
            depth: Some(plan.depth),
            eps: None,
            base: None,
            levels: None,
            schedule: None,
            rule: None,
            strict: (!plan.strict).then_some(false),
        };
        let set_schedule = |s: Schedule, js: &mut PlanJson| match s {
            Schedule::Explicit(v) => js.schedule = Some(v),
            Schedule::Rule(r) => js.rule = Some(r),
        };
        match plan.kind {
            PlanKind::Apf { eps, base, levels } => {
                js.eps = Some(eps);
                js.base = Some(base);
                js.levels = (levels != LevelMode::Scaled).then_some(levels);
            }
            PlanKind::NonApf(s) => {
                js.kind = KindTag::Nonapf;
                set_schedule(s, &mut js);
            }
            PlanKind::Custom(s) => {
                js.kind = KindTag::Custom;
                set_schedule(s, &mut js);
            }
        }
        js
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_apf() {
        let js = r#"{"kind":"apf","p":2,"e0":2,"eps":[1,1,1],"base":{"i1":5,"i":16},"depth":10}"#;
        let plan: TowerPlan = serde_json::from_str(js).unwrap();
        assert_eq!(plan.depth, 10);
        assert!(plan.strict);
        match &plan.kind {
            PlanKind::Apf { eps, base, levels } => {
                assert_eq!(eps, &vec![1, 1, 1]);
                assert_eq!(base.i, BaseBreak::Value(16));
                assert_eq!(*levels, LevelMode::Scaled);
            }
            k => panic!("wrong kind {k:?}"),
        }
        assert_eq!(
            serde_json::to_string(&plan).unwrap(),
            js.replace(
                r#","eps":[1,1,1],"base":{"i1":5,"i":16},"depth":10"#,
                r#","depth":10,"eps":[1,1,1],"base":{"i1":5,"i":16}"#
            )
        );
    }

    #[test]
    fn parse_schedules() {
        let plan: TowerPlan =
            serde_json::from_str(r#"{"kind":"nonapf","p":2,"e0":2,"schedule":[1,3,5,7]}"#).unwrap();
        assert_eq!(plan.depth, 4);
        let plan: TowerPlan = serde_json::from_str(
            r#"{"kind":"custom","p":2,"e0":2,"rule":{"start":1,"mult":2,"add":1},"depth":5}"#,
        )
        .unwrap();
        assert_eq!(
            plan.kind,
            PlanKind::Custom(Schedule::Rule(AffineRule {
                start: 1,
                mult: 2,
                add: 1
            }))
        );
        let base: ApfBase = serde_json::from_str(r#"{"i1":1,"i":"bound"}"#).unwrap();
        assert_eq!(base.i, BaseBreak::bound());
    }

    #[test]
    fn reject_bad_plans() {
        for js in [
            r#"{"kind":"apf","p":4,"e0":2,"base":{"i1":1,"i":3},"depth":2}"#,
            r#"{"kind":"apf","p":2,"e0":2,"depth":2}"#,
            r#"{"kind":"nonapf","p":2,"e0":2}"#,
            r#"{"kind":"nonapf","p":2,"e0":2,"schedule":[1],"rule":{"start":1,"mult":1,"add":2},"depth":1}"#,
            r#"{"kind":"nonapf","p":2,"e0":2,"schedule":[1,3],"depth":3}"#,
            r#"{"kind":"nonapf","p":2,"e0":2,"schedule":[1,3],"bogus":1}"#,
            r#"{"kind":"other","p":2,"e0":2}"#,
        ] {
            assert!(serde_json::from_str::<TowerPlan>(js).is_err(), "{js}");
        }
    }
}
