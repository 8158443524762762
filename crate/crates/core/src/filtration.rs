//! Ramification filtrations on a finite p-group.
//!
//! A filtration is given by `i_G`, a positive integer for every element other
//! than the identity (whose value is infinite). For rational `t >= 0` the lower
//! level set is
//!
//! ```text
//! G_t = { x : i_G(x) >= t + 1 }
//! ```
//!
//! so `G_t` only changes at the integers `t = i_G(x) - 1`, and is constant on
//! `(k - 1, k]`. The Herbrand function `phi` has slope `1/(G_0 : G_t)` there,
//! and the upper filtration is `G^u = G_{psi(u)}` with `psi = phi^-1`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::herbrand::PlFunc;
use crate::pc::{GroupElement, PcError, PcGroup, Quotient, Subgroup};
use crate::rat::{format_rat, from_u64, to_u64, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Group(#[from] PcError),
    #[error("i_G({0}) must be at least 1")]
    ZeroValue(GroupElement),
    #[error("the identity has i_G = infinity and cannot be assigned {0}")]
    IdentityAssigned(u64),
    #[error("{0} is assigned twice")]
    Duplicate(GroupElement),
    #[error("no value for {0} and no default")]
    Missing(GroupElement),
    #[error("not a filtration: {0}")]
    Invalid(Box<LevelFailure>),
    #[error("upper level requested at negative u = {0}")]
    NegativeUpper(String),
    #[error("quotient break of {element} is {value}, not an integer")]
    NonIntegralBreak {
        element: GroupElement,
        value: String,
    },
}

/// `i_G` value as written in JSON: a positive integer, or `"infinity"` for
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IgValue {
    Finite(u64),
    Infinite(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Infinity {
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IgEntry {
    pub element: GroupElement,
    pub value: IgValue,
}

/// `{"ig":[{"element":[0,0,1],"value":5}],"default":2}`; `default` covers
/// every unlisted element other than the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IgAssignment {
    #[serde(default)]
    pub ig: Vec<IgEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<u64>,
}

impl IgAssignment {
    pub fn with_default(default: u64) -> Self {
        IgAssignment {
            ig: Vec::new(),
            default: Some(default),
        }
    }

    pub fn set(mut self, element: GroupElement, value: u64) -> Self {
        self.ig.push(IgEntry {
            element,
            value: IgValue::Finite(value),
        });
        self
    }
}

/// Why a level set fails to be a normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LevelWitness {
    /// `x, y` in the level set, `x y` not.
    Product {
        x: GroupElement,
        y: GroupElement,
        product: GroupElement,
    },
    /// `x` in the level set, `g^-1 x g` not.
    Conjugate {
        x: GroupElement,
        g: GroupElement,
        conjugate: GroupElement,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelFailure {
    /// Lower index `i` of the offending `G_i`.
    pub level: u64,
    pub witness: LevelWitness,
}

impl std::fmt::Display for LevelFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            LevelWitness::Product { x, y, product } => write!(
                f,
                "G_{} contains {} and {} but not their product {}",
                self.level, x, y, product
            ),
            LevelWitness::Conjugate { x, g, conjugate } => write!(
                f,
                "G_{} contains {} but not its conjugate {} by {}",
                self.level, x, conjugate, g
            ),
        }
    }
}

/// Result of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Pass,
    Fail(LevelFailure),
}

fn expand(
    group: &PcGroup,
    a: &IgAssignment,
) -> Result<BTreeMap<GroupElement, u64>, FiltrationError> {
    let mut listed = BTreeMap::new();
    for e in &a.ig {
        group.check_element(&e.element)?;
        let v = match e.value {
            IgValue::Infinite(_) if e.element.is_identity() => continue,
            IgValue::Infinite(_) => return Err(FiltrationError::ZeroValue(e.element.clone())),
            IgValue::Finite(v) if e.element.is_identity() => {
                return Err(FiltrationError::IdentityAssigned(v))
            }
            IgValue::Finite(0) => return Err(FiltrationError::ZeroValue(e.element.clone())),
            IgValue::Finite(v) => v,
        };
        if listed.insert(e.element.clone(), v).is_some() {
            return Err(FiltrationError::Duplicate(e.element.clone()));
        }
    }
    if a.default == Some(0) {
        return Err(FiltrationError::ZeroValue(group.identity()));
    }
    let mut ig = BTreeMap::new();
    for x in group.elements()? {
        if x.is_identity() {
            continue;
        }
        let v = match listed.get(&x) {
            Some(&v) => v,
            None => a
                .default
                .ok_or_else(|| FiltrationError::Missing(x.clone()))?,
        };
        ig.insert(x, v);
    }
    Ok(ig)
}

fn check_levels(group: &PcGroup, ig: &BTreeMap<GroupElement, u64>) -> Validation {
    let values: BTreeSet<u64> = ig.values().copied().collect();
    let gens = group.generators();
    for &v in &values {
        let level: Vec<&GroupElement> =
            ig.iter().filter(|(_, &w)| w >= v).map(|(x, _)| x).collect();
        let inside = |z: &GroupElement| z.is_identity() || ig.get(z).is_some_and(|&w| w >= v);
        for x in &level {
            for y in &level {
                let product = group.mul(x, y);
                if !inside(&product) {
                    return Validation::Fail(LevelFailure {
                        level: v - 1,
                        witness: LevelWitness::Product {
                            x: (*x).clone(),
                            y: (*y).clone(),
                            product,
                        },
                    });
                }
            }
            for g in &gens {
                let conjugate = group.conjugate(x, g);
                if !inside(&conjugate) {
                    return Validation::Fail(LevelFailure {
                        level: v - 1,
                        witness: LevelWitness::Conjugate {
                            x: (*x).clone(),
                            g: g.clone(),
                            conjugate,
                        },
                    });
                }
            }
        }
    }
    Validation::Pass
}

/// Continuous PL function through the origin with slope 1 up to the first
/// break and `slope` after each `(break, slope)`; breaks increase.
fn piecewise(levels: impl Iterator<Item = (Rat, Rat)>) -> PlFunc {
    let mut breakpoints: Vec<(Rat, Rat)> = Vec::new();
    let mut slopes = vec![Rat::one()];
    for (x, slope) in levels {
        if x.is_positive() {
            let (x0, y0) = breakpoints.last().cloned().unwrap_or_default();
            let y = y0 + slopes.last().expect("nonempty") * (&x - x0);
            breakpoints.push((x, y));
            slopes.push(slope);
        } else {
            slopes[0] = slope;
        }
    }
    PlFunc::from_parts(breakpoints, slopes).expect("positive slopes, increasing breaks")
}

/// Checks that every level set of the assignment is a normal subgroup.
pub fn validate(group: &PcGroup, assignment: &IgAssignment) -> Result<Validation, FiltrationError> {
    Ok(check_levels(group, &expand(group, assignment)?))
}

/// A finite group with a valid lower-numbering filtration.
#[derive(Clone, Debug)]
pub struct RamFiltration {
    group: PcGroup,
    ig: BTreeMap<GroupElement, u64>,
}

/// `G/H` together with its induced filtration.
#[derive(Clone, Debug)]
pub struct QuotientFiltration {
    pub quotient: Quotient,
    pub filtration: RamFiltration,
}

impl RamFiltration {
    pub fn new(group: PcGroup, assignment: &IgAssignment) -> Result<Self, FiltrationError> {
        let ig = expand(&group, assignment)?;
        Self::from_map(group, ig)
    }

    fn from_map(group: PcGroup, ig: BTreeMap<GroupElement, u64>) -> Result<Self, FiltrationError> {
        match check_levels(&group, &ig) {
            Validation::Pass => Ok(RamFiltration { group, ig }),
            Validation::Fail(f) => Err(FiltrationError::Invalid(Box::new(f))),
        }
    }

    pub fn group(&self) -> &PcGroup {
        &self.group
    }

    /// `i_G(x)`, `None` for the identity.
    pub fn ig(&self, x: &GroupElement) -> Option<u64> {
        self.ig.get(x).copied()
    }

    /// Explicit assignment listing every element other than the identity.
    pub fn assignment(&self) -> IgAssignment {
        IgAssignment {
            ig: self
                .ig
                .iter()
                .map(|(x, &v)| IgEntry {
                    element: x.clone(),
                    value: IgValue::Finite(v),
                })
                .collect(),
            default: None,
        }
    }

    fn values(&self) -> BTreeSet<u64> {
        self.ig.values().copied().collect()
    }

    /// `G_t = { x : i_G(x) >= t + 1 }`.
    pub fn lower_level(&self, t: &Rat) -> Subgroup {
        let threshold = t + Rat::one();
        let gens: Vec<GroupElement> = self
            .ig
            .iter()
            .filter(|(_, &v)| from_u64(v) >= threshold)
            .map(|(x, _)| x.clone())
            .collect();
        self.group
            .subgroup_closure(&gens, false)
            .expect("group is enumerable")
    }

    /// Lower breaks `i_G(x) - 1`, increasing.
    pub fn lower_breaks(&self) -> Vec<u64> {
        self.values().into_iter().map(|v| v - 1).collect()
    }

    /// Upper breaks `phi(i_G(x) - 1)`, increasing.
    pub fn upper_breaks(&self) -> Vec<Rat> {
        let phi = self.herbrand();
        self.lower_breaks()
            .into_iter()
            .map(|t| phi.eval(&from_u64(t)).expect("nonnegative"))
            .collect()
    }

    /// `phi_G`, with slope `|G_t| / |G|` on each `(k - 1, k]`.
    pub fn herbrand(&self) -> PlFunc {
        let order = from_u64(self.ig.len() as u64 + 1);
        piecewise(self.values().into_iter().map(|v| {
            let beyond = 1 + self.ig.values().filter(|&&w| w > v).count() as u64;
            (from_u64(v - 1), from_u64(beyond) / &order)
        }))
    }

    /// `psi_G = phi_G^-1`.
    pub fn psi(&self) -> PlFunc {
        self.herbrand().invert()
    }

    /// `G^u = G_{psi(u)}`.
    pub fn upper_level(&self, u: &Rat) -> Result<Subgroup, FiltrationError> {
        if u.is_negative() {
            return Err(FiltrationError::NegativeUpper(format_rat(u)));
        }
        let t = self.psi().eval(u).expect("nonnegative");
        Ok(self.lower_level(&t))
    }

    /// Largest `u` with `x` in `G^u`.
    fn upper_value(&self, phi: &PlFunc, x: &GroupElement) -> Option<Rat> {
        self.ig(x)
            .map(|v| phi.eval(&from_u64(v - 1)).expect("nonnegative"))
    }

    /// Filtration on `G/H` whose upper levels are the images `G^u H / H`.
    /// Its lower numbering is recovered through the quotient's own Herbrand
    /// function.
    pub fn quotient(&self, h: &Subgroup) -> Result<QuotientFiltration, FiltrationError> {
        let g = &self.group;
        let quotient = g.quotient(h)?;
        let q = quotient.group().clone();
        let phi = self.herbrand();

        // v(xH) = max over the coset of the upper value of its elements.
        let mut top: BTreeMap<GroupElement, Rat> = BTreeMap::new();
        for x in self.ig.keys() {
            let image = quotient.project(g, x);
            if image.is_identity() {
                continue;
            }
            let u = self.upper_value(&phi, x).expect("not the identity");
            top.entry(image)
                .and_modify(|w| {
                    if u > *w {
                        *w = u.clone()
                    }
                })
                .or_insert(u);
        }

        // psi_Q has slope (Q : Q^w) on each (w_{k-1}, w_k].
        let order = from_u64(top.len() as u64 + 1);
        let levels: BTreeSet<Rat> = top.values().cloned().collect();
        let psi_q = piecewise(levels.iter().map(|w| {
            let beyond = 1 + top.values().filter(|&v| v > w).count() as u64;
            (w.clone(), &order / from_u64(beyond))
        }));

        let mut ig = BTreeMap::new();
        for (image, w) in &top {
            let value = psi_q.eval(w).expect("nonnegative") + Rat::one();
            let v = to_u64(&value).ok_or_else(|| FiltrationError::NonIntegralBreak {
                element: image.clone(),
                value: format_rat(&value),
            })?;
            ig.insert(image.clone(), v);
        }
        let filtration = RamFiltration::from_map(q, ig)?;
        Ok(QuotientFiltration {
            quotient,
            filtration,
        })
    }
}
