use std::fmt;

use serde::Serialize;

use super::presentation::{GroupElement, PcPresentation};
use super::PcError;

/// Default ceiling on `p^n` for anything that enumerates the group.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// A triple with `(x y) z != x (y z)` under collection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityWitness {
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: GroupElement,
    /// `(x y) z`
    pub left: GroupElement,
    /// `x (y z)`
    pub right: GroupElement,
}

impl fmt::Display for AssociativityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} * {}) * {} = {} but {} * ({} * {}) = {}",
            self.x, self.y, self.z, self.left, self.x, self.y, self.z, self.right
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStrategy {
    /// Every element `x` against every overlap pair `(y, z)`.
    FullEnumeration,
    /// Only the generator-level overlaps.
    Overlaps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    Pass(CheckStrategy),
    Fail(AssociativityWitness),
}

impl Consistency {
    pub fn passed(&self) -> bool {
        matches!(self, Consistency::Pass(_))
    }
}

/// Overlap triples for collection from the left. Checking associativity on
/// these is sufficient for consistency:
///
/// * `a_k a_j a_i` for `k > j > i`
/// * `a_j^{p-1} a_j a_i` and `a_j a_i^{p-1} a_i` for `j != i`
/// * `a_i a_i^{p-1} a_i`
fn overlap_triples(pres: &PcPresentation) -> Vec<(GroupElement, GroupElement, GroupElement)> {
    let n = pres.n();
    let top = pres.p() - 1;
    let g = |k| pres.generator(k);
    let gp = |k| pres.generator_power(k, top);
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                out.push((g(k), g(j), g(i)));
            }
        }
    }
    for j in 0..n {
        for i in 0..n {
            if i != j {
                out.push((gp(j), g(j), g(i)));
                out.push((g(j), gp(i), g(i)));
            }
        }
        out.push((g(j), gp(j), g(j)));
    }
    out
}

/// The `(y, z)` pairs tried against every `x` in full-enumeration mode; a
/// superset of the second and third slots of [`overlap_triples`].
fn overlap_pairs(pres: &PcPresentation) -> Vec<(GroupElement, GroupElement)> {
    let n = pres.n();
    let top = pres.p() - 1;
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            out.push((pres.generator(j), pres.generator(i)));
        }
        out.push((pres.generator_power(j, top), pres.generator(j)));
    }
    out
}

fn check_triple(
    pres: &PcPresentation,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
) -> Option<AssociativityWitness> {
    let left = pres.collect_product(&pres.collect_product(x, y), z);
    let right = pres.collect_product(x, &pres.collect_product(y, z));
    (left != right).then(|| AssociativityWitness {
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
        left,
        right,
    })
}

/// Decides whether collection defines an associative product on the `p^n`
/// normal words. Groups within `cap` are checked against every element;
/// larger ones only at the generator overlaps.
pub fn consistency_check(pres: &PcPresentation, cap: u64) -> Consistency {
    for (x, y, z) in overlap_triples(pres) {
        if let Some(w) = check_triple(pres, &x, &y, &z) {
            return Consistency::Fail(w);
        }
    }
    match pres.order() {
        Some(order) if order <= cap => {
            let pairs = overlap_pairs(pres);
            for x in pres.enumerate() {
                for (y, z) in &pairs {
                    if let Some(w) = check_triple(pres, &x, y, z) {
                        return Consistency::Fail(w);
                    }
                }
            }
            Consistency::Pass(CheckStrategy::FullEnumeration)
        }
        _ => Consistency::Pass(CheckStrategy::Overlaps),
    }
}

/// A presentation that has passed [`consistency_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcGroup {
    pres: PcPresentation,
    cap: u64,
    strategy: CheckStrategy,
}

impl PcGroup {
    pub fn new(pres: PcPresentation) -> Result<Self, PcError> {
        Self::with_cap(pres, DEFAULT_CAP)
    }

    pub fn with_cap(pres: PcPresentation, cap: u64) -> Result<Self, PcError> {
        match consistency_check(&pres, cap) {
            Consistency::Pass(strategy) => Ok(PcGroup {
                pres,
                cap,
                strategy,
            }),
            Consistency::Fail(w) => Err(PcError::Inconsistent(Box::new(w))),
        }
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn strategy(&self) -> CheckStrategy {
        self.strategy
    }

    pub fn p(&self) -> u32 {
        self.pres.p()
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    /// `p^n` if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.pres.order()
    }

    pub(crate) fn require_enumerable(&self) -> Result<u64, PcError> {
        match self.order() {
            Some(o) if o <= self.cap => Ok(o),
            other => Err(PcError::CapExceeded {
                order: other
                    .map_or_else(|| format!("{}^{}", self.p(), self.n()), |o| o.to_string()),
                cap: self.cap,
            }),
        }
    }

    pub fn elements(&self) -> Result<Vec<GroupElement>, PcError> {
        self.require_enumerable()?;
        Ok(self.pres.enumerate())
    }

    pub fn identity(&self) -> GroupElement {
        self.pres.identity()
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        self.pres.generator(k)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.n()).map(|k| self.generator(k)).collect()
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<(), PcError> {
        self.pres.check_element(x)
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.pres.collect_product(x, y)
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        self.pres.inverse(x)
    }

    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.pres.commutator(x, y)
    }

    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> GroupElement {
        self.pres.conjugate(x, g)
    }

    pub fn pow(&self, x: &GroupElement, e: u64) -> GroupElement {
        self.pres.pow(x, e)
    }

    /// `x^p`.
    pub fn power_p(&self, x: &GroupElement) -> GroupElement {
        self.pres.pow(x, u64::from(self.p()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis(p: u32) -> PcPresentation {
        let mut pres = PcPresentation::new(p, 3).unwrap();
        pres.set_comm(1, 0, &[(2, 1)]).unwrap();
        pres
    }

    #[test]
    fn heisenberg_is_consistent() {
        for p in [2, 3, 5] {
            assert_eq!(
                consistency_check(&heis(p), DEFAULT_CAP),
                Consistency::Pass(CheckStrategy::FullEnumeration)
            );
        }
    }

    #[test]
    fn small_cap_falls_back_to_overlaps() {
        assert_eq!(
            consistency_check(&heis(3), 10),
            Consistency::Pass(CheckStrategy::Overlaps)
        );
        let g = PcGroup::with_cap(heis(3), 10).unwrap();
        assert!(matches!(g.elements(), Err(PcError::CapExceeded { .. })));
    }

    #[test]
    fn class_three_with_elementary_derived_subgroup_is_rejected() {
        // a_i^2 = 1, [a2,a1] = a3, [a3,a1] = a4, [a3,a2] = 1
        let mut pres = PcPresentation::new(2, 4).unwrap();
        pres.set_comm(1, 0, &[(2, 1)]).unwrap();
        pres.set_comm(2, 0, &[(3, 1)]).unwrap();
        match consistency_check(&pres, DEFAULT_CAP) {
            Consistency::Fail(w) => {
                assert_ne!(w.left, w.right);
                assert_eq!(
                    pres.collect_product(&pres.collect_product(&w.x, &w.y), &w.z),
                    w.left
                );
                assert_eq!(
                    pres.collect_product(&w.x, &pres.collect_product(&w.y, &w.z)),
                    w.right
                );
            }
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(matches!(PcGroup::new(pres), Err(PcError::Inconsistent(_))));
    }

    #[test]
    fn cyclic_power_relation_is_consistent() {
        let mut pres = PcPresentation::new(3, 2).unwrap();
        pres.set_power(0, &[(1, 1)]).unwrap();
        let g = PcGroup::new(pres).unwrap();
        let a = g.generator(0);
        assert_eq!(g.power_p(&a), g.generator(1));
        assert!(g.pow(&a, 9).is_identity());
    }

    #[test]
    fn associativity_exhaustive_on_heisenberg_3() {
        let g = PcGroup::new(heis(3)).unwrap();
        let els = g.elements().unwrap();
        for x in &els {
            for y in &els {
                let xy = g.mul(x, y);
                for z in &els {
                    assert_eq!(g.mul(&xy, z), g.mul(x, &g.mul(y, z)));
                }
            }
        }
    }
}
