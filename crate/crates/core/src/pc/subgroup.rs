//! Subgroups by explicit enumeration, and the series built from them.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::group::PcGroup;
use super::presentation::{GroupElement, PcPresentation};
use super::PcError;

/// An explicitly enumerated subgroup together with the generators it was
/// built from. Equality compares element sets only.
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<GroupElement>,
    elements: BTreeSet<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }
}

/// Which subgroups of the lower central and lower p-series coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    /// `|gamma_1|, |gamma_2|, ...` down to 1.
    pub gamma_orders: Vec<u64>,
    /// `|P_0|, |P_1|, ...` down to 1.
    pub p_series_orders: Vec<u64>,
    /// `levels[i]` compares `gamma_{i+1}` with `P_i` (missing terms are 1).
    pub levels: Vec<bool>,
    pub all_equal: bool,
    /// Whether `G^p` lies in `[G, G]`.
    pub powers_in_derived: bool,
}

/// `G/H` with its own PC presentation and the projection from `G`.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: PcGroup,
    /// Generators of `G` that survive in `G/H`, in order.
    kept: Vec<usize>,
    /// `levels[k] = H <a_k, ..., a_n>` for `k = 0..=n`.
    levels: Vec<Subgroup>,
}

impl Quotient {
    pub fn group(&self) -> &PcGroup {
        &self.group
    }

    /// 0-based indices of the PC-generators of `G` whose images generate `G/H`.
    pub fn kept_generators(&self) -> &[usize] {
        &self.kept
    }

    /// Image of `x` in `G/H`, as a normal word of the quotient presentation.
    pub fn project(&self, source: &PcGroup, x: &GroupElement) -> GroupElement {
        let mut y = x.clone();
        let mut exps = Vec::with_capacity(self.kept.len());
        for &k in &self.kept {
            let next = &self.levels[k + 1];
            let step = source.inverse(&source.generator(k));
            let mut e = 0;
            while !next.contains(&y) {
                y = source.mul(&step, &y);
                e += 1;
                debug_assert!(e < source.p(), "sifting left the series");
            }
            exps.push(e);
        }
        GroupElement(exps)
    }

    pub fn project_subgroup(&self, source: &PcGroup, h: &Subgroup) -> Result<Subgroup, PcError> {
        let gens: Vec<GroupElement> = h
            .generators()
            .iter()
            .map(|g| self.project(source, g))
            .collect();
        self.group.subgroup_closure(&gens, false)
    }
}

impl PcGroup {
    fn closure_with(
        &self,
        gens: &[GroupElement],
        conjugators: &[GroupElement],
    ) -> Result<Subgroup, PcError> {
        self.require_enumerable()?;
        for g in gens.iter().chain(conjugators) {
            self.check_element(g)?;
        }
        let mut generators: Vec<GroupElement> = Vec::new();
        let mut elements = BTreeSet::from([self.identity()]);
        let mut pending: VecDeque<GroupElement> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();

        while let Some(g) = pending.pop_front() {
            if elements.contains(&g) {
                continue;
            }
            generators.push(g);
            // Right-multiplication closure by all generators so far.
            let mut queue: VecDeque<GroupElement> = elements.iter().cloned().collect();
            while let Some(x) = queue.pop_front() {
                for h in &generators {
                    let y = self.mul(&x, h);
                    if elements.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            if !conjugators.is_empty() {
                for h in &generators {
                    for c in conjugators {
                        let y = self.conjugate(h, c);
                        if !elements.contains(&y) {
                            pending.push_back(y);
                        }
                    }
                }
            }
        }
        Ok(Subgroup {
            generators,
            elements,
        })
    }

    /// Smallest subgroup (or normal subgroup) containing `gens`.
    pub fn subgroup_closure(
        &self,
        gens: &[GroupElement],
        normal: bool,
    ) -> Result<Subgroup, PcError> {
        if normal {
            self.closure_with(gens, &self.generators())
        } else {
            self.closure_with(gens, &[])
        }
    }

    pub fn whole(&self) -> Result<Subgroup, PcError> {
        self.subgroup_closure(&self.generators(), false)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            generators: Vec::new(),
            elements: BTreeSet::from([self.identity()]),
        }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.generators().iter().all(|x| {
            self.generators()
                .iter()
                .all(|g| h.contains(&self.conjugate(x, g)))
        })
    }

    /// `[A, B]` for subgroups normalized by `conjugators`; generated by the
    /// commutators of generators, closed under conjugation.
    fn commutator_subgroup(
        &self,
        a: &Subgroup,
        b: &Subgroup,
        conjugators: &[GroupElement],
    ) -> Result<Subgroup, PcError> {
        let mut comms = Vec::new();
        for x in a.generators() {
            for y in b.generators() {
                comms.push(self.commutator(x, y));
            }
        }
        self.closure_with(&comms, conjugators)
    }

    /// `H^p`, generated by the p-th powers of all elements of `H`.
    fn power_subgroup(
        &self,
        h: &Subgroup,
        conjugators: &[GroupElement],
    ) -> Result<Subgroup, PcError> {
        let powers: BTreeSet<GroupElement> = h.elements().iter().map(|x| self.power_p(x)).collect();
        let powers: Vec<GroupElement> = powers.into_iter().collect();
        self.closure_with(&powers, conjugators)
    }

    /// `gamma_1 = G`, `gamma_{i+1} = [gamma_i, G]`, ending with the trivial group.
    pub fn lower_central_series(&self) -> Result<Vec<Subgroup>, PcError> {
        let g = self.whole()?;
        let gens = self.generators();
        let mut series = vec![g.clone()];
        while !series.last().expect("nonempty").is_trivial() {
            let next = self.commutator_subgroup(series.last().expect("nonempty"), &g, &gens)?;
            if next.order() == series.last().expect("nonempty").order() {
                // unreachable for p-groups
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    /// `P_0 = G`, `P_{i+1} = P_i^p [P_i, G]`, ending with the trivial group.
    pub fn lower_p_series(&self) -> Result<Vec<Subgroup>, PcError> {
        let g = self.whole()?;
        let gens = self.generators();
        let mut series = vec![g.clone()];
        while !series.last().expect("nonempty").is_trivial() {
            let cur = series.last().expect("nonempty");
            let pw = self.power_subgroup(cur, &gens)?;
            let cm = self.commutator_subgroup(cur, &g, &gens)?;
            let mut both = pw.generators().to_vec();
            both.extend_from_slice(cm.generators());
            let next = self.closure_with(&both, &gens)?;
            if next.order() == cur.order() {
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    pub fn series_equality_check(&self) -> Result<SeriesReport, PcError> {
        let gamma = self.lower_central_series()?;
        let pser = self.lower_p_series()?;
        let trivial = self.trivial();
        let len = gamma.len().max(pser.len());
        let levels: Vec<bool> = (0..len)
            .map(|i| gamma.get(i).unwrap_or(&trivial) == pser.get(i).unwrap_or(&trivial))
            .collect();
        let g = &gamma[0];
        let powers = self.power_subgroup(g, &self.generators())?;
        let derived = gamma.get(1).unwrap_or(&trivial);
        Ok(SeriesReport {
            gamma_orders: gamma.iter().map(Subgroup::order).collect(),
            p_series_orders: pser.iter().map(Subgroup::order).collect(),
            all_equal: levels.iter().all(|&b| b),
            levels,
            powers_in_derived: powers.is_subset(derived),
        })
    }

    /// Frattini subgroup `H^p [H, H]`.
    pub fn frattini(&self, h: &Subgroup) -> Result<Subgroup, PcError> {
        let conj = h.generators().to_vec();
        let pw = self.power_subgroup(h, &conj)?;
        let cm = self.commutator_subgroup(h, h, &conj)?;
        let mut both = pw.generators().to_vec();
        both.extend_from_slice(cm.generators());
        self.closure_with(&both, &conj)
    }

    /// Minimal number of generators of `H`: the dimension of
    /// `H / H^p [H, H]` over the field with p elements.
    pub fn min_generators(&self, h: &Subgroup) -> Result<u32, PcError> {
        let phi = self.frattini(h)?;
        let mut index = h.order() / phi.order();
        let p = u64::from(self.p());
        let mut d = 0;
        while index > 1 {
            index /= p;
            d += 1;
        }
        Ok(d)
    }

    /// Nilpotency class: number of nontrivial terms of the lower central series.
    pub fn nilpotency_class(&self) -> Result<usize, PcError> {
        Ok(self.lower_central_series()?.len() - 1)
    }

    /// Greatest `i` with `x` in `gamma_i`. The identity lies in every term and
    /// reports `class + 1`.
    pub fn element_length(&self, x: &GroupElement) -> Result<usize, PcError> {
        self.check_element(x)?;
        let gamma = self.lower_central_series()?;
        if x.is_identity() {
            return Ok(gamma.len());
        }
        Ok(gamma.iter().take_while(|s| s.contains(x)).count())
    }

    /// Builds a PC presentation of `G/H` by sifting through the normal
    /// series `H <a_k, ..., a_n>`.
    pub fn quotient(&self, h: &Subgroup) -> Result<Quotient, PcError> {
        if !self.is_normal(h) {
            return Err(PcError::NotNormal(format!(
                "generated by {}",
                h.generators()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        let n = self.n();
        let mut levels = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut gens = h.generators().to_vec();
            gens.extend((k..n).map(|j| self.generator(j)));
            levels.push(self.subgroup_closure(&gens, false)?);
        }
        let kept: Vec<usize> = (0..n)
            .filter(|&k| levels[k].order() > levels[k + 1].order())
            .collect();

        // Relations of the quotient are computed through a provisional handle
        // whose presentation is filled in as we go.
        let mut pres = PcPresentation::new(self.p(), kept.len())?;
        let sift = |x: &GroupElement| -> GroupElement {
            Quotient {
                group: self.clone(),
                kept: kept.clone(),
                levels: levels.clone(),
            }
            .project(self, x)
        };
        let as_pairs = |v: &GroupElement| -> Vec<(usize, u32)> {
            v.0.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(k, &e)| (k, e))
                .collect()
        };
        for (r, &k) in kept.iter().enumerate() {
            let pw = sift(&self.power_p(&self.generator(k)));
            pres.set_power(r, &as_pairs(&pw))?;
            for (s, &j) in kept.iter().enumerate().take(r) {
                let c = sift(&self.commutator(&self.generator(k), &self.generator(j)));
                pres.set_comm(r, s, &as_pairs(&c))?;
            }
        }
        let group = PcGroup::with_cap(pres, self.cap())?;
        Ok(Quotient {
            group,
            kept,
            levels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::builders::{cyclic, elementary_abelian, heisenberg};
    use super::*;

    fn orders(s: &[Subgroup]) -> Vec<u64> {
        s.iter().map(Subgroup::order).collect()
    }

    #[test]
    fn closure_examples() {
        let g = heisenberg(3).unwrap();
        let center = g.subgroup_closure(&[g.generator(2)], true).unwrap();
        assert_eq!(center.order(), 3);
        let n2 = g.subgroup_closure(&[g.generator(1)], true).unwrap();
        assert_eq!(n2.order(), 9);
        assert!(n2.contains(&g.generator(2)));
        let plain = g.subgroup_closure(&[g.generator(1)], false).unwrap();
        assert_eq!(plain.order(), 3);
        assert!(g.subgroup_closure(&[], true).unwrap().is_trivial());
        assert!(g
            .subgroup_closure(&[g.identity()], false)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn series_on_heisenberg() {
        for (p, o) in [(2u32, 8u64), (3, 27), (5, 125)] {
            let g = heisenberg(p).unwrap();
            let pp = u64::from(p);
            assert_eq!(orders(&g.lower_central_series().unwrap()), vec![o, pp, 1]);
            assert_eq!(orders(&g.lower_p_series().unwrap()), vec![o, pp, 1]);
            let rep = g.series_equality_check().unwrap();
            assert!(rep.all_equal);
            assert!(rep.powers_in_derived);
        }
    }

    #[test]
    fn abelian_series() {
        for p in [2, 3, 5] {
            let g = elementary_abelian(p, 2).unwrap();
            let pp = u64::from(p);
            assert_eq!(orders(&g.lower_central_series().unwrap()), vec![pp * pp, 1]);
            assert_eq!(orders(&g.lower_p_series().unwrap()), vec![pp * pp, 1]);
        }
    }

    #[test]
    fn cyclic_p_squared_separates_the_series() {
        let g = cyclic(3, 2).unwrap();
        let rep = g.series_equality_check().unwrap();
        assert_eq!(rep.gamma_orders, vec![9, 1]);
        assert_eq!(rep.p_series_orders, vec![9, 3, 1]);
        assert_eq!(rep.levels, vec![true, false, true]);
        assert!(!rep.all_equal);
        assert!(!rep.powers_in_derived);
    }

    #[test]
    fn min_generators_examples() {
        for p in [2, 3, 5] {
            let g = heisenberg(p).unwrap();
            assert_eq!(g.min_generators(&g.whole().unwrap()).unwrap(), 2);
            let center = g.subgroup_closure(&[g.generator(2)], false).unwrap();
            assert_eq!(g.min_generators(&center).unwrap(), 1);
            assert_eq!(g.min_generators(&g.trivial()).unwrap(), 0);
            let ab = g
                .subgroup_closure(&[g.generator(1), g.generator(2)], false)
                .unwrap();
            assert_eq!(g.min_generators(&ab).unwrap(), 2);
        }
        let c = cyclic(2, 3).unwrap();
        assert_eq!(c.min_generators(&c.whole().unwrap()).unwrap(), 1);
    }

    #[test]
    fn element_length_examples() {
        let g = heisenberg(3).unwrap();
        assert_eq!(g.element_length(&g.generator(2)).unwrap(), 2);
        assert_eq!(g.element_length(&g.generator(0)).unwrap(), 1);
        assert_eq!(g.element_length(&g.identity()).unwrap(), 3);
        assert_eq!(g.nilpotency_class().unwrap(), 2);
    }

    #[test]
    fn quotient_by_center() {
        let g = heisenberg(3).unwrap();
        let center = g.subgroup_closure(&[g.generator(2)], true).unwrap();
        let q = g.quotient(&center).unwrap();
        assert_eq!(q.group().order(), Some(9));
        assert_eq!(q.kept_generators(), &[0, 1]);
        assert_eq!(q.project(&g, &GroupElement(vec![2, 1, 2])).0, vec![2, 1]);
        // the projection is a homomorphism
        let els = g.elements().unwrap();
        for x in &els {
            for y in &els {
                let lhs = q.project(&g, &g.mul(x, y));
                let rhs = q.group().mul(&q.project(&g, x), &q.project(&g, y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn quotient_extremes_and_non_normal() {
        let g = heisenberg(3).unwrap();
        let q = g.quotient(&g.trivial()).unwrap();
        assert_eq!(q.group().presentation(), g.presentation());
        let q = g.quotient(&g.whole().unwrap()).unwrap();
        assert_eq!(q.group().n(), 0);
        assert_eq!(q.group().order(), Some(1));
        let h = g.subgroup_closure(&[g.generator(0)], false).unwrap();
        assert!(matches!(g.quotient(&h), Err(PcError::NotNormal(_))));
    }
}
