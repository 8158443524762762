//! Finite-level checks on tower truncations.

use serde::Serialize;

use super::group::PcGroup;
use super::PcError;

/// Normal closure of one tower generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerStep {
    /// 1-based generator index.
    pub generator: usize,
    pub closure_order: u64,
    /// Required later tower generators (1-based) outside the closure.
    pub missing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JustInfiniteReport {
    pub steps: Vec<TowerStep>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProbe {
    pub k: usize,
    /// 1-based indices of the generators of the probed subgroup.
    pub generators: Vec<usize>,
    pub order: u64,
    pub min_generators: u32,
}

/// For each generator of the tower `tower` (0-based PC indices, in tower
/// order), checks that its normal closure contains every later tower
/// generator. The tower relation `[t_k, t_{k-1}] = t_{k+1}` is verified first.
///
/// The first seed `t_0` has no predecessor to commute with, so only
/// `t_2, t_3, ...` are required of its closure; `t_1` need not lie in it.
pub fn just_infinite_probe(g: &PcGroup, tower: &[usize]) -> Result<JustInfiniteReport, PcError> {
    for &t in tower {
        if t >= g.n() {
            return Err(PcError::IndexOutOfRange { index: t, n: g.n() });
        }
    }
    for w in tower.windows(3) {
        let c = g.commutator(&g.generator(w[1]), &g.generator(w[0]));
        if c != g.generator(w[2]) {
            return Err(PcError::TowerRelation(format!(
                "[a{}, a{}] = {}, expected a{}",
                w[1] + 1,
                w[0] + 1,
                c,
                w[2] + 1
            )));
        }
    }
    let mut steps = Vec::with_capacity(tower.len());
    for (pos, &t) in tower.iter().enumerate() {
        let closure = g.subgroup_closure(&[g.generator(t)], true)?;
        let from = if pos == 0 { 2 } else { pos + 1 };
        let missing = tower[from.min(tower.len())..]
            .iter()
            .filter(|&&u| !closure.contains(&g.generator(u)))
            .map(|&u| u + 1)
            .collect();
        steps.push(TowerStep {
            generator: t + 1,
            closure_order: closure.order(),
            missing,
        });
    }
    let passed = steps.iter().all(|s| s.missing.is_empty());
    Ok(JustInfiniteReport { steps, passed })
}

/// Minimal generator count of `<a_2, ..., a_{2k-1}, a_{2k+1}, ..., a_d>`.
/// `k = 0` probes the whole group; otherwise the depth must be at least `2k + 2`.
pub fn rank_growth_probe(g: &PcGroup, k: usize) -> Result<RankProbe, PcError> {
    let d = g.n();
    let generators: Vec<usize> = if k == 0 {
        (1..=d).collect()
    } else {
        if d < 2 * k + 2 {
            return Err(PcError::DepthTooSmall {
                depth: d,
                needed: 2 * k + 2,
            });
        }
        (2..2 * k).chain(2 * k + 1..=d).collect()
    };
    let gens: Vec<_> = generators.iter().map(|&i| g.generator(i - 1)).collect();
    let h = g.subgroup_closure(&gens, false)?;
    Ok(RankProbe {
        k,
        generators,
        order: h.order(),
        min_generators: g.min_generators(&h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::super::builders::heisenberg;
    use super::*;

    #[test]
    fn heisenberg_tower() {
        let g = heisenberg(3).unwrap();
        let rep = just_infinite_probe(&g, &[0, 1, 2]).unwrap();
        assert!(rep.passed);
        // <a1, a3>: the second seed is not forced into the closure of the first
        assert_eq!(rep.steps[0].closure_order, 9);
        assert!(!g
            .subgroup_closure(&[g.generator(0)], true)
            .unwrap()
            .contains(&g.generator(1)));
        assert_eq!(rep.steps[1].closure_order, 9);
        assert!(g
            .subgroup_closure(&[g.identity()], true)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn wrong_tower_is_reported() {
        let g = heisenberg(3).unwrap();
        assert!(matches!(
            just_infinite_probe(&g, &[1, 0, 2]),
            Err(PcError::TowerRelation(_))
        ));
    }

    #[test]
    fn rank_probe_bounds() {
        let g = heisenberg(5).unwrap();
        let whole = rank_growth_probe(&g, 0).unwrap();
        assert_eq!(whole.min_generators, 2);
        assert!(matches!(
            rank_growth_probe(&g, 1),
            Err(PcError::DepthTooSmall { needed: 4, .. })
        ));
    }
}
