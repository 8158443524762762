//! Standard presentations.

use serde::Deserialize;

use super::group::PcGroup;
use super::presentation::{rhs_from_json, CommEntry, PcPresentation, PowerEntry};
use super::PcError;

type Word = Vec<(usize, u32)>;

/// The order-`p^3` group on `a_1, a_2` with `a_3 = [a_2, a_1]` central and
/// every generator of order `p`.
pub fn heisenberg(p: u32) -> Result<PcGroup, PcError> {
    let mut pres = PcPresentation::new(p, 3)?;
    pres.set_comm(1, 0, &[(2, 1)])?;
    PcGroup::new(pres)
}

/// `(Z/p)^n`: every relation trivial.
pub fn elementary_abelian(p: u32, n: usize) -> Result<PcGroup, PcError> {
    PcGroup::new(PcPresentation::new(p, n)?)
}

/// `Z/p^n` with `a_k^p = a_{k+1}`.
pub fn cyclic(p: u32, n: usize) -> Result<PcGroup, PcError> {
    let mut pres = PcPresentation::new(p, n)?;
    for k in 0..n.saturating_sub(1) {
        pres.set_power(k, &[(k + 1, 1)])?;
    }
    PcGroup::new(pres)
}

/// Extra relations for a tower truncation, in the 1-based JSON form of the
/// presentation schema: `{"power":[{"j":..,"rhs":{..}}],"comm":[{"j":..,"i":..,"rhs":{..}}]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(try_from = "TableJson")]
pub struct RelationTable {
    /// `(j, rhs)` with 0-based indices.
    pub power: Vec<(usize, Word)>,
    /// `(j, i, rhs)` with 0-based indices, `i < j`.
    pub comm: Vec<(usize, usize, Word)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    #[serde(default)]
    power: Vec<PowerEntry>,
    #[serde(default)]
    comm: Vec<CommEntry>,
}

impl TryFrom<TableJson> for RelationTable {
    type Error = PcError;

    fn try_from(js: TableJson) -> Result<Self, PcError> {
        let start = || PcError::Malformed("generator indices start at 1".into());
        let power = js
            .power
            .iter()
            .map(|e| {
                Ok((
                    e.j.checked_sub(1).ok_or_else(start)?,
                    rhs_from_json(&e.rhs)?,
                ))
            })
            .collect::<Result<_, PcError>>()?;
        let comm = js
            .comm
            .iter()
            .map(|e| {
                Ok((
                    e.j.checked_sub(1).ok_or_else(start)?,
                    e.i.checked_sub(1).ok_or_else(start)?,
                    rhs_from_json(&e.rhs)?,
                ))
            })
            .collect::<Result<_, PcError>>()?;
        Ok(RelationTable { power, comm })
    }
}

/// How relations not fixed by the tower are filled in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum FillPolicy {
    /// All other commutators and all p-th powers trivial.
    #[default]
    Trivial,
    /// Trivial except for the listed relations.
    Table(RelationTable),
}

/// Truncation of a tower at depth `d`: generators `a_1..a_d` with
/// `[a_k, a_{k-1}] = a_{k+1}` for `k + 1 <= d`, the rest filled per policy.
///
/// Returns [`PcError::Inconsistent`] with a witness when the filled
/// presentation does not define a group of order `p^d`.
pub fn c_tower_truncation(p: u32, d: usize, policy: &FillPolicy) -> Result<PcGroup, PcError> {
    if d < 3 {
        return Err(PcError::DepthTooSmall {
            depth: d,
            needed: 3,
        });
    }
    let mut pres = PcPresentation::new(p, d)?;
    if let FillPolicy::Table(table) = policy {
        for (j, rhs) in &table.power {
            pres.set_power(*j, rhs)?;
        }
        for (j, i, rhs) in &table.comm {
            if *i + 1 == *j && *j + 1 < d {
                return Err(PcError::TowerRelation(format!(
                    "[a{}, a{}] is fixed to a{} by the tower",
                    j + 1,
                    i + 1,
                    j + 2
                )));
            }
            pres.set_comm(*j, *i, rhs)?;
        }
    }
    for k in 1..d - 1 {
        pres.set_comm(k, k - 1, &[(k + 1, 1)])?;
    }
    PcGroup::new(pres)
}
