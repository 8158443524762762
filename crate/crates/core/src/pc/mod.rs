//! Finite p-groups given by consistent power-commutator presentations.
//!
//! [`PcPresentation`] holds raw relations; [`PcGroup`] is a presentation that
//! has passed [`consistency_check`], and is the only handle through which the
//! subgroup and series machinery can be reached.

mod builders;
mod group;
mod presentation;
mod probes;
mod subgroup;

pub use builders::{
    c_tower_truncation, cyclic, elementary_abelian, heisenberg, FillPolicy, RelationTable,
};
pub use group::{
    consistency_check, AssociativityWitness, CheckStrategy, Consistency, PcGroup, DEFAULT_CAP,
};
pub use presentation::{GroupElement, PcPresentation};
pub use probes::{
    just_infinite_probe, rank_growth_probe, JustInfiniteReport, RankProbe, TowerStep,
};
pub use subgroup::{Quotient, SeriesReport, Subgroup};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("generator index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("relation {relation} may only involve later generators, found a{}", generator + 1)]
    NotLaterGenerator { relation: String, generator: usize },
    #[error("commutator relations are stored as [a_j, a_i] with i < j (got j = {}, i = {})", j + 1, i + 1)]
    CommutatorOrder { j: usize, i: usize },
    #[error("exponent {exponent} outside [0, {p})")]
    ExponentOutOfRange { exponent: u32, p: u32 },
    #[error("element has {got} exponents, presentation has {expected} generators")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("inconsistent presentation: {0}")]
    Inconsistent(Box<AssociativityWitness>),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("tower relation fails: {0}")]
    TowerRelation(String),
    #[error("depth {depth} too small, need at least {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("malformed presentation: {0}")]
    Malformed(String),
}
