//! Which lower breaks a cyclic degree-p step can have.

use serde::{Deserialize, Serialize};

use super::PlanError;
use crate::herbrand::psi_step;
use crate::rat::{format_rat, from_u64, is_prime, Rat};

/// `p e / (p - 1)`, the largest possible break of a degree-p cyclic
/// extension of a field with absolute ramification index `e`.
pub fn break_bound(p: u64, e: u64) -> Rat {
    from_u64(p * e) / from_u64(p - 1)
}

/// Whether `j` can be the lower break of a degree-p cyclic extension of a
/// field with absolute ramification index `e`.
///
/// The literal rule is `j <= p e / (p - 1)`. In strengthened mode `j` must in
/// addition be prime to `p`, except at the bound itself.
pub fn cyclic_break_admissible(j: u64, p: u64, e: u64, strengthened: bool) -> bool {
    if j == 0 || p < 2 {
        return false;
    }
    let bound = break_bound(p, e);
    let jr = from_u64(j);
    if jr > bound {
        return false;
    }
    !strengthened || jr == bound || !j.is_multiple_of(p)
}

/// Break data `(i, j, s)` of a pair of cyclic steps over a field with
/// ramification index `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilityQuery {
    pub i: u64,
    pub j: u64,
    pub s: u64,
    pub p: u64,
    pub e: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Feasibility {
    Feasible { s: u64 },
    Infeasible { reason: String },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Conditions on the breaks `i`, `j` of two cyclic degree-p extensions and
/// the break `s` of the extension they are glued along:
///
/// * `p` divides neither `j` nor `s`, and `j <= p e / (p - 1)`;
/// * if `s <= i` then `s <= j`, otherwise `i + (s - i)/p <= j`;
/// * if `i != j` then `s = psi_i(j)` for the degree-p step with break `i`.
pub fn lemma32_feasible(q: &FeasibilityQuery) -> Result<Feasibility, PlanError> {
    let FeasibilityQuery { i, j, s, p, e } = *q;
    if !is_prime(p) {
        return Err(PlanError::NotPrime(p));
    }
    if i == 0 || j == 0 || s == 0 || e == 0 {
        return Err(PlanError::Malformed(
            "i, j, s and e must be positive".into(),
        ));
    }
    let no = |reason: String| Ok(Feasibility::Infeasible { reason });
    if j % p == 0 {
        return no(format!("p = {p} divides j = {j}"));
    }
    if s % p == 0 {
        return no(format!("p = {p} divides s = {s}"));
    }
    if from_u64(j) > break_bound(p, e) {
        return no(format!(
            "j = {j} exceeds p e/(p-1) = {}",
            format_rat(&break_bound(p, e))
        ));
    }
    if s <= i {
        if s > j {
            return no(format!("s = {s} <= i = {i} but s > j = {j}"));
        }
    } else {
        let lhs = from_u64(i) + from_u64(s - i) / from_u64(p);
        if lhs > from_u64(j) {
            return no(format!(
                "i + (s - i)/p = {} exceeds j = {j}",
                format_rat(&lhs)
            ));
        }
    }
    if i != j {
        let expected = psi_step(i, p)?.eval(&from_u64(j))?;
        if expected != from_u64(s) {
            return no(format!(
                "i != j requires s = psi_i(j) = {}",
                format_rat(&expected)
            ));
        }
    }
    Ok(Feasibility::Feasible { s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(i: u64, j: u64, s: u64, p: u64, e: u64) -> FeasibilityQuery {
        FeasibilityQuery { i, j, s, p, e }
    }

    #[test]
    fn admissibility_examples() {
        assert!(cyclic_break_admissible(3, 2, 2, true));
        assert!(!cyclic_break_admissible(5, 2, 2, true));
        assert!(!cyclic_break_admissible(2, 2, 2, true));
        assert!(cyclic_break_admissible(2, 2, 2, false));
        assert!(cyclic_break_admissible(4, 2, 2, true));
        assert!(!cyclic_break_admissible(0, 2, 2, false));
        // bound 3 for p = 3, e = 2
        assert!(cyclic_break_admissible(3, 3, 2, true));
        assert!(!cyclic_break_admissible(4, 3, 2, false));
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(
            lemma32_feasible(&q(1, 3, 5, 2, 2)).unwrap(),
            Feasibility::Feasible { s: 5 }
        );
        assert!(lemma32_feasible(&q(1, 1, 1, 2, 2)).unwrap().is_feasible());
        assert!(!lemma32_feasible(&q(1, 1, 3, 2, 2)).unwrap().is_feasible());
        assert!(!lemma32_feasible(&q(1, 3, 7, 2, 2)).unwrap().is_feasible());
        assert!(matches!(
            lemma32_feasible(&q(1, 1, 1, 4, 2)),
            Err(PlanError::NotPrime(4))
        ));
    }
}
