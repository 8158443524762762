//! Power-commutator presentations and collection to normal form.
//!
//! A presentation on PC-generators `a_1, ..., a_n` of a group of order `p^n`
//! consists of
//!
//! ```text
//! a_j^p     = a_{j+1}^{x_{j+1}} ... a_n^{x_n}
//! [a_j,a_i] = a_{j+1}^{y_{j+1}} ... a_n^{y_n}      (i < j)
//! ```
//!
//! with the commutator convention `[x, y] = x^-1 y^-1 x y`, so that
//! `a_j a_i = a_i a_j [a_j, a_i]`. Every element has a unique normal form
//! `a_1^{e_1} ... a_n^{e_n}` with `0 <= e_k < p`, stored as a
//! [`GroupElement`].
//!
//! Indices are 0-based in the Rust API (`exponents[0]` is the exponent of
//! `a_1`) and 1-based in the JSON schema.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PcError;
use crate::rat::is_prime;

/// Normal-form exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u32>);

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement(vec![0; n])
    }

    /// The PC-generator `a_{k+1}` (0-based `k`).
    pub fn generator(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        GroupElement(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the first nonzero exponent.
    pub fn depth(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{}", k + 1)?;
            } else {
                write!(f, "a{}^{}", k + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Raw relation data. Structurally valid by construction, but not
/// necessarily consistent; see [`crate::pc::consistency_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct PcPresentation {
    p: u32,
    n: usize,
    power: Vec<Vec<u32>>,
    /// `comm[j][i]` for `i < j`.
    comm: Vec<Vec<Vec<u32>>>,
}

impl PcPresentation {
    /// All relations trivial: the elementary abelian group of order `p^n`.
    pub fn new(p: u32, n: usize) -> Result<Self, PcError> {
        if !is_prime(p as u64) {
            return Err(PcError::NotPrime(p));
        }
        Ok(PcPresentation {
            p,
            n,
            power: vec![vec![0; n]; n],
            comm: (0..n).map(|j| vec![vec![0; n]; j]).collect(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn power_rhs(&self, j: usize) -> &[u32] {
        &self.power[j]
    }

    /// Right-hand side of `[a_j, a_i]`, `i < j`.
    pub fn comm_rhs(&self, j: usize, i: usize) -> &[u32] {
        &self.comm[j][i]
    }

    fn check_rhs(
        &self,
        relation: String,
        after: usize,
        rhs: &[(usize, u32)],
    ) -> Result<Vec<u32>, PcError> {
        let mut v = vec![0; self.n];
        for &(k, e) in rhs {
            if k >= self.n {
                return Err(PcError::IndexOutOfRange {
                    index: k,
                    n: self.n,
                });
            }
            if k <= after {
                return Err(PcError::NotLaterGenerator {
                    relation,
                    generator: k,
                });
            }
            if e >= self.p {
                return Err(PcError::ExponentOutOfRange {
                    exponent: e,
                    p: self.p,
                });
            }
            v[k] = e;
        }
        Ok(v)
    }

    /// Sets `a_j^p = prod a_k^e` over the given `(k, e)` pairs (0-based).
    pub fn set_power(&mut self, j: usize, rhs: &[(usize, u32)]) -> Result<&mut Self, PcError> {
        if j >= self.n {
            return Err(PcError::IndexOutOfRange {
                index: j,
                n: self.n,
            });
        }
        self.power[j] = self.check_rhs(format!("a{}^p", j + 1), j, rhs)?;
        Ok(self)
    }

    /// Sets `[a_j, a_i] = prod a_k^e` (0-based, `i < j`).
    pub fn set_comm(
        &mut self,
        j: usize,
        i: usize,
        rhs: &[(usize, u32)],
    ) -> Result<&mut Self, PcError> {
        if j >= self.n {
            return Err(PcError::IndexOutOfRange {
                index: j,
                n: self.n,
            });
        }
        if i >= j {
            return Err(PcError::CommutatorOrder { j, i });
        }
        self.comm[j][i] = self.check_rhs(format!("[a{},a{}]", j + 1, i + 1), j, rhs)?;
        Ok(self)
    }

    /// `p^n`, or `None` if it overflows.
    pub fn order(&self) -> Option<u64> {
        u64::from(self.p).checked_pow(u32::try_from(self.n).ok()?)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.n)
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        GroupElement::generator(self.n, k)
    }

    /// Element with a single nonzero exponent.
    pub fn generator_power(&self, k: usize, e: u32) -> GroupElement {
        let mut g = self.identity();
        g.0[k] = e % self.p;
        g
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<(), PcError> {
        if x.len() != self.n {
            return Err(PcError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if let Some(&e) = x.0.iter().find(|&&e| e >= self.p) {
            return Err(PcError::ExponentOutOfRange {
                exponent: e,
                p: self.p,
            });
        }
        Ok(())
    }

    /// Multiplies the normal word `x` on the right by `a_k`, in place.
    ///
    /// Uses `a_j^{e} a_k = a_k (a_j [a_j, a_k])^{e}` to move `a_k` left past
    /// the tail, then reduces `a_k^p` by the power relation. Only positions
    /// `>= k` change, and recursion only descends to larger indices, so this
    /// terminates for any presentation, consistent or not.
    fn mul_gen(&self, x: &mut [u32], k: usize) {
        let tail: Vec<u32> = x[k + 1..].to_vec();
        x[k + 1..].iter_mut().for_each(|e| *e = 0);
        x[k] += 1;
        if x[k] == self.p {
            x[k] = 0;
            self.mul_word(x, &self.power[k]);
        }
        for (offset, &e) in tail.iter().enumerate() {
            let j = k + 1 + offset;
            for _ in 0..e {
                self.mul_gen(x, j);
                self.mul_word(x, &self.comm[j][k]);
            }
        }
    }

    /// Multiplies by the word `a_1^{w_1} ... a_n^{w_n}` letter by letter.
    fn mul_word(&self, x: &mut [u32], w: &[u32]) {
        for (k, &e) in w.iter().enumerate() {
            for _ in 0..e {
                self.mul_gen(x, k);
            }
        }
    }

    /// Collected product `x * y`.
    pub fn collect_product(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut z = x.0.clone();
        self.mul_word(&mut z, &y.0);
        GroupElement(z)
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        // Track z = x * y while right-multiplying by a_k^{p - e_k}; the
        // leading index of z strictly increases each round.
        let mut y = self.identity();
        let mut z = x.clone();
        while let Some(k) = z.depth() {
            let fix = self.generator_power(k, self.p - z.0[k]);
            self.mul_word(&mut z.0, &fix.0);
            y = self.collect_product(&y, &fix);
        }
        y
    }

    pub fn pow(&self, x: &GroupElement, e: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.collect_product(&acc, &base);
            }
            base = self.collect_product(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xi = self.inverse(x);
        let yi = self.inverse(y);
        let a = self.collect_product(&xi, &yi);
        let b = self.collect_product(&a, x);
        self.collect_product(&b, y)
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> GroupElement {
        let gi = self.inverse(g);
        let a = self.collect_product(&gi, x);
        self.collect_product(&a, g)
    }

    /// All `p^n` normal words in lexicographic order of exponent vectors.
    pub(crate) fn enumerate(&self) -> Vec<GroupElement> {
        let total = self.order().expect("caller checked the cap") as usize;
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0u32; self.n];
        for _ in 0..total {
            out.push(GroupElement(cur.clone()));
            for k in (0..self.n).rev() {
                cur[k] += 1;
                if cur[k] < self.p {
                    break;
                }
                cur[k] = 0;
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct PowerEntry {
    pub(super) j: usize,
    #[serde(default)]
    pub(super) rhs: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct CommEntry {
    pub(super) j: usize,
    pub(super) i: usize,
    #[serde(default)]
    pub(super) rhs: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationJson {
    p: u32,
    n: usize,
    #[serde(default)]
    power: Vec<PowerEntry>,
    #[serde(default)]
    comm: Vec<CommEntry>,
}

pub(super) fn rhs_from_json(rhs: &BTreeMap<String, u32>) -> Result<Vec<(usize, u32)>, PcError> {
    rhs.iter()
        .map(|(k, &e)| {
            let idx: usize = k
                .parse()
                .map_err(|_| PcError::Malformed(format!("generator key {k:?} is not an index")))?;
            if idx == 0 {
                return Err(PcError::Malformed("generator indices start at 1".into()));
            }
            Ok((idx - 1, e))
        })
        .collect()
}

fn rhs_to_json(v: &[u32]) -> BTreeMap<String, u32> {
    v.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(k, &e)| ((k + 1).to_string(), e))
        .collect()
}

impl TryFrom<PresentationJson> for PcPresentation {
    type Error = PcError;

    fn try_from(js: PresentationJson) -> Result<Self, PcError> {
        let mut pres = PcPresentation::new(js.p, js.n)?;
        for e in &js.power {
            if e.j == 0 {
                return Err(PcError::Malformed("generator indices start at 1".into()));
            }
            pres.set_power(e.j - 1, &rhs_from_json(&e.rhs)?)?;
        }
        for e in &js.comm {
            if e.j == 0 || e.i == 0 {
                return Err(PcError::Malformed("generator indices start at 1".into()));
            }
            pres.set_comm(e.j - 1, e.i - 1, &rhs_from_json(&e.rhs)?)?;
        }
        Ok(pres)
    }
}

impl From<PcPresentation> for PresentationJson {
    fn from(pres: PcPresentation) -> Self {
        let power = (0..pres.n)
            .map(|j| PowerEntry {
                j: j + 1,
                rhs: rhs_to_json(&pres.power[j]),
            })
            .collect();
        let mut comm = Vec::new();
        for j in 0..pres.n {
            for i in 0..j {
                if pres.comm[j][i].iter().any(|&e| e != 0) {
                    comm.push(CommEntry {
                        j: j + 1,
                        i: i + 1,
                        rhs: rhs_to_json(&pres.comm[j][i]),
                    });
                }
            }
        }
        PresentationJson {
            p: pres.p,
            n: pres.n,
            power,
            comm,
        }
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
    fn collection_examples() {
        let h = heis(3);
        let a1 = h.generator(0);
        let a2 = h.generator(1);
        assert_eq!(h.collect_product(&a1, &a2).0, vec![1, 1, 0]);
        assert_eq!(h.collect_product(&a2, &a1).0, vec![1, 1, 1]);
        let x = GroupElement(vec![2, 1, 2]);
        assert_eq!(h.collect_product(&x, &h.identity()), x);
        assert_eq!(h.collect_product(&h.identity(), &x), x);
    }

    #[test]
    fn inverse_and_commutator() {
        let h = heis(3);
        let x = GroupElement(vec![2, 1, 2]);
        let xi = h.inverse(&x);
        assert!(h.collect_product(&x, &xi).is_identity());
        assert!(h.collect_product(&xi, &x).is_identity());
        assert_eq!(
            h.commutator(&h.generator(1), &h.generator(0)),
            h.generator(2)
        );
        assert!(h.commutator(&x, &x).is_identity());
        assert!(h.pow(&h.generator(0), 3).is_identity());
    }

    #[test]
    fn structural_validation() {
        let mut pres = PcPresentation::new(3, 3).unwrap();
        assert!(matches!(
            pres.set_power(1, &[(0, 1)]),
            Err(PcError::NotLaterGenerator { .. })
        ));
        assert!(matches!(
            pres.set_power(1, &[(1, 1)]),
            Err(PcError::NotLaterGenerator { .. })
        ));
        assert!(matches!(
            pres.set_power(0, &[(2, 3)]),
            Err(PcError::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            pres.set_comm(0, 1, &[]),
            Err(PcError::CommutatorOrder { .. })
        ));
        assert!(matches!(
            pres.set_comm(2, 1, &[(2, 1)]),
            Err(PcError::NotLaterGenerator { .. })
        ));
        assert!(matches!(
            PcPresentation::new(4, 2),
            Err(PcError::NotPrime(4))
        ));
    }

    #[test]
    fn json_schema() {
        let js = r#"{"p":3,"n":3,"power":[{"j":1,"rhs":{}}],"comm":[{"j":2,"i":1,"rhs":{"3":1}}]}"#;
        let pres: PcPresentation = serde_json::from_str(js).unwrap();
        assert_eq!(pres, heis(3));
        let out = serde_json::to_string(&pres).unwrap();
        assert_eq!(
            out,
            r#"{"p":3,"n":3,"power":[{"j":1,"rhs":{}},{"j":2,"rhs":{}},{"j":3,"rhs":{}}],"comm":[{"j":2,"i":1,"rhs":{"3":1}}]}"#
        );
        let bad = r#"{"p":3,"n":3,"comm":[{"j":2,"i":1,"rhs":{"2":1}}]}"#;
        assert!(serde_json::from_str::<PcPresentation>(bad).is_err());
        let bad = r#"{"p":3,"n":3,"extra":1}"#;
        assert!(serde_json::from_str::<PcPresentation>(bad).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(GroupElement(vec![1, 0, 2]).to_string(), "a1*a3^2");
        assert_eq!(GroupElement(vec![0, 0]).to_string(), "1");
    }
}
