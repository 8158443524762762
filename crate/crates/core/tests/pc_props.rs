use std::sync::OnceLock;

use proptest::prelude::*;
use ramify::pc::{
    c_tower_truncation, consistency_check, cyclic, elementary_abelian, heisenberg,
    just_infinite_probe, FillPolicy, GroupElement, PcGroup, PcPresentation, DEFAULT_CAP,
};

type Mat = [[u32; 3]; 3];

const ID: Mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn mat_mul(a: &Mat, b: &Mat, p: u32) -> Mat {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum::<u32>() % p;
        }
    }
    c
}

fn mat_pow(a: &Mat, e: u32, p: u32) -> Mat {
    (0..e).fold(ID, |acc, _| mat_mul(&acc, a, p))
}

fn mat_inv(a: &Mat, p: u32) -> Mat {
    // unitriangular of exponent p (p odd) or 4 (p = 2)
    let order = if p == 2 { 4 } else { p };
    mat_pow(a, order - 1, p)
}

/// Heisenberg group as unitriangular 3x3 matrices mod p, with
/// `a_3 = [a_2, a_1] = a_2^-1 a_1^-1 a_2 a_1`.
struct Unitriangular {
    p: u32,
    gens: [Mat; 3],
}

impl Unitriangular {
    fn new(p: u32) -> Self {
        let a1 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
        let a2 = [[1, 0, 0], [0, 1, 1], [0, 0, 1]];
        let a3 = [&mat_inv(&a2, p), &mat_inv(&a1, p), &a2, &a1]
            .iter()
            .fold(ID, |acc, m| mat_mul(&acc, m, p));
        Unitriangular {
            p,
            gens: [a1, a2, a3],
        }
    }

    fn image(&self, x: &GroupElement) -> Mat {
        x.0.iter().zip(&self.gens).fold(ID, |acc, (&e, g)| {
            mat_mul(&acc, &mat_pow(g, e, self.p), self.p)
        })
    }
}

const PRIMES: [u32; 3] = [3, 5, 7];

/// Built once: the full consistency check dominates otherwise.
fn cached(depth: usize, p: u32) -> &'static PcGroup {
    static GROUPS: OnceLock<Vec<(usize, u32, PcGroup)>> = OnceLock::new();
    let all = GROUPS.get_or_init(|| {
        PRIMES
            .iter()
            .flat_map(|&p| {
                [
                    (3, p, heisenberg(p).unwrap()),
                    (
                        4,
                        p,
                        c_tower_truncation(p, 4, &FillPolicy::Trivial).unwrap(),
                    ),
                ]
            })
            .collect()
    });
    &all.iter()
        .find(|(d, q, _)| *d == depth && *q == p)
        .expect("cached")
        .2
}

fn element(p: u32, n: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0..p, n).prop_map(GroupElement)
}

fn odd_heisenberg_case() -> impl Strategy<Value = (u32, GroupElement, GroupElement)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (Just(p), element(p, 3), element(p, 3)))
}

proptest! {
    #[test]
    fn collection_agrees_with_matrices((p, x, y) in odd_heisenberg_case()) {
        let g = cached(3, p);
        let m = Unitriangular::new(p);
        prop_assert_eq!(m.image(&g.mul(&x, &y)), mat_mul(&m.image(&x), &m.image(&y), p));
        prop_assert_eq!(m.image(&g.inverse(&x)), mat_inv(&m.image(&x), p));
    }

    #[test]
    fn collection_is_associative_on_truncations(
        (p, x, y, z) in prop::sample::select(PRIMES.to_vec())
            .prop_flat_map(|p| (Just(p), element(p, 4), element(p, 4), element(p, 4)))
    ) {
        let g = cached(4, p);
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.mul(&x, &g.inverse(&x)).is_identity());
        prop_assert_eq!(g.pow(&x, u64::from(p) * u64::from(p)), g.identity());
    }

    #[test]
    fn commutator_identities((p, x, y) in odd_heisenberg_case()) {
        let g = cached(3, p);
        let c = g.commutator(&x, &y);
        // x^-1 y^-1 x y
        let direct = g.mul(&g.mul(&g.inverse(&x), &g.inverse(&y)), &g.mul(&x, &y));
        prop_assert_eq!(&c, &direct);
        prop_assert_eq!(g.inverse(&c), g.commutator(&y, &x));
        // class 2: commutators are central
        prop_assert_eq!(g.conjugate(&c, &x), c);
    }
}

#[test]
fn heisenberg_two_matches_dihedral_matrices() {
    let g = heisenberg(2).unwrap();
    let m = Unitriangular::new(2);
    let all = g.elements().unwrap();
    assert_eq!(all.len(), 8);
    for x in &all {
        for y in &all {
            assert_eq!(m.image(&g.mul(x, y)), mat_mul(&m.image(x), &m.image(y), 2));
        }
    }
}

#[test]
fn standard_groups() {
    for p in [2u32, 3, 5] {
        let g = heisenberg(p).unwrap();
        let pp = u64::from(p);
        assert_eq!(g.order(), Some(pp.pow(3)));
        let rep = g.series_equality_check().unwrap();
        assert_eq!(rep.gamma_orders, vec![pp.pow(3), pp, 1]);
        assert!(rep.all_equal && rep.powers_in_derived);
        assert_eq!(g.min_generators(&g.whole().unwrap()).unwrap(), 2);
        assert_eq!(g.nilpotency_class().unwrap(), 2);

        let e = elementary_abelian(p, 3).unwrap();
        assert_eq!(e.min_generators(&e.whole().unwrap()).unwrap(), 3);
        let c = cyclic(p, 3).unwrap();
        assert_eq!(c.min_generators(&c.whole().unwrap()).unwrap(), 1);
        assert_eq!(
            c.series_equality_check().unwrap().gamma_orders,
            vec![pp.pow(3), 1]
        );
    }
}

#[test]
fn truncation_scan() {
    for p in [2u32, 3, 5, 7] {
        assert!(c_tower_truncation(p, 3, &FillPolicy::Trivial).is_ok());
        let d4 = c_tower_truncation(p, 4, &FillPolicy::Trivial);
        assert_eq!(d4.is_ok(), p != 2, "p = {p}");
        assert!(
            c_tower_truncation(p, 5, &FillPolicy::Trivial).is_err(),
            "p = {p}"
        );
    }
    for p in [3u32, 5, 7] {
        let g = c_tower_truncation(p, 4, &FillPolicy::Trivial).unwrap();
        assert!(g.series_equality_check().unwrap().all_equal);
        assert!(just_infinite_probe(&g, &[0, 1, 2, 3]).unwrap().passed);
    }
}

#[test]
fn witnesses_are_genuine() {
    let js = r#"{"p":2,"n":4,"comm":[{"j":2,"i":1,"rhs":{"3":1}},{"j":3,"i":1,"rhs":{"4":1}}]}"#;
    let pres: PcPresentation = serde_json::from_str(js).unwrap();
    match consistency_check(&pres, DEFAULT_CAP) {
        ramify::pc::Consistency::Fail(w) => {
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
        pass => panic!("accepted: {pass:?}"),
    }
    assert!(PcGroup::new(pres).is_err());
}
