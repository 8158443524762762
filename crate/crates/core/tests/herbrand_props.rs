use proptest::prelude::*;
use ramify::herbrand::{psi_step, tower_psi, PlFunc};
use ramify::rat::{from_u64, int, rat};
use ramify::Rat;

/// psi of one step evaluated from its definition.
fn step_value(i: u64, p: u64, x: &Rat) -> Rat {
    let i = from_u64(i);
    if *x <= i {
        x.clone()
    } else {
        &i + from_u64(p) * (x - &i)
    }
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn point() -> impl Strategy<Value = Rat> {
    (0i64..2000, 1i64..64).prop_map(|(n, d)| rat(n, d))
}

fn composite(p: u64, breaks: &[u64]) -> PlFunc {
    breaks.iter().fold(PlFunc::identity(), |acc, &i| {
        acc.compose(&psi_step(i, p).unwrap())
    })
}

proptest! {
    #[test]
    fn composition_matches_pointwise_application(p in prime(), breaks in prop::collection::vec(1u64..=50, 1..6), x in point()) {
        // acc o step: the last break is applied first
        let f = composite(p, &breaks);
        let direct = breaks.iter().rev().fold(x.clone(), |y, &i| step_value(i, p, &y));
        prop_assert_eq!(f.eval(&x).unwrap(), direct);
    }

    #[test]
    fn inverse_is_two_sided(p in prime(), breaks in prop::collection::vec(1u64..=50, 1..6), x in point()) {
        let f = composite(p, &breaks);
        let g = f.invert();
        prop_assert_eq!(g.eval(&f.eval(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(f.eval(&g.eval(&x).unwrap()).unwrap(), x);
        prop_assert_eq!(g.invert(), f);
    }

    #[test]
    fn composition_is_associative(p in prime(), a in 1u64..=50, b in 1u64..=50, c in 1u64..=50) {
        let (f, g, h) = (psi_step(a, p).unwrap(), psi_step(b, p).unwrap(), psi_step(c, p).unwrap());
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.compose(&PlFunc::identity()), f.clone());
        prop_assert_eq!(PlFunc::identity().compose(&f), f);
    }

    #[test]
    fn json_round_trip(p in prime(), breaks in prop::collection::vec(1u64..=50, 1..6)) {
        let f = composite(p, &breaks);
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<PlFunc>(&text).unwrap(), f);
    }

    #[test]
    fn tower_upper_breaks_are_images_of_lower_breaks(p in prime(), steps in prop::collection::vec(1u64..=6, 1..6)) {
        // increasing relative breaks t_k, each admissible as the next step
        let mut t = Vec::new();
        let mut cur = 0u64;
        for s in steps {
            cur = cur * p + s;
            t.push(cur);
        }
        let tower = tower_psi(&t, p).unwrap();
        let phi = tower.phi();
        // u_k = phi_{K_{k-1}/K}(t_k); psi_{K_{k-1}/K} applied to u_k gives t_k back
        for (k, u) in tower.upper_breaks.iter().enumerate() {
            let partial = if k == 0 { PlFunc::identity() } else { tower_psi(&t[..k], p).unwrap().psi };
            prop_assert_eq!(partial.eval(u).unwrap(), from_u64(t[k]));
        }
        prop_assert!(tower.upper_breaks.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(phi.invert(), tower.psi);
    }
}

#[test]
fn two_step_tower_fixture() {
    let t = tower_psi(&[1, 5], 2).unwrap();
    assert_eq!(t.upper_breaks, vec![int(1), int(3)]);
    assert_eq!(t.psi.eval(&int(4)).unwrap(), int(9));
}

#[test]
fn rejected_inputs() {
    assert!(psi_step(0, 2).is_err());
    assert!(psi_step(3, 4).is_err());
    assert!(psi_step(3, 2).unwrap().eval(&int(-1)).is_err());
    assert!(tower_psi(&[], 2).is_err());
    assert!(tower_psi(&[5, 3], 2).is_err());
    assert!(
        serde_json::from_str::<PlFunc>(r#"{"breakpoints":[["1","1"]],"slopes":["1","-1"]}"#)
            .is_err()
    );
}
