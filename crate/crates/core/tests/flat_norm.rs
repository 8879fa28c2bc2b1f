use geocur::rational::{int, Rational};
use geocur::verify::{fixtures, oracle};
use geocur::{flat_distance, flat_norm, plateau_filling, Current, FlatKind, GeoError};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KINDS: [FlatKind; 4] = [FlatKind::Whitney, FlatKind::Homogeneous, FlatKind::IntegralWhitney, FlatKind::IntegralHomogeneous];

fn value(t: &Current, kind: FlatKind) -> Option<Rational> {
    match flat_norm(t, kind) {
        Ok(c) => {
            c.verify(t).unwrap();
            Some(c.exact_value().unwrap().clone())
        }
        Err(GeoError::Infeasible(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_matches_enumeration(seed in any::<u64>(), closed in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::small_grid(&mut rng).unwrap();
        let t = if closed {
            fixtures::random_top_chain(&mut rng, &cx, 0.5, 2).unwrap().boundary()
        } else {
            fixtures::random_chain(&mut rng, &cx, 1, 0.4, 2).unwrap()
        };
        for kind in KINDS {
            prop_assert_eq!(value(&t, kind), oracle::enumerate_flat_norm(&t, kind, 20_000_000).unwrap());
        }
    }

    #[test]
    fn norms_are_ordered(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::unit_square_grid(3).unwrap();
        let t = fixtures::random_top_chain(&mut rng, &cx, 0.4, 2).unwrap().boundary();
        let w = value(&t, FlatKind::Whitney).unwrap();
        let h = value(&t, FlatKind::Homogeneous).unwrap();
        let wi = value(&t, FlatKind::IntegralWhitney).unwrap();
        let hi = value(&t, FlatKind::IntegralHomogeneous).unwrap();
        let m = t.mass().exact.unwrap();
        prop_assert!(w <= h && w <= wi && h <= hi && wi <= hi);
        prop_assert!(w <= m);
    }

    #[test]
    fn flat_distance_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::unit_square_grid(2).unwrap();
        let c: Vec<Current> = (0..3).map(|_| fixtures::random_chain(&mut rng, &cx, 1, 0.5, 2).unwrap()).collect();
        let d = |a: &Current, b: &Current| flat_distance(a, b, FlatKind::Whitney).unwrap().exact_value().unwrap().clone();
        prop_assert_eq!(d(&c[0], &c[1]), d(&c[1], &c[0]));
        prop_assert!(d(&c[0], &c[2]) <= d(&c[0], &c[1]) + d(&c[1], &c[2]));
        prop_assert!(d(&c[0], &c[0]).is_zero());
    }
}

#[test]
fn scaling_is_homogeneous_for_real_kinds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cx = fixtures::unit_square_grid(3).unwrap();
    let t = fixtures::random_top_chain(&mut rng, &cx, 0.4, 1).unwrap().boundary();
    for kind in [FlatKind::Whitney, FlatKind::Homogeneous] {
        let a = value(&t, kind).unwrap();
        let b = value(&t.scale(&int(-3)), kind).unwrap();
        assert_eq!(b, a * int(3));
    }
}

#[test]
fn plateau_filling_bounds_the_boundary() {
    let cx = fixtures::unit_square_grid(4).unwrap();
    let t = Current::from_entries(cx, 2, [(0, int(1)), (1, int(1)), (5, int(1))]).unwrap().boundary();
    let q = plateau_filling(&t).unwrap();
    assert_eq!(q.boundary(), t);
    assert_eq!(q.mass().exact, Some(Rational::new(3.into(), 16.into())));
}
