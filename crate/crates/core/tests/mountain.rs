use geocur::mountain::{self, DyadicFunction};
use geocur::rational::{int, rat, Rational};
use geocur::spacetime;
use num_traits::One;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zorder_inverts_u(depth in 1u32..=5, code in any::<u64>()) {
        let j = code % (1u64 << (2 * depth));
        let t = Rational::new(j.into(), (1u64 << (2 * depth)).into());
        let z = mountain::zorder(&t, depth).unwrap();
        prop_assert!(z.inverse_ok);
        let u = mountain::iterate_u(depth).unwrap();
        let p: Vec<Rational> = z.point.iter().map(|s| geocur::rational::parse(s).unwrap()).collect();
        prop_assert_eq!(u.eval(&p).unwrap(), t);
    }

    #[test]
    fn position_and_code_are_inverse(n in 1u32..=6, d in any::<usize>()) {
        let d = d % (1usize << (2 * n));
        let (x, y) = mountain::position(d, n);
        prop_assert_eq!(mountain::code(x, y, n), d);
    }

    #[test]
    fn superlevel_sets_have_the_right_area(n in 1u32..=4, j in any::<u64>()) {
        let top = 1u64 << (2 * n);
        let j = j % (top + 1);
        let u = mountain::iterate_u(n).unwrap();
        let t = Rational::new(j.into(), top.into());
        prop_assert_eq!(u.superlevel_area(&t), Rational::one() - &t);
        prop_assert!(mountain::superlevel_slice(&u, &t).unwrap().boundary().is_zero());
    }
}

#[test]
fn values_are_a_permutation_of_the_levels() {
    for n in 1..=4 {
        let u = mountain::iterate_u(n).unwrap();
        let mut v = u.values().to_vec();
        v.sort();
        let top = 1i64 << (2 * n);
        assert_eq!(v, (0..top).map(|j| rat(j, top)).collect::<Vec<_>>());
        assert_eq!(u.apply_l().values(), mountain::iterate_u(n + 1).unwrap().values());
    }
}

#[test]
fn total_variation_grows_with_the_level() {
    let tv: Vec<Rational> = (1..=5).map(|n| mountain::iterate_u(n).unwrap().total_variation()).collect();
    assert!(tv.windows(2).all(|w| w[0] < w[1]), "{tv:?}");
}

#[test]
fn graph_is_critical_and_varies_by_one() {
    for n in 1..=3 {
        let u = mountain::iterate_u(n).unwrap();
        let (crit, var) = mountain::graph_mass_split(&u).unwrap();
        assert_eq!(crit.exact, Some(int(1)));
        assert_eq!(var.exact, Some(int(1)));
        let g = mountain::graph_current(&u).unwrap();
        assert_eq!(g.total_variation().unwrap().exact, Some(int(1)));
        // every slice is the superlevel boundary
        for j in 1..(1i64 << (2 * n)) {
            let t = rat(2 * j + 1, 2 << (2 * n));
            let s = spacetime::slice(&g, &t, spacetime::Side::Below).unwrap().transfer_subdivided(u.grid()).unwrap();
            assert_eq!(s.to_cell_map(), mountain::superlevel_slice(&u, &t).unwrap().to_cell_map());
        }
    }
}

#[test]
fn lipschitz_identity_on_far_pairs() {
    let rep = mountain::verify_lipschitz(2, &[(0, 16), (1, 9), (15, 2)]).unwrap();
    assert!(rep.all_ok);
}

#[test]
fn invalid_levels_are_rejected() {
    assert!(mountain::iterate_u(0).is_err());
    assert!(DyadicFunction::new(1, vec![int(0)]).is_err());
    assert!(mountain::zorder(&rat(1, 3), 3).is_err());
}
