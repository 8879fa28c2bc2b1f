use geocur::poly::RPoly;
use geocur::rational::{int, rat, Rational};
use geocur::spacetime::{self, Side, SpaceTimeCurrent};
use geocur::verify::fixtures;
use geocur::{CellComplex, Current};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_sheet(seed: u64) -> SpaceTimeCurrent {
    // random 2-chain of (t, x, y) grid cells; slices are 1-chains in the plane
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cx = CellComplex::grid(&[int(0), int(0), int(0)], &[rat(1, 2), rat(1, 3), int(1)], &[2, 3, 2]).unwrap();
    let t = fixtures::random_chain(&mut rng, &cx, 2, 0.5, 3).unwrap();
    SpaceTimeCurrent::with_domain(t, int(0), int(1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn slicing_exchanges_with_boundary(seed in any::<u64>(), num in 1i64..29) {
        let s = random_sheet(seed);
        let tau = rat(num, 29);
        let ds = SpaceTimeCurrent::with_domain(s.current().boundary(), int(0), int(1)).unwrap();
        let a = spacetime::slice(&s, &tau, Side::Below).unwrap().boundary();
        let b = spacetime::slice(&ds, &tau, Side::Below).unwrap().neg();
        prop_assert_eq!(a.to_cell_map(), b.to_cell_map());
    }

    #[test]
    fn coarea_holds_on_random_sheets(seed in any::<u64>()) {
        let s = random_sheet(seed);
        let rep = spacetime::coarea_check(&s, &RPoly::parse("1 + t*x + y^2", &["t", "x", "y"]).unwrap()).unwrap();
        prop_assert!(rep.gap < 1e-9, "gap {}", rep.gap);
    }

    #[test]
    fn translated_slices_are_translates(vx in -4i64..4, vy in -4i64..4, num in 1i64..16) {
        let tri = fixtures::polyline(&[vec![int(0), int(0)], vec![int(1), int(0)], vec![rat(1, 3), int(1)]], true).unwrap();
        let v = [rat(vx, 3), rat(vy, 5)];
        let s = fixtures::translating(&tri, &v, &int(0), &int(1)).unwrap();
        let tau = rat(num, 16);
        let got = spacetime::slice(&s, &tau, Side::Below).unwrap();
        let want = geocur::transport::translate(&tri, &[&v[0] * &tau, &v[1] * &tau]).unwrap();
        prop_assert_eq!(got.to_cell_map(), want.to_cell_map());
        let rep = spacetime::advection_check(&s, 4).unwrap();
        prop_assert!(rep.residual.unwrap() < 1e-10);
    }
}

#[test]
fn open_segments_advect_with_their_endpoints() {
    let seg = fixtures::polyline(&[vec![int(0), int(0)], vec![int(1), rat(1, 2)], vec![rat(3, 2), int(1)]], false).unwrap();
    for v in [[rat(1, 2), rat(-1, 4)], [int(1), rat(1, 2)], [int(0), int(-1)]] {
        let s = fixtures::translating(&seg, &v, &int(0), &int(1)).unwrap();
        let rep = spacetime::advection_check(&s, 4).unwrap();
        assert!(rep.non_critical);
        assert!(rep.residual.unwrap() < 1e-10, "{v:?}: {:?}", rep.residual);
    }
}

#[test]
fn glued_boundary_and_variation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (path, chains) = fixtures::random_boundary_path(&mut rng, 4, 5).unwrap();
    let g = spacetime::glue(&path).unwrap();
    assert_eq!(g.current.current().boundary().to_cell_map(), g.expected_boundary);
    let direct: Rational = chains
        .windows(2)
        .map(|w| w[1].sub(&w[0]).unwrap().mass().exact.unwrap())
        .sum();
    assert_eq!(g.current.total_variation().unwrap().exact, Some(direct.clone()));
    assert_eq!(g.filling_mass.exact, Some(direct));
    // interior slices are minus the snapshots
    let mid = spacetime::slice(&g.current, &rat(3, 10), Side::Below).unwrap();
    assert_eq!(mid.to_cell_map(), path.snapshots[1].neg().to_cell_map());
}

#[test]
fn variation_bounds_dyadic_estimates() {
    let (s, grid) = fixtures::translating_square(1, &rat(-2, 3), 3).unwrap();
    let rep = spacetime::variation_report(&s, 3, &grid).unwrap();
    assert_eq!(rep.var_total_exact.as_deref(), Some("4/3"));
    assert!(rep.ev_nondecreasing);
    assert!(rep.ev.iter().all(|r| r.within_var));
    assert_eq!(rep.ev.last().unwrap().best().1, Some("4/3"));
}

#[test]
fn moving_point_has_no_critical_mass() {
    let w = fixtures::polyline(&[vec![int(0), rat(1, 4)], vec![int(1), rat(3, 4)]], false).unwrap();
    let s = SpaceTimeCurrent::new(w).unwrap();
    let gd = s.geometric_derivative(&Rational::default()).unwrap();
    assert_eq!(gd.crit_mass.exact, Some(int(0)));
    assert_eq!(s.total_variation().unwrap().exact, Some(rat(1, 2)));
    let p = spacetime::slice(&s, &rat(1, 2), Side::Below).unwrap();
    assert_eq!(p, fixtures::point_masses(&[(vec![rat(1, 2)], int(1))]).unwrap().transfer(p.complex()).unwrap());
    let _: Current = p;
}
