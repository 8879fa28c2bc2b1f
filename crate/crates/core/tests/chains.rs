use geocur::rational::{int, rat};
use geocur::verify::fixtures;
use geocur::{form, io, CellComplex, Current};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid3() -> std::sync::Arc<CellComplex> {
    CellComplex::grid(&[int(0), rat(-1, 2), int(1)], &[rat(1, 2), rat(1, 3), int(1)], &[2, 2, 2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_of_boundary_vanishes(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = fixtures::random_chain(&mut rng, &grid3(), k, 0.5, 3).unwrap();
        prop_assert!(t.boundary().boundary().is_zero());
    }

    #[test]
    fn stokes_on_grid_chains(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = fixtures::random_chain(&mut rng, &grid3(), k, 0.5, 3).unwrap();
        for w in form::battery(3, k - 1) {
            prop_assert_eq!(t.boundary().pair(&w).unwrap(), t.pair(&w.d()).unwrap());
        }
    }

    #[test]
    fn stokes_on_triangles(pts in proptest::collection::vec((-6i64..6, -6i64..6, 1i64..4), 3)) {
        let p: Vec<_> = pts.iter().map(|&(x, y, d)| vec![rat(x, d), rat(y, d)]).collect();
        let (c, s) = geocur::Cell::simplex(p);
        prop_assume!(!c.is_degenerate());
        let mut m = std::collections::BTreeMap::new();
        m.insert(c, int(s as i64));
        let t = Current::from_cell_map(2, 2, m).unwrap();
        for w in form::battery(2, 1) {
            prop_assert_eq!(t.boundary().pair(&w).unwrap(), t.pair(&w.d()).unwrap());
        }
    }

    #[test]
    fn mass_is_a_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::unit_square_grid(3).unwrap();
        let a = fixtures::random_chain(&mut rng, &cx, 1, 0.5, 3).unwrap();
        let b = fixtures::random_chain(&mut rng, &cx, 1, 0.5, 3).unwrap();
        let sum = a.add(&b).unwrap().mass().exact.unwrap();
        prop_assert!(sum <= a.mass().exact.unwrap() + b.mass().exact.unwrap());
        prop_assert_eq!(a.scale(&rat(-3, 2)).mass().exact.unwrap(), a.mass().exact.unwrap() * rat(3, 2));
    }

    #[test]
    fn current_files_round_trip(seed in any::<u64>(), k in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = fixtures::random_chain(&mut rng, &grid3(), k, 0.5, 3).unwrap().scale(&rat(5, 7));
        let text = io::to_json(&io::CurrentFile::inline(&t).unwrap()).unwrap();
        let back: io::CurrentFile = serde_json::from_str(&text).unwrap();
        let u = back.to_current(None).unwrap();
        prop_assert_eq!(&u, &t);
        prop_assert_eq!(io::to_json(&io::CurrentFile::inline(&u).unwrap()).unwrap(), text);
    }
}

#[test]
fn transfer_to_a_refined_grid_keeps_pairings() {
    let coarse = fixtures::unit_square_grid(2).unwrap();
    let fine = fixtures::unit_square_grid(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = fixtures::random_chain(&mut rng, &coarse, 1, 0.7, 2).unwrap();
    let u = t.transfer_subdivided(&fine).unwrap();
    assert_eq!(u.mass().exact, t.mass().exact);
    for w in form::battery(2, 1) {
        assert_eq!(u.pair(&w).unwrap(), t.pair(&w).unwrap());
    }
}
