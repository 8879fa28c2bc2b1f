use geocur::rational::{int, rat, Rational};
use geocur::transport::{self, reduce};
use geocur::verify::fixtures;
use geocur::{form, VectorField};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<VectorField> {
    vec![
        VectorField::rotation(vec![int(0), int(0)], int(1)),
        VectorField::shear(2, rat(1, 2)),
        VectorField::constant(vec![rat(1, 2), rat(-1, 4)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pushforward_commutes_with_boundary(seed in any::<u64>(), f in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::unit_square_grid(3).unwrap();
        let t = fixtures::random_chain(&mut rng, &cx, 2, 0.5, 2).unwrap();
        let b = &fields()[f];
        let a = transport::pushforward(&t, b, 0.0, 0.5, 1e-2).unwrap().current.boundary();
        let c = transport::pushforward(&t.boundary(), b, 0.0, 0.5, 1e-2).unwrap().current;
        prop_assert_eq!(a.to_cell_map(), c.to_cell_map());
    }

    #[test]
    fn translation_moves_pairings_exactly(seed in any::<u64>(), vx in -3i64..3, vy in -3i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = fixtures::unit_square_grid(2).unwrap();
        let t = fixtures::random_chain(&mut rng, &cx, 1, 0.6, 2).unwrap();
        let v = [rat(vx, 2), rat(vy, 3)];
        let moved = transport::translate(&t, &v).unwrap();
        prop_assert_eq!(moved.mass().exact, t.mass().exact);
        prop_assert_eq!(transport::translate(&moved, &[-&v[0], -&v[1]]).unwrap().to_cell_map(), t.to_cell_map());
    }
}

#[test]
fn rotation_preserves_mass_of_a_polygon() {
    let gon = fixtures::regular_polygon(24, [0.25, 0.5], 0.2).unwrap();
    let b = VectorField::rotation(vec![int(0), int(0)], int(1));
    let p = transport::pushforward(&gon, &b, 0.0, 2.0, 1e-3).unwrap().current;
    assert!((p.mass().value() - gon.mass().value()).abs() < 1e-9);
}

#[test]
fn weak_residual_is_second_order() {
    let gon = fixtures::regular_polygon(16, [0.5, 0.5], 0.25).unwrap();
    let b = VectorField::shear(2, rat(1, 2));
    let forms = form::battery(2, 1);
    let psis = transport::test_functions();
    let res: Vec<f64> = [16i64, 32, 64]
        .iter()
        .map(|&n| {
            let times: Vec<Rational> = (0..=n).map(|j| rat(j, n)).collect();
            let path = transport::transport_path(&gon, &b, &times, 1.0 / 512.0).unwrap();
            transport::gte_residuals(&path, &b, &forms, &psis).unwrap().iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect();
    assert!(res[0] / res[1] > 3.5 && res[1] / res[2] > 3.5, "{res:?}");
}

#[test]
fn residual_refuses_test_functions_that_do_not_vanish() {
    let gon = fixtures::regular_polygon(8, [0.5, 0.5], 0.25).unwrap();
    let b = VectorField::constant(vec![int(1), int(0)]);
    let times: Vec<Rational> = (0..=4).map(|j| rat(j, 4)).collect();
    let path = transport::transport_path(&gon, &b, &times, 1e-2).unwrap();
    let one = geocur::RPoly::parse("1", &["t"]).unwrap();
    assert!(transport::gte_residual(&path, &b, &forms_first(), &one).is_err());
}

fn forms_first() -> geocur::PolyForm {
    form::battery(2, 1).remove(0)
}

#[test]
fn euler_particles_converge_to_the_flow() {
    let pts = fixtures::point_masses(&[(vec![int(1), int(0)], int(1)), (vec![int(0), rat(1, 2)], int(-2))]).unwrap();
    let b = VectorField::rotation(vec![int(0), int(0)], int(1));
    let gaps: Vec<f64> = [32usize, 64, 128].iter().map(|&n| reduce::particle_discrepancy(&pts, &b, 0.0, 1.0, n, 1e-3).unwrap()).collect();
    assert!(gaps[0] / gaps[1] > 1.8 && gaps[1] / gaps[2] > 1.8, "{gaps:?}");
}

#[test]
fn upwind_rejects_large_cfl() {
    let g = reduce::DensityGrid::sample(&[0.0, 0.0], 0.1, &[4, 4], &|_| 1.0, 1);
    assert!(reduce::upwind(&g, &VectorField::constant(vec![int(1), int(0)]), 0.0, 1.0, 1.5).is_err());
}
