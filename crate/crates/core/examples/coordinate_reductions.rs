//! Points carried by forward Euler and a density carried by the upwind
//! scheme, each compared with the geometric pushforward.

use geocur::rational::{int, rat};
use geocur::transport::reduce::{self, DensityGrid};
use geocur::verify::fixtures;
use geocur::{form, transport, VectorField};

fn main() -> geocur::Result<()> {
    let pts = fixtures::point_masses(&[(vec![int(0), int(0)], int(1)), (vec![rat(1, 2), rat(1, 4)], int(2))])?;
    let b = VectorField::rotation(vec![int(0), int(0)], int(1));
    for steps in [8, 32, 128] {
        let gap = reduce::particle_discrepancy(&pts, &b, 0.0, 1.0, steps, 1e-3)?;
        println!("particles, {steps:>3} Euler steps: pairing gap {gap:.2e}");
    }

    let v = VectorField::constant(vec![int(1), rat(1, 2)]);
    let bump = |x: &[f64]| {
        let r = ((x[0] - 0.3).powi(2) + (x[1] - 0.3).powi(2)).sqrt();
        if r < 0.2 { (std::f64::consts::FRAC_PI_2 * r / 0.2).cos().powi(2) } else { 0.0 }
    };
    for m in [32usize, 64, 128] {
        let h = 1.0 / m as f64;
        let init = DensityGrid::sample(&[0.0, 0.0], h, &[m, m], &bump, 4);
        let out = reduce::upwind(&init, &v, 0.0, 0.25, 0.8)?;
        let exact = DensityGrid::sample(&[0.0, 0.0], h, &[m, m], &|x: &[f64]| bump(&[x[0] - 0.25, x[1] - 0.125]), 4);
        println!("upwind {m:>3}^2, {} steps: L1 error {:.3e}", out.steps, out.grid.l1_distance(&exact));
        if m == 32 {
            let pushed = transport::pushforward(&init.to_current()?, &v, 0.0, 0.25, 1e-2)?.current;
            let gap = reduce::pairing_discrepancy(&out.grid.to_current()?, &pushed, &form::battery(2, 2))?;
            println!("  pairing gap against the pushed cells: {gap:.3e}");
        }
    }
    Ok(())
}
