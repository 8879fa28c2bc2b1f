//! Transport of a polygon under a rotation and the weak-equation residual
//! as the snapshot spacing is halved.

use geocur::rational::{int, rat, Rational};
use geocur::transport::{self, gte_residuals, test_functions};
use geocur::verify::fixtures;
use geocur::{form, CurrentPath, VectorField};

fn main() -> geocur::Result<()> {
    let gon = fixtures::regular_polygon(32, [0.5, 0.5], 0.25)?;
    let b = VectorField::rotation(vec![int(0), int(0)], int(1));
    let pushed = transport::pushforward(&gon, &b, 0.0, 1.0, 1e-3)?;
    println!("mass before {:.9}, after a unit-time rotation {:.9}", gon.mass().value(), pushed.current.mass().value());
    println!("boundary stays empty: {}", pushed.current.boundary().is_zero());

    let times: Vec<Rational> = (0..=128).map(|j| rat(j, 128)).collect();
    let path = transport::transport_path(&gon, &b, &times, 1.0 / 1024.0)?;
    let forms = form::battery(2, 1);
    let psis = test_functions();
    let mut prev: Option<f64> = None;
    for e in 4..=7u32 {
        let stride = 1usize << (7 - e);
        let idx: Vec<usize> = (0..=128).step_by(stride).collect();
        let sub = CurrentPath::new(
            idx.iter().map(|&i| path.times[i].clone()).collect(),
            idx.iter().map(|&i| path.snapshots[i].clone()).collect(),
        )?;
        let r = gte_residuals(&sub, &b, &forms, &psis)?.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        match prev {
            Some(p) => println!("dt = 1/{:<4} residual {r:.3e}  ratio {:.2}", 1 << e, p / r),
            None => println!("dt = 1/{:<4} residual {r:.3e}", 1 << e),
        }
        prev = Some(r);
    }
    Ok(())
}
