//! The coarea identity for sheared sheets and the advection check, which
//! applies only away from the critical set.

use geocur::poly::RPoly;
use geocur::rational::{int, rat};
use geocur::mountain;
use geocur::spacetime;
use geocur::verify::fixtures;

fn main() -> geocur::Result<()> {
    let seg = fixtures::polyline(&[vec![int(0), int(0)], vec![int(1), rat(1, 2)]], false)?;
    let sheet = fixtures::translating(&seg, &[rat(1, 2), rat(-1, 4)], &int(0), &int(1))?;
    for g in ["1", "1 + t*x", "y^2"] {
        let rep = spacetime::coarea_check(&sheet, &RPoly::parse(g, &["t", "x", "y"])?)?;
        println!("g = {g:<8} lhs {:.12} rhs {:.12} gap {:.1e}", rep.lhs, rep.rhs, rep.gap);
    }
    let tri = fixtures::polyline(&[vec![int(0), int(0)], vec![int(1), int(0)], vec![rat(1, 3), int(1)]], true)?;
    let moving = fixtures::translating(&tri, &[rat(1, 2), rat(-1, 4)], &int(0), &int(1))?;
    let adv = spacetime::advection_check(&moving, 8)?;
    println!("moving triangle: critical mass {}, residual {:.2e}", adv.crit_mass, adv.residual.unwrap_or(f64::NAN));
    let adv = spacetime::advection_check(&sheet, 8)?;
    println!("moving open segment: residual {:.2e}", adv.residual.unwrap_or(f64::NAN));

    let fm = mountain::graph_current(&mountain::iterate_u(2)?)?;
    let adv = spacetime::advection_check(&fm, 16)?;
    println!("flat mountain: critical mass {}, non-critical {}, residual {:?}", adv.crit_mass, adv.non_critical, adv.residual);
    Ok(())
}
