//! A square moving at constant speed: slices, total variation, the dyadic
//! estimates and a slice read back at a generic time.

use geocur::rational::rat;
use geocur::spacetime::{self, Side};
use geocur::verify::fixtures;

fn main() -> geocur::Result<()> {
    let (s, grid) = fixtures::translating_square(0, &rat(3, 4), 3)?;
    let sl = spacetime::slice(&s, &rat(1, 3), Side::Below)?;
    println!("slice at t = 1/3: mass {}, boundaryless {}", sl.mass().value(), sl.boundary().is_zero());
    for (c, m) in sl.cells() {
        println!("  {m:>3} x {:?}", c.vertices().iter().map(|p| format!("({}, {})", p[0], p[1])).collect::<Vec<_>>());
    }
    let rep = spacetime::variation_report(&s, 3, &grid)?;
    println!("Var = {}", rep.var_total_exact.clone().unwrap_or_default());
    for row in &rep.ev {
        let (v, exact) = row.best();
        println!("  eV at depth {}: {} ({v:.6}), within Var: {}", row.depth, exact.unwrap_or("-"), row.within_var);
    }
    println!("estimates nondecreasing: {}", rep.ev_nondecreasing);
    Ok(())
}
