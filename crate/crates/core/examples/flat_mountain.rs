//! The Flat Mountain: the dyadic functions u_n, the Lipschitz identity for
//! their superlevel boundaries, the split of the graph's mass, the Z-order
//! points and the localized fillings.

use geocur::mountain;
use geocur::rational::rat;
use geocur::spacetime::weak_rademacher_filling;
use geocur::verify::fixtures;

fn main() -> geocur::Result<()> {
    for n in 1..=3 {
        let u = mountain::iterate_u(n)?;
        let (crit, var) = mountain::graph_mass_split(&u)?;
        println!("n = {n}: TV(u) = {}, graph mass on critical set {}, variation {}", u.total_variation(), crit.value(), var.value());
    }
    let pairs: Vec<(u64, u64)> = (0..16).map(|j| (j, j + 1)).chain([(0, 16), (3, 11)]).collect();
    let rep = mountain::verify_lipschitz(2, &pairs)?;
    for e in &rep.entries {
        println!("  F(S({}/16) - S({}/16)) = {} (expected {})", e.j, e.k, e.value, e.expected);
    }
    for t in [rat(7, 16), rat(1, 4), rat(45, 64)] {
        let z = mountain::zorder(&t, 3)?;
        println!("gamma({t}) = ({}, {}), digits {:?}, inverse holds: {}", z.point[0], z.point[1], z.digits, z.inverse_ok);
    }
    let u = mountain::iterate_u(3)?;
    let path = fixtures::superlevel_path(&u, 64)?;
    let t = rat(21, 64);
    let hs = [rat(1, 64), rat(2, 64), rat(3, 64)];
    for (h, r) in hs.iter().zip(weak_rademacher_filling(&path, &t, &hs)?) {
        let mut lo = [rat(1, 1), rat(1, 1)];
        let mut hi = [rat(0, 1), rat(0, 1)];
        for (c, _) in r.cells() {
            let (a, b) = c.bbox();
            for i in 0..2 {
                lo[i] = lo[i].clone().min(a[i].clone());
                hi[i] = hi[i].clone().max(b[i].clone());
            }
        }
        println!("h = {h}: filling/h has mass {}, support in [{}, {}] x [{}, {}]", r.mass().value(), lo[0], hi[0], lo[1], hi[1]);
    }
    Ok(())
}
