//! Gluing a path of grid boundaries into one space-time current.

use geocur::spacetime;
use geocur::verify::fixtures;
use rand::SeedableRng;

fn main() -> geocur::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (path, _) = fixtures::random_boundary_path(&mut rng, 4, 6)?;
    let g = spacetime::glue(&path)?;
    let boundary = g.current.current().boundary().to_cell_map();
    println!("{} snapshots glued into {} cells", path.len(), g.current.current().len());
    println!("boundary equals -d1 x T_N + d0 x T_0: {}", boundary == g.expected_boundary);
    println!("sum of integral flat distances: {}", g.filling_mass.value());
    println!("total variation of the glued current: {}", g.current.total_variation()?.value());
    for (i, w) in g.fillings.iter().enumerate() {
        println!("  step {i}: filling mass {}", w.mass().value());
    }
    Ok(())
}
