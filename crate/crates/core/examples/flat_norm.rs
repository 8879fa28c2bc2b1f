//! Flat norms of a small closed curve and of an open segment, in all four
//! variants, with the optimal decomposition `T = dQ + R`.

use geocur::rational::{int, rat};
use geocur::verify::fixtures;
use geocur::{flat_distance, flat_norm, Current, FlatKind, GeoError};

fn main() -> geocur::Result<()> {
    let cx = fixtures::unit_square_grid(4)?;
    // boundary of a 2x1 block of cells: perimeter 3/2, area 1/8
    let block = Current::from_entries(cx.clone(), 2, [(0, int(1)), (1, int(1))])?;
    let loop_ = block.boundary();
    println!("closed curve: mass {}", loop_.mass().value());
    for kind in [FlatKind::Whitney, FlatKind::Homogeneous, FlatKind::IntegralWhitney, FlatKind::IntegralHomogeneous] {
        let cert = flat_norm(&loop_, kind)?;
        cert.verify(&loop_)?;
        println!(
            "  {kind:<22} {}  (M(Q) + M(R) with |Q| = {} cells, |R| = {} cells)",
            cert.exact_value().map(|v| v.to_string()).unwrap_or_default(),
            cert.q.len(),
            cert.r.len()
        );
    }

    let seg = Current::from_entries(cx.clone(), 1, [(0, rat(1, 2))])?;
    println!("open segment with weight 1/2:");
    println!("  whitney     {}", flat_norm(&seg, FlatKind::Whitney)?.value.value());
    match flat_norm(&seg, FlatKind::Homogeneous) {
        Err(GeoError::Infeasible(msg)) => println!("  homogeneous has no filling: {msg}"),
        other => println!("  homogeneous {:?}", other.map(|c| c.value.value())),
    }

    let shifted = Current::from_entries(cx, 2, [(1, int(1)), (2, int(1))])?.boundary();
    let d = flat_distance(&loop_, &shifted, FlatKind::Homogeneous)?;
    println!("homogeneous distance to the curve moved one cell right: {}", d.value.value());
    Ok(())
}
