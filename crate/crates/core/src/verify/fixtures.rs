//! Deterministic generators for test currents, shared by the acceptance
//! suite, the integration tests and the examples.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::cell::{Cell, Point};
use crate::chain::Current;
use crate::complex::CellComplex;
use crate::error::{GeoError, Result};
use crate::mountain::{self, DyadicFunction};
use crate::path::CurrentPath;
use crate::rational::{self, int, rat, Rational};
use crate::spacetime::SpaceTimeCurrent;

/// `[0,1]^2` cut into `m x m` squares.
pub fn unit_square_grid(m: usize) -> Result<Arc<CellComplex>> {
    CellComplex::grid(&[int(0), int(0)], &[rat(1, m as i64), rat(1, m as i64)], &[m, m])
}

/// Top-dimensional chain with independent multiplicities in
/// `-max..=max`, each non-zero with probability `density`; never zero.
pub fn random_top_chain(rng: &mut impl Rng, cx: &Arc<CellComplex>, density: f64, max: i64) -> Result<Current> {
    let k = cx.max_dim();
    let n = cx.len(k);
    loop {
        let mut entries = Vec::new();
        for i in 0..n {
            if rng.gen_bool(density) {
                let mut v = 0;
                while v == 0 {
                    v = rng.gen_range(-max..=max);
                }
                entries.push((i, int(v)));
            }
        }
        if !entries.is_empty() {
            return Current::from_entries(cx.clone(), k, entries);
        }
    }
}

/// Random chain of `k`-cells with multiplicities in `-max..=max`.
pub fn random_chain(rng: &mut impl Rng, cx: &Arc<CellComplex>, k: usize, density: f64, max: i64) -> Result<Current> {
    let mut entries: Vec<(usize, Rational)> = Vec::new();
    for i in 0..cx.len(k) {
        if rng.gen_bool(density) {
            entries.push((i, int(rng.gen_range(-max..=max))));
        }
    }
    Current::from_entries(cx.clone(), k, entries)
}

/// A path of boundaries `T_i = dC_i` on the `m x m` grid of the unit
/// square at times `i / n`, with the generating 2-chains `C_i`.
pub fn random_boundary_path(rng: &mut impl Rng, m: usize, n: usize) -> Result<(CurrentPath, Vec<Current>)> {
    let cx = unit_square_grid(m)?;
    let chains = (0..=n).map(|_| random_top_chain(rng, &cx, 0.3, 1)).collect::<Result<Vec<_>>>()?;
    let times = (0..=n).map(|i| rat(i as i64, n as i64)).collect();
    let path = CurrentPath::new(times, chains.iter().map(Current::boundary).collect())?;
    Ok((path, chains))
}

/// Closed counterclockwise `n`-gon with vertices rounded to binary rationals.
pub fn regular_polygon(n: usize, center: [f64; 2], radius: f64) -> Result<Current> {
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            Ok(vec![rational::from_f64(center[0] + radius * a.cos())?, rational::from_f64(center[1] + radius * a.sin())?])
        })
        .collect::<Result<_>>()?;
    polyline(&pts, true)
}

/// Oriented polyline through `pts`, closed when asked.
pub fn polyline(pts: &[Point], closed: bool) -> Result<Current> {
    let mut map = BTreeMap::new();
    let m = if closed { pts.len() } else { pts.len() - 1 };
    for i in 0..m {
        let (c, s) = Cell::simplex(vec![pts[i].clone(), pts[(i + 1) % pts.len()].clone()]);
        Current::accumulate(&mut map, c, int(s as i64));
    }
    Current::from_cell_map(pts[0].len(), 1, map)
}

/// Weighted points.
pub fn point_masses(pts: &[(Point, Rational)]) -> Result<Current> {
    let mut map = BTreeMap::new();
    for (p, w) in pts {
        Current::accumulate(&mut map, Cell::simplex(vec![p.clone()]).0, w.clone());
    }
    let d = pts.first().map_or(0, |p| p.0.len());
    Current::from_cell_map(d, 0, map)
}

/// `[t0, t1] x T` sheared so that the slice at `t` is `T` translated by
/// `(t - t0) v`.
pub fn translating(t: &Current, v: &[Rational], t0: &Rational, t1: &Rational) -> Result<SpaceTimeCurrent> {
    if v.len() != t.ambient_dim() {
        return Err(GeoError::Contract("velocity and current dimensions differ".into()));
    }
    let seg = Cell::simplex(vec![vec![t0.clone()], vec![t1.clone()]]).0;
    let shear = |x: &Point| -> Point {
        let dt = &x[0] - t0;
        let mut y = x.clone();
        for (i, vi) in v.iter().enumerate() {
            y[i + 1] += &dt * vi;
        }
        y
    };
    let mut map = BTreeMap::new();
    for (c, m) in t.cells() {
        for (p, s) in seg.product(c) {
            let (img, s2) = p.map_points(&shear);
            Current::accumulate(&mut map, img, m * int((s * s2) as i64));
        }
    }
    let cur = Current::from_cell_map(t.ambient_dim() + 1, t.k() + 1, map)?;
    SpaceTimeCurrent::with_domain(cur, t0.clone(), t1.clone())
}

/// The boundary of the unit square moving with speed `speed` along `axis`
/// for unit time, with a grid containing every dyadic slice up to `depth`.
pub fn translating_square(axis: usize, speed: &Rational, depth: u32) -> Result<(SpaceTimeCurrent, Arc<CellComplex>)> {
    let sq = Current::from_entries(CellComplex::unit_grid(&[1, 1])?, 2, [(0, int(1))])?.boundary();
    let mut v = vec![Rational::zero(), Rational::zero()];
    v[axis] = speed.clone();
    let s = translating(&sq, &v, &int(0), &int(1))?;
    let g = Rational::new(1.into(), speed.denom() * (num_bigint::BigInt::from(1) << depth));
    let lo_moving = if speed.is_negative() { speed.clone() } else { Rational::zero() };
    let span = int(1) + speed.abs();
    let count = (span / &g).to_integer().try_into().map_err(|_| GeoError::Domain("grid too large".into()))?;
    let mut lo = vec![Rational::zero(), Rational::zero()];
    let mut h = vec![int(1), int(1)];
    let mut counts = vec![1usize, 1];
    lo[axis] = lo_moving;
    h[axis] = g;
    counts[axis] = count;
    Ok((s, CellComplex::grid(&lo, &h, &counts)?))
}

/// `S(j / samples)` for `j = 0..=samples` on the level-`n` grid.
pub fn superlevel_path(u: &DyadicFunction, samples: usize) -> Result<CurrentPath> {
    let times: Vec<Rational> = (0..=samples).map(|j| rat(j as i64, samples as i64)).collect();
    let snaps = times.iter().map(|t| mountain::superlevel_slice(u, t)).collect::<Result<Vec<_>>>()?;
    CurrentPath::new(times, snaps)
}

/// A 2x2 grid with rational spacings.
pub fn small_grid(rng: &mut impl Rng) -> Result<Arc<CellComplex>> {
    let choices = [rat(1, 2), int(1), rat(3, 2), int(2), rat(2, 3)];
    let h: Vec<Rational> = (0..2).map(|_| choices[rng.gen_range(0..choices.len())].clone()).collect();
    CellComplex::grid(&[int(0), int(0)], &h, &[2, 2])
}

/// A path graph on the line with `n` rational vertices.
pub fn path_graph(rng: &mut impl Rng, n: usize) -> Result<Arc<CellComplex>> {
    let mut x = Rational::zero();
    let mut cells = Vec::new();
    for _ in 1..n {
        let step = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
        let y = &x + step;
        cells.push(Cell::simplex(vec![vec![x.clone()], vec![y.clone()]]).0);
        x = y;
    }
    CellComplex::from_cells(1, cells)
}
