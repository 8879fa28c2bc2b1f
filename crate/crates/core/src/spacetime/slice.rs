//! Exact slicing by time levels.
//!
//! A slice at a vertex time is taken as the one-sided limit of slices at
//! nearby generic times, so no numerical nudge is involved.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::SpaceTimeCurrent;
use crate::cell::{self, Cell, Point};
use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::linalg;
use crate::path::CurrentPath;
use crate::rational::Rational;

/// Which one-sided limit to take at a time where vertices sit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Limit from earlier times: cells with `lo < t <= hi` contribute.
    Below,
    /// Limit from later times: cells with `lo <= t < hi` contribute.
    Above,
}

fn is_below(t: &Rational, tau: &Rational, side: Side) -> bool {
    match side {
        Side::Below => t < tau,
        Side::Above => t <= tau,
    }
}

/// Orientation of `piece` as a slice of `parent`: the sign of
/// `<e_0 ^ piece, parent>`, matching `d(S restricted to {t < tau}) - (dS)
/// restricted to {t < tau}`.
fn slice_sign(piece: &Cell, parent_edges: &[Point]) -> i8 {
    let n = parent_edges[0].len();
    let mut rows = Vec::with_capacity(parent_edges.len());
    let mut e0 = vec![Rational::zero(); n];
    e0[0] = Rational::from_integer(1.into());
    rows.push(e0);
    if piece.dim() > 0 {
        rows.extend(piece.frame().1);
    }
    let d = linalg::det(linalg::cross_gram(&rows, parent_edges));
    if d.is_zero() {
        0
    } else if d.is_negative() {
        -1
    } else {
        1
    }
}

fn slice_simplex(v: &[Point], tau: &Rational, side: Side, out: &mut Vec<(Cell, i8)>) {
    let below: Vec<usize> = (0..v.len()).filter(|&i| is_below(&v[i][0], tau, side)).collect();
    let above: Vec<usize> = (0..v.len()).filter(|&i| !is_below(&v[i][0], tau, side)).collect();
    if below.is_empty() || above.is_empty() {
        return;
    }
    let point = |a: usize, b: usize| -> Point {
        let s = (tau - &v[a][0]) / (&v[b][0] - &v[a][0]);
        v[a].iter().zip(&v[b]).map(|(x, y)| x + &s * (y - x)).collect()
    };
    let parent: Vec<Point> = v[1..].iter().map(|p| cell::sub(p, &v[0])).collect();
    for path in cell::lattice_paths(below.len() - 1, above.len() - 1) {
        let pts: Vec<Point> = path.iter().map(|&(i, j)| point(below[i], above[j])).collect();
        let (c, _) = Cell::simplex(pts);
        if c.is_degenerate() {
            continue;
        }
        let s = slice_sign(&c, &parent);
        if s != 0 {
            out.push((c, s));
        }
    }
}

/// Pieces of `c` on the level `{t = tau}` with signs relative to `c`.
pub fn slice_cell(c: &Cell, tau: &Rational, side: Side) -> Vec<(Cell, i8)> {
    let (lo, hi) = c.coord_range(0);
    let crosses = match side {
        Side::Below => &lo < tau && tau <= &hi,
        Side::Above => &lo <= tau && tau < &hi,
    };
    if !crosses {
        return Vec::new();
    }
    let mut out = Vec::new();
    match c {
        Cell::Simplex(v) => slice_simplex(v, tau, side, &mut out),
        Cell::Parallelotope { anchor, edges } => {
            let timed: Vec<usize> = (0..edges.len()).filter(|&i| !edges[i][0].is_zero()).collect();
            if timed.len() == 1 {
                // prism over a spatial parallelotope: the slice is a translate
                let p = timed[0];
                let s = (tau - &anchor[0]) / &edges[p][0];
                let base: Point = anchor.iter().zip(&edges[p]).map(|(a, e)| a + &s * e).collect();
                let rest: Vec<Point> = edges.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, e)| e.clone()).collect();
                let (piece, _) = Cell::parallelotope(base, rest);
                let sg = slice_sign(&piece, edges);
                if sg != 0 {
                    out.push((piece, sg));
                }
            } else {
                for (simp, g) in c.triangulate() {
                    let Cell::Simplex(v) = &simp else { unreachable!() };
                    let mut pieces = Vec::new();
                    slice_simplex(v, tau, side, &mut pieces);
                    out.extend(pieces.into_iter().map(|(p, s)| (p, s * g)));
                }
            }
        }
    }
    out
}

/// The slice `S|_tau` projected to `R^d`.
pub fn slice(s: &SpaceTimeCurrent, tau: &Rational, side: Side) -> Result<Current> {
    let (t0, t1) = s.domain();
    if tau < t0 || tau > t1 {
        return Err(GeoError::Domain(format!("slice time {tau} outside [{t0}, {t1}]")));
    }
    let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
    for (c, m) in s.current().cells() {
        for (piece, sg) in slice_cell(c, tau, side) {
            let (flat, s2) = piece.drop_time();
            Current::accumulate(&mut map, flat, m * Rational::from_integer((sg * s2).into()));
        }
    }
    Current::from_cell_map(s.spatial_dim(), s.slice_degree(), map)
}

/// Trace of `S` at an end of its domain read off the boundary: `pi(dS)`
/// restricted to the plane `t = t1`, and minus that at `t = t0`. Unlike a
/// one-sided slice it keeps horizontal pieces lying in the end plane.
pub fn end_slice(s: &SpaceTimeCurrent, at_start: bool) -> Result<Current> {
    let (t0, t1) = s.domain();
    let t = if at_start { t0 } else { t1 };
    let sign = Rational::from_integer(if at_start { -1 } else { 1 }.into());
    let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
    for (c, m) in s.current().boundary().cells() {
        let (lo, hi) = c.coord_range(0);
        if &lo == t && &hi == t {
            let (flat, s2) = c.drop_time();
            Current::accumulate(&mut map, flat, m * &sign * Rational::from_integer(s2.into()));
        }
    }
    Current::from_cell_map(s.spatial_dim(), s.slice_degree(), map)
}

/// Slices at the given times, taken from below inside the domain and from
/// the boundary at its two ends, optionally moved onto `ambient`.
pub fn slice_path(
    s: &SpaceTimeCurrent,
    times: &[Rational],
    ambient: Option<&std::sync::Arc<crate::complex::CellComplex>>,
) -> Result<CurrentPath> {
    let (t0, t1) = s.domain().clone();
    let snaps = times
        .par_iter()
        .map(|t| {
            let sl = if t == &t0 {
                end_slice(s, true)?
            } else if t == &t1 {
                end_slice(s, false)?
            } else {
                slice(s, t, Side::Below)?
            };
            match ambient {
                Some(cx) => sl.transfer_subdivided(cx),
                None => Ok(sl),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CurrentPath::new(times.to_vec(), snaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn prism_slice_is_translate() {
        let (c, _) = Cell::axis_box(vec![int(0), int(0), int(0)], &[(0, int(1)), (2, int(1))]);
        let p = slice_cell(&c, &rat(1, 3), Side::Below);
        assert_eq!(p.len(), 1);
        let (flat, s) = p[0].0.drop_time();
        assert_eq!(flat, Cell::simplex(vec![vec![int(0), int(0)], vec![int(0), int(1)]]).0);
        assert_eq!(p[0].1 * s, 1);
    }

    #[test]
    fn one_sided_limits_at_vertex_times() {
        let (c, _) = Cell::axis_box(vec![int(0), int(0), int(0)], &[(0, int(1)), (2, int(1))]);
        assert!(slice_cell(&c, &int(0), Side::Below).is_empty());
        assert_eq!(slice_cell(&c, &int(0), Side::Above).len(), 1);
        assert_eq!(slice_cell(&c, &int(1), Side::Below).len(), 1);
        assert!(slice_cell(&c, &int(1), Side::Above).is_empty());
    }

    #[test]
    fn triangulated_cell_slices_agree_with_prism() {
        let (c, _) = Cell::axis_box(vec![int(0), int(0), int(0), int(0)], &[(0, int(1)), (1, int(1)), (2, int(1))]);
        let tau = rat(2, 5);
        let mut a: BTreeMap<Cell, Rational> = BTreeMap::new();
        for (p, s) in slice_cell(&c, &tau, Side::Below) {
            Current::accumulate(&mut a, p, int(s as i64));
        }
        let mut b: BTreeMap<Cell, Rational> = BTreeMap::new();
        for (simp, g) in c.triangulate() {
            for (p, s) in slice_cell(&simp, &tau, Side::Below) {
                for (q, s2) in p.triangulate() {
                    Current::accumulate(&mut b, q, int((s * g * s2) as i64));
                }
            }
        }
        let mut a2: BTreeMap<Cell, Rational> = BTreeMap::new();
        for (p, m) in a {
            for (q, s2) in p.triangulate() {
                Current::accumulate(&mut a2, q, &m * int(s2 as i64));
            }
        }
        let ca = Current::from_cell_map(4, 2, a2).unwrap();
        let cb = Current::from_cell_map(4, 2, b).unwrap();
        assert_eq!(ca.mass().exact, cb.mass().exact);
        assert_eq!(ca.mass().exact, Some(int(1)));
        assert_eq!(ca.boundary().mass().exact, cb.boundary().mass().exact);
    }
}
