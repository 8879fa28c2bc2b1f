//! The Flat Mountain: the dyadic self-similar function `u` on the unit
//! square, its superlevel-set boundaries `S(t)`, the Z-order curve and the
//! graph current of its iterates.
//!
//! Cells of level `n` are indexed by their base-4 digit strings
//! `i_1 ... i_n`; digit `i = bx + 2 by` selects the quadrant (0 lower-left,
//! 1 lower-right, 2 upper-left, 3 upper-right). On that cell `u_n` equals
//! `sum_j i_j 4^{-j}`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cell::Cell;
use crate::chain::Current;
use crate::complex::CellComplex;
use crate::error::{GeoError, Result};
use crate::flatnorm::{flat_norm, FlatKind};
use crate::rational::{self, Measure, Rational};
use crate::spacetime::{CellData, SpaceTimeCurrent};

pub const MAX_LEVEL: u32 = 8;

/// Piecewise-constant function on the level-`n` dyadic grid of `[0,1]^2`.
#[derive(Debug)]
pub struct DyadicFunction {
    level: u32,
    /// Values in digit order: entry `d` belongs to the cell with base-4 code `d`.
    values: Vec<Rational>,
    grid: OnceLock<Arc<CellComplex>>,
}

impl Clone for DyadicFunction {
    fn clone(&self) -> Self {
        let grid = OnceLock::new();
        if let Some(g) = self.grid.get() {
            let _ = grid.set(g.clone());
        }
        DyadicFunction { level: self.level, values: self.values.clone(), grid }
    }
}

/// Column and row of the cell with base-4 code `d` at level `n`.
pub fn position(d: usize, n: u32) -> (usize, usize) {
    let (mut x, mut y) = (0usize, 0usize);
    for j in 0..n {
        let digit = (d >> (2 * (n - 1 - j))) & 3;
        x = 2 * x + (digit & 1);
        y = 2 * y + (digit >> 1);
    }
    (x, y)
}

/// Inverse of [`position`].
pub fn code(x: usize, y: usize, n: u32) -> usize {
    let mut d = 0usize;
    for j in (0..n).rev() {
        d = 4 * d + ((x >> j) & 1) + 2 * ((y >> j) & 1);
    }
    d
}

/// Base-4 digits of the cell containing `p` (points on cell edges go to the
/// upper/right cell, except on the outer boundary).
pub fn digits_of_point(p: &[Rational], n: u32) -> Result<Vec<u8>> {
    let side = 1usize << n;
    let mut idx = [0usize; 2];
    for a in 0..2 {
        if p[a].is_negative() || p[a] > Rational::one() {
            return Err(GeoError::Domain("point outside the unit square".into()));
        }
        let s = (&p[a] * Rational::from_integer((side as i64).into())).floor().to_integer();
        idx[a] = s.to_usize().unwrap_or(side).min(side - 1);
    }
    let d = code(idx[0], idx[1], n);
    Ok((0..n).map(|j| ((d >> (2 * (n - 1 - j))) & 3) as u8).collect())
}

impl DyadicFunction {
    pub fn new(level: u32, values: Vec<Rational>) -> Result<Self> {
        if values.len() != 1usize << (2 * level) {
            return Err(GeoError::Contract("need one value per dyadic cell".into()));
        }
        Ok(DyadicFunction { level, values, grid: OnceLock::new() })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at_code(&self, d: usize) -> &Rational {
        &self.values[d]
    }

    pub fn value_at_position(&self, x: usize, y: usize) -> &Rational {
        &self.values[code(x, y, self.level)]
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Rational> {
        let ds = digits_of_point(p, self.level)?;
        let d = ds.iter().fold(0usize, |acc, &i| 4 * acc + i as usize);
        Ok(self.values[d].clone())
    }

    pub fn spacing(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << self.level)
    }

    /// The level-`n` grid complex on `[0,1]^2`.
    pub fn grid(&self) -> &Arc<CellComplex> {
        self.grid.get_or_init(|| {
            let h = self.spacing();
            let side = 1usize << self.level;
            CellComplex::grid(&[Rational::zero(), Rational::zero()], &[h.clone(), h], &[side, side])
                .expect("dyadic grid")
        })
    }

    fn top_cell(&self, x: usize, y: usize) -> Cell {
        let h = self.spacing();
        let lo = vec![&h * int(x as i64), &h * int(y as i64)];
        Cell::axis_box(lo, &[(0, h.clone()), (1, h)]).0
    }

    /// `L v = sum_i (1/4)(i + v(local))` on the four quadrants.
    pub fn apply_l(&self) -> DyadicFunction {
        let quarter = rational::rat(1, 4);
        let mut values = Vec::with_capacity(4 * self.values.len());
        for i in 0..4 {
            for v in &self.values {
                values.push((int(i) + v) * &quarter);
            }
        }
        DyadicFunction { level: self.level + 1, values, grid: OnceLock::new() }
    }

    /// Total variation `sum over interior edges |jump| h` plus the boundary
    /// jumps to the zero extension.
    pub fn total_variation(&self) -> Rational {
        let side = 1usize << self.level;
        let h = self.spacing();
        let mut acc = Rational::zero();
        let zero = Rational::zero();
        for x in 0..=side {
            for y in 0..side {
                let l = if x > 0 { self.value_at_position(x - 1, y) } else { &zero };
                let r = if x < side { self.value_at_position(x, y) } else { &zero };
                acc += (l - r).abs();
                let b = if x > 0 { self.value_at_position(y, x - 1) } else { &zero };
                let a = if x < side { self.value_at_position(y, x) } else { &zero };
                acc += (b - a).abs();
            }
        }
        acc * h
    }

    /// Area of `{v >= t}`.
    pub fn superlevel_area(&self, t: &Rational) -> Rational {
        let n = self.values.iter().filter(|v| *v >= t).count();
        let h = self.spacing();
        &h * &h * int(n as i64)
    }
}

fn int(v: impl Into<i64>) -> Rational {
    Rational::from_integer(v.into().into())
}

/// `u_n`, built both from the recursion `u_{n+1} = L u_n` and from the
/// digit formula, which must agree.
pub fn iterate_u(n: u32) -> Result<DyadicFunction> {
    if n == 0 || n > MAX_LEVEL {
        return Err(GeoError::Contract(format!("level {n} outside 1..={MAX_LEVEL}")));
    }
    let mut u = DyadicFunction::new(0, vec![Rational::zero()])?;
    for _ in 0..n {
        u = u.apply_l();
    }
    let denom = Rational::new(BigInt::one(), BigInt::one() << (2 * n));
    let closed: Vec<Rational> = (0..1usize << (2 * n)).map(|d| &denom * int(d as i64)).collect();
    if closed != u.values {
        return Err(GeoError::Contract("recursive and closed forms of u_n disagree".into()));
    }
    Ok(u)
}

/// `S(t) = d(1_{u >= t} e1^e2)` restricted to the unit square, on the grid
/// of `u`. For `t < 0` the superlevel set is the whole plane and the result
/// is the zero chain.
pub fn superlevel_slice(u: &DyadicFunction, t: &Rational) -> Result<Current> {
    if t > &Rational::one() {
        return Err(GeoError::Domain(format!("level {t} above 1")));
    }
    let grid = u.grid().clone();
    if t.is_negative() {
        return Ok(Current::zero(grid, 1));
    }
    let side = 1usize << u.level;
    let mut cells = Vec::new();
    for x in 0..side {
        for y in 0..side {
            if u.value_at_position(x, y) >= t {
                cells.push((u.top_cell(x, y), Rational::one()));
            }
        }
    }
    Ok(Current::from_cells(grid, 2, cells)?.boundary())
}

/// Result of evaluating the Z-order curve.
#[derive(Clone, Debug, Serialize)]
pub struct ZOrderPoint {
    pub point: [String; 2],
    pub digits: Vec<u8>,
    /// `u_depth(point) == t` when `t` has at most `depth` digits.
    pub inverse_ok: bool,
}

/// Base-4 digits of `t in [0,1)`, which must have a finite expansion.
pub fn base4_digits(t: &Rational) -> Result<Vec<u8>> {
    if t.is_negative() || t >= &Rational::one() {
        return Err(GeoError::Domain(format!("{t} outside [0,1) (1 only has the repeating-3 expansion)")));
    }
    let den = t.denom();
    if (den & (den - BigInt::one())) != BigInt::zero() {
        return Err(GeoError::Domain(format!("{t} has no finite base-4 expansion")));
    }
    let mut digits = Vec::new();
    let mut r = t.clone();
    while !r.is_zero() {
        r *= int(4);
        let d = r.floor();
        digits.push(d.to_integer().to_u8().unwrap_or(0));
        r -= d;
    }
    Ok(digits)
}

/// `gamma(t) = (sum t^1_j 2^{-j}, sum t^2_j 2^{-j})` with `t^1_j` the low
/// bit and `t^2_j` the high bit of digit `t_j`.
pub fn zorder(t: &Rational, depth: u32) -> Result<ZOrderPoint> {
    let digits = base4_digits(t)?;
    let mut p = [Rational::zero(), Rational::zero()];
    let mut w = rational::rat(1, 2);
    for d in &digits {
        p[0] += &w * int(d & 1);
        p[1] += &w * int(d >> 1);
        w /= int(2);
    }
    let inverse_ok = if depth >= 1 && digits.len() <= depth as usize && depth <= MAX_LEVEL {
        let ds = digits_of_point(&p, depth)?;
        let v = ds.iter().rev().fold(Rational::zero(), |acc, &i| (acc + int(i)) / int(4));
        &v == t
    } else {
        false
    };
    Ok(ZOrderPoint { point: [rational::format(&p[0]), rational::format(&p[1])], digits, inverse_ok })
}

/// The graph of `u` as a space-time 2-current in `R x R^2`: horizontal tops
/// at height `u` and vertical walls over the jumps, split at every level
/// `j 4^{-n}`. The sign makes interior slices equal `+S(t)`.
pub fn graph_current(u: &DyadicFunction) -> Result<SpaceTimeCurrent> {
    let cur = Current::from_cell_map(3, 2, graph_cells(u))?;
    SpaceTimeCurrent::new(cur)
}

/// Critical mass and total spatial variation of the graph current, computed
/// cell by cell without assembling a complex.
pub fn graph_mass_split(u: &DyadicFunction) -> Result<(Measure, Measure)> {
    let cells: Vec<(Cell, Rational)> = graph_cells(u).into_iter().collect();
    let parts = cells
        .par_iter()
        .map(|(c, m)| -> Result<(Measure, Measure)> {
            let d = CellData::of(c, m)?;
            let crit = if d.is_critical() { c.volume().scaled(&m.abs()) } else { Measure::zero() };
            Ok((crit, d.variation()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Measure::sum(parts.iter().map(|p| &p.0)), Measure::sum(parts.iter().map(|p| &p.1))))
}

/// Cells of the graph current with multiplicities.
pub fn graph_cells(u: &DyadicFunction) -> BTreeMap<Cell, Rational> {
    let n = u.level;
    let side = 1usize << n;
    let h = u.spacing();
    let lv = Rational::new(BigInt::one(), BigInt::one() << (2 * n));
    let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
    let minus = -Rational::one();
    for x in 0..side {
        for y in 0..side {
            let v = u.value_at_position(x, y).clone();
            let (c, s) = Cell::axis_box(vec![v, &h * int(x as i64), &h * int(y as i64)], &[(1, h.clone()), (2, h.clone())]);
            Current::accumulate(&mut map, c, &minus * int(s));
        }
    }
    let zero = Rational::zero();
    let level_index = |v: &Rational| -> usize { (v / &lv).to_integer().to_usize().unwrap_or(0) };
    for i in 0..=side {
        for j in 0..side {
            // vertical edge x = i h between columns i-1 and i, wall spans t and y
            let l = if i > 0 { u.value_at_position(i - 1, j) } else { &zero };
            let r = if i < side { u.value_at_position(i, j) } else { &zero };
            push_wall(&mut map, l, r, 1, i, j, &h, &lv, level_index);
            // horizontal edge y = i h between rows i-1 and i, wall spans t and x
            let b = if i > 0 { u.value_at_position(j, i - 1) } else { &zero };
            let a = if i < side { u.value_at_position(j, i) } else { &zero };
            push_wall(&mut map, b, a, 2, i, j, &h, &lv, level_index);
        }
    }
    map
}

#[allow(clippy::too_many_arguments)]
fn push_wall(
    map: &mut BTreeMap<Cell, Rational>,
    lower: &Rational,
    upper: &Rational,
    normal_axis: usize,
    i: usize,
    j: usize,
    h: &Rational,
    lv: &Rational,
    level_index: impl Fn(&Rational) -> usize,
) {
    if lower == upper {
        return;
    }
    // wall over {x_normal = i h}, along the other axis at offset j h
    let along = 3 - normal_axis;
    // orientation e_t ^ e_along with multiplicity -sign(upper - lower) for
    // walls normal to x and +sign(upper - lower) for walls normal to y
    let jump_sign = if upper > lower { 1i64 } else { -1 };
    let m = if normal_axis == 1 { -jump_sign } else { jump_sign };
    let (lo, hi) = if lower < upper { (lower, upper) } else { (upper, lower) };
    for l in level_index(lo)..level_index(hi) {
        let mut p = vec![lv * int(l as i64), Rational::zero(), Rational::zero()];
        p[normal_axis] = h * int(i as i64);
        p[along] = h * int(j as i64);
        let (c, s) = Cell::axis_box(p, &[(0, lv.clone()), (along, h.clone())]);
        Current::accumulate(map, c, int(m * s as i64));
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzEntry {
    pub j: u64,
    pub k: u64,
    pub value: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub level: u32,
    pub entries: Vec<LipschitzEntry>,
    pub all_ok: bool,
}

/// Checks `F(S(j 4^{-n}) - S(k 4^{-n})) = |j - k| 4^{-n}` with the exact
/// homogeneous flat norm for the given index pairs.
pub fn verify_lipschitz(n: u32, pairs: &[(u64, u64)]) -> Result<LipschitzReport> {
    let u = iterate_u(n)?;
    u.grid();
    let top = 1u64 << (2 * n);
    let lv = Rational::new(BigInt::one(), BigInt::one() << (2 * n));
    if pairs.iter().any(|&(j, k)| j > top || k > top) {
        return Err(GeoError::Domain(format!("indices above 4^{n}")));
    }
    let entries = pairs
        .par_iter()
        .map(|&(j, k)| -> Result<LipschitzEntry> {
            let a = superlevel_slice(&u, &(&lv * int(j as i64)))?;
            let b = superlevel_slice(&u, &(&lv * int(k as i64)))?;
            let cert = flat_norm(&a.sub(&b)?, FlatKind::Homogeneous)?;
            let expected = &lv * int((j as i64 - k as i64).abs());
            let value = cert.exact_value().cloned().ok_or_else(|| GeoError::Evaluation("inexact flat norm".into()))?;
            Ok(LipschitzEntry {
                j,
                k,
                ok: value == expected,
                value: rational::format(&value),
                expected: rational::format(&expected),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(LipschitzReport { level: n, entries, all_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn worked_example_point() {
        let u = iterate_u(2).unwrap();
        let p = [rat(4, 5), rat(3, 5)];
        assert_eq!(digits_of_point(&p, 2).unwrap(), vec![3, 1]);
        assert_eq!(u.eval(&p).unwrap(), rat(13, 16));
    }

    #[test]
    fn zorder_digits() {
        let z = zorder(&rat(7, 16), 2).unwrap();
        assert_eq!(z.point, ["3/4".to_string(), "1/4".to_string()]);
        assert!(z.inverse_ok);
        assert!(zorder(&Rational::one(), 3).is_err());
        assert!(zorder(&rat(1, 3), 3).is_err());
    }

    #[test]
    fn positions_round_trip() {
        for d in 0..64 {
            let (x, y) = position(d, 3);
            assert_eq!(code(x, y, 3), d);
        }
    }

    #[test]
    fn half_level_is_upper_half() {
        let u = iterate_u(1).unwrap();
        let s = superlevel_slice(&u, &rat(1, 2)).unwrap();
        assert_eq!(s.mass().exact, Some(int(3)));
        assert!(superlevel_slice(&u, &int(1)).unwrap().is_zero());
        assert!(superlevel_slice(&u, &int(-1)).unwrap().is_zero());
        assert_eq!(superlevel_slice(&u, &int(0)).unwrap().mass().exact, Some(int(4)));
    }

    #[test]
    fn graph_slices_are_superlevel_boundaries() {
        let u = iterate_u(2).unwrap();
        let g = graph_current(&u).unwrap();
        for j in 1..16 {
            let t = rat(2 * j + 1, 32);
            let sl = crate::spacetime::slice(&g, &t, crate::spacetime::Side::Below).unwrap();
            let expected = superlevel_slice(&u, &t).unwrap();
            assert!(sl.same_geometry(&expected), "slice at {t}");
        }
        // the boundary sits on the rim at t = 0
        assert!(g.current().boundary().cells().all(|(c, _)| c.coord_range(0) == (int(0), int(0))));
        let s0 = crate::spacetime::end_slice(&g, true).unwrap();
        let e0 = superlevel_slice(&u, &int(0)).unwrap();
        assert!(s0.same_geometry(&e0));
        assert!(crate::spacetime::end_slice(&g, false).unwrap().is_zero());
    }
}
