//! Spatial variation on time windows and its essential-variation estimates.

use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{CellData, SpaceTimeCurrent};
use crate::cell::Cell;
use crate::complex::CellComplex;
use crate::error::Result;
use crate::flatnorm::{flat_norm, FlatKind};
use crate::rational::{self, Measure, Rational};

/// `P(t > s)` for `t` the time coordinate of a uniform point of the simplex
/// with vertex times `times`, via confluent divided differences of
/// `(x - s)_+^m / m!`.
fn simplex_tail(times: &[Rational], s: &Rational) -> Rational {
    let m = times.len() - 1;
    let mut z = times.to_vec();
    z.sort();
    let f = |x: &Rational, r: usize| -> Rational {
        // f^{(r)}(x) / r!
        if x <= s {
            return Rational::zero();
        }
        let p = m - r;
        let mut v = Rational::one();
        for _ in 0..p {
            v *= x - s;
        }
        v / (super::factorial(p) * super::factorial(r))
    };
    // dd[i] holds [z_i .. z_{i+len}] for the current length
    let mut dd: Vec<Rational> = z.iter().map(|x| f(x, 0)).collect();
    for len in 1..=m {
        let mut next = Vec::with_capacity(m + 1 - len);
        for i in 0..=m - len {
            let j = i + len;
            if z[i] == z[j] {
                next.push(f(&z[i], len));
            } else {
                next.push((&dd[i + 1] - &dd[i]) / (&z[j] - &z[i]));
            }
        }
        dd = next;
    }
    &dd[0] * super::factorial(m)
}

/// Fraction of the cell's measure with time in `[a, b]` (the cell must not be
/// horizontal).
fn time_fraction(c: &Cell, a: &Rational, b: &Rational) -> Rational {
    match c {
        Cell::Simplex(v) => {
            let times: Vec<Rational> = v.iter().map(|p| p[0].clone()).collect();
            simplex_tail(&times, a) - simplex_tail(&times, b)
        }
        Cell::Parallelotope { edges, .. } if edges.iter().filter(|e| !e[0].is_zero()).count() == 1 => {
            let (lo, hi) = c.coord_range(0);
            let l = if a > &lo { a.clone() } else { lo.clone() };
            let h = if b < &hi { b.clone() } else { hi.clone() };
            if h <= l {
                Rational::zero()
            } else {
                (h - l) / (hi - lo)
            }
        }
        Cell::Parallelotope { .. } => {
            let parts = c.triangulate();
            let n = Rational::from_integer((parts.len() as i64).into());
            parts.iter().map(|(s, _)| time_fraction(s, a, b)).sum::<Rational>() / n
        }
    }
}

fn window_variation(cells: &[CellData], a: &Rational, b: &Rational, include_b: bool) -> (Measure, Measure) {
    let mut var = Measure::zero();
    let mut crit = Measure::zero();
    for d in cells {
        if d.is_critical() {
            let t = &d.cell.vertices()[0][0];
            let inside = t >= a && (t < b || (include_b && t == b));
            if inside {
                var.add(&d.variation());
                crit.add(&d.cell.volume().scaled(&num_traits::Signed::abs(&d.multiplicity)));
            }
        } else {
            let f = time_fraction(&d.cell, a, b);
            if !f.is_zero() {
                var.add(&d.variation().scaled(&f));
            }
        }
    }
    (var, crit)
}

/// `Var(S; [a, b])`.
pub fn variation(s: &SpaceTimeCurrent, a: &Rational, b: &Rational) -> Result<Measure> {
    Ok(window_variation(&s.cell_data()?, a, b, true).0)
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationBin {
    pub lo: String,
    pub hi: String,
    pub var: f64,
    pub var_exact: Option<String>,
    pub crit_mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvRow {
    pub depth: u32,
    pub ev_whitney: f64,
    pub ev_whitney_exact: Option<String>,
    /// With the homogeneous flat norm; present when every slice is boundaryless.
    pub ev_homogeneous: Option<f64>,
    pub ev_homogeneous_exact: Option<String>,
    /// With the integral homogeneous flat norm; present when every slice is
    /// also integral.
    pub ev_integral: Option<f64>,
    pub ev_integral_exact: Option<String>,
    pub within_var: bool,
}

impl EvRow {
    /// The strongest estimate available: integral, then homogeneous, then Whitney.
    pub fn best(&self) -> (f64, Option<&str>) {
        if let Some(v) = self.ev_integral {
            (v, self.ev_integral_exact.as_deref())
        } else if let Some(v) = self.ev_homogeneous {
            (v, self.ev_homogeneous_exact.as_deref())
        } else {
            (self.ev_whitney, self.ev_whitney_exact.as_deref())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationReport {
    pub var_total: f64,
    pub var_total_exact: Option<String>,
    pub bins: Vec<VariationBin>,
    pub ev: Vec<EvRow>,
    pub ev_nondecreasing: bool,
    /// Largest boundary mass among the sampled slices.
    pub slice_defect: f64,
}

fn dyadic(j: usize, depth: u32, t0: &Rational, t1: &Rational) -> Rational {
    t0 + (t1 - t0) * rational::rat(j as i64, 1i64 << depth)
}

fn le(a: &Measure, b: &Measure) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x <= y,
        _ => a.value() <= b.value() + 1e-9,
    }
}

/// Homogeneous flat norm, or `None` when the ambient complex has no filling.
fn fillable(t: &crate::chain::Current, kind: FlatKind) -> Result<Option<Measure>> {
    match flat_norm(t, kind) {
        Ok(c) => Ok(Some(c.value)),
        Err(crate::error::GeoError::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Complex carrying every slice at the dyadic times of `depth`.
pub fn slice_hull(s: &SpaceTimeCurrent, depth: u32) -> Result<Arc<CellComplex>> {
    let (t0, t1) = s.domain().clone();
    let times: Vec<Rational> = (0..=1usize << depth).map(|j| dyadic(j, depth, &t0, &t1)).collect();
    let path = super::slice_path(s, &times, None)?.on_common_complex()?;
    Ok(path.snapshots[0].complex().clone())
}

/// Variation per dyadic window at `depth_max` and the estimates
/// `sum_i F(S(t_{i+1}) - S(t_i))` for every depth up to `depth_max`, with
/// slices moved onto `ambient` for the flat norms.
pub fn variation_report(s: &SpaceTimeCurrent, depth_max: u32, ambient: &Arc<CellComplex>) -> Result<VariationReport> {
    if depth_max > 12 {
        return Err(crate::error::GeoError::Contract(format!("depth {depth_max} above 12")));
    }
    let cells = s.cell_data()?;
    let (t0, t1) = s.domain().clone();
    let total = window_variation(&cells, &t0, &t1, true).0;
    let nb = 1usize << depth_max;
    let bins = (0..nb)
        .map(|j| {
            let a = dyadic(j, depth_max, &t0, &t1);
            let b = dyadic(j + 1, depth_max, &t0, &t1);
            let (v, c) = window_variation(&cells, &a, &b, j + 1 == nb);
            VariationBin {
                lo: rational::format(&a),
                hi: rational::format(&b),
                var: v.value(),
                var_exact: v.exact.as_ref().map(rational::format),
                crit_mass: c.value(),
            }
        })
        .collect();
    let times: Vec<Rational> = (0..=nb).map(|j| dyadic(j, depth_max, &t0, &t1)).collect();
    let path = super::slice_path(s, &times, Some(ambient))?;
    let slice_defect = path.snapshots.iter().map(|t| t.boundary().mass().value()).fold(0.0, f64::max);
    let closed = s.slice_degree() > 0 && path.snapshots.iter().all(|t| t.boundary().is_zero());
    let integral = closed && path.snapshots.iter().all(|t| t.is_integral());
    let mut ev = Vec::new();
    for depth in 0..=depth_max {
        let step = 1usize << (depth_max - depth);
        let pairs: Vec<(usize, usize)> = (0..(1usize << depth)).map(|i| (i * step, (i + 1) * step)).collect();
        let rows = pairs
            .par_iter()
            .map(|&(i, j)| -> Result<[Option<Measure>; 3]> {
                let diff = path.snapshots[j].sub(&path.snapshots[i])?;
                let w = flat_norm(&diff, FlatKind::Whitney)?.value;
                let h = if closed { fillable(&diff, FlatKind::Homogeneous)? } else { None };
                let fi = if integral { fillable(&diff, FlatKind::IntegralHomogeneous)? } else { None };
                Ok([Some(w), h, fi])
            })
            .collect::<Result<Vec<_>>>()?;
        let sum = |k: usize| -> Option<Measure> {
            rows.iter().map(|r| r[k].clone()).collect::<Option<Vec<_>>>().map(|v| Measure::sum(v.iter()))
        };
        let w = sum(0).unwrap_or_else(Measure::zero);
        let h = sum(1);
        let fi = sum(2);
        let within_var = le(&w, &total) && h.as_ref().is_none_or(|h| le(h, &total)) && fi.as_ref().is_none_or(|f| le(f, &total));
        ev.push(EvRow {
            depth,
            ev_whitney: w.value(),
            ev_whitney_exact: w.exact.as_ref().map(rational::format),
            ev_homogeneous: h.as_ref().map(Measure::value),
            ev_homogeneous_exact: h.as_ref().and_then(|m| m.exact.as_ref().map(rational::format)),
            ev_integral: fi.as_ref().map(Measure::value),
            ev_integral_exact: fi.as_ref().and_then(|m| m.exact.as_ref().map(rational::format)),
            within_var,
        });
    }
    let ev_nondecreasing = ev.windows(2).all(|p| p[1].best().0 >= p[0].best().0 - 1e-9 && p[1].ev_whitney >= p[0].ev_whitney - 1e-9);
    Ok(VariationReport {
        var_total: total.value(),
        var_total_exact: total.exact.as_ref().map(rational::format),
        bins,
        ev,
        ev_nondecreasing,
        slice_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn tail_of_segment_and_triangle() {
        assert_eq!(simplex_tail(&[int(0), int(1)], &rat(1, 4)), rat(3, 4));
        // triangle with times 0,0,1: density 2(1-t)
        assert_eq!(simplex_tail(&[int(0), int(0), int(1)], &rat(1, 2)), rat(1, 4));
        // times 0,1,1: density 2t
        assert_eq!(simplex_tail(&[int(0), int(1), int(1)], &rat(1, 2)), rat(3, 4));
        assert_eq!(simplex_tail(&[int(0), int(1), int(2)], &int(1)), rat(1, 2));
        assert_eq!(simplex_tail(&[int(0), int(1)], &int(-1)), int(1));
        assert_eq!(simplex_tail(&[int(0), int(1)], &int(2)), int(0));
    }

    #[test]
    fn tetra_tail_matches_monte_carlo_free_formula() {
        // times 0,0,0,1: P(t > s) = (1 - s)^3
        assert_eq!(simplex_tail(&[int(0), int(0), int(0), int(1)], &rat(1, 2)), rat(1, 8));
    }
}
