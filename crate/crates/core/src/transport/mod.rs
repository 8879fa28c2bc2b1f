//! Transport of currents along flows and the weak geometric transport
//! equation `d/dt T + L_b T = 0`.

pub mod reduce;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::cell::{Cell, Point};
use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::field::VectorField;
use crate::form::PolyForm;
use crate::path::CurrentPath;
use crate::poly::{Poly, RPoly};
use crate::quadrature;
use crate::rational::{self, Rational};

/// Solution map of `x' = b(t, x)` by classical RK4 with `ceil(|t1-t0|/h)`
/// equal steps.
#[derive(Clone, Debug)]
pub struct FlowMap<'a> {
    pub field: &'a VectorField,
    pub h: f64,
}

impl<'a> FlowMap<'a> {
    pub fn new(field: &'a VectorField, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(GeoError::Contract("flow step must be positive".into()));
        }
        Ok(FlowMap { field, h })
    }

    pub fn apply(&self, x: &[f64], t0: f64, t1: f64) -> Result<Vec<f64>> {
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(x.to_vec());
        }
        let n = (span.abs() / self.h).ceil().max(1.0) as usize;
        let dt = span / n as f64;
        let mut y = x.to_vec();
        let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
        let mut t = t0;
        for _ in 0..n {
            let k1 = self.field.eval(t, &y)?;
            let k2 = self.field.eval(t + dt / 2.0, &axpy(&y, &k1, dt / 2.0))?;
            let k3 = self.field.eval(t + dt / 2.0, &axpy(&y, &k2, dt / 2.0))?;
            let k4 = self.field.eval(t + dt, &axpy(&y, &k3, dt))?;
            for i in 0..y.len() {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += dt;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(GeoError::Evaluation(format!("flow left the representable range at t = {t}")));
            }
        }
        Ok(y)
    }
}

#[derive(Clone, Debug)]
pub struct Pushforward {
    pub current: Current,
    /// Cells dropped because their image collapsed.
    pub warnings: Vec<String>,
}

/// Image of `t` under a vertex map; parallelotopes are triangulated first
/// unless `keep_boxes` (for maps that are exactly affine).
pub(crate) fn map_current(t: &Current, f: &dyn Fn(&Point) -> Result<Point>, keep_boxes: bool) -> Result<Pushforward> {
    let mut cache: HashMap<Point, Point> = HashMap::new();
    let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (c, m) in t.cells() {
        let pieces = if keep_boxes || c.is_simplex() { vec![(c.clone(), 1i8)] } else { c.triangulate() };
        for (p, s) in pieces {
            for v in p.vertices() {
                if !cache.contains_key(&v) {
                    let y = f(&v)?;
                    cache.insert(v, y);
                }
            }
            let g = |x: &Point| -> Point { cache[x].clone() };
            let (img, s2) = p.map_points(&g);
            if img.is_degenerate() {
                warnings.push(format!("cell with anchor {:?} collapsed under the flow", rational_point(&p.vertices()[0])));
                continue;
            }
            Current::accumulate(&mut map, img, m * Rational::from_integer((s * s2).into()));
        }
    }
    Ok(Pushforward { current: Current::from_cell_map(t.ambient_dim(), t.k(), map)?, warnings })
}

fn rational_point(p: &Point) -> Vec<f64> {
    p.iter().map(rational::to_f64).collect()
}

/// `(Phi_{t0 -> t1})_# T` with vertices flowed by RK4 and rounded to the
/// nearest binary rational.
pub fn pushforward(t: &Current, b: &VectorField, t0: f64, t1: f64, h: f64) -> Result<Pushforward> {
    if b.dim() != t.ambient_dim() {
        return Err(GeoError::Contract("field and current live in different dimensions".into()));
    }
    let flow = FlowMap::new(b, h)?;
    let f = |x: &Point| -> Result<Point> {
        let y = flow.apply(&rational_point(x), t0, t1)?;
        y.into_iter().map(rational::from_f64).collect()
    };
    map_current(t, &f, false)
}

/// Exact translation by `v`.
pub fn translate(t: &Current, v: &[Rational]) -> Result<Current> {
    let f = |x: &Point| -> Result<Point> { Ok(x.iter().zip(v).map(|(a, b)| a + b).collect()) };
    Ok(map_current(t, &f, true)?.current)
}

/// Samples `(Phi_{t_0 -> t_i})_# T_0` at each time. Vertices are carried
/// forward interval by interval, so one pass serves every sample.
pub fn transport_path(t0: &Current, b: &VectorField, times: &[Rational], h: f64) -> Result<CurrentPath> {
    if times.is_empty() {
        return Err(GeoError::Contract("a path needs at least one sample time".into()));
    }
    if b.dim() != t0.ambient_dim() {
        return Err(GeoError::Contract("field and current live in different dimensions".into()));
    }
    let flow = FlowMap::new(b, h)?;
    let mut verts: Vec<Point> = Vec::new();
    for (c, _) in t0.cells() {
        let pieces = if c.is_simplex() { vec![(c.clone(), 1i8)] } else { c.triangulate() };
        for (p, _) in pieces {
            verts.extend(p.vertices());
        }
    }
    verts.sort();
    verts.dedup();
    let mut pos: Vec<Vec<f64>> = verts.iter().map(rational_point).collect();
    let mut snaps = Vec::with_capacity(times.len());
    for (i, t) in times.iter().enumerate() {
        if i > 0 {
            let (a, z) = (rational::to_f64(&times[i - 1]), rational::to_f64(t));
            pos = pos.par_iter().map(|x| flow.apply(x, a, z)).collect::<Result<Vec<_>>>()?;
        }
        let table: HashMap<&Point, Point> = verts
            .iter()
            .zip(&pos)
            .map(|(v, y)| Ok((v, y.iter().copied().map(rational::from_f64).collect::<Result<Point>>()?)))
            .collect::<Result<_>>()?;
        let f = |x: &Point| -> Result<Point> { Ok(table[x].clone()) };
        snaps.push(map_current(t0, &f, false)?.current);
    }
    CurrentPath::new(times.to_vec(), snaps)
}

/// Test functions on `[0,1]` vanishing at both ends: `t(1-t)`, `t^2(1-t)`
/// and the bump `16 t^2 (1-t)^2`.
pub fn test_functions() -> Vec<RPoly> {
    let t = Poly::var(1, 0);
    let one_minus = Poly::constant(1, Rational::from_integer(1.into())).sub(&t);
    let base = t.mul(&one_minus);
    vec![base.clone(), base.mul(&t), base.pow(2).scale(&Rational::from_integer(16.into()))]
}

/// `int <T_t, w> psi'(t) - <L_{b_t} T_t, w> psi(t) dt` by the trapezoid rule
/// on the sample times. `psi` must vanish at both ends of the path.
pub fn gte_residual(path: &CurrentPath, b: &VectorField, w: &PolyForm, psi: &RPoly) -> Result<f64> {
    Ok(gte_residuals(path, b, std::slice::from_ref(w), std::slice::from_ref(psi))?[0][0])
}

/// Residuals for every form (rows) and test function (columns); each
/// pairing is computed once.
pub fn gte_residuals(path: &CurrentPath, b: &VectorField, forms: &[PolyForm], psis: &[RPoly]) -> Result<Vec<Vec<f64>>> {
    let ends = [&path.times[0], path.times.last().unwrap()];
    for psi in psis {
        for e in ends {
            if !num_traits::Zero::is_zero(&psi.eval(std::slice::from_ref(e))) {
                return Err(GeoError::Contract(format!("test function does not vanish at t = {e}")));
            }
        }
    }
    // pairs[i][f] = (<T_i, w_f>, <L_b T_i, w_f>)
    let pairs = path
        .snapshots
        .par_iter()
        .zip(&path.times)
        .map(|(s, t)| -> Result<Vec<(f64, f64)>> {
            let tf = rational::to_f64(t);
            forms.iter().map(|w| Ok((s.pair_f64(w)?, quadrature::lie_pair_field(s, b, tf, w, 8)?))).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = (0..path.times.len())
        .map(|i| {
            let l = if i > 0 { rational::to_f64(&(&path.times[i] - &path.times[i - 1])) } else { 0.0 };
            let r = path.times.get(i + 1).map_or(0.0, |n| rational::to_f64(&(n - &path.times[i])));
            0.5 * (l + r)
        })
        .collect();
    let out = (0..forms.len())
        .map(|f| {
            psis.iter()
                .map(|psi| {
                    let dpsi = psi.deriv(0);
                    path.times
                        .iter()
                        .enumerate()
                        .map(|(i, t)| {
                            let (pair, lie) = pairs[i][f];
                            let v = pair * rational::to_f64(&dpsi.eval(&[t.clone()]))
                                - lie * rational::to_f64(&psi.eval(&[t.clone()]));
                            weights[i] * v
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(out)
}

/// `T_t x T'_t` at the common sample times.
pub fn product_path(a: &CurrentPath, b: &CurrentPath) -> Result<CurrentPath> {
    if a.times != b.times {
        return Err(GeoError::Contract("product paths need identical sample times".into()));
    }
    let n = a.ambient_dim() + b.ambient_dim();
    let snaps = a
        .snapshots
        .par_iter()
        .zip(&b.snapshots)
        .map(|(x, y)| -> Result<Current> {
            let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
            for (c1, m1) in x.cells() {
                for (c2, m2) in y.cells() {
                    for (p, s) in c1.product(c2) {
                        Current::accumulate(&mut map, p, m1 * m2 * Rational::from_integer(s.into()));
                    }
                }
            }
            Current::from_cell_map(n, x.k() + y.k(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    CurrentPath::new(a.times.clone(), snaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rk4_rotation_is_accurate() {
        let b = VectorField::rotation(vec![int(0), int(0)], int(1));
        let f = FlowMap::new(&b, 1e-3).unwrap();
        let y = f.apply(&[1.0, 0.0], 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((y[0]).abs() < 1e-12 && (y[1] - 1.0).abs() < 1e-12, "{y:?}");
    }

    #[test]
    fn translation_is_exact() {
        let cx = crate::complex::CellComplex::unit_grid(&[1, 1]).unwrap();
        let sq = Current::from_entries(cx, 2, [(0, int(1))]).unwrap().boundary();
        let moved = translate(&sq, &[rat(1, 2), int(0)]).unwrap();
        assert_eq!(moved.mass().exact, Some(int(4)));
        assert!(moved.boundary().is_zero());
    }

    #[test]
    fn test_functions_vanish_at_ends() {
        for p in test_functions() {
            assert_eq!(p.eval(&[int(0)]), int(0));
            assert_eq!(p.eval(&[int(1)]), int(0));
        }
    }
}
