//! Classical special cases of the transport equation: particles, densities
//! (continuity equation, upwind scheme), hypersurfaces moved by constant
//! fields, and closed curves in three dimensions (vorticity form).

use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::field::VectorField;
use crate::cell::{Cell, Point};
use crate::form::{self, PolyForm};
use crate::poly::RPoly;
use crate::quadrature;
use crate::rational::{self, Rational};

use super::{map_current, pushforward, translate};

/// Weighted point masses moved by forward Euler with `steps` equal steps.
pub fn particles(t: &Current, b: &VectorField, t0: f64, t1: f64, steps: usize) -> Result<Current> {
    if t.k() != 0 {
        return Err(GeoError::Contract("particles are 0-currents".into()));
    }
    if steps == 0 {
        return Err(GeoError::Contract("need at least one Euler step".into()));
    }
    let dt = (t1 - t0) / steps as f64;
    let euler = |p: &Point| -> Result<Point> {
        let mut x: Vec<f64> = p.iter().map(rational::to_f64).collect();
        for i in 0..steps {
            let v = b.eval(t0 + i as f64 * dt, &x)?;
            x.iter_mut().zip(&v).for_each(|(a, c)| *a += dt * c);
        }
        x.into_iter().map(rational::from_f64).collect()
    };
    Ok(map_current(t, &euler, true)?.current)
}

/// Largest gap between the pairings of two currents over a form list.
pub fn pairing_discrepancy(a: &Current, b: &Current, forms: &[PolyForm]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in forms {
        worst = worst.max((a.pair_f64(w)? - b.pair_f64(w)?).abs());
    }
    Ok(worst)
}

/// Particles against the flow map, compared on the 0-form battery.
pub fn particle_discrepancy(t: &Current, b: &VectorField, t0: f64, t1: f64, steps: usize, h: f64) -> Result<f64> {
    let p = particles(t, b, t0, t1, steps)?;
    let q = pushforward(t, b, t0, t1, h)?.current;
    pairing_discrepancy(&p, &q, &form::battery(t.ambient_dim(), 0))
}

/// A `(d-1)`-current moved by a constant field for time `t`, exactly.
pub fn hypersurface_constant(t: &Current, b: &[Rational], time: &Rational) -> Result<Current> {
    if t.k() + 1 != t.ambient_dim() || b.len() != t.ambient_dim() {
        return Err(GeoError::Contract("expected a hypersurface and a field of matching dimension".into()));
    }
    let v: Vec<Rational> = b.iter().map(|c| c * time).collect();
    translate(t, &v)
}

/// Uniform grid of cell averages.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    pub lo: Vec<f64>,
    pub h: f64,
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl DensityGrid {
    /// Cell averages of `f` by a tensor Gauss rule of the given order.
    pub fn sample(lo: &[f64], h: f64, counts: &[usize], f: &dyn Fn(&[f64]) -> f64, order: usize) -> Self {
        let d = counts.len();
        let rule = quadrature::rule(d, order, false);
        let total: usize = counts.iter().product();
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            let idx = unflatten(flat, counts);
            let mut acc = 0.0;
            for (p, w) in &rule {
                let x: Vec<f64> = (0..d).map(|a| lo[a] + h * (idx[a] as f64 + p[a])).collect();
                acc += w * f(&x);
            }
            values.push(acc);
        }
        DensityGrid { lo: lo.to_vec(), h, counts: counts.to_vec(), values }
    }

    /// `sum |a - b| h^d`.
    pub fn l1_distance(&self, o: &DensityGrid) -> f64 {
        let vol = self.h.powi(self.counts.len() as i32);
        self.values.iter().zip(&o.values).map(|(a, b)| (a - b).abs()).sum::<f64>() * vol
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.h.powi(self.counts.len() as i32)
    }

    /// The density as a top-dimensional current with rounded cell values.
    pub fn to_current(&self) -> Result<Current> {
        let d = self.counts.len();
        let h = rational::from_f64(self.h)?;
        let lo: Vec<Rational> = self.lo.iter().map(|&v| rational::from_f64(v)).collect::<Result<_>>()?;
        let axes: Vec<(usize, Rational)> = (0..d).map(|a| (a, h.clone())).collect();
        let mut map = std::collections::BTreeMap::new();
        for (flat, v) in self.values.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            let idx = unflatten(flat, &self.counts);
            let corner: Point = (0..d).map(|a| &lo[a] + &h * Rational::from_integer(idx[a].into())).collect();
            let (c, s) = Cell::axis_box(corner, &axes);
            Current::accumulate(&mut map, c, rational::from_f64(*v)? * Rational::from_integer(s.into()));
        }
        Current::from_cell_map(d, d, map)
    }
}

fn unflatten(mut flat: usize, counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .map(|&c| {
            let i = flat % c;
            flat /= c;
            i
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct UpwindResult {
    pub grid: DensityGrid,
    pub steps: usize,
    pub dt: f64,
}

/// First-order donor-cell scheme for `d/dt rho + div(rho b) = 0` with no
/// inflow through the outer boundary. `cfl` above 1 is rejected.
pub fn upwind(init: &DensityGrid, b: &VectorField, t0: f64, t1: f64, cfl: f64) -> Result<UpwindResult> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(GeoError::Contract(format!("CFL number {cfl} outside (0, 1]")));
    }
    let d = init.counts.len();
    if b.dim() != d {
        return Err(GeoError::Contract("field dimension differs from the grid".into()));
    }
    let total = init.values.len();
    let h = init.h;
    let strides: Vec<usize> = (0..d).map(|a| init.counts[..a].iter().product()).collect();
    // face normal velocities at a given time: faces[a][cell] is the face on the high side of cell
    let face_speeds = |t: f64| -> Result<Vec<Vec<f64>>> {
        (0..d)
            .map(|a| {
                (0..total)
                    .map(|flat| {
                        let idx = unflatten(flat, &init.counts);
                        let x: Vec<f64> = (0..d)
                            .map(|c| init.lo[c] + h * (idx[c] as f64 + if c == a { 1.0 } else { 0.5 }))
                            .collect();
                        Ok(b.eval(t, &x)?[a])
                    })
                    .collect()
            })
            .collect()
    };
    let mut speeds = face_speeds(t0)?;
    let vmax = speeds.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())) * d as f64;
    let span = t1 - t0;
    let steps = if vmax == 0.0 { 1 } else { ((span * vmax) / (cfl * h)).ceil().max(1.0) as usize };
    let dt = span / steps as f64;
    let time_dependent = b.time_scale.is_some();
    let mut rho = init.values.clone();
    for step in 0..steps {
        if time_dependent {
            speeds = face_speeds(t0 + step as f64 * dt)?;
        }
        let mut next = rho.clone();
        for a in 0..d {
            for flat in 0..total {
                let u = speeds[a][flat];
                let has_next = (flat / strides[a]) % init.counts[a] + 1 < init.counts[a];
                let up = if u >= 0.0 { rho[flat] } else if has_next { rho[flat + strides[a]] } else { 0.0 };
                let flux = u * up * dt / h;
                next[flat] -= flux;
                if has_next {
                    next[flat + strides[a]] += flux;
                }
            }
            // inflow through the low boundary is zero; outflow leaves the grid
            for flat in 0..total {
                if (flat / strides[a]).is_multiple_of(init.counts[a]) {
                    let idx = unflatten(flat, &init.counts);
                    let x: Vec<f64> =
                        (0..d).map(|c| init.lo[c] + h * (idx[c] as f64 + if c == a { 0.0 } else { 0.5 })).collect();
                    let u = b.eval(t0 + step as f64 * dt, &x)?[a];
                    if u < 0.0 {
                        next[flat] += u * rho[flat] * dt / h;
                    }
                }
            }
        }
        rho = next;
    }
    Ok(UpwindResult { grid: DensityGrid { values: rho, ..init.clone() }, steps, dt })
}

/// `<L_b T, w>` for a 1-current in `R^3` written with the curl:
/// `-<dT, w(b)> - <T, (curl w) x b>`.
pub fn curl_lie_pair(t: &Current, b: &[RPoly], w: &PolyForm) -> Result<Rational> {
    if t.ambient_dim() != 3 || t.k() != 1 || w.degree() != 1 || b.len() != 3 {
        return Err(GeoError::Contract("curl form needs a 1-current and a 1-form in R^3".into()));
    }
    let comp = |i: usize| -> RPoly {
        w.terms().find(|(idx, _)| idx.as_slice() == [i]).map(|(_, f)| f.clone()).unwrap_or_else(|| RPoly::zero(3))
    };
    let om: Vec<RPoly> = (0..3).map(comp).collect();
    let curl = [
        om[2].deriv(1).sub(&om[1].deriv(2)),
        om[0].deriv(2).sub(&om[2].deriv(0)),
        om[1].deriv(0).sub(&om[0].deriv(1)),
    ];
    let cross = [
        curl[1].mul(&b[2]).sub(&curl[2].mul(&b[1])),
        curl[2].mul(&b[0]).sub(&curl[0].mul(&b[2])),
        curl[0].mul(&b[1]).sub(&curl[1].mul(&b[0])),
    ];
    let mut nu = PolyForm::zero(3, 1);
    for (i, c) in cross.into_iter().enumerate() {
        nu.add_term(&[i], c);
    }
    let wb = (0..3).fold(RPoly::zero(3), |acc, i| acc.add(&om[i].mul(&b[i])));
    let mut acc = -t.pair(&nu)?;
    acc -= t.boundary().pair(&PolyForm::function(wb))?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::Cell;
    use crate::poly::Poly;
    use crate::rational::{int, rat};

    #[test]
    fn curl_form_matches_cartan() {
        let pts = [[0, 0, 0], [2, 1, 0], [1, 3, 1]];
        let cells = (0..3).map(|i| {
            let a: Vec<Rational> = pts[i].iter().map(|&v| int(v)).collect();
            let b: Vec<Rational> = pts[(i + 1) % 3].iter().map(|&v| int(v)).collect();
            let (c, s) = Cell::simplex(vec![a, b]);
            (c, int(s as i64))
        });
        let t = Current::from_cell_map(3, 1, cells.collect()).unwrap();
        let x = |i| Poly::var(3, i);
        let b = vec![x(1), x(2).scale(&rat(1, 2)), x(0).mul(&x(1))];
        let mut w = PolyForm::zero(3, 1);
        w.add_term(&[0], x(2).mul(&x(1)));
        w.add_term(&[2], x(0).pow(2));
        assert_eq!(curl_lie_pair(&t, &b, &w).unwrap(), t.lie_pair(&b, &w).unwrap());
    }

    #[test]
    fn upwind_conserves_mass_inside() {
        let init = DensityGrid::sample(&[0.0, 0.0], 1.0 / 16.0, &[16, 16], &|x| if x[0] < 0.5 && x[1] < 0.5 { 1.0 } else { 0.0 }, 2);
        let b = VectorField::constant(vec![rat(1, 4), rat(1, 8)]);
        let r = upwind(&init, &b, 0.0, 0.5, 0.9).unwrap();
        assert!((r.grid.total() - init.total()).abs() < 1e-12);
        assert!(upwind(&init, &b, 0.0, 0.5, 1.5).is_err());
    }
}
