//! Does the space-time current advect its slices along its own velocity?

use serde::Serialize;

use super::slice::{slice_cell, Side};
use super::SpaceTimeCurrent;
use crate::cell::Cell;
use crate::error::{GeoError, Result};
use crate::form::{self, PolyForm};
use crate::poly::{Poly, RPoly};
use crate::quadrature;
use crate::rational::{self, Rational};
use crate::transport;

#[derive(Clone, Debug, Serialize)]
pub struct AdvectionReport {
    pub crit_mass: f64,
    /// The non-critical condition: no mass where the time gradient vanishes.
    pub non_critical: bool,
    /// Largest weak-equation residual over the form battery and test
    /// functions; absent when the condition fails.
    pub residual: Option<f64>,
    pub forms: usize,
    pub test_functions: usize,
}

struct Piece {
    cell: Cell,
    coeff: f64,
    velocity: Vec<Rational>,
}

fn pieces_at(cells: &[super::CellData], tau: &Rational) -> Vec<Piece> {
    let mut out = Vec::new();
    for d in cells {
        let Some(v) = &d.velocity else { continue };
        for (p, s) in slice_cell(&d.cell, tau, Side::Below) {
            let (flat, s2) = p.drop_time();
            out.push(Piece { cell: flat, coeff: rational::to_f64(&d.multiplicity) * f64::from(s * s2), velocity: v.clone() });
        }
    }
    out
}

fn interior(w: &PolyForm, v: &[Rational]) -> PolyForm {
    let n = w.ambient_dim();
    let b: Vec<RPoly> = v.iter().map(|c| Poly::constant(n, c.clone())).collect();
    w.interior(&b)
}

/// `<T, w>` and `<L_b T, w> = -<T, i_b dw> - <dT, i_b w>`. The normal
/// velocity of `T` jumps at corners, so the boundary term uses the pieces
/// of `(dS)|_t = -dT` with their own velocity instead of the faces of `T`.
fn pair_and_lie(pieces: &[Piece], rim: &[Piece], w: &PolyForm, dw: &PolyForm) -> (f64, f64) {
    let mut pair = 0.0;
    let mut lie = 0.0;
    for p in pieces {
        pair += p.coeff * w.integrate_cell_f64(&p.cell);
        lie -= p.coeff * interior(dw, &p.velocity).integrate_cell_f64(&p.cell);
    }
    for p in rim {
        lie += p.coeff * interior(w, &p.velocity).integrate_cell_f64(&p.cell);
    }
    (pair, lie)
}

/// Tests the weak transport equation for the slices of `s` against the
/// standard form battery, with the velocity read off the current itself.
/// `intervals` subdivides each stretch between vertex times.
pub fn advection_check(s: &SpaceTimeCurrent, intervals: usize) -> Result<AdvectionReport> {
    let gd = s.geometric_derivative(&Rational::default())?;
    let crit = gd.crit_mass.value();
    let k = s.slice_degree();
    let d = s.spatial_dim();
    let forms = form::battery(d, k);
    let psis = transport::test_functions();
    if crit > 0.0 {
        return Ok(AdvectionReport {
            crit_mass: crit,
            non_critical: false,
            residual: None,
            forms: forms.len(),
            test_functions: psis.len(),
        });
    }
    let (t0, t1) = s.domain().clone();
    let mut breaks: Vec<Rational> = vec![t0.clone(), t1.clone()];
    for c in &gd.cells {
        for v in c.cell.vertices() {
            if v[0] > t0 && v[0] < t1 {
                breaks.push(v[0].clone());
            }
        }
    }
    breaks.sort();
    breaks.dedup();
    if intervals == 0 {
        return Err(GeoError::Contract("need at least one interval".into()));
    }
    let gl = quadrature::gauss_legendre(6);
    let mut nodes: Vec<(Rational, f64)> = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (rational::to_f64(&w[0]), rational::to_f64(&w[1]));
        let h = (b - a) / intervals as f64;
        for j in 0..intervals {
            for (x, wt) in &gl {
                nodes.push((rational::from_f64(a + h * (j as f64 + x))?, wt * h));
            }
        }
    }
    let rim_cells = if k > 0 { SpaceTimeCurrent::with_domain(s.current().boundary(), t0.clone(), t1.clone())?.cell_data()? } else { Vec::new() };
    let slices: Vec<(Vec<Piece>, Vec<Piece>)> =
        nodes.iter().map(|(t, _)| (pieces_at(&gd.cells, t), pieces_at(&rim_cells, t))).collect();
    let mut worst: f64 = 0.0;
    for w in &forms {
        let dw = w.d();
        let vals: Vec<(f64, f64)> = slices.iter().map(|(p, r)| pair_and_lie(p, r, w, &dw)).collect();
        for psi in &psis {
            let dpsi = psi.deriv(0);
            let mut acc = 0.0;
            for ((t, wt), (pair, lie)) in nodes.iter().zip(&vals) {
                let u = rational::to_f64(&((t - &t0) / (&t1 - &t0)));
                let scale = 1.0 / rational::to_f64(&(&t1 - &t0));
                acc += wt * (pair * dpsi.to_f64().eval(&[u]) * scale - lie * psi.to_f64().eval(&[u]));
            }
            worst = worst.max(acc.abs());
        }
    }
    Ok(AdvectionReport {
        crit_mass: crit,
        non_critical: true,
        residual: Some(worst),
        forms: forms.len(),
        test_functions: psis.len(),
    })
}
