//! Both sides of the coarea identity
//! `int g |grad^S t| d||S|| = int_t int g d||S|_t|| dt`.

use num_traits::Signed;
use serde::Serialize;

use super::slice::{slice_cell, Side};
use super::SpaceTimeCurrent;
use crate::cell::Cell;
use crate::error::{GeoError, Result};
use crate::poly::{Poly, RPoly};
use crate::quadrature;
use crate::rational::{self, Measure, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct CoareaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_exact: Option<String>,
    pub rhs_exact: Option<String>,
    pub gap: f64,
}

/// `int_c g dH^k` over a cell; `g` is a polynomial in the cell's ambient
/// coordinates.
fn cell_integral(c: &Cell, g: &RPoly) -> Measure {
    let k = c.dim();
    let (o, e) = c.frame();
    let subs: Vec<RPoly> = (0..o.len())
        .map(|i| {
            let a: Vec<Rational> = e.iter().map(|v| v[i].clone()).collect();
            Poly::affine(o[i].clone(), &a)
        })
        .collect();
    let pulled = if k == 0 { Poly::constant(0, g.eval(&o)) } else { g.compose(&subs) };
    let i = if c.is_simplex() { pulled.integrate_simplex() } else { pulled.integrate_cube() };
    if k == 0 {
        return Measure::exact(i);
    }
    Measure::scaled_sqrt(&i, &c.gram_det())
}

/// Weights of the open Newton-Cotes rule with `n` nodes `(i+1)/(n+1)` on `[0,1]`.
fn open_newton_cotes(n: usize) -> Vec<(Rational, Rational)> {
    let nodes: Vec<Rational> = (0..n).map(|i| rational::rat(i as i64 + 1, n as i64 + 1)).collect();
    nodes
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut l = Poly::constant(1, Rational::from_integer(1.into()));
            for (j, xj) in nodes.iter().enumerate() {
                if i != j {
                    let f = Poly::affine(-xj.clone(), &[Rational::from_integer(1.into())]).scale(&(xi - xj).recip());
                    l = l.mul(&f);
                }
            }
            (xi.clone(), l.integrate_cube())
        })
        .collect()
}

/// Checks the coarea formula for a non-negative polynomial `g(t, x)`.
pub fn coarea_check(s: &SpaceTimeCurrent, g: &RPoly) -> Result<CoareaReport> {
    let n = s.current().ambient_dim();
    if g.nvars() != n {
        return Err(GeoError::Contract(format!("g must have {n} variables (time first)")));
    }
    let mut lhs = Measure::zero();
    let mut rhs = Measure::zero();
    let mut rhs_f64 = 0.0;
    let deg = g.degree() as usize + s.slice_degree();
    let nc = open_newton_cotes(deg + 1);
    let gl = quadrature::gauss_legendre(deg / 2 + 2);
    for d in s.cell_data()? {
        if d.is_critical() {
            continue;
        }
        let m = d.multiplicity.abs();
        // lhs: |grad t| is constant on the cell
        let base = cell_integral(&d.cell, g);
        let scale = d.grad_t_sq.clone();
        match &base.exact {
            Some(v) => {
                let mut l = Measure::scaled_sqrt(&(v * &m), &scale);
                if l.exact.is_none() {
                    l = Measure::approx(rational::to_f64(&(v * &m)) * rational::sqrt_f64(&scale));
                }
                lhs.add(&l);
            }
            None => lhs.add(&Measure::approx(base.value() * rational::to_f64(&m) * rational::sqrt_f64(&scale))),
        }
        // rhs: integrate the slice integrals between consecutive vertex times
        let mut times: Vec<Rational> = d.cell.vertices().into_iter().map(|p| p[0].clone()).collect();
        times.sort();
        times.dedup();
        for w in times.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let h = b - a;
            let at = |tau: &Rational| -> Measure {
                let mut acc = Measure::zero();
                for (piece, _) in slice_cell(&d.cell, tau, Side::Below) {
                    acc.add(&cell_integral(&piece, g));
                }
                acc
            };
            for (x, wt) in &nc {
                let tau = a + &h * x;
                rhs.add(&at(&tau).scaled(&(wt * &h * &m)));
            }
            for (x, wt) in &gl {
                let tau = rational::from_f64(rational::to_f64(a) + rational::to_f64(&h) * x)?;
                rhs_f64 += wt * rational::to_f64(&h) * rational::to_f64(&m) * at(&tau).value();
            }
        }
    }
    let rhs_value = if rhs.exact.is_some() { rhs.value() } else { rhs_f64 };
    let gap = match (&lhs.exact, &rhs.exact) {
        (Some(a), Some(b)) => rational::to_f64(&(a - b).abs()),
        _ => (lhs.value() - rhs_value).abs(),
    };
    Ok(CoareaReport {
        lhs: lhs.value(),
        rhs: rhs_value,
        lhs_exact: lhs.exact.as_ref().map(rational::format),
        rhs_exact: rhs.exact.as_ref().map(rational::format),
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn newton_cotes_is_exact() {
        let w = open_newton_cotes(3);
        let s: Rational = w.iter().map(|(x, wt)| wt * x * x).sum();
        assert_eq!(s, rational::rat(1, 3));
        let total: Rational = w.iter().map(|(_, wt)| wt.clone()).sum();
        assert_eq!(total, int(1));
    }
}
