//! Gauss rules on the unit cube and (through the collapsed-coordinate map)
//! on the standard simplex, plus the Lie-derivative pairing for fields that
//! have no polynomial form.

use crate::cell::Cell;
use crate::chain::Current;
use crate::error::Result;
use crate::field::VectorField;
use crate::form::PolyForm;
use crate::rational::{self, Rational};

/// Gauss-Legendre nodes and weights on `[0,1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// Tensor rule on `[0,1]^k` or, with `simplex`, the collapsed rule on the
/// standard simplex. Exact for polynomials of degree `< 2n - k` on simplices.
pub fn rule(k: usize, n: usize, simplex: bool) -> Vec<(Vec<f64>, f64)> {
    let g = gauss_legendre(n);
    let mut pts: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(pts.len() * n);
        for (p, w) in &pts {
            for &(x, wx) in &g {
                let mut q = p.clone();
                q.push(x);
                next.push((q, w * wx));
            }
        }
        pts = next;
    }
    if !simplex {
        return pts;
    }
    pts.into_iter()
        .map(|(u, w)| {
            // lambda_1 = u_1, lambda_j = u_j * prod_{i<j} (1 - u_i)
            let mut lam = Vec::with_capacity(k);
            let mut rest = 1.0;
            for uj in &u {
                lam.push(uj * rest);
                rest *= 1.0 - uj;
            }
            // jacobian of the collapsed map: prod_j (1 - u_1)...(1 - u_{j-1})
            let mut jacobian = 1.0;
            let mut acc = 1.0;
            for uj in u.iter().take(k.saturating_sub(1)) {
                acc *= 1.0 - uj;
                jacobian *= acc;
            }
            (lam, w * jacobian)
        })
        .collect()
}

fn frame_f64(c: &Cell) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (o, e) = c.frame();
    (o.iter().map(rational::to_f64).collect(), e.iter().map(|v| v.iter().map(rational::to_f64).collect()).collect())
}

/// `int_c w(b, e_1, ..., e_k)` over the parameter domain by quadrature.
fn contracted_integral(c: &Cell, w: &PolyForm, b: &VectorField, t: f64, order: usize) -> Result<f64> {
    let (o, e) = frame_f64(c);
    let mut acc = 0.0;
    for (lam, wt) in rule(e.len(), order, c.is_simplex()) {
        let x: Vec<f64> = (0..o.len()).map(|i| o[i] + lam.iter().zip(&e).map(|(l, v)| l * v[i]).sum::<f64>()).collect();
        let mut vecs = vec![b.eval(t, &x)?];
        vecs.extend(e.iter().cloned());
        acc += wt * w.eval_on(&x, &vecs);
    }
    Ok(acc)
}

/// `<L_{b_t} T, w>`; exact arithmetic for polynomial fields, Gauss
/// quadrature of the given order otherwise.
pub fn lie_pair_field(t_cur: &Current, b: &VectorField, t: f64, w: &PolyForm, order: usize) -> Result<f64> {
    if let Some(tr) = rational::from_f64(t).ok().and_then(|tr: Rational| b.polynomials_at(&tr)) {
        return t_cur.lie_pair_f64(&tr, w);
    }
    let dw = w.d();
    let mut acc = 0.0;
    for (c, m) in t_cur.cells() {
        acc -= rational::to_f64(m) * contracted_integral(c, &dw, b, t, order)?;
    }
    if t_cur.k() > 0 {
        for (c, m) in t_cur.boundary().cells() {
            acc -= rational::to_f64(m) * contracted_integral(c, w, b, t, order)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials() {
        let g = gauss_legendre(4);
        let s: f64 = g.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 1.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn collapsed_rule_on_triangle() {
        let r = rule(2, 5, true);
        let area: f64 = r.iter().map(|(_, w)| w).sum();
        assert!((area - 0.5).abs() < 1e-14);
        let xy: f64 = r.iter().map(|(p, w)| w * p[0] * p[1]).sum();
        assert!((xy - 1.0 / 24.0).abs() < 1e-14);
    }
}
