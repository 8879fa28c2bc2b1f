//! Differential forms with polynomial coefficients.

use std::collections::BTreeMap;

use crate::cell::Cell;
use crate::linalg;
use crate::poly::{Poly, RPoly};
use crate::rational::{Rational, Scalar};

/// `sum_I f_I dx^I` with `I` strictly increasing index lists.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm {
    n: usize,
    k: usize,
    coeffs: BTreeMap<Vec<usize>, RPoly>,
}

/// Sorts `idx` in place, returning the permutation sign or 0 on a repeat.
fn sort_index(idx: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

impl PolyForm {
    pub fn zero(n: usize, k: usize) -> Self {
        PolyForm { n, k, coeffs: BTreeMap::new() }
    }

    /// `f dx^{idx}`; the index list may be unsorted.
    pub fn term(n: usize, idx: &[usize], f: RPoly) -> Self {
        let mut w = Self::zero(n, idx.len());
        w.add_term(idx, f);
        w
    }

    /// A 0-form.
    pub fn function(f: RPoly) -> Self {
        Self::term(f.nvars(), &[], f)
    }

    pub fn add_term(&mut self, idx: &[usize], f: RPoly) {
        assert_eq!(idx.len(), self.k, "index length must match form degree");
        let mut i = idx.to_vec();
        let s = sort_index(&mut i);
        if s == 0 || f.is_zero() {
            return;
        }
        let f = if s < 0 { f.scale(&Rational::from_integer((-1).into())) } else { f };
        let e = self.coeffs.entry(i).or_insert_with(|| Poly::zero(self.n));
        *e = e.add(&f);
        if e.is_zero() {
            self.coeffs.retain(|_, p| !p.is_zero());
        }
    }

    pub fn add(&self, o: &PolyForm) -> PolyForm {
        let mut w = self.clone();
        for (i, f) in &o.coeffs {
            w.add_term(i, f.clone());
        }
        w
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        let mut w = Self::zero(self.n, self.k);
        for (i, f) in &self.coeffs {
            w.add_term(i, f.scale(c));
        }
        w
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RPoly)> {
        self.coeffs.iter()
    }

    /// Largest total degree among the coefficients.
    pub fn poly_degree(&self) -> u32 {
        self.coeffs.values().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        let mut w = Self::zero(self.n, self.k + 1);
        for (idx, f) in &self.coeffs {
            for j in 0..self.n {
                let df = f.deriv(j);
                if df.is_zero() {
                    continue;
                }
                let mut i = vec![j];
                i.extend_from_slice(idx);
                w.add_term(&i, df);
            }
        }
        w
    }

    /// Contraction with a polynomial vector field `b`.
    pub fn interior(&self, b: &[RPoly]) -> PolyForm {
        assert!(self.k > 0, "contraction of a 0-form");
        let mut w = Self::zero(self.n, self.k - 1);
        for (idx, f) in &self.coeffs {
            for (p, &axis) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(p);
                let mut g = f.mul(&b[axis]);
                if p % 2 == 1 {
                    g = g.scale(&Rational::from_integer((-1).into()));
                }
                w.add_term(&rest, g);
            }
        }
        w
    }

    /// Pullback under the projection `R^{m} -> R^{n}` onto coordinates
    /// `offset..offset+n` (used for product and space-time embeddings).
    pub fn lift(&self, m: usize, offset: usize) -> PolyForm {
        let mut w = Self::zero(m, self.k);
        let subs: Vec<RPoly> = (0..self.n).map(|i| Poly::var(m, offset + i)).collect();
        for (idx, f) in &self.coeffs {
            let shifted: Vec<usize> = idx.iter().map(|i| i + offset).collect();
            w.add_term(&shifted, f.compose(&subs));
        }
        w
    }

    /// `omega(x)(v_1, ..., v_k)`.
    pub fn eval_on<S: Scalar>(&self, x: &[S], vectors: &[Vec<S>]) -> S {
        let mut acc = S::zero();
        for (idx, f) in &self.coeffs {
            let m = linalg::minor(vectors, idx);
            if m.is_exact_zero() {
                continue;
            }
            acc = acc + f.to_scalar::<S>().eval(x) * m;
        }
        acc
    }

    /// `sum_I det(E_I) f_I` as a single polynomial, the integrand of the
    /// pairing with a cell spanned by `edges`.
    fn density<S: Scalar>(&self, edges: &[Vec<S>]) -> Poly<S> {
        let mut g = Poly::zero(self.n);
        for (idx, f) in &self.coeffs {
            let m = linalg::minor(edges, idx);
            if m.is_exact_zero() {
                continue;
            }
            g = g.add(&f.to_scalar::<S>().scale(&m));
        }
        g
    }

    /// Exact integral of the form over an oriented frame: a simplex
    /// `o + conv(0, e_i)` or a parallelotope `o + [0,1] e_i`.
    pub fn integrate_frame<S: Scalar>(&self, origin: &[S], edges: &[Vec<S>], simplex: bool) -> S {
        assert_eq!(edges.len(), self.k, "form degree must match cell dimension");
        let g = self.density(edges);
        if g.is_zero() {
            return S::zero();
        }
        let k = edges.len();
        let subs: Vec<Poly<S>> = (0..self.n)
            .map(|i| {
                let lin: Vec<S> = edges.iter().map(|e| e[i].clone()).collect();
                Poly::affine(origin[i].clone(), &lin)
            })
            .collect();
        let h = if k == 0 { Poly::constant(0, g.eval(origin)) } else { g.compose(&subs) };
        if simplex {
            h.integrate_simplex()
        } else {
            h.integrate_cube()
        }
    }

    /// Exact `int_c <c, omega>` for a canonical cell.
    pub fn integrate_cell(&self, c: &Cell) -> Rational {
        let (o, e) = c.frame();
        self.integrate_frame(&o, &e, c.is_simplex())
    }

    /// Same integral evaluated in floating point.
    pub fn integrate_cell_f64(&self, c: &Cell) -> f64 {
        let (o, e) = c.frame();
        let o: Vec<f64> = o.iter().map(|x| x.to_f64()).collect();
        let e: Vec<Vec<f64>> = e.iter().map(|v| v.iter().map(|x| x.to_f64()).collect()).collect();
        self.integrate_frame(&o, &e, c.is_simplex())
    }

    /// Upper bound on the comass over the box `|x_i| <= radius_i`.
    pub fn comass_bound(&self, radius: &[Rational]) -> Rational {
        self.coeffs.values().map(|f| f.sup_bound(radius)).fold(Rational::from_integer(0.into()), |a, b| a + b)
    }
}

/// Five fixed test forms of polynomial degree at most two for `k`-currents in `R^n`.
pub fn battery(n: usize, k: usize) -> Vec<PolyForm> {
    let first: Vec<usize> = (0..k).collect();
    let last: Vec<usize> = (n - k..n).collect();
    let x0 = Poly::var(n, 0);
    let xl = Poly::var(n, n - 1);
    let one = Poly::constant(n, Rational::from_integer(1.into()));
    let mut w4 = PolyForm::term(n, &first, x0.mul(&xl));
    w4.add_term(&last, one.clone());
    vec![
        PolyForm::term(n, &last, x0.clone()),
        PolyForm::term(n, &first, xl.clone()),
        PolyForm::term(n, &last, x0.mul(&x0)),
        w4,
        PolyForm::term(n, &last, one.add(&xl.mul(&xl))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::ipoint;
    use crate::rational::{int, rat};

    #[test]
    fn dd_is_zero() {
        let f = RPoly::parse("x^2*y*z + 3*y^3 - z*x", &["x", "y", "z"]).unwrap();
        let w = PolyForm::function(f);
        assert!(w.d().d().is_zero());
        let g = PolyForm::term(3, &[0], RPoly::parse("y*z^2", &["x", "y", "z"]).unwrap());
        assert!(g.d().d().is_zero());
    }

    #[test]
    fn segment_pairings() {
        let (seg, _) = Cell::simplex(vec![ipoint(&[0, 0]), ipoint(&[1, 0])]);
        let dx = PolyForm::term(2, &[0], Poly::constant(2, int(1)));
        assert_eq!(dx.integrate_cell(&seg), int(1));
        let xdx = PolyForm::term(2, &[0], Poly::var(2, 0));
        assert_eq!(xdx.integrate_cell(&seg), rat(1, 2));
    }

    #[test]
    fn stokes_on_square() {
        let (sq, _) = Cell::axis_box(ipoint(&[0, 0]), &[(0, int(2)), (1, int(1))]);
        let eta = PolyForm::term(2, &[1], RPoly::parse("x^2*y + y", &["x", "y"]).unwrap());
        let lhs = eta.d().integrate_cell(&sq);
        let rhs: Rational = sq.faces().iter().map(|(f, s)| eta.integrate_cell(f) * int(*s as i64)).sum();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn interior_of_area_form() {
        let area = PolyForm::term(2, &[0, 1], Poly::constant(2, int(1)));
        let b = vec![Poly::constant(2, int(0)), Poly::constant(2, int(1))];
        // i_{e2}(dx ^ dy) = -dx
        assert_eq!(area.interior(&b), PolyForm::term(2, &[0], Poly::constant(2, int(-1))));
    }
}
