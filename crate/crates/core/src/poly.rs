//! Sparse multivariate polynomials and exact monomial integration over the
//! standard simplex and unit cube.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::rational::{Rational, Scalar};

/// Polynomial in `n` variables; exponent vector -> coefficient, no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar = Rational> {
    n: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

pub type RPoly = Poly<Rational>;

impl<S: Scalar> Poly<S> {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, S::one())
    }

    pub fn monomial(exps: Vec<u32>, c: S) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Affine function `c + sum a_i x_i`.
    pub fn affine(c: S, a: &[S]) -> Self {
        let n = a.len();
        let mut p = Self::constant(n, c);
        for (i, ai) in a.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        debug_assert_eq!(exps.len(), self.n);
        if c.is_exact_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_exact_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&(-S::one())))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * s.clone());
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.n, S::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Self {
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            p.add_term(f, c.clone() * S::from_i64(e[i] as i64));
        }
        p
    }

    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m * xi.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Substitutes `x_i = subs[i]`, each a polynomial in `m` variables.
    pub fn compose(&self, subs: &[Poly<S>]) -> Poly<S> {
        let m = subs.first().map(|p| p.n).unwrap_or(0);
        let mut out = Poly::zero(m);
        // cache powers per variable
        let mut powers: Vec<Vec<Poly<S>>> = subs.iter().map(|s| vec![Poly::constant(m, S::one()), s.clone()]).collect();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Integral over the standard simplex `{lambda >= 0, sum lambda <= 1}`.
    pub fn integrate_simplex(&self) -> S {
        let k = self.n as u32;
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            // alpha! / (|alpha| + k)!
            let mut num = S::one();
            for &a in e {
                num = num * factorial::<S>(a);
            }
            let den = factorial::<S>(e.iter().sum::<u32>() + k);
            acc = acc + c.clone() * num / den;
        }
        acc
    }

    /// Integral over the unit cube `[0,1]^n`.
    pub fn integrate_cube(&self) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for &a in e {
                v = v / S::from_i64(a as i64 + 1);
            }
            acc = acc + v;
        }
        acc
    }

    /// Bound on `sup |p|` over the box `|x_i| <= r_i`.
    pub fn sup_bound(&self, radius: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = c.abs_val();
            for (r, &k) in radius.iter().zip(e) {
                for _ in 0..k {
                    m = m * r.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Same polynomial with coefficients mapped into another scalar type.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut p = Poly::zero(self.n);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }
}

impl Poly<Rational> {
    pub fn to_f64(&self) -> Poly<f64> {
        self.convert(|c| c.to_f64())
    }

    pub fn to_scalar<S: Scalar>(&self) -> Poly<S> {
        self.convert(|c| S::from_rational(c))
    }

    /// Parses a polynomial such as `x0^2 - 1/2*x1 + 3`, using `names` for variables.
    pub fn parse(s: &str, names: &[&str]) -> crate::error::Result<Self> {
        use crate::error::GeoError;
        let n = names.len();
        let mut p = Poly::zero(n);
        let cleaned = s.replace(' ', "").replace('-', "+-");
        for raw in cleaned.split('+').filter(|t| !t.is_empty()) {
            let (neg, body) = match raw.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, raw),
            };
            let mut coeff = Rational::from_integer(1.into());
            let mut exps = vec![0u32; n];
            for factor in body.split('*') {
                let (base, pw) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| GeoError::Parse(format!("bad exponent in '{s}'")))?),
                    None => (factor, 1),
                };
                if let Some(i) = names.iter().position(|nm| *nm == base) {
                    exps[i] += pw;
                } else {
                    let v = crate::rational::parse(base)?;
                    coeff *= num_traits::pow(v, pw as usize);
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }
}

fn factorial<S: Scalar>(k: u32) -> S {
    (1..=k as i64).fold(S::one(), |acc, i| acc * S::from_i64(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn simplex_moments() {
        // int_0^1 x dx = 1/2 and over the triangle int x y = 1/24
        let x = RPoly::var(1, 0);
        assert_eq!(x.integrate_simplex(), rat(1, 2));
        let xy = RPoly::monomial(vec![1, 1], int(1));
        assert_eq!(xy.integrate_simplex(), rat(1, 24));
        assert_eq!(RPoly::constant(2, int(1)).integrate_simplex(), rat(1, 2));
        assert_eq!(RPoly::constant(3, int(1)).integrate_simplex(), rat(1, 6));
    }

    #[test]
    fn compose_and_differentiate() {
        let p = RPoly::parse("x^2*y - 3*y + 1/2", &["x", "y"]).unwrap();
        assert_eq!(p.eval(&[int(2), int(1)]), rat(3, 2));
        let dx = p.deriv(0);
        assert_eq!(dx, RPoly::parse("2*x*y", &["x", "y"]).unwrap());
        // x = s, y = 2s
        let s = RPoly::var(1, 0);
        let c = p.compose(&[s.clone(), s.scale(&int(2))]);
        assert_eq!(c, RPoly::parse("2*s^3 - 6*s + 1/2", &["s"]).unwrap());
    }

    #[test]
    fn cube_integral() {
        let p = RPoly::parse("x^2*y + 1", &["x", "y"]).unwrap();
        assert_eq!(p.integrate_cube(), rat(7, 6));
    }
}
