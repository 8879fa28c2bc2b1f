//! Rational-multiplicity chains on a cell complex: the discrete currents.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::cell::Cell;
use crate::complex::CellComplex;
use crate::error::{GeoError, Result};
use crate::form::PolyForm;
use crate::poly::RPoly;
use crate::rational::{Measure, Rational};

#[derive(Clone, Debug)]
pub struct Current {
    complex: Arc<CellComplex>,
    k: usize,
    coeffs: BTreeMap<usize, Rational>,
}

impl PartialEq for Current {
    fn eq(&self, o: &Self) -> bool {
        self.k == o.k && self.complex.id() == o.complex.id() && self.coeffs == o.coeffs
    }
}

impl Current {
    pub fn zero(complex: Arc<CellComplex>, k: usize) -> Self {
        Current { complex, k, coeffs: BTreeMap::new() }
    }

    pub fn from_entries(
        complex: Arc<CellComplex>,
        k: usize,
        entries: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut t = Self::zero(complex, k);
        let n = t.complex.len(k);
        for (i, m) in entries {
            if i >= n {
                return Err(GeoError::Structure(format!("cell id {i} out of range for {k}-cells ({n})")));
            }
            t.add_at(i, m);
        }
        Ok(t)
    }

    /// Looks up oriented cells in `complex` by geometry.
    pub fn from_cells(
        complex: Arc<CellComplex>,
        k: usize,
        cells: impl IntoIterator<Item = (Cell, Rational)>,
    ) -> Result<Self> {
        let mut t = Self::zero(complex, k);
        for (c, m) in cells {
            if c.dim() != k {
                return Err(GeoError::Structure(format!("{}-cell in a {k}-chain", c.dim())));
            }
            let i = t
                .complex
                .index_of(&c)
                .ok_or_else(|| GeoError::Structure(format!("cell {c:?} not in complex")))?;
            t.add_at(i, m);
        }
        Ok(t)
    }

    /// Builds the chain on the smallest complex carrying `cells`.
    pub fn from_cell_map(ambient_dim: usize, k: usize, cells: BTreeMap<Cell, Rational>) -> Result<Self> {
        let cells: Vec<(Cell, Rational)> = cells.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let complex = CellComplex::from_cells(ambient_dim, cells.iter().map(|(c, _)| c.clone()))?;
        Self::from_cells(complex, k, cells)
    }

    /// Accumulates signed cells into a geometric map, dropping cancelled entries.
    pub fn accumulate(map: &mut BTreeMap<Cell, Rational>, c: Cell, m: Rational) {
        use std::collections::btree_map::Entry;
        match map.entry(c) {
            Entry::Vacant(v) => {
                if !m.is_zero() {
                    v.insert(m);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_at(&mut self, i: usize, m: Rational) {
        if m.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(Rational::zero);
        *e += m;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.complex.ambient_dim()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Support cells with multiplicities, in complex order.
    pub fn cells(&self) -> impl Iterator<Item = (&Cell, &Rational)> {
        self.coeffs.iter().map(|(&i, m)| (self.complex.cell(self.k, i), m))
    }

    pub fn to_cell_map(&self) -> BTreeMap<Cell, Rational> {
        self.cells().map(|(c, m)| (c.clone(), m.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|m| m.is_integer())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, o: &Current) -> Result<()> {
        if self.complex.id() != o.complex.id() {
            return Err(GeoError::Structure("currents live on different complexes".into()));
        }
        if self.k != o.k {
            return Err(GeoError::Contract(format!("adding a {}-current to a {}-current", o.k, self.k)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Current) -> Result<Current> {
        self.check_compatible(o)?;
        let mut t = self.clone();
        for (&i, m) in &o.coeffs {
            t.add_at(i, m.clone());
        }
        Ok(t)
    }

    pub fn sub(&self, o: &Current) -> Result<Current> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Current {
        let mut t = Self::zero(self.complex.clone(), self.k);
        for (&i, m) in &self.coeffs {
            t.add_at(i, m * c);
        }
        t
    }

    pub fn neg(&self) -> Current {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Signed incidence sum over faces. The boundary of a 0-chain is the
    /// zero 0-chain.
    pub fn boundary(&self) -> Current {
        if self.k == 0 {
            return Self::zero(self.complex.clone(), 0);
        }
        let mut t = Self::zero(self.complex.clone(), self.k - 1);
        for (&i, m) in &self.coeffs {
            for &(f, s) in self.complex.faces_of(self.k, i) {
                t.add_at(f, m * Rational::from_integer((s as i64).into()));
            }
        }
        t
    }

    /// `sum vol(c) |m(c)|`.
    pub fn mass(&self) -> Measure {
        let mut acc = Measure::zero();
        for (&i, m) in &self.coeffs {
            let v = self.complex.volume(self.k, i);
            let term = Measure {
                exact: v.exact.as_ref().map(|e| e * m.abs()),
                approx: v.approx * crate::rational::to_f64(&m.abs()),
            };
            acc.add(&term);
        }
        acc
    }

    /// Exact pairing with a polynomial form.
    pub fn pair(&self, w: &PolyForm) -> Result<Rational> {
        self.check_form(w)?;
        Ok(self.cells().map(|(c, m)| m * w.integrate_cell(c)).sum())
    }

    /// Pairing evaluated in floating point.
    pub fn pair_f64(&self, w: &PolyForm) -> Result<f64> {
        self.check_form(w)?;
        Ok(self.cells().map(|(c, m)| crate::rational::to_f64(m) * w.integrate_cell_f64(c)).sum())
    }

    fn check_form(&self, w: &PolyForm) -> Result<()> {
        if w.degree() != self.k {
            return Err(GeoError::Contract(format!("pairing a {}-current with a {}-form", self.k, w.degree())));
        }
        if w.ambient_dim() != self.ambient_dim() {
            return Err(GeoError::Contract("form and current live in different dimensions".into()));
        }
        Ok(())
    }

    /// `<L_b T, w> = -<dT, i_b w> - <T, i_b dw>` for a polynomial field `b`.
    pub fn lie_pair(&self, b: &[RPoly], w: &PolyForm) -> Result<Rational> {
        self.check_form(w)?;
        let mut acc = -self.pair(&w.d().interior(b))?;
        if self.k > 0 {
            acc -= self.boundary().pair(&w.interior(b))?;
        }
        Ok(acc)
    }

    /// Floating-point evaluation of [`Current::lie_pair`].
    pub fn lie_pair_f64(&self, b: &[RPoly], w: &PolyForm) -> Result<f64> {
        self.check_form(w)?;
        let mut acc = -self.pair_f64(&w.d().interior(b))?;
        if self.k > 0 {
            acc -= self.boundary().pair_f64(&w.interior(b))?;
        }
        Ok(acc)
    }

    /// Same chain on another complex containing all of its support cells.
    pub fn transfer(&self, target: &Arc<CellComplex>) -> Result<Current> {
        Self::from_cells(target.clone(), self.k, self.cells().map(|(c, m)| (c.clone(), m.clone())))
    }

    /// Like [`transfer`](Self::transfer), but a segment missing from
    /// `target` is replaced by the chain of target edges covering it.
    pub fn transfer_subdivided(&self, target: &Arc<CellComplex>) -> Result<Current> {
        let mut t = Self::zero(target.clone(), self.k);
        for (c, m) in self.cells() {
            if let Some(i) = target.index_of(c) {
                t.add_at(i, m.clone());
                continue;
            }
            let Cell::Simplex(v) = c else {
                return Err(GeoError::Structure(format!("cell {c:?} not in target complex")));
            };
            if v.len() != 2 {
                return Err(GeoError::Structure(format!("cell {c:?} not in target complex")));
            }
            let d = crate::cell::sub(&v[1], &v[0]);
            let dd: Rational = d.iter().map(|x| x * x).sum();
            let mut on: Vec<(Rational, &Cell)> = Vec::new();
            for p in target.cells(0) {
                let Cell::Simplex(pv) = p else { continue };
                let w = crate::cell::sub(&pv[0], &v[0]);
                let s = w.iter().zip(&d).map(|(a, b)| a * b).sum::<Rational>() / &dd;
                if s < Rational::zero() || s > Rational::from_integer(1.into()) {
                    continue;
                }
                if w.iter().zip(&d).all(|(a, b)| a == &(&s * b)) {
                    on.push((s, p));
                }
            }
            on.sort_by(|a, b| a.0.cmp(&b.0));
            for w in on.windows(2) {
                let (Cell::Simplex(a), Cell::Simplex(b)) = (w[0].1, w[1].1) else { unreachable!() };
                let (e, s) = Cell::simplex(vec![a[0].clone(), b[0].clone()]);
                let i = target
                    .index_of(&e)
                    .ok_or_else(|| GeoError::Structure(format!("segment {c:?} is not a union of target edges")))?;
                t.add_at(i, m * Rational::from_integer(s.into()));
            }
            if on.len() < 2 || on[0].0 != Rational::zero() || on.last().unwrap().0 != Rational::from_integer(1.into()) {
                return Err(GeoError::Structure(format!("segment {c:?} is not a union of target edges")));
            }
        }
        Ok(t)
    }

    /// Brings two currents onto a common complex.
    pub fn align(a: &Current, b: &Current) -> Result<(Current, Current)> {
        if a.complex.id() == b.complex.id() {
            return Ok((a.clone(), b.clone()));
        }
        let u = CellComplex::union(&a.complex, &b.complex)?;
        Ok((a.transfer(&u)?, b.transfer(&u)?))
    }

    /// Keeps the cells selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(&Cell) -> bool) -> Current {
        let mut t = Self::zero(self.complex.clone(), self.k);
        for (&i, m) in &self.coeffs {
            if keep(self.complex.cell(self.k, i)) {
                t.add_at(i, m.clone());
            }
        }
        t
    }

    /// Same current with the geometric comparison used across complexes.
    pub fn same_geometry(&self, o: &Current) -> bool {
        self.k == o.k && self.to_cell_map() == o.to_cell_map()
    }

    /// Bounding-box radius `max |x_i|` per axis over the support.
    pub fn support_radius(&self) -> Vec<Rational> {
        let n = self.ambient_dim();
        let mut r = vec![Rational::zero(); n];
        for (c, _) in self.cells() {
            for v in c.vertices() {
                for a in 0..n {
                    if v[a].abs() > r[a] {
                        r[a] = v[a].abs();
                    }
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::ipoint;
    use crate::poly::Poly;
    use crate::rational::int;

    #[test]
    fn unit_square_boundary() {
        let cx = CellComplex::unit_grid(&[1, 1]).unwrap();
        let sq = Current::from_entries(cx, 2, [(0, int(1))]).unwrap();
        let b = sq.boundary();
        assert_eq!(b.len(), 4);
        assert_eq!(b.mass().exact, Some(int(4)));
        assert!(b.boundary().is_zero());
    }

    #[test]
    fn adjacent_squares_share_an_edge() {
        let cx = CellComplex::unit_grid(&[2, 1]).unwrap();
        let t = Current::from_entries(cx, 2, [(0, int(1)), (1, int(1))]).unwrap();
        assert_eq!(t.boundary().mass().exact, Some(int(6)));
    }

    #[test]
    fn lie_pair_with_translation_of_segment() {
        let (seg, _) = Cell::simplex(vec![ipoint(&[0, 0]), ipoint(&[1, 0])]);
        let t = Current::from_cell_map(2, 1, [(seg, int(1))].into_iter().collect()).unwrap();
        let b = vec![Poly::constant(2, int(0)), Poly::constant(2, int(1))];
        let dx = PolyForm::term(2, &[0], Poly::constant(2, int(1)));
        assert_eq!(t.lie_pair(&b, &dx).unwrap(), int(0));
        // moving a horizontal segment up changes <T, y dx> at unit rate
        let ydx = PolyForm::term(2, &[0], Poly::var(2, 1));
        assert_eq!(t.lie_pair(&b, &ydx).unwrap(), int(-1));
    }
}
