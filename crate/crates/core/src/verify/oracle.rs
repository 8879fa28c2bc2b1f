//! Flat norms by exhaustive search over integer fillings.
//!
//! Every integer `Q` on the `(k+1)`-cells is a candidate; a branch is cut only
//! when the cost already committed (filling cells fixed so far plus
//! remainder cells whose cofaces are all fixed) reaches the best value seen.
//! Each `|q_i|` is bounded a priori by `U / vol_i` for a known feasible value
//! `U`, so the search is finite and complete.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::flatnorm::FlatKind;
use crate::rational::{Measure, Rational};

struct Search {
    vols_q: Vec<Rational>,
    vols_r: Vec<Rational>,
    /// (k-cell, sign) for each variable
    cols: Vec<Vec<(usize, i64)>>,
    /// k-cells settled once variable i is fixed
    settled: Vec<Vec<usize>>,
    bounds: Vec<i64>,
    homogeneous: bool,
    r: Vec<Rational>,
    best: Option<Rational>,
    nodes: u64,
    max_nodes: u64,
}

impl Search {
    fn cell_cost(&self, j: usize) -> Option<Rational> {
        if self.homogeneous {
            if self.r[j].is_zero() {
                Some(Rational::zero())
            } else {
                None
            }
        } else {
            Some(self.r[j].abs() * &self.vols_r[j])
        }
    }

    fn dfs(&mut self, i: usize, cost: Rational) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(GeoError::Unsupported("enumeration exceeded its node budget".into()));
        }
        if let Some(b) = &self.best {
            if &cost >= b {
                return Ok(());
            }
        }
        if i == self.cols.len() {
            self.best = Some(cost);
            return Ok(());
        }
        let bound = self.bounds[i];
        // visit 0, 1, -1, 2, -2, ... so good incumbents appear early
        for step in 0..=2 * bound {
            let q = if step % 2 == 0 { -(step / 2) } else { (step + 1) / 2 };
            let qr = Rational::from_integer(q.into());
            let mut c = &cost + qr.abs() * &self.vols_q[i];
            if let Some(b) = &self.best {
                if &c >= b {
                    // later candidates have |q| at least as large
                    break;
                }
            }
            for &(j, s) in &self.cols[i] {
                self.r[j] -= &qr * Rational::from_integer(s.into());
            }
            let mut feasible = true;
            for idx in 0..self.settled[i].len() {
                let j = self.settled[i][idx];
                match self.cell_cost(j) {
                    Some(v) => c += v,
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if feasible {
                self.dfs(i + 1, c)?;
            }
            for &(j, s) in &self.cols[i] {
                self.r[j] += &qr * Rational::from_integer(s.into());
            }
        }
        Ok(())
    }
}

fn exact(m: &Measure) -> Result<Rational> {
    m.exact.clone().ok_or_else(|| GeoError::Unsupported("enumeration needs rational cell volumes".into()))
}

fn run(t: &Current, homogeneous: bool, bound_of: &dyn Fn(&Rational) -> i64, incumbent: Option<Rational>, max_nodes: u64) -> Result<Option<Rational>> {
    let cx = t.complex();
    let k = t.k();
    let nq = if cx.max_dim() > k { cx.len(k + 1) } else { 0 };
    let nr = cx.len(k);
    let vols_q: Vec<Rational> = (0..nq).map(|i| exact(cx.volume(k + 1, i))).collect::<Result<_>>()?;
    let vols_r: Vec<Rational> = (0..nr).map(|j| exact(cx.volume(k, j))).collect::<Result<_>>()?;
    let cols: Vec<Vec<(usize, i64)>> =
        (0..nq).map(|i| cx.faces_of(k + 1, i).iter().map(|&(j, s)| (j, s as i64)).collect()).collect();
    let mut last: Vec<Option<usize>> = vec![None; nr];
    for (i, col) in cols.iter().enumerate() {
        for &(j, _) in col {
            last[j] = Some(i);
        }
    }
    let mut settled = vec![Vec::new(); nq];
    let mut root = Vec::new();
    for (j, l) in last.iter().enumerate() {
        match l {
            Some(i) => settled[*i].push(j),
            None => root.push(j),
        }
    }
    let mut s = Search {
        bounds: vols_q.iter().map(|v| bound_of(v)).collect(),
        vols_q,
        vols_r,
        cols,
        settled,
        homogeneous,
        r: (0..nr).map(|j| t.get(j)).collect(),
        best: incumbent.map(|b| b + Rational::new(1.into(), 1_000_000_000.into())),
        nodes: 0,
        max_nodes,
    };
    let mut cost = Rational::zero();
    for &j in &root {
        match s.cell_cost(j) {
            Some(v) => cost += v,
            None => return Ok(None),
        }
    }
    s.dfs(0, cost)?;
    Ok(s.best)
}

/// The flat norm of an integral current over integer fillings, or `None`
/// for a homogeneous kind when no filling exists within the searched range.
pub fn enumerate_flat_norm(t: &Current, kind: FlatKind, max_nodes: u64) -> Result<Option<Rational>> {
    if !t.is_integral() {
        return Err(GeoError::Contract("enumeration needs an integral current".into()));
    }
    let floor = |u: Rational| move |v: &Rational| -> i64 { (&u / v).floor().to_integer().to_i64().unwrap_or(i64::MAX) };
    if !kind.is_homogeneous() {
        // Q = 0 is feasible, so every optimal q_i has |q_i| vol_i <= M(T)
        let u = exact(&t.mass())?;
        return run(t, false, &floor(u.clone()), Some(u), max_nodes);
    }
    // find any filling in growing boxes, then search with the bound it gives
    for b in [2i64, 4, 8, 16] {
        if let Some(u) = run(t, true, &|_| b, None, max_nodes)? {
            return run(t, true, &floor(u.clone()), Some(u), max_nodes);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellComplex;
    use crate::rational::int;

    #[test]
    fn unit_square_boundary() {
        let cx = CellComplex::unit_grid(&[1, 1]).unwrap();
        let t = Current::from_entries(cx, 2, [(0, int(1))]).unwrap().boundary();
        assert_eq!(enumerate_flat_norm(&t, FlatKind::Whitney, 1_000_000).unwrap(), Some(int(1)));
        assert_eq!(enumerate_flat_norm(&t, FlatKind::Homogeneous, 1_000_000).unwrap(), Some(int(1)));
    }

    #[test]
    fn open_segment_has_no_filling() {
        let cx = CellComplex::unit_grid(&[2]).unwrap();
        let t = Current::from_entries(cx, 1, [(0, int(1))]).unwrap();
        assert_eq!(enumerate_flat_norm(&t, FlatKind::Homogeneous, 1_000_000).unwrap(), None);
        assert_eq!(enumerate_flat_norm(&t, FlatKind::Whitney, 1_000_000).unwrap(), Some(int(1)));
    }
}
