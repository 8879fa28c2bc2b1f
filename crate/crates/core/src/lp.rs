//! Two-phase tableau simplex over any [`Scalar`], with Bland's rule.
//!
//! Problems are stated in equality form `min c.x, A x = b, x >= 0`.

use crate::rational::Scalar;

#[derive(Clone, Debug)]
pub struct Lp<S: Scalar> {
    pub n: usize,
    /// Sparse rows `(column, coefficient)`.
    pub rows: Vec<Vec<(usize, S)>>,
    pub rhs: Vec<S>,
    pub cost: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, Default)]
pub struct LpStats {
    pub pivots: usize,
}

impl<S: Scalar> Lp<S> {
    pub fn new(n: usize) -> Self {
        Lp { n, rows: Vec::new(), rhs: Vec::new(), cost: vec![S::zero(); n] }
    }

    pub fn add_row(&mut self, row: Vec<(usize, S)>, rhs: S) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// Appends a fresh non-negative column and returns its index.
    pub fn add_var(&mut self, cost: S) -> usize {
        self.cost.push(cost);
        self.n += 1;
        self.n - 1
    }
}

struct Tableau<S: Scalar> {
    /// `m` rows of length `width + 1`; the last entry is the right-hand side.
    t: Vec<Vec<S>>,
    /// Reduced-cost row, same layout; last entry is minus the objective.
    obj: Vec<S>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, pr: usize, pc: usize) {
        self.pivots += 1;
        let pv = self.t[pr][pc].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !self.t[pr][j].is_exact_zero()).collect();
        for &j in &nz {
            let v = self.t[pr][j].clone() / pv.clone();
            self.t[pr][j] = v;
        }
        self.t[pr][pc] = S::one();
        let prow: Vec<(usize, S)> = nz.iter().map(|&j| (j, self.t[pr][j].clone())).collect();
        let eliminate = |row: &mut Vec<S>| {
            let f = row[pc].clone();
            if f.is_exact_zero() {
                return;
            }
            for (j, v) in &prow {
                let nv = row[*j].clone() - f.clone() * v.clone();
                row[*j] = if nv.is_zero_tol() { S::zero() } else { nv };
            }
            row[pc] = S::zero();
        };
        for r in 0..self.t.len() {
            if r != pr {
                eliminate(&mut self.t[r]);
            }
        }
        eliminate(&mut self.obj);
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule over columns `< limit`; false when unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(pc) = (0..limit).find(|&j| self.obj[j].is_negative_tol()) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][pc];
                if !a.is_positive_tol() {
                    continue;
                }
                let ratio = self.t[r][self.width].clone() / a.clone();
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        let better = if S::is_zero_tol(&(ratio.clone() - bv.clone())) {
                            self.basis[r] < self.basis[br]
                        } else {
                            ratio < bv
                        };
                        if better {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc);
        }
    }
}

/// Solves the LP. Redundant equality rows are tolerated.
pub fn solve<S: Scalar>(lp: &Lp<S>) -> (LpOutcome<S>, LpStats) {
    let m = lp.rows.len();
    let n = lp.n;
    let width = n + m;
    let mut t: Vec<Vec<S>> = Vec::with_capacity(m);
    for (r, row) in lp.rows.iter().enumerate() {
        let mut dense = vec![S::zero(); width + 1];
        let flip = lp.rhs[r].is_negative_tol();
        for (j, v) in row {
            let v = if flip { -v.clone() } else { v.clone() };
            dense[*j] = dense[*j].clone() + v;
        }
        dense[n + r] = S::one();
        dense[width] = if flip { -lp.rhs[r].clone() } else { lp.rhs[r].clone() };
        t.push(dense);
    }
    // phase one: minimise the sum of artificials
    let mut obj = vec![S::zero(); width + 1];
    for row in &t {
        for j in 0..n {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[width] = obj[width].clone() - row[width].clone();
    }
    let mut tab = Tableau { t, obj, basis: (n..n + m).collect(), width, pivots: 0 };
    tab.optimize(n);
    if !tab.obj[width].is_zero_tol() {
        return (LpOutcome::Infeasible, LpStats { pivots: tab.pivots });
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.t[r][j].is_zero_tol()) {
                Some(j) => {
                    tab.pivot(r, j);
                    r += 1;
                }
                None => {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }
    // phase two
    let mut obj = vec![S::zero(); width + 1];
    obj[..n].clone_from_slice(&lp.cost);
    for (r, &b) in tab.basis.iter().enumerate() {
        let cb = lp.cost[b].clone();
        if cb.is_exact_zero() {
            continue;
        }
        for j in 0..=width {
            if !tab.t[r][j].is_exact_zero() {
                obj[j] = obj[j].clone() - cb.clone() * tab.t[r][j].clone();
            }
        }
    }
    tab.obj = obj;
    if !tab.optimize(n) {
        return (LpOutcome::Unbounded, LpStats { pivots: tab.pivots });
    }
    let mut x = vec![S::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        x[b] = tab.t[r][width].clone();
    }
    let value = lp.cost.iter().zip(&x).fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
    (LpOutcome::Optimal { x, value }, LpStats { pivots: tab.pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Rational};

    #[test]
    fn small_exact_lp() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let mut lp: Lp<Rational> = Lp::new(4);
        lp.cost = vec![int(-1), int(-1), int(0), int(0)];
        lp.add_row(vec![(0, int(1)), (1, int(2)), (2, int(1))], int(4));
        lp.add_row(vec![(0, int(3)), (1, int(1)), (3, int(1))], int(6));
        let (out, _) = solve(&lp);
        let LpOutcome::Optimal { x, value } = out else { panic!() };
        assert_eq!(value, rat(-14, 5));
        assert_eq!(x[0], rat(8, 5));
        assert_eq!(x[1], rat(6, 5));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp: Lp<Rational> = Lp::new(1);
        lp.add_row(vec![(0, int(1))], int(-1));
        assert_eq!(solve(&lp).0, LpOutcome::Infeasible);
        let mut lp: Lp<Rational> = Lp::new(2);
        lp.cost = vec![int(-1), int(0)];
        lp.add_row(vec![(0, int(1)), (1, int(-1))], int(0));
        assert_eq!(solve(&lp).0, LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let mut lp: Lp<f64> = Lp::new(2);
        lp.cost = vec![1.0, 2.0];
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 1.0);
        lp.add_row(vec![(0, 2.0), (1, 2.0)], 2.0);
        let LpOutcome::Optimal { value, .. } = solve(&lp).0 else { panic!() };
        assert!((value - 1.0).abs() < 1e-12);
    }
}
