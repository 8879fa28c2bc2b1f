//! Whitney and homogeneous flat norms (and their integral variants) as
//! linear programs over the cells of the ambient complex.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::lp::{self, Lp, LpOutcome};
use crate::rational::{self, Measure, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatKind {
    Whitney,
    Homogeneous,
    IntegralWhitney,
    IntegralHomogeneous,
}

impl FlatKind {
    pub fn is_integral(self) -> bool {
        matches!(self, FlatKind::IntegralWhitney | FlatKind::IntegralHomogeneous)
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, FlatKind::Homogeneous | FlatKind::IntegralHomogeneous)
    }
}

impl fmt::Display for FlatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlatKind::Whitney => "whitney",
            FlatKind::Homogeneous => "homogeneous",
            FlatKind::IntegralWhitney => "integral_whitney",
            FlatKind::IntegralHomogeneous => "integral_homogeneous",
        })
    }
}

impl FromStr for FlatKind {
    type Err = GeoError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "whitney" => FlatKind::Whitney,
            "homogeneous" => FlatKind::Homogeneous,
            "integral_whitney" | "whitney_integral" => FlatKind::IntegralWhitney,
            "integral_homogeneous" | "homogeneous_integral" => FlatKind::IntegralHomogeneous,
            _ => return Err(GeoError::Parse(format!("unknown flat norm kind '{s}'"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arith {
    Exact,
    Float64,
    /// Exact when every cell volume is rational and the LP is small enough.
    Auto,
}

impl FromStr for Arith {
    type Err = GeoError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Arith::Exact),
            "float64" | "f64" => Ok(Arith::Float64),
            "auto" => Ok(Arith::Auto),
            _ => Err(GeoError::Parse(format!("unknown arithmetic mode '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrality {
    CertifiedIntegral,
    LpFractional,
}

#[derive(Clone, Debug)]
pub struct FlatOptions {
    pub arith: Arith,
    /// Largest variable count solved in exact arithmetic under [`Arith::Auto`].
    pub max_exact_vars: usize,
    pub max_nodes: usize,
}

impl Default for FlatOptions {
    fn default() -> Self {
        FlatOptions { arith: Arith::Auto, max_exact_vars: 5000, max_nodes: 20_000 }
    }
}

/// Optimal decomposition `T = dQ + R` with its value.
#[derive(Clone, Debug)]
pub struct FlatNormCertificate {
    pub kind: FlatKind,
    pub value: Measure,
    pub q: Current,
    pub r: Current,
    pub integrality: Integrality,
    /// Arithmetic actually used by the solver.
    pub arith: Arith,
    pub pivots: usize,
    pub nodes: usize,
}

impl FlatNormCertificate {
    /// Exact value, when available.
    pub fn exact_value(&self) -> Option<&Rational> {
        self.value.exact.as_ref()
    }

    /// Re-checks `T = dQ + R` (and `R = 0` for homogeneous kinds).
    pub fn verify(&self, t: &Current) -> Result<()> {
        let lhs = self.q.boundary().add(&self.r)?;
        if lhs != *t {
            return Err(GeoError::Contract("certificate does not decompose the current".into()));
        }
        if self.kind.is_homogeneous() && !self.r.is_zero() {
            return Err(GeoError::Contract("homogeneous certificate with non-zero remainder".into()));
        }
        Ok(())
    }
}

/// Equality-form model: columns `q+_j, q-_j` for every `(k+1)`-cell, then
/// `r+_i, r-_i` for every `k`-cell (Whitney kinds only).
struct Model {
    nq: usize,
    nr: usize,
    rows: Vec<Vec<(usize, i8)>>,
    rhs: Vec<Rational>,
    qcost: Vec<Measure>,
    rcost: Vec<Measure>,
}

fn build_model(t: &Current, homogeneous: bool) -> Result<Model> {
    let cx = t.complex();
    let k = t.k();
    let nq = cx.len(k + 1);
    let nk = cx.len(k);
    let mut rows: Vec<Vec<(usize, i8)>> = vec![Vec::new(); nk];
    for j in 0..nq {
        for &(i, s) in cx.faces_of(k + 1, j) {
            rows[i].push((2 * j, s));
            rows[i].push((2 * j + 1, -s));
        }
    }
    let nr = if homogeneous { 0 } else { nk };
    if !homogeneous {
        for (i, row) in rows.iter_mut().enumerate() {
            row.push((2 * nq + 2 * i, 1));
            row.push((2 * nq + 2 * i + 1, -1));
        }
    }
    let mut rhs = vec![<Rational as Zero>::zero(); nk];
    for (&i, m) in t.coeffs() {
        rhs[i] = m.clone();
    }
    // a k-cell without cofaces must carry no multiplicity in the homogeneous problem
    let mut keep_rows = Vec::new();
    let mut keep_rhs = Vec::new();
    for (row, b) in rows.into_iter().zip(rhs) {
        if row.is_empty() {
            if !b.is_zero() {
                return Err(GeoError::Infeasible("no boundaryless filling: free cell carries multiplicity".into()));
            }
            continue;
        }
        keep_rows.push(row);
        keep_rhs.push(b);
    }
    let qcost = (0..nq).map(|j| cx.volume(k + 1, j).clone()).collect();
    let rcost = (0..nr).map(|i| cx.volume(k, i).clone()).collect();
    Ok(Model { nq, nr, rows: keep_rows, rhs: keep_rhs, qcost, rcost })
}

impl Model {
    fn nvars(&self) -> usize {
        2 * self.nq + 2 * self.nr
    }

    fn exact_costs(&self) -> bool {
        self.qcost.iter().chain(&self.rcost).all(|m| m.exact.is_some())
    }

    fn lp<S: Scalar>(&self) -> Lp<S> {
        let mut lp = Lp::new(self.nvars());
        let pick = |m: &Measure| match &m.exact {
            Some(e) => S::pick(e, m.approx),
            None => S::from_rational(&rational::from_f64(m.approx).unwrap_or_default()),
        };
        for (j, c) in self.qcost.iter().enumerate() {
            lp.cost[2 * j] = pick(c);
            lp.cost[2 * j + 1] = pick(c);
        }
        for (i, c) in self.rcost.iter().enumerate() {
            lp.cost[2 * self.nq + 2 * i] = pick(c);
            lp.cost[2 * self.nq + 2 * i + 1] = pick(c);
        }
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            lp.add_row(row.iter().map(|&(j, s)| (j, S::from_i64(s as i64))).collect(), S::from_rational(b));
        }
        lp
    }
}

#[derive(Clone)]
enum Bound {
    Upper(usize, i64),
    Lower(usize, i64),
}

struct Search<S: Scalar> {
    best: Option<(S, Vec<S>)>,
    nodes: usize,
    pivots: usize,
    max_nodes: usize,
}

fn q_value<S: Scalar>(x: &[S], j: usize) -> S {
    x[2 * j].clone() - x[2 * j + 1].clone()
}

fn branch<S: Scalar>(base: &Lp<S>, nq: usize, bounds: Vec<Bound>, s: &mut Search<S>) -> Result<()> {
    s.nodes += 1;
    if s.nodes > s.max_nodes {
        return Err(GeoError::Unsupported(format!("branch-and-bound exceeded {} nodes", s.max_nodes)));
    }
    let mut lp = base.clone();
    for b in &bounds {
        let (j, v, sign) = match b {
            Bound::Upper(j, v) => (*j, *v, 1),
            Bound::Lower(j, v) => (*j, *v, -1),
        };
        let slack = lp.add_var(S::zero());
        lp.add_row(vec![(2 * j, S::one()), (2 * j + 1, -S::one()), (slack, S::from_i64(sign))], S::from_i64(v));
    }
    let (out, stats) = lp::solve(&lp);
    s.pivots += stats.pivots;
    let LpOutcome::Optimal { x, value } = out else {
        return Ok(());
    };
    if let Some((inc, _)) = &s.best {
        // prune nodes that cannot beat the incumbent
        if !(value.clone() - inc.clone()).is_negative_tol() {
            return Ok(());
        }
    }
    let frac = (0..nq)
        .filter_map(|j| {
            let q = q_value(&x, j);
            if q.is_integral() {
                None
            } else {
                let f = q.clone() - q.floor_val();
                let dist = (f.clone() - S::from_rational(&rational::rat(1, 2))).abs_val();
                Some((j, dist, q))
            }
        })
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    let Some((j, _, q)) = frac else {
        s.best = Some((value, x[..base.n].to_vec()));
        return Ok(());
    };
    let fl = q.floor_val().to_f64().round() as i64;
    let mut down = bounds.clone();
    down.push(Bound::Upper(j, fl));
    branch(base, nq, down, s)?;
    let mut up = bounds;
    up.push(Bound::Lower(j, fl + 1));
    branch(base, nq, up, s)
}

fn solve_model<S: Scalar>(model: &Model, integral: bool, opts: &FlatOptions) -> Result<(Vec<S>, usize, usize)> {
    let lp = model.lp::<S>();
    if !integral {
        let (out, stats) = lp::solve(&lp);
        return match out {
            LpOutcome::Optimal { x, .. } => Ok((x, stats.pivots, 1)),
            LpOutcome::Infeasible => Err(GeoError::Infeasible("no boundaryless filling".into())),
            LpOutcome::Unbounded => Err(GeoError::Structure("flat norm LP is unbounded".into())),
        };
    }
    let mut s = Search { best: None, nodes: 0, pivots: 0, max_nodes: opts.max_nodes };
    branch(&lp, model.nq, Vec::new(), &mut s)?;
    match s.best {
        Some((_, x)) => Ok((x, s.pivots, s.nodes)),
        None => Err(GeoError::Infeasible("no integral filling".into())),
    }
}

fn to_rational<S: Scalar>(v: &S, integral: bool) -> Rational {
    if let Some(r) = v.as_rational() {
        return r;
    }
    let f = v.to_f64();
    if integral || (f - f.round()).abs() < 1e-9 {
        return rational::int(f.round() as i64);
    }
    rational::from_f64(f).unwrap_or_default()
}

/// Flat norm of `t` over the chains of its complex.
pub fn flat_norm(t: &Current, kind: FlatKind) -> Result<FlatNormCertificate> {
    flat_norm_with(t, kind, &FlatOptions::default())
}

pub fn flat_norm_with(t: &Current, kind: FlatKind, opts: &FlatOptions) -> Result<FlatNormCertificate> {
    let k = t.k();
    let cx = t.complex().clone();
    if kind.is_homogeneous() && !t.boundary().is_zero() && k > 0 {
        return Err(GeoError::Infeasible("no boundaryless filling: the current has boundary".into()));
    }
    if kind.is_integral() && !t.is_integral() {
        return Err(GeoError::Contract("integral flat norm of a current with fractional multiplicities".into()));
    }
    let model = build_model(t, kind.is_homogeneous())?;
    let exact = match opts.arith {
        Arith::Exact => {
            if !model.exact_costs() {
                return Err(GeoError::Unsupported("exact arithmetic needs rational cell volumes".into()));
            }
            true
        }
        Arith::Float64 => false,
        Arith::Auto => model.exact_costs() && model.nvars() <= opts.max_exact_vars,
    };
    let (x, pivots, nodes) = if model.rows.is_empty() {
        (Vec::new(), 0, 0)
    } else if exact {
        let (x, p, n) = solve_model::<Rational>(&model, kind.is_integral(), opts)?;
        (x.iter().map(|v| to_rational(v, false)).collect(), p, n)
    } else {
        let (x, p, n) = solve_model::<f64>(&model, kind.is_integral(), opts)?;
        (x.iter().map(|v| to_rational(v, kind.is_integral())).collect::<Vec<_>>(), p, n)
    };
    let qs = (0..model.nq).map(|j| (j, x.get(2 * j).cloned().unwrap_or_default() - x.get(2 * j + 1).cloned().unwrap_or_default()));
    let q = Current::from_entries(cx.clone(), k + 1, qs)?;
    let r = t.sub(&q.boundary())?;
    if !exact {
        // floating-point solutions are accepted only if the identity holds closely
        let worst = r.coeffs().values().map(|v| rational::to_f64(&v.abs())).fold(0.0, f64::max);
        if kind.is_homogeneous() && worst > 1e-9 {
            return Err(GeoError::Contract(format!("float64 certificate re-check failed ({worst:e})")));
        }
    }
    let r = if kind.is_homogeneous() { Current::zero(cx.clone(), k) } else { r };
    let mut value = q.mass();
    value.add(&r.mass());
    let integrality =
        if q.is_integral() && r.is_integral() { Integrality::CertifiedIntegral } else { Integrality::LpFractional };
    let cert = FlatNormCertificate {
        kind,
        value,
        q,
        r,
        integrality,
        arith: if exact { Arith::Exact } else { Arith::Float64 },
        pivots,
        nodes,
    };
    if exact {
        cert.verify(t)?;
    }
    Ok(cert)
}

/// Flat norm of `a - b`.
pub fn flat_distance(a: &Current, b: &Current, kind: FlatKind) -> Result<FlatNormCertificate> {
    let (a, b) = Current::align(a, b)?;
    flat_norm(&a.sub(&b)?, kind)
}

/// Least-mass integral filling `Q` with `dQ = T`.
pub fn plateau_filling(t: &Current) -> Result<Current> {
    Ok(flat_norm(t, FlatKind::IntegralHomogeneous)?.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellComplex;
    use crate::rational::int;

    fn square_boundary(cx: &std::sync::Arc<CellComplex>, x: i64, y: i64) -> Current {
        let (c, _) = crate::cell::Cell::axis_box(crate::cell::ipoint(&[x, y]), &[(0, int(1)), (1, int(1))]);
        Current::from_cells(cx.clone(), 2, [(c, int(1))]).unwrap().boundary()
    }

    #[test]
    fn unit_square_boundary_is_filled() {
        let cx = CellComplex::unit_grid(&[4, 4]).unwrap();
        let t = square_boundary(&cx, 1, 1);
        let c = flat_norm(&t, FlatKind::Whitney).unwrap();
        assert_eq!(c.exact_value(), Some(&int(1)));
        assert!(c.r.is_zero());
        assert_eq!(c.q.len(), 1);
        c.verify(&t).unwrap();
    }

    #[test]
    fn edge_has_no_homogeneous_filling() {
        let cx = CellComplex::unit_grid(&[2, 2]).unwrap();
        let t = Current::from_entries(cx, 1, [(0, int(1))]).unwrap();
        assert!(matches!(flat_norm(&t, FlatKind::Homogeneous), Err(GeoError::Infeasible(_))));
        let w = flat_norm(&t, FlatKind::Whitney).unwrap();
        assert_eq!(w.exact_value(), Some(&int(1)));
    }

    #[test]
    fn zero_current() {
        let cx = CellComplex::unit_grid(&[2, 2]).unwrap();
        let t = Current::zero(cx, 1);
        for kind in [FlatKind::Whitney, FlatKind::Homogeneous, FlatKind::IntegralWhitney, FlatKind::IntegralHomogeneous] {
            let c = flat_norm(&t, kind).unwrap();
            assert_eq!(c.exact_value(), Some(&int(0)));
            assert!(c.q.is_zero() && c.r.is_zero());
        }
    }

    #[test]
    fn float_path_agrees() {
        let cx = CellComplex::unit_grid(&[3, 3]).unwrap();
        let t = square_boundary(&cx, 0, 0).add(&square_boundary(&cx, 1, 0)).unwrap();
        let opts = FlatOptions { arith: Arith::Float64, ..Default::default() };
        let c = flat_norm_with(&t, FlatKind::Homogeneous, &opts).unwrap();
        assert!((c.value.value() - 2.0).abs() < 1e-9);
    }
}
