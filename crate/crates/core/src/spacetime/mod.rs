//! Space-time currents in `R x R^d` (coordinate 0 is time): per-cell
//! geometric data, slicing, variation, coarea, gluing of paths and the
//! advection check.

mod advection;
mod coarea;
mod glue;
mod rademacher;
mod slice;
mod variation;

pub use advection::{advection_check, AdvectionReport};
pub use coarea::{coarea_check, CoareaReport};
pub use glue::{glue, GlueResult};
pub use rademacher::weak_rademacher_filling;
pub use slice::{end_slice, slice, slice_cell, slice_path, Side};
pub use variation::{slice_hull, variation, variation_report, EvRow, VariationBin, VariationReport};

use num_traits::{One, Signed, Zero};

use crate::cell::Cell;
use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::linalg;
use crate::rational::{Measure, Rational};

/// A `(k+1)`-current in `R^{1+d}` with time domain `[t0, t1]`.
#[derive(Clone, Debug)]
pub struct SpaceTimeCurrent {
    s: Current,
    domain: (Rational, Rational),
}

/// Geometry of one support cell, all exact.
#[derive(Clone, Debug)]
pub struct CellData {
    pub cell: Cell,
    pub multiplicity: Rational,
    /// Tangential gradient of the time coordinate.
    pub grad_t: Vec<Rational>,
    pub grad_t_sq: Rational,
    /// Spatial projection of `grad_t / |grad_t|^2`; `None` on critical cells.
    pub velocity: Option<Vec<Rational>>,
    /// `|p(S-vector)|^2`, the squared spatial part of the unit orienting vector.
    pub p_norm_sq: Rational,
    /// Gram determinant of the projected frame.
    pub projected_gram: Rational,
}

impl CellData {
    pub fn of(cell: &Cell, m: &Rational) -> Result<CellData> {
        let (_, edges) = cell.frame();
        let g = linalg::gram(&edges);
        let gdet = linalg::det(g.clone());
        if gdet.is_zero() {
            return Err(GeoError::Structure("degenerate space-time cell".into()));
        }
        let rhs: Vec<Rational> = edges.iter().map(|e| e[0].clone()).collect();
        let c = linalg::solve(g, rhs.clone()).ok_or_else(|| GeoError::Structure("singular cell frame".into()))?;
        let n = cell.ambient_dim();
        let mut grad_t = vec![Rational::zero(); n];
        for (cj, e) in c.iter().zip(&edges) {
            for i in 0..n {
                grad_t[i] += cj * &e[i];
            }
        }
        let grad_t_sq: Rational = c.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        let velocity = (!grad_t_sq.is_zero()).then(|| grad_t[1..].iter().map(|v| v / &grad_t_sq).collect());
        let projected: Vec<Vec<Rational>> = edges.iter().map(|e| e[1..].to_vec()).collect();
        let projected_gram = linalg::det(linalg::gram(&projected));
        Ok(CellData {
            cell: cell.clone(),
            multiplicity: m.clone(),
            grad_t,
            grad_t_sq,
            velocity,
            p_norm_sq: &projected_gram / &gdet,
            projected_gram,
        })
    }

    pub fn is_critical(&self) -> bool {
        self.grad_t_sq.is_zero()
    }

    /// `|m| int_c |p(S-vector)| dH`, the spatial variation carried by the cell.
    pub fn variation(&self) -> Measure {
        let f = if self.cell.is_simplex() { factorial(self.cell.dim()) } else { Rational::one() };
        Measure::scaled_sqrt(&(self.multiplicity.abs() / f), &self.projected_gram)
    }

    /// Time range covered by the cell.
    pub fn time_range(&self) -> (Rational, Rational) {
        self.cell.coord_range(0)
    }
}

pub(crate) fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

/// Output of the geometric derivative.
#[derive(Clone, Debug)]
pub struct GeometricDerivative {
    pub cells: Vec<CellData>,
    /// Cells where the time gradient vanishes.
    pub critical: Current,
    pub crit_mass: Measure,
}

impl SpaceTimeCurrent {
    pub fn new(s: Current) -> Result<Self> {
        Self::with_domain(s, Rational::zero(), Rational::one())
    }

    pub fn with_domain(s: Current, t0: Rational, t1: Rational) -> Result<Self> {
        if s.ambient_dim() < 2 || s.k() == 0 {
            return Err(GeoError::Contract("space-time currents need ambient R x R^d and degree >= 1".into()));
        }
        if t0 >= t1 {
            return Err(GeoError::Contract("empty time domain".into()));
        }
        Ok(SpaceTimeCurrent { s, domain: (t0, t1) })
    }

    pub fn current(&self) -> &Current {
        &self.s
    }

    pub fn into_current(self) -> Current {
        self.s
    }

    pub fn spatial_dim(&self) -> usize {
        self.s.ambient_dim() - 1
    }

    /// Degree of the slices.
    pub fn slice_degree(&self) -> usize {
        self.s.k() - 1
    }

    pub fn domain(&self) -> &(Rational, Rational) {
        &self.domain
    }

    pub fn cell_data(&self) -> Result<Vec<CellData>> {
        self.s.cells().map(|(c, m)| CellData::of(c, m)).collect()
    }

    /// True when the boundary lives in `{t <= t0} u {t >= t1}`.
    pub fn boundaryless_inside(&self) -> bool {
        let (t0, t1) = &self.domain;
        self.s.boundary().cells().all(|(c, _)| {
            let (lo, hi) = c.coord_range(0);
            &hi <= t0 || &lo >= t1
        })
    }

    /// Velocities on non-critical cells and the critical part; `tol` is a
    /// threshold on `|grad t|` (zero for the exact test).
    pub fn geometric_derivative(&self, tol: &Rational) -> Result<GeometricDerivative> {
        let cells = self.cell_data()?;
        let tol_sq = tol * tol;
        let crit: Vec<&CellData> = cells.iter().filter(|d| d.grad_t_sq <= tol_sq).collect();
        let mut crit_mass = Measure::zero();
        for d in &crit {
            crit_mass.add(&d.cell.volume().scaled(&d.multiplicity.abs()));
        }
        let critical = Current::from_cells(
            self.s.complex().clone(),
            self.s.k(),
            crit.iter().map(|d| (d.cell.clone(), d.multiplicity.clone())),
        )?;
        Ok(GeometricDerivative { cells, critical, crit_mass })
    }

    /// Total spatial variation `int |p(S-vector)| d||S||`.
    pub fn total_variation(&self) -> Result<Measure> {
        let mut acc = Measure::zero();
        for d in self.cell_data()? {
            acc.add(&d.variation());
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn tilted_parallelogram() -> Cell {
        // segment {0} x [0,1] in the y-direction moving with velocity (1/2, 0)
        Cell::parallelotope(vec![int(0), int(0), int(0)], vec![vec![int(1), rat(1, 2), int(0)], vec![int(0), int(0), int(1)]]).0
    }

    #[test]
    fn velocity_of_translating_segment() {
        let d = CellData::of(&tilted_parallelogram(), &int(1)).unwrap();
        assert_eq!(d.grad_t_sq, rat(4, 5));
        assert_eq!(d.velocity, Some(vec![rat(1, 2), int(0)]));
        // |p(S)|^2 = G(pE)/G(E) = (1/4) / (5/4)
        assert_eq!(d.p_norm_sq, rat(1, 5));
        assert_eq!(d.variation().exact, Some(rat(1, 2)));
    }

    #[test]
    fn horizontal_cells_are_critical() {
        let (c, _) = Cell::axis_box(vec![rat(1, 3), int(0), int(0)], &[(1, int(1)), (2, int(1))]);
        let d = CellData::of(&c, &int(2)).unwrap();
        assert!(d.is_critical());
        assert!(d.velocity.is_none());
        assert_eq!(d.p_norm_sq, int(1));
        assert_eq!(d.variation().exact, Some(int(2)));
    }
}
