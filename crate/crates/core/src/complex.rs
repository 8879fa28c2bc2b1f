//! Finite embedded cell complexes closed under taking faces.

use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cell::{Cell, Point};
use crate::error::{GeoError, Result};
use crate::rational::{Measure, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Simplicial,
    Cubical,
    Mixed,
}

/// Cells of every dimension, sorted canonically within each dimension, with
/// signed face incidences and volumes.
#[derive(Debug)]
pub struct CellComplex {
    ambient_dim: usize,
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    faces: Vec<Vec<Vec<(usize, i8)>>>,
    volumes: Vec<Vec<Measure>>,
    id: u64,
}

impl CellComplex {
    /// Builds the smallest complex containing `cells` and all their faces.
    pub fn from_cells(ambient_dim: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Arc<Self>> {
        let mut by_dim: Vec<HashSet<Cell>> = Vec::new();
        for c in cells {
            if c.ambient_dim() != ambient_dim {
                return Err(GeoError::Structure(format!(
                    "cell in R^{} added to complex in R^{ambient_dim}",
                    c.ambient_dim()
                )));
            }
            let k = c.dim();
            if by_dim.len() <= k {
                by_dim.resize_with(k + 1, HashSet::new);
            }
            by_dim[k].insert(c);
        }
        if by_dim.is_empty() {
            by_dim.push(HashSet::new());
        }
        for k in (1..by_dim.len()).rev() {
            let lower: Vec<Cell> = by_dim[k].iter().flat_map(|c| c.faces().into_iter().map(|(f, _)| f)).collect();
            by_dim[k - 1].extend(lower);
        }
        let cells: Vec<Vec<Cell>> = by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Cell> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        Self::assemble(ambient_dim, cells)
    }

    fn assemble(ambient_dim: usize, cells: Vec<Vec<Cell>>) -> Result<Arc<Self>> {
        let index: Vec<HashMap<Cell, usize>> =
            cells.iter().map(|v| v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()).collect();
        let mut volumes = Vec::with_capacity(cells.len());
        for v in &cells {
            let mut vols = Vec::with_capacity(v.len());
            for c in v {
                let vol_sq = if c.dim() == 0 { Rational::from_integer(1.into()) } else { c.volume_sq() };
                if vol_sq.is_zero() {
                    return Err(GeoError::Structure(format!("degenerate {}-cell {:?}", c.dim(), c)));
                }
                vols.push(if c.dim() == 0 { Measure::exact(vol_sq) } else { c.volume() });
            }
            volumes.push(vols);
        }
        let mut faces = vec![Vec::new()];
        for k in 1..cells.len() {
            let mut fk = Vec::with_capacity(cells[k].len());
            for c in &cells[k] {
                let mut inc: Vec<(usize, i8)> = Vec::new();
                for (f, s) in c.faces() {
                    let i = *index[k - 1]
                        .get(&f)
                        .ok_or_else(|| GeoError::Structure(format!("missing face {f:?}")))?;
                    inc.push((i, s));
                }
                fk.push(inc);
            }
            faces.push(fk);
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        ambient_dim.hash(&mut h);
        cells.hash(&mut h);
        let id = h.finish();
        Ok(Arc::new(CellComplex { ambient_dim, cells, index, faces, volumes, id }))
    }

    /// Uniform axis-aligned grid of `counts[i]` boxes of side `h[i]` from `lo`.
    pub fn grid(lo: &[Rational], h: &[Rational], counts: &[usize]) -> Result<Arc<Self>> {
        let n = lo.len();
        let mut tops = Vec::new();
        let total: usize = counts.iter().product();
        for flat in 0..total {
            let mut rem = flat;
            let mut corner: Point = Vec::with_capacity(n);
            for a in 0..n {
                let i = rem % counts[a];
                rem /= counts[a];
                corner.push(&lo[a] + &h[a] * Rational::from_integer((i as i64).into()));
            }
            let axes: Vec<(usize, Rational)> = (0..n).map(|a| (a, h[a].clone())).collect();
            tops.push(Cell::axis_box(corner, &axes).0);
        }
        Self::from_cells(n, tops)
    }

    /// Integer grid `[0,m_1] x ... x [0,m_n]` with unit boxes.
    pub fn unit_grid(counts: &[usize]) -> Result<Arc<Self>> {
        let n = counts.len();
        let zero = vec![Rational::zero(); n];
        let one = vec![Rational::from_integer(1.into()); n];
        Self::grid(&zero, &one, counts)
    }

    /// Complex containing the cells of both inputs.
    pub fn union(a: &CellComplex, b: &CellComplex) -> Result<Arc<Self>> {
        if a.ambient_dim != b.ambient_dim {
            return Err(GeoError::Structure("union of complexes in different dimensions".into()));
        }
        let cells = a.cells.iter().flatten().chain(b.cells.iter().flatten()).cloned();
        Self::from_cells(a.ambient_dim, cells)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Highest cell dimension present.
    pub fn max_dim(&self) -> usize {
        self.cells.iter().rposition(|v| !v.is_empty()).unwrap_or(0)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn len(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|v| v.is_empty())
    }

    pub fn cell(&self, k: usize, i: usize) -> &Cell {
        &self.cells[k][i]
    }

    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.index.get(c.dim())?.get(c).copied()
    }

    /// Signed faces of the `i`-th `k`-cell.
    pub fn faces_of(&self, k: usize, i: usize) -> &[(usize, i8)] {
        if k == 0 {
            return &[];
        }
        &self.faces[k][i]
    }

    pub fn volume(&self, k: usize, i: usize) -> &Measure {
        &self.volumes[k][i]
    }

    /// Content hash identifying the complex.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn kind(&self) -> ComplexKind {
        let mut simplices = false;
        let mut boxes = false;
        for v in self.cells.iter().skip(2) {
            for c in v {
                if c.is_simplex() {
                    simplices = true;
                } else {
                    boxes = true;
                }
            }
        }
        match (simplices, boxes) {
            (true, true) => ComplexKind::Mixed,
            (false, true) => ComplexKind::Cubical,
            _ => ComplexKind::Simplicial,
        }
    }

    /// Range of the time axis (coordinate 0) over all vertices.
    pub fn coord_range(&self, axis: usize) -> Option<(Rational, Rational)> {
        let mut it = self.cells(0).iter().map(|c| c.vertices()[0][axis].clone());
        let first = it.next()?;
        Some(it.fold((first.clone(), first), |(lo, hi), x| {
            let lo = if x < lo { x.clone() } else { lo };
            let hi = if x > hi { x } else { hi };
            (lo, hi)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let c = CellComplex::unit_grid(&[4, 4]).unwrap();
        assert_eq!(c.len(0), 25);
        assert_eq!(c.len(1), 40);
        assert_eq!(c.len(2), 16);
        assert_eq!(c.kind(), ComplexKind::Cubical);
        let c3 = CellComplex::unit_grid(&[2, 2, 2]).unwrap();
        assert_eq!(c3.len(3), 8);
        assert_eq!(c3.len(2), 36);
        assert_eq!(c3.len(1), 54);
        assert_eq!(c3.len(0), 27);
    }

    #[test]
    fn degenerate_cells_are_rejected() {
        let p = |x: i64, y: i64| vec![Rational::from_integer(x.into()), Rational::from_integer(y.into())];
        let (c, _) = Cell::simplex(vec![p(0, 0), p(1, 1), p(2, 2)]);
        assert!(CellComplex::from_cells(2, [c]).is_err());
    }

    #[test]
    fn id_depends_on_content_only() {
        let a = CellComplex::unit_grid(&[2, 3]).unwrap();
        let b = CellComplex::unit_grid(&[2, 3]).unwrap();
        let c = CellComplex::unit_grid(&[3, 2]).unwrap();
        assert_eq!(a.id(), b.id());
        assert_ne!(a.id(), c.id());
    }
}
