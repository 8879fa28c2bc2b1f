//! Gluing a path of boundaryless currents into one space-time current.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::SpaceTimeCurrent;
use crate::cell::Cell;
use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::flatnorm::{flat_norm, FlatKind};
use crate::path::CurrentPath;
use crate::rational::{Measure, Rational};

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub current: SpaceTimeCurrent,
    /// Minimal integral fillings `W_i` with `dW_i = T_{i+1} - T_i`.
    pub fillings: Vec<Current>,
    /// `sum_i F_I(T_{i+1} - T_i)`.
    pub filling_mass: Measure,
    /// `-delta_1 x T_N + delta_0 x T_0`, the expected boundary.
    pub expected_boundary: BTreeMap<Cell, Rational>,
}

fn lift_time(t: &Rational) -> Cell {
    Cell::simplex(vec![vec![t.clone()]]).0
}

/// `S = -sum_i ([t_i, t_{i+1}] x T_i + delta_{t_{i+1}} x W_i)`.
pub fn glue(path: &CurrentPath) -> Result<GlueResult> {
    if path.k() == 0 || !path.boundaryless {
        return Err(GeoError::Contract("gluing needs boundaryless currents of degree >= 1".into()));
    }
    if path.len() < 2 {
        return Err(GeoError::Contract("gluing needs at least two snapshots".into()));
    }
    if path.uniform_step().is_none() {
        return Err(GeoError::Contract("gluing needs a uniform time grid".into()));
    }
    let path = path.on_common_complex()?;
    if !path.snapshots.iter().all(|t| t.is_integral()) {
        return Err(GeoError::Contract("gluing needs integral snapshots".into()));
    }
    let certs = (0..path.len() - 1)
        .into_par_iter()
        .map(|i| flat_norm(&path.snapshots[i + 1].sub(&path.snapshots[i])?, FlatKind::IntegralHomogeneous))
        .collect::<Result<Vec<_>>>()?;
    let d = path.ambient_dim();
    let mut map: BTreeMap<Cell, Rational> = BTreeMap::new();
    let minus_one = Rational::from_integer((-1).into());
    for i in 0..path.len() - 1 {
        let (a, b) = (&path.times[i], &path.times[i + 1]);
        let seg = Cell::simplex(vec![vec![a.clone()], vec![b.clone()]]).0;
        for (c, m) in path.snapshots[i].cells() {
            for (p, s) in seg.product(c) {
                Current::accumulate(&mut map, p, -m * Rational::from_integer(s.into()));
            }
        }
        for (c, m) in certs[i].q.cells() {
            Current::accumulate(&mut map, c.embed_at_time(b), m * &minus_one);
        }
    }
    let s = Current::from_cell_map(d + 1, path.k() + 1, map)?;
    let first = &path.times[0];
    let last = path.times.last().unwrap();
    let mut expected: BTreeMap<Cell, Rational> = BTreeMap::new();
    for (c, m) in path.snapshots.last().unwrap().cells() {
        for (p, sg) in lift_time(last).product(c) {
            Current::accumulate(&mut expected, p, -m * Rational::from_integer(sg.into()));
        }
    }
    for (c, m) in path.snapshots[0].cells() {
        for (p, sg) in lift_time(first).product(c) {
            Current::accumulate(&mut expected, p, m * Rational::from_integer(sg.into()));
        }
    }
    let filling_mass = Measure::sum(certs.iter().map(|c| &c.value));
    Ok(GlueResult {
        current: SpaceTimeCurrent::with_domain(s, first.clone(), last.clone())?,
        fillings: certs.into_iter().map(|c| c.q).collect(),
        filling_mass,
        expected_boundary: expected,
    })
}
