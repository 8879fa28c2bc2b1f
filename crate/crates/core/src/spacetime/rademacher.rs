//! Difference-quotient fillings `R_{t,h} / h`.

use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::flatnorm::{flat_norm, FlatKind};
use crate::path::CurrentPath;
use crate::rational::Rational;

/// For each `h`, `(1/h) Q` where `Q` is a least-mass filling of
/// `T_{t+h} - T_t`. Both times must be sample times of the path.
pub fn weak_rademacher_filling(path: &CurrentPath, t: &Rational, hs: &[Rational]) -> Result<Vec<Current>> {
    let i = path.index_of_time(t).ok_or_else(|| GeoError::Domain(format!("{t} is not a sample time")))?;
    hs.iter()
        .map(|h| {
            if h <= &Rational::default() {
                return Err(GeoError::Domain("h must be positive".into()));
            }
            let j = path
                .index_of_time(&(t + h))
                .ok_or_else(|| GeoError::Domain(format!("{} is not a sample time", t + h)))?;
            let diff = path.snapshots[j].sub(&path.snapshots[i])?;
            let q = flat_norm(&diff, FlatKind::Homogeneous)?.q;
            Ok(q.scale(&h.recip()))
        })
        .collect()
}
