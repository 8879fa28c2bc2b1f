//! Time-indexed sequences of currents.

use num_traits::Zero;

use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::rational::{self, Rational};

/// Snapshots `T_{t_0}, ..., T_{t_N}` on an increasing time grid.
#[derive(Clone, Debug)]
pub struct CurrentPath {
    pub times: Vec<Rational>,
    pub snapshots: Vec<Current>,
    /// Set when every snapshot was checked to have zero boundary.
    pub boundaryless: bool,
}

impl CurrentPath {
    pub fn new(times: Vec<Rational>, snapshots: Vec<Current>) -> Result<Self> {
        if times.len() != snapshots.len() || times.is_empty() {
            return Err(GeoError::Contract("path needs one snapshot per time".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GeoError::Contract("path times must increase".into()));
        }
        let k = snapshots[0].k();
        let n = snapshots[0].ambient_dim();
        if snapshots.iter().any(|s| s.k() != k || s.ambient_dim() != n) {
            return Err(GeoError::Contract("snapshots differ in dimension".into()));
        }
        let boundaryless = k > 0 && snapshots.iter().all(|s| s.boundary().is_zero());
        Ok(CurrentPath { times, snapshots, boundaryless })
    }

    /// Uniform grid `i/N` on `[0,1]` sampled from `f`.
    pub fn sample(n: usize, f: impl Fn(&Rational) -> Result<Current>) -> Result<Self> {
        let times: Vec<Rational> = (0..=n).map(|i| rational::rat(i as i64, n as i64)).collect();
        let snaps = times.iter().map(&f).collect::<Result<Vec<_>>>()?;
        Self::new(times, snaps)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn k(&self) -> usize {
        self.snapshots[0].k()
    }

    pub fn ambient_dim(&self) -> usize {
        self.snapshots[0].ambient_dim()
    }

    /// Common step when the grid is uniform.
    pub fn uniform_step(&self) -> Option<Rational> {
        if self.times.len() < 2 {
            return Some(Rational::zero());
        }
        let h = &self.times[1] - &self.times[0];
        self.times.windows(2).all(|w| &w[1] - &w[0] == h).then_some(h)
    }

    pub fn index_of_time(&self, t: &Rational) -> Option<usize> {
        self.times.binary_search(t).ok()
    }

    /// All snapshots moved onto one complex.
    pub fn on_common_complex(&self) -> Result<CurrentPath> {
        let mut cx = self.snapshots[0].complex().clone();
        for s in &self.snapshots[1..] {
            if s.complex().id() != cx.id() {
                cx = crate::complex::CellComplex::union(&cx, s.complex())?;
            }
        }
        let snaps = self.snapshots.iter().map(|s| s.transfer(&cx)).collect::<Result<Vec<_>>>()?;
        Ok(CurrentPath { times: self.times.clone(), snapshots: snaps, boundaryless: self.boundaryless })
    }
}
