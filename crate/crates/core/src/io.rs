//! JSON and CSV formats.
//!
//! `complex.json`: `{"ambient_dim", "vertices": [[x, ...]], "cells": {"1": [...], ...}}`.
//! Coordinates are rational strings. A simplex is listed as its vertex ids;
//! a parallelotope as `{"box": [anchor, anchor + e_1, ..., anchor + e_k]}`.
//! Vertex `i` is 0-cell `i`, and cells of each dimension appear in the
//! canonical order, which is also their id order.
//!
//! `current.json`: `{"complex": <path or inline>, "k", "entries": [[id, num, den]]}`
//! with an optional `"domain": [t0, t1]` for space-time currents.
//!
//! `path.json`: `{"complex": <path or inline>, "k", "times": [...], "snapshots": [[[id, num, den]]]}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cell::{Cell, Point};
use crate::chain::Current;
use crate::complex::CellComplex;
use crate::error::{GeoError, Result};
use crate::flatnorm::FlatNormCertificate;
use crate::path::CurrentPath;
use crate::rational::{self, Rational};
use crate::spacetime::SpaceTimeCurrent;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CellRef {
    Simplex(Vec<usize>),
    Box { r#box: Vec<usize> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexFile {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub cells: BTreeMap<String, Vec<CellRef>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ComplexRef {
    Path(String),
    Inline(ComplexFile),
}

/// Integer written as a JSON number when it fits, else as a string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum BigNum {
    Small(i64),
    Big(String),
}

impl BigNum {
    fn of(v: &BigInt) -> Self {
        v.to_i64().map_or_else(|| BigNum::Big(v.to_string()), BigNum::Small)
    }

    fn value(&self) -> Result<BigInt> {
        match self {
            BigNum::Small(v) => Ok(BigInt::from(*v)),
            BigNum::Big(s) => s.trim().parse().map_err(|_| GeoError::Parse(format!("bad integer '{s}'"))),
        }
    }
}

pub type Entry = (usize, BigNum, BigNum);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurrentFile {
    pub complex: ComplexRef,
    pub k: usize,
    pub entries: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PathFile {
    pub complex: ComplexRef,
    pub k: usize,
    pub times: Vec<String>,
    pub snapshots: Vec<Vec<Entry>>,
}

fn point_strings(p: &Point) -> Vec<String> {
    p.iter().map(rational::format).collect()
}

impl ComplexFile {
    pub fn of(cx: &CellComplex) -> Result<Self> {
        let vertices: Vec<Vec<String>> = cx.cells(0).iter().map(|c| point_strings(&c.vertices()[0])).collect();
        let vid = |p: &Point| -> Result<usize> {
            let (v, _) = Cell::simplex(vec![p.clone()]);
            cx.index_of(&v).ok_or_else(|| GeoError::Structure("cell vertex missing from complex".into()))
        };
        let mut cells = BTreeMap::new();
        for k in 1..=cx.max_dim() {
            let mut list = Vec::with_capacity(cx.len(k));
            for c in cx.cells(k) {
                if c.is_simplex() {
                    list.push(CellRef::Simplex(c.vertices().iter().map(vid).collect::<Result<_>>()?));
                } else {
                    let (o, e) = c.frame();
                    let mut ids = vec![vid(&o)?];
                    for v in &e {
                        ids.push(vid(&crate::cell::add(&o, v))?);
                    }
                    list.push(CellRef::Box { r#box: ids });
                }
            }
            cells.insert(k.to_string(), list);
        }
        Ok(ComplexFile { ambient_dim: cx.ambient_dim(), vertices, cells })
    }

    /// The complex, and for each dimension the map from file order to ids.
    pub fn build(&self) -> Result<(Arc<CellComplex>, Vec<Vec<usize>>)> {
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| {
                if v.len() != self.ambient_dim {
                    return Err(GeoError::Parse(format!("vertex with {} coordinates in R^{}", v.len(), self.ambient_dim)));
                }
                v.iter().map(|s| rational::parse(s)).collect()
            })
            .collect::<Result<_>>()?;
        let get = |i: usize| -> Result<Point> {
            pts.get(i).cloned().ok_or_else(|| GeoError::Parse(format!("vertex id {i} out of range")))
        };
        let mut listed: Vec<Vec<Cell>> = vec![pts.iter().map(|p| Cell::simplex(vec![p.clone()]).0).collect()];
        let max = self.cells.keys().map(|k| k.parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>();
        let max = max.map_err(|_| GeoError::Parse("cell dimensions must be integers".into()))?.into_iter().max().unwrap_or(0);
        for k in 1..=max {
            let mut row = Vec::new();
            for r in self.cells.get(&k.to_string()).map(Vec::as_slice).unwrap_or(&[]) {
                let c = match r {
                    CellRef::Simplex(ids) => {
                        if ids.len() != k + 1 {
                            return Err(GeoError::Parse(format!("{k}-simplex with {} vertices", ids.len())));
                        }
                        Cell::simplex(ids.iter().map(|&i| get(i)).collect::<Result<_>>()?).0
                    }
                    CellRef::Box { r#box: ids } => {
                        if ids.len() != k + 1 {
                            return Err(GeoError::Parse(format!("{k}-box with {} corners", ids.len())));
                        }
                        let o = get(ids[0])?;
                        let e = ids[1..].iter().map(|&i| Ok(crate::cell::sub(&get(i)?, &o))).collect::<Result<_>>()?;
                        Cell::parallelotope(o, e).0
                    }
                };
                row.push(c);
            }
            listed.push(row);
        }
        let cx = CellComplex::from_cells(self.ambient_dim, listed.iter().flatten().cloned())?;
        let ids = listed
            .iter()
            .map(|row| row.iter().map(|c| cx.index_of(c).expect("listed cell is in its own complex")).collect())
            .collect();
        Ok((cx, ids))
    }
}

fn entries_of(t: &Current) -> Vec<Entry> {
    t.coeffs().iter().map(|(&i, m)| (i, BigNum::of(m.numer()), BigNum::of(m.denom()))).collect()
}

fn current_from_entries(cx: &Arc<CellComplex>, ids: &[Vec<usize>], k: usize, entries: &[Entry]) -> Result<Current> {
    let row = ids.get(k).map(Vec::as_slice).unwrap_or(&[]);
    let mut out = Vec::with_capacity(entries.len());
    for (i, n, d) in entries {
        let id = *row.get(*i).ok_or_else(|| GeoError::Parse(format!("{k}-cell id {i} out of range")))?;
        let d = d.value()?;
        if d == BigInt::from(0) {
            return Err(GeoError::Parse("zero denominator".into()));
        }
        out.push((id, Rational::new(n.value()?, d)));
    }
    Current::from_entries(cx.clone(), k, out)
}

fn resolve(r: &ComplexRef, base: Option<&Path>) -> Result<(Arc<CellComplex>, Vec<Vec<usize>>)> {
    match r {
        ComplexRef::Inline(f) => f.build(),
        ComplexRef::Path(p) => {
            let mut full = PathBuf::from(p);
            if full.is_relative() {
                if let Some(b) = base {
                    full = b.join(full);
                }
            }
            read_complex_file(&full)?.build()
        }
    }
}

fn base_dir(p: &Path) -> Option<&Path> {
    p.parent()
}

pub fn read_complex_file(p: &Path) -> Result<ComplexFile> {
    Ok(serde_json::from_str(&fs::read_to_string(p)?)?)
}

pub fn read_complex(p: &Path) -> Result<Arc<CellComplex>> {
    Ok(read_complex_file(p)?.build()?.0)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(p: &Path, v: &T) -> Result<()> {
    fs::write(p, to_json(v)?)?;
    Ok(())
}

pub fn write_complex(p: &Path, cx: &CellComplex) -> Result<()> {
    write_json(p, &ComplexFile::of(cx)?)
}

impl CurrentFile {
    pub fn inline(t: &Current) -> Result<Self> {
        Ok(CurrentFile {
            complex: ComplexRef::Inline(ComplexFile::of(t.complex())?),
            k: t.k(),
            entries: entries_of(t),
            domain: None,
        })
    }

    /// Refers to a complex file instead of embedding it.
    pub fn referencing(t: &Current, complex_path: &str) -> Self {
        CurrentFile { complex: ComplexRef::Path(complex_path.to_string()), k: t.k(), entries: entries_of(t), domain: None }
    }

    pub fn to_current(&self, base: Option<&Path>) -> Result<Current> {
        let (cx, ids) = resolve(&self.complex, base)?;
        current_from_entries(&cx, &ids, self.k, &self.entries)
    }

    /// Reads against an already loaded complex, ignoring the `complex` field.
    pub fn to_current_on(&self, complex: &ComplexFile) -> Result<Current> {
        let (cx, ids) = complex.build()?;
        current_from_entries(&cx, &ids, self.k, &self.entries)
    }
}

pub fn read_current(p: &Path) -> Result<Current> {
    let f: CurrentFile = serde_json::from_str(&fs::read_to_string(p)?)?;
    f.to_current(base_dir(p))
}

pub fn write_current(p: &Path, t: &Current) -> Result<()> {
    write_json(p, &CurrentFile::inline(t)?)
}

pub fn spacetime_file(s: &SpaceTimeCurrent) -> Result<CurrentFile> {
    let mut f = CurrentFile::inline(s.current())?;
    let (a, b) = s.domain();
    f.domain = Some([rational::format(a), rational::format(b)]);
    Ok(f)
}

pub fn read_spacetime(p: &Path) -> Result<SpaceTimeCurrent> {
    let f: CurrentFile = serde_json::from_str(&fs::read_to_string(p)?)?;
    let t = f.to_current(base_dir(p))?;
    match &f.domain {
        Some([a, b]) => SpaceTimeCurrent::with_domain(t, rational::parse(a)?, rational::parse(b)?),
        None => SpaceTimeCurrent::new(t),
    }
}

pub fn write_spacetime(p: &Path, s: &SpaceTimeCurrent) -> Result<()> {
    write_json(p, &spacetime_file(s)?)
}

pub fn path_file(path: &CurrentPath) -> Result<PathFile> {
    let common = path.on_common_complex()?;
    let cx = common.snapshots.first().map(|s| s.complex().clone());
    let cx = cx.ok_or_else(|| GeoError::Contract("empty path".into()))?;
    Ok(PathFile {
        complex: ComplexRef::Inline(ComplexFile::of(&cx)?),
        k: path.k(),
        times: path.times.iter().map(rational::format).collect(),
        snapshots: common.snapshots.iter().map(entries_of).collect(),
    })
}

pub fn read_path(p: &Path) -> Result<CurrentPath> {
    let f: PathFile = serde_json::from_str(&fs::read_to_string(p)?)?;
    if f.times.len() != f.snapshots.len() {
        return Err(GeoError::Parse("times and snapshots differ in length".into()));
    }
    let (cx, ids) = resolve(&f.complex, base_dir(p))?;
    let times = f.times.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
    let snaps = f.snapshots.iter().map(|e| current_from_entries(&cx, &ids, f.k, e)).collect::<Result<_>>()?;
    CurrentPath::new(times, snaps)
}

pub fn write_path(p: &Path, path: &CurrentPath) -> Result<()> {
    write_json(p, &path_file(path)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateFile {
    pub kind: String,
    pub value: Option<String>,
    pub value_f64: f64,
    pub integrality: crate::flatnorm::Integrality,
    pub arith: crate::flatnorm::Arith,
    pub pivots: usize,
    pub nodes: usize,
    pub q: CurrentFile,
    pub r: CurrentFile,
}

impl CertificateFile {
    pub fn of(c: &FlatNormCertificate) -> Result<Self> {
        Ok(CertificateFile {
            kind: c.kind.to_string(),
            value: c.exact_value().map(rational::format),
            value_f64: c.value.value(),
            integrality: c.integrality,
            arith: c.arith,
            pivots: c.pivots,
            nodes: c.nodes,
            q: CurrentFile::inline(&c.q)?,
            r: CurrentFile::inline(&c.r)?,
        })
    }
}

/// Writes a CSV file with a fixed header.
pub fn write_csv(p: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(p).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> GeoError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => GeoError::Io(e),
        k => GeoError::Parse(format!("{k:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn current_round_trip() {
        let cx = CellComplex::grid(&[int(0), rat(1, 3)], &[rat(1, 2), rat(2, 3)], &[2, 2]).unwrap();
        let t = Current::from_entries(cx.clone(), 1, [(0, rat(3, 4)), (5, int(-2))]).unwrap();
        let f = CurrentFile::inline(&t).unwrap();
        let s = to_json(&f).unwrap();
        let back: CurrentFile = serde_json::from_str(&s).unwrap();
        let u = back.to_current(None).unwrap();
        assert_eq!(u, t);
        assert_eq!(to_json(&CurrentFile::inline(&u).unwrap()).unwrap(), s);
    }

    #[test]
    fn simplicial_round_trip() {
        let (a, _) = Cell::simplex(vec![crate::cell::ipoint(&[0, 0]), crate::cell::ipoint(&[2, 1]), crate::cell::ipoint(&[0, 3])]);
        let mut m = BTreeMap::new();
        m.insert(a, rat(-5, 7));
        let t = Current::from_cell_map(2, 2, m).unwrap();
        let f = CurrentFile::inline(&t).unwrap();
        assert_eq!(f.to_current(None).unwrap().to_cell_map(), t.to_cell_map());
    }

    #[test]
    fn big_numbers_survive() {
        let cx = CellComplex::unit_grid(&[1]).unwrap();
        let big = Rational::new(BigInt::from(10).pow(30), BigInt::from(3));
        let t = Current::from_entries(cx, 1, [(0, big.clone())]).unwrap();
        let back: CurrentFile = serde_json::from_str(&to_json(&CurrentFile::inline(&t).unwrap()).unwrap()).unwrap();
        assert_eq!(back.to_current(None).unwrap().get(0), big);
    }
}
