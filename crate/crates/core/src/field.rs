//! Parametric velocity fields `b(t, x)`.

use num_traits::Zero;

use crate::error::{GeoError, Result};
use crate::poly::{Poly, RPoly};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum FieldKind {
    Constant(Vec<Rational>),
    /// Rigid rotation with angular rate `rate` in the `(plane.0, plane.1)` plane.
    Rotation { center: Vec<Rational>, rate: Rational, plane: (usize, usize) },
    /// `b(x) = A x + c`, e.g. a shear.
    Linear { matrix: Vec<Vec<Rational>>, offset: Vec<Rational> },
    Polynomial(Vec<RPoly>),
    /// Bilinear interpolation of samples on a regular planar grid; zero outside.
    GridSample { lo: [f64; 2], spacing: [f64; 2], shape: [usize; 2], values: Vec<[f64; 2]> },
    /// `B(x, y) = (v(x), w(y))` with `x` the first `v.dim()` coordinates.
    Product(Box<VectorField>, Box<VectorField>),
}

/// A field `s(t) b(x)` in `R^dim`; `s` defaults to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub kind: FieldKind,
    pub time_scale: Option<RPoly>,
    dim: usize,
}

impl VectorField {
    pub fn new(kind: FieldKind) -> Result<Self> {
        let dim = match &kind {
            FieldKind::Constant(v) => v.len(),
            FieldKind::Rotation { center, plane, .. } => {
                if plane.0 == plane.1 || plane.0.max(plane.1) >= center.len() {
                    return Err(GeoError::Domain("rotation plane axes out of range".into()));
                }
                center.len()
            }
            FieldKind::Linear { matrix, offset } => {
                if matrix.len() != offset.len() || matrix.iter().any(|r| r.len() != offset.len()) {
                    return Err(GeoError::Domain("linear field needs a square matrix".into()));
                }
                offset.len()
            }
            FieldKind::Polynomial(c) => {
                if c.iter().any(|p| p.nvars() != c.len()) {
                    return Err(GeoError::Domain("polynomial field components must use dim variables".into()));
                }
                c.len()
            }
            FieldKind::GridSample { shape, values, .. } => {
                if values.len() != shape[0] * shape[1] || shape[0] < 2 || shape[1] < 2 {
                    return Err(GeoError::Domain("grid sample size mismatch".into()));
                }
                2
            }
            FieldKind::Product(a, b) => a.dim + b.dim,
        };
        Ok(VectorField { kind, time_scale: None, dim })
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(vec![Rational::zero(); dim])
    }

    pub fn constant(v: Vec<Rational>) -> Self {
        Self::new(FieldKind::Constant(v)).expect("constant field")
    }

    /// Counterclockwise planar rotation about `center`.
    pub fn rotation(center: Vec<Rational>, rate: Rational) -> Self {
        Self::new(FieldKind::Rotation { center, rate, plane: (0, 1) }).expect("rotation field")
    }

    /// `b(x) = (s * x_1, 0, ...)`: horizontal shear with invariant direction `e_0`.
    pub fn shear(dim: usize, s: Rational) -> Self {
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        m[0][1] = s;
        Self::new(FieldKind::Linear { matrix: m, offset: vec![Rational::zero(); dim] }).expect("shear field")
    }

    pub fn product(a: VectorField, b: VectorField) -> Self {
        Self::new(FieldKind::Product(Box::new(a), Box::new(b))).expect("product field")
    }

    pub fn with_time_scale(mut self, s: RPoly) -> Self {
        self.time_scale = Some(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn scale_at(&self, t: f64) -> f64 {
        self.time_scale.as_ref().map_or(1.0, |s| s.to_f64().eval(&[t]))
    }

    /// Spatial part without time scaling.
    fn eval_static(&self, x: &[f64]) -> Result<Vec<f64>> {
        let r = rational::to_f64;
        Ok(match &self.kind {
            FieldKind::Constant(v) => v.iter().map(r).collect(),
            FieldKind::Rotation { center, rate, plane } => {
                let mut out = vec![0.0; self.dim];
                let w = r(rate);
                let (i, j) = *plane;
                out[i] = -w * (x[j] - r(&center[j]));
                out[j] = w * (x[i] - r(&center[i]));
                out
            }
            FieldKind::Linear { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, c)| row.iter().zip(x).map(|(a, xi)| r(a) * xi).sum::<f64>() + r(c))
                .collect(),
            FieldKind::Polynomial(c) => c.iter().map(|p| p.to_f64().eval(x)).collect(),
            FieldKind::GridSample { lo, spacing, shape, values } => {
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(GeoError::Evaluation(format!("non-finite point {x:?}")));
                }
                let u = (x[0] - lo[0]) / spacing[0];
                let v = (x[1] - lo[1]) / spacing[1];
                if u < 0.0 || v < 0.0 || u > (shape[0] - 1) as f64 || v > (shape[1] - 1) as f64 {
                    return Ok(vec![0.0, 0.0]);
                }
                let i = (u.floor() as usize).min(shape[0] - 2);
                let j = (v.floor() as usize).min(shape[1] - 2);
                let (fu, fv) = (u - i as f64, v - j as f64);
                let at = |a: usize, b: usize| values[b * shape[0] + a];
                let mut out = vec![0.0; 2];
                for (c, o) in out.iter_mut().enumerate() {
                    *o = at(i, j)[c] * (1.0 - fu) * (1.0 - fv)
                        + at(i + 1, j)[c] * fu * (1.0 - fv)
                        + at(i, j + 1)[c] * (1.0 - fu) * fv
                        + at(i + 1, j + 1)[c] * fu * fv;
                }
                out
            }
            FieldKind::Product(a, b) => {
                let mut out = a.eval_static(&x[..a.dim])?;
                out.extend(b.eval_static(&x[a.dim..])?);
                out
            }
        })
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(GeoError::Evaluation(format!("point of dimension {} for a field in R^{}", x.len(), self.dim)));
        }
        let s = self.scale_at(t);
        let v = self.eval_static(x)?;
        if v.iter().any(|c| !c.is_finite()) {
            return Err(GeoError::Evaluation(format!("field not finite at {x:?}")));
        }
        Ok(v.into_iter().map(|c| c * s).collect())
    }

    /// Spatial polynomial components, when the field has them.
    fn static_polynomials(&self) -> Option<Vec<RPoly>> {
        let n = self.dim;
        match &self.kind {
            FieldKind::Constant(v) => Some(v.iter().map(|c| Poly::constant(n, c.clone())).collect()),
            FieldKind::Rotation { center, rate, plane } => {
                let mut out = vec![Poly::zero(n); n];
                let (i, j) = *plane;
                let xi = Poly::var(n, i).sub(&Poly::constant(n, center[i].clone()));
                let xj = Poly::var(n, j).sub(&Poly::constant(n, center[j].clone()));
                out[i] = xj.scale(&-rate.clone());
                out[j] = xi.scale(rate);
                Some(out)
            }
            FieldKind::Linear { matrix, offset } => {
                Some(matrix.iter().zip(offset).map(|(row, c)| Poly::affine(c.clone(), row)).collect())
            }
            FieldKind::Polynomial(c) => Some(c.clone()),
            FieldKind::GridSample { .. } => None,
            FieldKind::Product(a, b) => {
                let pa = a.static_polynomials()?;
                let pb = b.static_polynomials()?;
                let sa: Vec<RPoly> = (0..a.dim).map(|i| Poly::var(n, i)).collect();
                let sb: Vec<RPoly> = (0..b.dim).map(|i| Poly::var(n, a.dim + i)).collect();
                let mut out: Vec<RPoly> = pa.iter().map(|p| p.compose(&sa)).collect();
                out.extend(pb.iter().map(|p| p.compose(&sb)));
                Some(out)
            }
        }
    }

    /// Exact polynomial components of `b(t, .)`.
    pub fn polynomials_at(&self, t: &Rational) -> Option<Vec<RPoly>> {
        let base = self.static_polynomials()?;
        match &self.time_scale {
            None => Some(base),
            Some(s) => {
                let c = s.eval(std::slice::from_ref(t));
                Some(base.iter().map(|p| p.scale(&c)).collect())
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.static_polynomials().is_some()
    }

    /// Isometric flows preserve distances (constant fields and rotations).
    pub fn is_isometric(&self) -> bool {
        matches!(self.kind, FieldKind::Constant(_) | FieldKind::Rotation { .. })
    }

    /// Parses `zero:D`, `constant:v1,v2,..`, `rotation:c1,c2:rate`,
    /// `shear:s` (planar) or `linear:a11,a12,a21,a22` (planar).
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let list = |s: &str| -> Result<Vec<Rational>> { s.split(',').map(rational::parse).collect() };
        let bad = || GeoError::Parse(format!("bad field spec '{spec}'"));
        match parts.as_slice() {
            ["zero", d] => Ok(Self::zero(d.parse().map_err(|_| bad())?)),
            ["constant", v] => Ok(Self::constant(list(v)?)),
            ["rotation", c, w] => {
                let c = list(c)?;
                if c.len() < 2 {
                    return Err(bad());
                }
                Self::new(FieldKind::Rotation { center: c, rate: rational::parse(w)?, plane: (0, 1) })
            }
            ["shear", s] => Ok(Self::shear(2, rational::parse(s)?)),
            ["linear", m] => {
                let v = list(m)?;
                let n = (v.len() as f64).sqrt() as usize;
                if n * n != v.len() {
                    return Err(bad());
                }
                let matrix = v.chunks(n).map(|r| r.to_vec()).collect();
                Self::new(FieldKind::Linear { matrix, offset: vec![Rational::zero(); n] })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rotation_polynomials_match_evaluation() {
        let b = VectorField::rotation(vec![int(1), int(0)], rat(1, 2));
        let p = b.polynomials_at(&int(0)).unwrap();
        let x = [int(3), int(2)];
        let exact: Vec<Rational> = p.iter().map(|q| q.eval(&x)).collect();
        assert_eq!(exact, vec![int(-1), int(1)]);
        assert_eq!(b.eval(0.0, &[3.0, 2.0]).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn parse_specs() {
        let b = VectorField::parse("rotation:0,0:1.0").unwrap();
        assert!(b.is_isometric());
        assert!(VectorField::parse("constant:1,1/2").unwrap().is_polynomial());
        assert!(VectorField::parse("swirl:1").is_err());
    }

    #[test]
    fn product_splits_coordinates() {
        let a = VectorField::constant(vec![int(1)]);
        let b = VectorField::rotation(vec![int(0), int(0)], int(1));
        let p = VectorField::product(a, b);
        assert_eq!(p.dim(), 3);
        assert_eq!(p.eval(0.0, &[5.0, 1.0, 0.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        let polys = p.polynomials_at(&int(0)).unwrap();
        assert_eq!(polys[2].eval(&[int(5), int(1), int(0)]), int(1));
    }

    #[test]
    fn grid_sample_is_bilinear() {
        let f = VectorField::new(FieldKind::GridSample {
            lo: [0.0, 0.0],
            spacing: [1.0, 1.0],
            shape: [2, 2],
            values: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
        })
        .unwrap();
        assert_eq!(f.eval(0.0, &[0.5, 0.25]).unwrap(), vec![0.5, 0.25]);
        assert!(!f.is_polynomial());
    }
}
