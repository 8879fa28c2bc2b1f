//! Oriented cells: simplices and parallelotopes with exact rational vertices.
//!
//! Every constructor returns a canonical representative together with the
//! sign relating the requested orientation to the canonical one, so that two
//! geometrically equal cells always compare equal.

use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::rational::{Measure, Rational};

pub type Point = Vec<Rational>;

/// Canonical oriented cell. Segments and points are always stored as
/// simplices; parallelotopes have dimension at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// Vertices in increasing lexicographic order; orientation is
    /// `(v1 - v0) ^ ... ^ (vk - v0)`.
    Simplex(Vec<Point>),
    /// `anchor + sum s_i edges_i, s in [0,1]^k`; edges are lexicographically
    /// positive and sorted in decreasing order, orientation is their wedge.
    Parallelotope { anchor: Point, edges: Vec<Point> },
}

fn is_lex_negative(v: &[Rational]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
}

pub fn add(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Sorts `items` and returns the parity of the permutation applied.
fn sort_with_sign<T: Ord>(items: &mut [T], descending: bool) -> i8 {
    let mut sign = 1i8;
    // insertion sort keeps the swap count explicit; cells are tiny
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            let out_of_order = if descending { items[j - 1] < items[j] } else { items[j - 1] > items[j] };
            if !out_of_order {
                break;
            }
            items.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

fn permutation_sign(p: &[usize]) -> i8 {
    let mut s = 1i8;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

impl Cell {
    /// Canonical simplex spanned by `points` in the given order.
    pub fn simplex(mut points: Vec<Point>) -> (Cell, i8) {
        let sign = sort_with_sign(&mut points, false);
        (Cell::Simplex(points), sign)
    }

    /// Canonical parallelotope; one edge gives a segment, none a point.
    pub fn parallelotope(mut anchor: Point, edges: Vec<Point>) -> (Cell, i8) {
        let mut sign = 1i8;
        let mut fixed = Vec::with_capacity(edges.len());
        for e in edges {
            if is_lex_negative(&e) {
                anchor = add(&anchor, &e);
                fixed.push(e.iter().map(|x| -x).collect::<Point>());
                sign = -sign;
            } else {
                fixed.push(e);
            }
        }
        match fixed.len() {
            0 => (Cell::Simplex(vec![anchor]), sign),
            1 => {
                let far = add(&anchor, &fixed[0]);
                (Cell::Simplex(vec![anchor, far]), sign)
            }
            _ => {
                sign *= sort_with_sign(&mut fixed, true);
                (Cell::Parallelotope { anchor, edges: fixed }, sign)
            }
        }
    }

    /// Axis-aligned box `lo + [0, ext_i] e_{axes_i}`, oriented by increasing axis.
    pub fn axis_box(lo: Point, axes: &[(usize, Rational)]) -> (Cell, i8) {
        let n = lo.len();
        let edges = axes
            .iter()
            .map(|(a, len)| {
                let mut e = vec![Rational::zero(); n];
                e[*a] = len.clone();
                e
            })
            .collect();
        Cell::parallelotope(lo, edges)
    }

    pub fn dim(&self) -> usize {
        match self {
            Cell::Simplex(v) => v.len() - 1,
            Cell::Parallelotope { edges, .. } => edges.len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Cell::Simplex(v) => v[0].len(),
            Cell::Parallelotope { anchor, .. } => anchor.len(),
        }
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self, Cell::Simplex(_))
    }

    /// Base point and spanning edge vectors; their wedge is the orientation.
    pub fn frame(&self) -> (Point, Vec<Point>) {
        match self {
            Cell::Simplex(v) => (v[0].clone(), v[1..].iter().map(|p| sub(p, &v[0])).collect()),
            Cell::Parallelotope { anchor, edges } => (anchor.clone(), edges.clone()),
        }
    }

    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Cell::Simplex(v) => v.clone(),
            Cell::Parallelotope { anchor, edges } => {
                let mut out = vec![anchor.clone()];
                for e in edges {
                    let shifted: Vec<Point> = out.iter().map(|p| add(p, e)).collect();
                    out.extend(shifted);
                }
                out
            }
        }
    }

    /// Codimension-one faces with incidence signs.
    pub fn faces(&self) -> Vec<(Cell, i8)> {
        match self {
            Cell::Simplex(v) => {
                if v.len() == 1 {
                    return Vec::new();
                }
                (0..v.len())
                    .map(|i| {
                        let mut w = v.clone();
                        w.remove(i);
                        let s = if i % 2 == 0 { 1 } else { -1 };
                        (Cell::Simplex(w), s)
                    })
                    .collect()
            }
            Cell::Parallelotope { anchor, edges } => {
                let mut out = Vec::with_capacity(2 * edges.len());
                for p in 0..edges.len() {
                    let mut rest = edges.clone();
                    let e = rest.remove(p);
                    let lower_sign: i8 = if p % 2 == 0 { -1 } else { 1 };
                    let (lo, s1) = Cell::parallelotope(anchor.clone(), rest.clone());
                    let (hi, s2) = Cell::parallelotope(add(anchor, &e), rest);
                    out.push((lo, lower_sign * s1));
                    out.push((hi, -lower_sign * s2));
                }
                out
            }
        }
    }

    /// Determinant of the Gram matrix of the frame edges.
    pub fn gram_det(&self) -> Rational {
        let (_, edges) = self.frame();
        linalg::det(linalg::gram(&edges))
    }

    /// Squared k-volume.
    pub fn volume_sq(&self) -> Rational {
        let g = self.gram_det();
        match self {
            Cell::Simplex(_) => {
                let f = factorial(self.dim());
                g / (&f * &f)
            }
            Cell::Parallelotope { .. } => g,
        }
    }

    /// k-volume; exact when the squared volume is a rational square.
    pub fn volume(&self) -> Measure {
        if self.dim() == 0 {
            return Measure::exact(Rational::one());
        }
        Measure::scaled_sqrt(&Rational::one(), &self.volume_sq())
    }

    pub fn is_degenerate(&self) -> bool {
        self.dim() > 0 && self.gram_det().is_zero()
    }

    /// Range of coordinate `axis` over the cell.
    pub fn coord_range(&self, axis: usize) -> (Rational, Rational) {
        let vs = self.vertices();
        let mut lo = vs[0][axis].clone();
        let mut hi = lo.clone();
        for v in &vs[1..] {
            if v[axis] < lo {
                lo = v[axis].clone();
            }
            if v[axis] > hi {
                hi = v[axis].clone();
            }
        }
        (lo, hi)
    }

    /// Bounding box `(lo, hi)`.
    pub fn bbox(&self) -> (Point, Point) {
        let n = self.ambient_dim();
        let ranges: Vec<_> = (0..n).map(|a| self.coord_range(a)).collect();
        (ranges.iter().map(|r| r.0.clone()).collect(), ranges.into_iter().map(|r| r.1).collect())
    }

    /// Simplices covering the cell, each with its orientation sign relative
    /// to the cell. Parallelotopes use the staircase decomposition.
    pub fn triangulate(&self) -> Vec<(Cell, i8)> {
        match self {
            Cell::Simplex(_) => vec![(self.clone(), 1)],
            Cell::Parallelotope { anchor, edges } => permutations(edges.len())
                .into_iter()
                .map(|perm| {
                    let mut pts = vec![anchor.clone()];
                    for &i in &perm {
                        let next = add(pts.last().unwrap(), &edges[i]);
                        pts.push(next);
                    }
                    let (c, s) = Cell::simplex(pts);
                    (c, s * permutation_sign(&perm))
                })
                .collect(),
        }
    }

    /// Apply a point map to the vertices of a simplex; parallelotopes are
    /// mapped affinely through their anchor and edge endpoints.
    pub fn map_points(&self, f: &dyn Fn(&Point) -> Point) -> (Cell, i8) {
        match self {
            Cell::Simplex(v) => Cell::simplex(v.iter().map(f).collect()),
            Cell::Parallelotope { anchor, edges } => {
                let a = f(anchor);
                let es = edges.iter().map(|e| sub(&f(&add(anchor, e)), &a)).collect();
                Cell::parallelotope(a, es)
            }
        }
    }

    /// Cartesian product with orientation `self ^ other`, split into
    /// canonical cells when the factors are not both box-like.
    pub fn product(&self, other: &Cell) -> Vec<(Cell, i8)> {
        let n1 = self.ambient_dim();
        let n2 = other.ambient_dim();
        let lift_a = |p: &Point| -> Point { p.iter().cloned().chain(std::iter::repeat_n(Rational::zero(), n2)).collect() };
        let lift_b = |p: &Point| -> Point { std::iter::repeat_n(Rational::zero(), n1).chain(p.iter().cloned()).collect() };
        let boxlike = |c: &Cell| !c.is_simplex() || c.dim() <= 1;
        if boxlike(self) && boxlike(other) {
            let (a0, ae) = self.frame();
            let (b0, be) = other.frame();
            let anchor: Point = a0.into_iter().chain(b0).collect();
            let edges = ae.iter().map(lift_a).chain(be.iter().map(lift_b)).collect();
            return vec![Cell::parallelotope(anchor, edges)];
        }
        let (_, ae) = self.frame();
        let (_, be) = other.frame();
        let frame: Vec<Point> = ae.iter().map(lift_a).chain(be.iter().map(lift_b)).collect();
        let mut out = Vec::new();
        for (sa, ga) in self.triangulate() {
            for (sb, gb) in other.triangulate() {
                let (Cell::Simplex(va), Cell::Simplex(vb)) = (&sa, &sb) else { unreachable!() };
                for path in lattice_paths(va.len() - 1, vb.len() - 1) {
                    let pts: Vec<Point> =
                        path.iter().map(|&(i, j)| va[i].iter().chain(vb[j].iter()).cloned().collect()).collect();
                    let es: Vec<Point> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
                    let d = linalg::det(linalg::cross_gram(&es, &frame));
                    let orient: i8 = if d.is_negative() { -1 } else { 1 };
                    let (c, s) = Cell::simplex(pts);
                    out.push((c, s * orient * ga * gb));
                }
            }
        }
        out
    }

    /// Prepends a fixed time coordinate to every vertex.
    pub fn embed_at_time(&self, t: &Rational) -> Cell {
        let f = |p: &Point| -> Point { std::iter::once(t.clone()).chain(p.iter().cloned()).collect() };
        self.map_points(&f).0
    }

    /// Drops coordinate 0. The result may be degenerate, in which case it
    /// carries no k-dimensional measure.
    pub fn drop_time(&self) -> (Cell, i8) {
        let f = |p: &Point| -> Point { p[1..].to_vec() };
        self.map_points(&f)
    }
}

/// Monotone lattice paths from (0,0) to (p,q) as vertex index sequences.
pub(crate) fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(i: usize, j: usize, p: usize, q: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == p && j == q {
            out.push(cur.clone());
            return;
        }
        if i < p {
            cur.push((i + 1, j));
            rec(i + 1, j, p, q, cur, out);
            cur.pop();
        }
        if j < q {
            cur.push((i, j + 1));
            rec(i, j + 1, p, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, 0, p, q, &mut vec![(0, 0)], &mut out);
    out
}

/// Point from integer coordinates.
pub fn ipoint(c: &[i64]) -> Point {
    c.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use std::collections::HashMap;

    fn boundary_of(cells: &[(Cell, i8)]) -> HashMap<Cell, i64> {
        let mut acc: HashMap<Cell, i64> = HashMap::new();
        for (c, s) in cells {
            for (f, t) in c.faces() {
                *acc.entry(f).or_default() += (*s as i64) * (t as i64);
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    #[test]
    fn square_faces_orient_counterclockwise() {
        let (sq, s) = Cell::axis_box(ipoint(&[0, 0]), &[(0, int(1)), (1, int(1))]);
        assert_eq!(s, 1);
        let faces = sq.faces();
        // bottom edge runs +x, right edge +y, top edge -x, left edge -y
        let find = |a: &[i64], b: &[i64]| faces.iter().find(|(c, _)| *c == Cell::simplex(vec![ipoint(a), ipoint(b)]).0).unwrap().1;
        assert_eq!(find(&[0, 0], &[1, 0]), 1);
        assert_eq!(find(&[1, 0], &[1, 1]), 1);
        assert_eq!(find(&[0, 1], &[1, 1]), -1);
        assert_eq!(find(&[0, 0], &[0, 1]), -1);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let (cube, _) = Cell::axis_box(ipoint(&[0, 0, 0]), &[(0, int(1)), (1, int(2)), (2, rat(1, 2))]);
        let b = boundary_of(&[(cube.clone(), 1)]);
        let bb = boundary_of(&b.iter().map(|(c, &v)| (c.clone(), v as i8)).collect::<Vec<_>>());
        assert!(bb.is_empty());
        let (tet, _) = Cell::simplex(vec![ipoint(&[0, 0, 0]), ipoint(&[1, 0, 0]), ipoint(&[0, 1, 0]), ipoint(&[0, 0, 1])]);
        let b = boundary_of(&[(tet, 1)]);
        let bb = boundary_of(&b.iter().map(|(c, &v)| (c.clone(), v as i8)).collect::<Vec<_>>());
        assert!(bb.is_empty());
    }

    #[test]
    fn triangulation_has_same_boundary() {
        let (sq, _) = Cell::parallelotope(ipoint(&[0, 0]), vec![ipoint(&[2, 1]), ipoint(&[0, 1])]);
        let tri = sq.triangulate();
        assert_eq!(boundary_of(&[(sq.clone(), 1)]), boundary_of(&tri));
        let total: Rational = tri.iter().map(|(c, _)| c.volume().exact.unwrap()).sum();
        assert_eq!(total, sq.volume().exact.unwrap());
    }

    #[test]
    fn reversed_edge_flips_sign() {
        let (a, s1) = Cell::parallelotope(ipoint(&[1, 0]), vec![ipoint(&[-1, 0]), ipoint(&[0, 1])]);
        let (b, s2) = Cell::axis_box(ipoint(&[0, 0]), &[(0, int(1)), (1, int(1))]);
        assert_eq!(a, b);
        assert_eq!(s1, -s2);
        let (_, s3) = Cell::parallelotope(ipoint(&[0, 0]), vec![ipoint(&[0, 1]), ipoint(&[1, 0])]);
        assert_eq!(s3, -1);
    }

    #[test]
    fn simplex_product_matches_box_boundary() {
        let (tri, _) = Cell::simplex(vec![ipoint(&[0, 0]), ipoint(&[1, 0]), ipoint(&[0, 1])]);
        let (seg, _) = Cell::simplex(vec![ipoint(&[0]), ipoint(&[1])]);
        let prism = tri.product(&seg);
        assert_eq!(prism.len(), 3);
        let vol: Rational = prism.iter().map(|(c, _)| c.volume().exact.unwrap()).sum();
        assert_eq!(vol, rat(1, 2));
        // boundary of the prism = (boundary tri) x seg +- tri x endpoints
        let b = boundary_of(&prism);
        let mut expect: Vec<(Cell, i8)> = Vec::new();
        for (f, s) in tri.faces() {
            for (c, t) in f.product(&seg) {
                // the prism splits its side walls into triangles
                for (piece, u) in c.triangulate() {
                    expect.push((piece, s * t * u));
                }
            }
        }
        let tri_at = |x: i64| -> Vec<(Cell, i8)> {
            tri.product(&Cell::Simplex(vec![ipoint(&[x])]))
        };
        let mut want: HashMap<Cell, i64> = HashMap::new();
        for (c, s) in expect {
            *want.entry(c).or_default() += s as i64;
        }
        // d(A x B) = dA x B + (-1)^a A x dB with a = 2
        for (c, s) in tri_at(1) {
            *want.entry(c).or_default() += s as i64;
        }
        for (c, s) in tri_at(0) {
            *want.entry(c).or_default() -= s as i64;
        }
        want.retain(|_, v| *v != 0);
        assert_eq!(b, want);
    }
}
