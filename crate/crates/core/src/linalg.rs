//! Small dense linear algebra over [`Scalar`], enough for Gram determinants
//! and tangent-space projections of individual cells.

use crate::rational::Scalar;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Determinant by Gaussian elimination with pivot search.
pub fn det<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    if n == 0 {
        return S::one();
    }
    let mut sign = S::one();
    let mut acc = S::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero_tol());
        let Some(p) = pivot else {
            return S::zero();
        };
        if p != col {
            m.swap(p, col);
            sign = -sign;
        }
        let pv = m[col][col].clone();
        acc = acc * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero_tol() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[col][c].clone();
                m[r][c] = m[r][c].clone() - f.clone() * v;
            }
        }
    }
    sign * acc
}

/// Gram matrix `G_ij = v_i . v_j`.
pub fn gram<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<S>> {
    vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Cross Gram matrix `G_ij = u_i . w_j`; its determinant is the inner product
/// of the multivectors `u_1 ^ ... ^ u_k` and `w_1 ^ ... ^ w_k`.
pub fn cross_gram<S: Scalar>(us: &[Vec<S>], ws: &[Vec<S>]) -> Vec<Vec<S>> {
    us.iter().map(|a| ws.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Solves `m x = rhs` for a square nonsingular `m`.
pub fn solve<S: Scalar>(mut m: Vec<Vec<S>>, mut rhs: Vec<S>) -> Option<Vec<S>> {
    let n = m.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero_tol())?;
        m.swap(p, col);
        rhs.swap(p, col);
        let pv = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero_tol() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[col][c].clone();
                m[r][c] = m[r][c].clone() - f.clone() * v;
            }
            let v = rhs[col].clone();
            rhs[r] = rhs[r].clone() - f * v;
        }
    }
    Some((0..n).map(|i| rhs[i].clone() / m[i][i].clone()).collect())
}

/// Determinant of the `k x k` minor of the `n x k` column matrix `cols`
/// (given as `k` vectors of length `n`) restricted to `rows`.
pub fn minor<S: Scalar>(cols: &[Vec<S>], rows: &[usize]) -> S {
    let m: Vec<Vec<S>> = rows.iter().map(|&r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Rational};

    #[test]
    fn det_and_solve_exact() {
        let m: Vec<Vec<Rational>> = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(det(m.clone()), int(5));
        let x = solve(m, vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn singular_matrix() {
        let m: Vec<Vec<Rational>> = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(det(m.clone()), int(0));
        assert!(solve(m, vec![int(1), int(1)]).is_none());
    }
}
