//! Small dense helpers shared by the geometric modules.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative singular-value cutoff used for ranks and null spaces.
pub const RANK_TOL: f64 = 1e-9;

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(libm::fabs(*v)))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(libm::fabs(*x)))
}

/// One-sided Jacobi factorization `a·V = W` with `V` orthogonal and the
/// columns of `W` mutually orthogonal. Column norms of `W` are the singular
/// values, one per column of `a` (zeros included).
///
/// nalgebra's bidiagonal SVD returns inaccurate factors on some of the
/// frame matrices built here, hence the hand-rolled routine.
fn jacobi(a: &Matrix) -> (Matrix, Matrix) {
    const SWEEPS: usize = 80;
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = Matrix::identity(n, n);
    for _ in 0..SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || libm::fabs(gamma) <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

fn rotate(m: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    for k in 0..m.nrows() {
        let (x, y) = (m[(k, i)], m[(k, j)]);
        m[(k, i)] = c * x - s * y;
        m[(k, j)] = s * x + c * y;
    }
}

/// `a` or its transpose, whichever has at least as many rows as columns.
fn tall(a: &Matrix) -> Matrix {
    if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    }
}

fn column_norms(w: &Matrix) -> Vector {
    Vector::from_iterator(w.ncols(), w.column_iter().map(|c| c.norm()))
}

/// Singular values in descending order, `min(rows, cols)` of them.
pub fn singular_values(a: &Matrix) -> Vector {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vector::zeros(0);
    }
    let (w, _) = jacobi(&tall(a));
    let mut s: alloc::vec::Vec<f64> = column_norms(&w).iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Vector::from_vec(s)
}

/// Numerical rank with a relative cutoff.
pub fn rank(a: &Matrix) -> usize {
    let s = singular_values(a);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > RANK_TOL * smax).count()
}

/// Orthonormal basis (columns) of the right null space of `a`.
pub fn null_space(a: &Matrix) -> Matrix {
    let n = a.ncols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    let (w, v) = jacobi(a);
    let s = column_norms(&w);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let cut = if smax == 0.0 { f64::INFINITY } else { RANK_TOL * smax };
    let cols: alloc::vec::Vec<Vector> = (0..n).filter(|&i| s[i] <= cut).map(|i| v.column(i).into_owned()).collect();
    if cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Moore-Penrose pseudo-inverse.
pub fn pinv(a: &Matrix) -> Matrix {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Matrix::zeros(c, r);
    }
    let t = tall(a);
    let (w, v) = jacobi(&t);
    let s = column_norms(&w);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    let mut p = Matrix::zeros(t.ncols(), t.nrows());
    for k in 0..s.len() {
        if s[k] > cut {
            p += v.column(k) * w.column(k).transpose() / w.column(k).norm_squared();
        }
    }
    if r >= c {
        p
    } else {
        p.transpose()
    }
}

/// Solve a square system; `None` if singular.
pub fn solve(a: &Matrix, b: &Vector) -> Option<Vector> {
    a.clone().lu().solve(b)
}

/// Largest principal angle distance between two column spans, measured as
/// the max residual of projecting each basis onto the other span.
pub fn span_mismatch(a: &Matrix, b: &Matrix) -> f64 {
    if a.ncols() != b.ncols() {
        return f64::INFINITY;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let qa = a.clone().qr().q();
    let qb = b.clone().qr().q();
    let ra = b - &qa * (qa.transpose() * b);
    let rb = a - &qb * (qb.transpose() * a);
    max_abs(&ra).max(max_abs(&rb))
}
