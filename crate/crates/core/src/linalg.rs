//! Small dense complex linear algebra: nalgebra storage, faer decompositions.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// `e^{2πi·frac}`.
pub fn circle(frac: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * frac)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD converges")
}

fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Largest singular value (operator norm); 0 for empty matrices.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

pub fn rank(m: &CMat, tol: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > tol).count()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vec<C64>], nrows: usize) -> CMat {
    CMat::from_fn(nrows, cols.len(), |i, j| cols[j][i])
}

/// Orthonormal basis (as columns) of `{v : m v = 0}`, using singular values
/// below `tol` as zero.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let svd = to_faer(m).svd().expect("SVD converges");
    let (sv, v) = (svd.S().column_vector(), svd.V());
    let cols: Vec<usize> = (0..n).filter(|&i| i >= sv.nrows() || sv[i].re <= tol).collect();
    CMat::from_fn(n, cols.len(), |j, k| v[(j, cols[k])])
}

/// Whether every column of `a` lies in the column span of `b`.
pub fn span_contains(b: &CMat, a: &CMat, tol: f64) -> bool {
    if a.ncols() == 0 {
        return true;
    }
    let joined = CMat::from_fn(b.nrows(), b.ncols() + a.ncols(), |i, j| {
        if j < b.ncols() {
            b[(i, j)]
        } else {
            a[(i, j - b.ncols())]
        }
    });
    rank(&joined, tol) == rank(b, tol)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// corresponding eigenvectors as columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("Hermitian eigen-decomposition converges");
    let (s, u) = (eig.S().column_vector(), eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
    let vals = order.iter().map(|&i| s[i].re).collect();
    let vecs = CMat::from_fn(n, n, |r, c| u[(r, order[c])]);
    (vals, vecs)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn vec_max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
