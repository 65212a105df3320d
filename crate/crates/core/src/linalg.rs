//! Real subspace arithmetic used for ranks and distributions.

use faer::Mat;
use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold for numerical rank.
pub const TOL_RANK: f64 = 1e-9;

fn threshold(singular: &[f64]) -> f64 {
    let smax = singular.iter().cloned().fold(0.0, f64::max);
    let scale = if smax > TOL_RANK { smax } else { 1.0 };
    TOL_RANK * scale
}

/// Singular values (descending) with their left singular vectors.
pub fn left_singular(m: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let (r, c) = m.shape();
    if r.min(c) == 0 {
        return (vec![], vec![]);
    }
    let mat = Mat::<f64>::from_fn(r, c, |i, j| m[(i, j)]);
    let svd = mat.thin_svd().expect("SVD converges");
    let (u, s) = (svd.U(), svd.S());
    let k = r.min(c);
    let values = (0..k).map(|i| s[i]).collect();
    let left = (0..k).map(|i| DVector::from_fn(r, |row, _| u[(row, i)])).collect();
    (values, left)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    left_singular(m).0
}

/// Number of singular values above `TOL_RANK * max(sigma_max, 1 if all tiny)`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = singular_values(m);
    let thr = threshold(&sv);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let (values, left) = left_singular(m);
    let thr = threshold(&values);
    let cols: Vec<DVector<f64>> = values.iter().zip(left).filter(|(s, _)| **s > thr).map(|(_, u)| u).collect();
    if cols.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of `span(U) + span(V)`.
pub fn subspace_sum(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let mut stacked = DMatrix::zeros(u.nrows(), u.ncols() + v.ncols());
    stacked.columns_mut(0, u.ncols()).copy_from(u);
    stacked.columns_mut(u.ncols(), v.ncols()).copy_from(v);
    column_space(&stacked)
}

/// Orthonormal basis of `span(U) ∩ span(V)` for orthonormal `U`, `V`.
///
/// The dimension is `dim U + dim V - dim(U + V)`; the basis is formed from the
/// principal vectors of `U^T V` with the largest cosines.
pub fn subspace_intersection(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let sum_dim = subspace_sum(u, v).ncols();
    let dim = (u.ncols() + v.ncols()).saturating_sub(sum_dim);
    if dim == 0 {
        return DMatrix::zeros(u.nrows(), 0);
    }
    let cross = u.transpose() * v;
    let (_, left) = left_singular(&cross);
    let cols: Vec<DVector<f64>> = left.iter().take(dim).map(|l| u * l).collect();
    DMatrix::from_columns(&cols)
}

/// Component of `x` orthogonal to the span of the orthonormal columns of `basis`.
pub fn orthogonal_residual(basis: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    if basis.ncols() == 0 {
        return x.clone();
    }
    x - basis * (basis.transpose() * x)
}
