//! Hermitian operators on `C^n`, the spectral oracle, orthogonal (generalized
//! Gell-Mann) bases of `u*(n)` with their structure constants, and the linear
//! coordinate chart `y^mu(A) = Tr(lambda_mu A) / 2`.

mod basis;
mod dual;
mod spectral;

pub use basis::{gellmann_basis, qutrit_table, structure_constants, OrthogonalBasis, StructureConstants};
pub use dual::{from_dual, to_dual, DualVector};
pub use spectral::{spectral_oracle, EigenPair, Spectrum};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hermiticity tolerance, applied after scaling by the largest entry modulus.
pub const TOL_HERM: f64 = 1e-10;
/// Default numerical tolerance for identities and round trips.
pub const TOL_NUM: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Largest deviation `|a_ij - conj(a_ji)|` divided by the largest entry modulus.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev / scale
}

/// A self-adjoint `n x n` complex matrix. The stored matrix is exactly
/// Hermitian: inputs within [`TOL_HERM`] are symmetrized on construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianWire", into = "HermitianWire")]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidDimension(0, 1));
        }
        let dev = hermitian_deviation(&mat);
        if !(dev <= TOL_HERM) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::symmetrized(mat))
    }

    /// `(m + m^dagger) / 2`, for matrices Hermitian by construction up to rounding.
    pub(crate) fn symmetrized(mat: CMatrix) -> Self {
        let adj = mat.adjoint();
        Self { mat: (mat + adj).unscale(2.0) }
    }

    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: im.len() });
        }
        for row in re.iter().chain(im.iter()) {
            if row.len() != n {
                return Err(Error::NotSquare(n, row.len()));
            }
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: CMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { mat: CMatrix::zeros(n, n) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            mat: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// The rank-one operator `|v><v|` (not normalized).
    pub fn outer(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: self.mat.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { mat: &self.mat + &other.mat }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { mat: &self.mat - &other.mat }
    }

    /// Associative product `AB` (generally not Hermitian).
    pub fn product(&self, other: &Self) -> CMatrix {
        &self.mat * &other.mat
    }

    /// `[A, B]_- / i`, the Hermitian form of the commutator.
    pub fn lie(&self, other: &Self) -> Self {
        let comm = self.product(other) - other.product(self);
        Self::symmetrized(comm * (-I))
    }

    /// Jordan bracket `[A, B]_+ = AB + BA`.
    pub fn jordan(&self, other: &Self) -> Self {
        Self::symmetrized(self.product(other) + other.product(self))
    }

    /// `<A, B> = Tr(AB) / 2`.
    pub fn inner(&self, other: &Self) -> f64 {
        0.5 * trace_product(&self.mat, &other.mat).re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Operator 2-norm (largest eigenvalue modulus).
    pub fn spectral_norm(&self) -> f64 {
        let spec = spectral_oracle(self);
        spec.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `T A T^dagger` for an arbitrary square `T`.
    pub fn congruence(&self, t: &CMatrix) -> Result<Self> {
        self.check_square(t)?;
        Ok(Self::symmetrized(t * &self.mat * t.adjoint()))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.mat * v
    }

    /// `<v, A v>`, real for Hermitian `A`.
    pub fn expectation_unnormalized(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.mat * v)).re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }

    fn check_square(&self, t: &CMatrix) -> Result<()> {
        if t.nrows() != t.ncols() {
            return Err(Error::NotSquare(t.nrows(), t.ncols()));
        }
        self.check_dim(t.nrows())
    }
}

#[derive(Serialize, Deserialize)]
struct HermitianWire {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<HermitianWire> for HermitianOperator {
    type Error = Error;

    fn try_from(w: HermitianWire) -> Result<Self> {
        if w.re.len() != w.dim {
            return Err(Error::DimensionMismatch { expected: w.dim, found: w.re.len() });
        }
        HermitianOperator::from_parts(&w.re, &w.im)
    }
}

impl From<HermitianOperator> for HermitianWire {
    fn from(h: HermitianOperator) -> Self {
        let n = h.dim();
        let m = h.matrix();
        HermitianWire {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
        let m = CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotSquare(1, 2))));
    }

    #[test]
    fn symmetrizes_small_deviations() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 1e-14), c(0.5, 0.25), c(0.5, -0.25 + 1e-13), c(2.0, 0.0)]);
        let h = HermitianOperator::new(m).unwrap();
        assert_eq!(h.matrix()[(0, 0)].im, 0.0);
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());
    }

    #[test]
    fn lie_and_jordan_brackets() {
        let a = HermitianOperator::diagonal(&[1.0, -1.0]);
        let b = HermitianOperator::from_parts(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[vec![0.0; 2], vec![0.0; 2]]).unwrap();
        // [diag(1,-1), X] = 2 [[0,1],[-1,0]]; divided by i gives [[0,-2i],[2i,0]]
        let l = a.lie(&b);
        assert!((l.matrix()[(0, 1)] - c(0.0, -2.0)).norm() < 1e-15);
        assert!(a.jordan(&b).frobenius_norm() < 1e-15);
        assert_eq!(a.jordan(&HermitianOperator::identity(2)), a.scale(2.0));
    }

    #[test]
    fn json_shape() {
        let h = HermitianOperator::from_parts(&[vec![0.5, 0.0], vec![0.0, 0.5]], &[vec![0.0, 0.25], vec![-0.25, 0.0]]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&h).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["im"][0][1], 0.25);
        let back: HermitianOperator = serde_json::from_value(v).unwrap();
        assert_eq!(back, h);
        let bad = r#"{"dim": 2, "re": [[1, 2], [0, 1]], "im": [[0, 0], [0, 0]]}"#;
        assert!(serde_json::from_str::<HermitianOperator>(bad).is_err());
    }
}
