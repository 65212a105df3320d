use faer::{Mat, Side};
use num_complex::Complex64;

use super::{CMatrix, CVector, HermitianOperator};

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: CVector,
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues in descending order.
///
/// Within a degenerate eigenspace the eigenvectors are an arbitrary orthonormal
/// basis; callers must not depend on that choice.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
}

impl Spectrum {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.pairs[0].value
    }

    pub fn min(&self) -> f64 {
        self.pairs[self.pairs.len() - 1].value
    }

    /// Columns are the eigenvectors, in the same order as [`Self::values`].
    pub fn eigenvectors(&self) -> CMatrix {
        let cols: Vec<CVector> = self.pairs.iter().map(|p| p.vector.clone()).collect();
        CMatrix::from_columns(&cols)
    }

    /// `sum_i f(lambda_i) v_i v_i^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.pairs[0].vector.len();
        let mut acc = CMatrix::zeros(n, n);
        for p in &self.pairs {
            acc += (&p.vector * p.vector.adjoint()).scale(f(p.value));
        }
        HermitianOperator::symmetrized(acc)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|x| x)
    }
}

/// Independent spectral decomposition used as the reference for every
/// spectral claim (positivity, ranks, eigenvalues found by the flows).
pub fn spectral_oracle(a: &HermitianOperator) -> Spectrum {
    let m = a.matrix();
    let n = m.nrows();
    let mat = Mat::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = mat.self_adjoint_eigen(Side::Lower).expect("Hermitian eigendecomposition converges");
    let (u, s) = (eig.U(), eig.S());
    // faer returns ascending eigenvalues
    let pairs = (0..n)
        .rev()
        .map(|k| EigenPair {
            value: s[k].re,
            vector: CVector::from_fn(n, |i, _| u[(i, k)]),
        })
        .collect();
    Spectrum { pairs }
}
