use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{trace_product, CMatrix, HermitianOperator, OrthogonalBasis};
use crate::error::{Error, Result};

/// Coordinates `y^mu` of a point of `u*(n)` in an orthogonal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DualWire")]
pub struct DualVector {
    pub dim: usize,
    pub y: Vec<f64>,
}

#[derive(Deserialize)]
struct DualWire {
    dim: usize,
    y: Vec<f64>,
}

impl TryFrom<DualWire> for DualVector {
    type Error = Error;

    fn try_from(w: DualWire) -> Result<Self> {
        DualVector::new(w.dim, w.y)
    }
}

impl DualVector {
    pub fn new(dim: usize, y: Vec<f64>) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim, 1));
        }
        if y.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: y.len() });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Self { dim, y })
    }

    /// Squared length of the traceless part, `sum_{r >= 1} (y^r)^2`.
    pub fn traceless_norm_sq(&self) -> f64 {
        self.y[1..].iter().map(|v| v * v).sum()
    }
}

/// `y^mu = Tr(lambda_mu A) / 2`.
pub fn to_dual(a: &HermitianOperator, basis: &OrthogonalBasis) -> Result<DualVector> {
    a.check_dim(basis.dim())?;
    let y = basis
        .elements()
        .iter()
        .map(|l| 0.5 * trace_product(l.matrix(), a.matrix()).re)
        .collect();
    Ok(DualVector { dim: basis.dim(), y })
}

/// `A = sum_mu y^mu lambda_mu`.
pub fn from_dual(y: &DualVector, basis: &OrthogonalBasis) -> Result<HermitianOperator> {
    let n = basis.dim();
    if y.dim != n || y.y.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n, found: y.dim });
    }
    let mut acc = CMatrix::zeros(n, n);
    for (coef, l) in y.y.iter().zip(basis.elements()) {
        acc += l.matrix() * Complex64::new(*coef, 0.0);
    }
    Ok(HermitianOperator::symmetrized(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::gellmann_basis;
    use crate::sampling::{random_hermitian, rng};
    use proptest::prelude::*;

    #[test]
    fn identity_coordinates() {
        let b = gellmann_basis(2).unwrap();
        let y = to_dual(&HermitianOperator::identity(2), &b).unwrap();
        assert_eq!(y.y, vec![1.0, 0.0, 0.0, 0.0]);
        let back = from_dual(&DualVector::new(2, vec![1.0, 0.0, 0.0, 0.0]).unwrap(), &b).unwrap();
        assert_eq!(back, HermitianOperator::identity(2));
    }

    #[test]
    fn qubit_parametrized_state() {
        // [[1/2 + y3, y2 + i y1], [y2 - i y1, 1/2 - y3]]
        let (y1, y2, y3) = (0.1, -0.2, 0.15);
        let rho = HermitianOperator::from_parts(
            &[vec![0.5 + y3, y2], vec![y2, 0.5 - y3]],
            &[vec![0.0, y1], vec![-y1, 0.0]],
        )
        .unwrap();
        let y = to_dual(&rho, &gellmann_basis(2).unwrap()).unwrap();
        for (got, want) in y.y.iter().zip([0.5, y1, y2, y3]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn pole_is_pure_projector() {
        let b = gellmann_basis(2).unwrap();
        let a = from_dual(&DualVector::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap(), &b).unwrap();
        assert!(a.max_abs_diff(&HermitianOperator::diagonal(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn qutrit_reconstruction() {
        let b = gellmann_basis(3).unwrap();
        let mut r = rng(11);
        for _ in 0..20 {
            let a = random_hermitian(3, &mut r);
            let y = to_dual(&a, &b).unwrap();
            // direct matrix sum y^0 l_0 + y^r l_r
            let mut sum = CMatrix::zeros(3, 3);
            for mu in 0..9 {
                sum += b.element(mu).matrix().scale(y.y[mu]);
            }
            assert!((sum - a.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn mismatched_dimensions() {
        let b = gellmann_basis(3).unwrap();
        assert!(to_dual(&HermitianOperator::identity(2), &b).is_err());
        assert!(from_dual(&DualVector::new(2, vec![0.0; 4]).unwrap(), &b).is_err());
        assert!(DualVector::new(2, vec![0.0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 2usize..6, seed in any::<u64>()) {
            let b = gellmann_basis(n).unwrap();
            let mut r = rng(seed);
            let y: Vec<f64> = (0..n * n).map(|_| rand::Rng::gen_range(&mut r, -1.0..1.0)).collect();
            let dv = DualVector::new(n, y.clone()).unwrap();
            let back = to_dual(&from_dual(&dv, &b).unwrap(), &b).unwrap();
            for (u, v) in back.y.iter().zip(&y) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }
}
