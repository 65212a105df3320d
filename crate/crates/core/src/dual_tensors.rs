//! The Poisson tensor `Lambda` and the Riemann-Jordan tensor `R` on `u*(n)`,
//! the endomorphisms `J~` and `R` they induce, and the distributions
//! `D_Lambda`, `D_R`, `D_0 = D_R ∩ D_Lambda`, `D_1 = D_R + D_Lambda`.
//!
//! Tensors are written in the coordinate differentials `dy^mu` of the
//! generalized Gell-Mann basis:
//!
//! `Lambda(xi)_{mu nu} = Tr(xi [l_mu, l_nu]) / 2i`, `R(xi)_{mu nu} = Tr(xi [l_mu, l_nu]_+) / 2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{
    from_dual, gellmann_basis, to_dual, trace_product, DualVector, HermitianOperator, OrthogonalBasis,
    StructureConstants,
};
use crate::kaehler::{star_product, RealifiedState};
use crate::linalg::{column_space, numerical_rank, subspace_intersection, subspace_sum};

/// Constant `k` in `(G + i Omega)(df_A, df_B)(psi) = k (R + i Lambda)(A^, B^)(|psi><psi|)`.
/// Calibrated on the qubit (see [`calibrate_pairing_scale`]) and reused for every `n`.
pub const PAIRING_SCALE: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TensorKind {
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "R")]
    RiemannJordan,
}

/// A contravariant 2-tensor on `u*(n)` evaluated at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorAtPoint {
    pub point: DualVector,
    pub kind: TensorKind,
    pub matrix: DMatrix<f64>,
}

impl TensorAtPoint {
    pub fn rank(&self) -> usize {
        numerical_rank(&self.matrix)
    }

    /// `T(a, b) = a^T M b` for covectors given by coordinates.
    pub fn evaluate(&self, a: &[f64], b: &[f64]) -> f64 {
        let (a, b) = (DVector::from_column_slice(a), DVector::from_column_slice(b));
        (a.transpose() * &self.matrix * b)[(0, 0)]
    }

    fn matrix_rows(&self) -> Vec<Vec<f64>> {
        (0..self.matrix.nrows()).map(|i| self.matrix.row(i).iter().copied().collect()).collect()
    }
}

impl Serialize for TensorAtPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TensorAtPoint", 3)?;
        st.serialize_field("y", &self.point.y)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("matrix", &self.matrix_rows())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TensorAtPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            y: Vec<f64>,
            kind: TensorKind,
            matrix: Vec<Vec<f64>>,
        }
        let w = Wire::deserialize(d)?;
        let m = w.y.len();
        let n = (m as f64).sqrt().round() as usize;
        let point = DualVector::new(n, w.y).map_err(serde::de::Error::custom)?;
        if w.matrix.len() != m || w.matrix.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("tensor matrix must be n^2 x n^2"));
        }
        let matrix = DMatrix::from_fn(m, m, |i, j| w.matrix[i][j]);
        Ok(TensorAtPoint { point, kind: w.kind, matrix })
    }
}

fn basis_for(xi: &DualVector) -> Result<OrthogonalBasis> {
    gellmann_basis(xi.dim)
}

fn bracket_tensor(xi: &DualVector, kind: TensorKind) -> Result<TensorAtPoint> {
    let basis = basis_for(xi)?;
    let point = from_dual(xi, &basis)?;
    let m = basis.len();
    let mut matrix = DMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in mu..m {
            let p = basis.element(mu).product(basis.element(nu));
            let q = basis.element(nu).product(basis.element(mu));
            match kind {
                TensorKind::Lambda => {
                    let v = (trace_product(point.matrix(), &(p - q)) / Complex64::new(0.0, 2.0)).re;
                    matrix[(mu, nu)] = v;
                    matrix[(nu, mu)] = -v;
                }
                TensorKind::RiemannJordan => {
                    let v = 0.5 * trace_product(point.matrix(), &(p + q)).re;
                    matrix[(mu, nu)] = v;
                    matrix[(nu, mu)] = v;
                }
            }
        }
    }
    Ok(TensorAtPoint { point: xi.clone(), kind, matrix })
}

/// The Poisson tensor at `xi`.
pub fn lambda_at(xi: &DualVector) -> Result<TensorAtPoint> {
    bracket_tensor(xi, TensorKind::Lambda)
}

/// The Riemann-Jordan tensor at `xi`.
pub fn riemann_jordan_at(xi: &DualVector) -> Result<TensorAtPoint> {
    bracket_tensor(xi, TensorKind::RiemannJordan)
}

/// `Lambda_{mu nu} = 2 C_{mu nu rho} y^rho`.
pub fn lambda_from_constants(xi: &DualVector, sc: &StructureConstants) -> Result<DMatrix<f64>> {
    check_constants(xi, sc)?;
    let m = xi.y.len();
    Ok(DMatrix::from_fn(m, m, |mu, nu| (0..m).map(|rho| 2.0 * sc.c(mu, nu, rho) * xi.y[rho]).sum()))
}

/// `R_{mu nu} = 2 sqrt(2/n) delta_{mu nu} y^0 + 2 d_{mu nu rho} y^rho`.
pub fn riemann_jordan_from_constants(xi: &DualVector, sc: &StructureConstants) -> Result<DMatrix<f64>> {
    check_constants(xi, sc)?;
    let m = xi.y.len();
    let id = sc.identity_term();
    Ok(DMatrix::from_fn(m, m, |mu, nu| {
        let diag = if mu == nu { 2.0 * id * xi.y[0] } else { 0.0 };
        diag + (0..m).map(|rho| 2.0 * sc.d(mu, nu, rho) * xi.y[rho]).sum::<f64>()
    }))
}

fn check_constants(xi: &DualVector, sc: &StructureConstants) -> Result<()> {
    if sc.dim() != xi.dim {
        return Err(Error::DimensionMismatch { expected: sc.dim(), found: xi.dim });
    }
    Ok(())
}

/// `J~_xi(X_A) = [A, xi]_- / i`.
pub fn jtilde_endo(xi: &HermitianOperator, a: &HermitianOperator) -> Result<HermitianOperator> {
    a.check_dim(xi.dim())?;
    Ok(a.lie(xi))
}

/// `R_xi(X_A) = [A, xi]_+`.
pub fn r_endo(xi: &HermitianOperator, a: &HermitianOperator) -> Result<HermitianOperator> {
    a.check_dim(xi.dim())?;
    Ok(a.jordan(xi))
}

/// Subspaces of tangent directions at a point of `u*(n)`, each with an
/// orthonormal basis in y-coordinates.
#[derive(Clone, Debug)]
pub struct DistributionReport {
    pub point: DualVector,
    pub lambda: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub d0: DMatrix<f64>,
    pub d1: DMatrix<f64>,
    /// Dimension of `span{ [A, xi^2] / i }`, the second route to `D_0`.
    pub d0_commutator_dim: usize,
}

impl DistributionReport {
    /// `(dim D_Lambda, dim D_R, dim D_0, dim D_1)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.lambda.ncols(), self.r.ncols(), self.d0.ncols(), self.d1.ncols())
    }

    /// Basis operators of a subspace.
    pub fn operators(&self, space: &DMatrix<f64>) -> Result<Vec<HermitianOperator>> {
        let basis = basis_for(&self.point)?;
        (0..space.ncols())
            .map(|k| from_dual(&DualVector::new(self.point.dim, space.column(k).iter().copied().collect())?, &basis))
            .collect()
    }
}

impl Serialize for DistributionReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dims {
            lambda: usize,
            r: usize,
            d0: usize,
            d1: usize,
            d0_commutator: usize,
        }
        #[derive(Serialize)]
        struct Bases {
            lambda: Vec<Vec<f64>>,
            r: Vec<Vec<f64>>,
            d0: Vec<Vec<f64>>,
            d1: Vec<Vec<f64>>,
        }
        let cols = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.ncols()).map(|k| m.column(k).iter().copied().collect()).collect()
        };
        let (l, r, d0, d1) = self.dims();
        let mut st = s.serialize_struct("DistributionReport", 3)?;
        st.serialize_field("y", &self.point.y)?;
        st.serialize_field(
            "dims",
            &Dims { lambda: l, r, d0, d1, d0_commutator: self.d0_commutator_dim },
        )?;
        st.serialize_field(
            "bases",
            &Bases { lambda: cols(&self.lambda), r: cols(&self.r), d0: cols(&self.d0), d1: cols(&self.d1) },
        )?;
        st.end()
    }
}

/// Columns are the y-coordinates of `f(l_mu)` for every basis element.
fn image_matrix<F>(basis: &OrthogonalBasis, f: F) -> Result<DMatrix<f64>>
where
    F: Fn(&HermitianOperator) -> Result<HermitianOperator>,
{
    let m = basis.len();
    let mut out = DMatrix::zeros(m, m);
    for (mu, l) in basis.elements().iter().enumerate() {
        let y = to_dual(&f(l)?, basis)?;
        out.column_mut(mu).copy_from_slice(&y.y);
    }
    Ok(out)
}

pub fn distributions_at(xi: &DualVector) -> Result<DistributionReport> {
    let basis = basis_for(xi)?;
    let point = from_dual(xi, &basis)?;
    let square = HermitianOperator::new(point.product(&point))?;
    let lambda = column_space(&image_matrix(&basis, |a| jtilde_endo(&point, a))?);
    let r = column_space(&image_matrix(&basis, |a| r_endo(&point, a))?);
    let d0 = subspace_intersection(&lambda, &r);
    let d1 = subspace_sum(&lambda, &r);
    let d0_commutator_dim = numerical_rank(&image_matrix(&basis, |a| jtilde_endo(&square, a))?);
    Ok(DistributionReport { point: xi.clone(), lambda, r, d0, d1, d0_commutator_dim })
}

/// Both sides of `(G + i Omega)(df_A, df_B) = mu_*(R + i Lambda)(A^, B^)` at
/// `psi`, the right side evaluated at `xi = |psi><psi|` through the tensor
/// matrices and scaled by [`PAIRING_SCALE`].
pub fn pushforward_check(
    psi: &RealifiedState,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<(Complex64, Complex64)> {
    if psi.is_zero() {
        return Err(Error::ZeroVector);
    }
    let lhs = star_product(a, b, psi)?;
    let rhs = tensor_side(psi, a, b)?;
    Ok((lhs, rhs * PAIRING_SCALE))
}

fn tensor_side(psi: &RealifiedState, a: &HermitianOperator, b: &HermitianOperator) -> Result<Complex64> {
    let basis = gellmann_basis(psi.dim())?;
    let xi = to_dual(&HermitianOperator::outer(&psi.to_complex()), &basis)?;
    let (ya, yb) = (to_dual(a, &basis)?, to_dual(b, &basis)?);
    let re = riemann_jordan_at(&xi)?.evaluate(&ya.y, &yb.y);
    let im = lambda_at(&xi)?.evaluate(&ya.y, &yb.y);
    Ok(Complex64::new(re, im))
}

/// Ratio of the two sides of the pushforward identity for the qubit with
/// `psi = e_1`, `A = B = I`, where both are explicit.
pub fn calibrate_pairing_scale() -> Result<f64> {
    let psi = RealifiedState::basis_vector(2, 0);
    let id = HermitianOperator::identity(2);
    let lhs = star_product(&id, &id, &psi)?;
    let rhs = tensor_side(&psi, &id, &id)?;
    Ok(lhs.re / rhs.re)
}
