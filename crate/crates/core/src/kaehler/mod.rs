//! The realified Hilbert space `H_R = R^{2n}` with coordinates
//! `<e_k, psi> = q_k + i p_k`, its Kähler triple, the quadratic functions
//! `f_A(psi) = <psi, A psi> / 2`, their brackets, and the associated vector
//! fields, flows and the critical-point eigensolver.
//!
//! Conventions (coordinates ordered `q_1..q_n, p_1..p_n`):
//!
//! * `J(d/dq) = d/dp`, `J(d/dp) = -d/dq` (multiplication by `i`);
//! * `g = dq.dq + dp.dp`, `omega = dq ^ dp`, so that `<u, v> = g(u, v) + i omega(u, v)`
//!   with the Hermitian product antilinear in its first slot;
//! * contravariant `G = d/dq.d/dq + d/dp.d/dp`, `Omega = d/dq ^ d/dp`.
//!
//! With these choices `g(X, Y) = omega(X, JY)`.

mod eigensolve;
mod flow;

pub use eigensolve::{
    critical_point_eigensolve, EigensolveOptions, EigensolveResult, SolveMode, TracePoint, DEFAULT_MAX_ITER,
    DEFAULT_STEP_REL, TOL_CRIT_REL,
};
pub use flow::{flow_distance_drift, hamiltonian_flow, rk4_flow, FlowSample, DEFAULT_FLOW_STEP};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianOperator};

/// Real coordinates `(q, p)` of a Hilbert-space vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateWire", into = "StateWire")]
pub struct RealifiedState {
    q: Vec<f64>,
    p: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    dim: usize,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl TryFrom<StateWire> for RealifiedState {
    type Error = Error;

    fn try_from(w: StateWire) -> Result<Self> {
        if w.q.len() != w.dim || w.p.len() != w.dim {
            return Err(Error::DimensionMismatch { expected: w.dim, found: w.q.len().max(w.p.len()) });
        }
        RealifiedState::new(w.q, w.p)
    }
}

impl From<RealifiedState> for StateWire {
    fn from(s: RealifiedState) -> Self {
        StateWire { dim: s.dim(), q: s.q, p: s.p }
    }
}

impl RealifiedState {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: q.len(), found: p.len() });
        }
        if q.is_empty() {
            return Err(Error::InvalidDimension(0, 1));
        }
        if q.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Self { q, p })
    }

    pub fn from_complex(psi: &CVector) -> Self {
        Self { q: psi.iter().map(|z| z.re).collect(), p: psi.iter().map(|z| z.im).collect() }
    }

    /// From `2n` components in `(q, p)` order.
    pub fn from_components(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("odd component count {}", x.len())));
        }
        let n = x.len() / 2;
        Self::new(x[..n].to_vec(), x[n..].to_vec())
    }

    /// The basis vector `e_k` (zero-based `k`).
    pub fn basis_vector(n: usize, k: usize) -> Self {
        let mut q = vec![0.0; n];
        q[k] = 1.0;
        Self { q, p: vec![0.0; n] }
    }

    pub fn to_complex(&self) -> CVector {
        CVector::from_iterator(self.dim(), self.q.iter().zip(&self.p).map(|(&a, &b)| Complex64::new(a, b)))
    }

    pub fn components(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn norm(&self) -> f64 {
        self.q.iter().chain(&self.p).map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().chain(&self.p).all(|&v| v == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { q: self.q.iter().map(|v| v * s).collect(), p: self.p.iter().map(|v| v * s).collect() }
    }

    /// The dilation field `Delta` at this point, `psi -> (psi, psi)`.
    pub fn dilation(&self) -> TangentVector {
        TangentVector { base: self.clone(), components: self.components() }
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub(crate) fn check_operator(&self, a: &HermitianOperator) -> Result<()> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        Ok(())
    }
}

/// A tangent vector of `H_R`, components in `(d/dq, d/dp)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub base: RealifiedState,
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: RealifiedState, components: Vec<f64>) -> Result<Self> {
        if components.len() != 2 * base.dim() {
            return Err(Error::DimensionMismatch { expected: 2 * base.dim(), found: components.len() });
        }
        if components.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite tangent component".into()));
        }
        Ok(Self { base, components })
    }

    /// Tangent vector at `base` whose complex reading is `v`.
    pub fn from_complex(base: &RealifiedState, v: &CVector) -> Result<Self> {
        Self::new(base.clone(), RealifiedState::from_complex(v).components())
    }

    pub fn to_complex(&self) -> CVector {
        let n = self.base.dim();
        CVector::from_fn(n, |k, _| Complex64::new(self.components[k], self.components[n + k]))
    }
}

/// The constant-coefficient Kähler structure of `R^{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KaehlerTriple {
    pub dim: usize,
}

impl KaehlerTriple {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    /// Matrix of the (1,1)-tensor `J` acting on component columns.
    pub fn j_matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            m[(n + k, k)] = 1.0;
            m[(k, n + k)] = -1.0;
        }
        m
    }

    /// Gram matrix of `g` (and of the contravariant `G`).
    pub fn g_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(2 * self.dim, 2 * self.dim)
    }

    /// Matrix of `omega = dq ^ dp` (and of the contravariant `Omega = d/dq ^ d/dp`).
    pub fn omega_matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            m[(k, n + k)] = 1.0;
            m[(n + k, k)] = -1.0;
        }
        m
    }

    pub fn apply_j(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; 2 * n];
        for k in 0..n {
            out[k] = -x[n + k];
            out[n + k] = x[k];
        }
        out
    }

    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn omega(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim;
        (0..n).map(|k| x[k] * y[n + k] - x[n + k] * y[k]).sum()
    }

    /// Contravariant metric on covectors.
    pub fn big_g(&self, alpha: &[f64], beta: &[f64]) -> f64 {
        self.g(alpha, beta)
    }

    /// Contravariant Poisson tensor on covectors.
    pub fn big_omega(&self, alpha: &[f64], beta: &[f64]) -> f64 {
        self.omega(alpha, beta)
    }
}

/// `(g(psi1, psi2), omega(psi1, psi2))`, the real and imaginary parts of `<psi1, psi2>`.
pub fn hermitian_split(psi1: &RealifiedState, psi2: &RealifiedState) -> Result<(f64, f64)> {
    psi1.check_same_dim(psi2)?;
    let k = KaehlerTriple::new(psi1.dim());
    let (x, y) = (psi1.components(), psi2.components());
    Ok((k.g(&x, &y), k.omega(&x, &y)))
}

/// `f_A(psi) = <psi, A psi> / 2`.
pub fn quadratic_function(a: &HermitianOperator, psi: &RealifiedState) -> Result<f64> {
    psi.check_operator(a)?;
    Ok(0.5 * a.expectation_unnormalized(&psi.to_complex()))
}

/// Coordinate differential of `f_A` at `psi`: `(Re A psi, Im A psi)`.
pub fn differential(a: &HermitianOperator, psi: &RealifiedState) -> Result<Vec<f64>> {
    psi.check_operator(a)?;
    Ok(RealifiedState::from_complex(&a.apply(&psi.to_complex())).components())
}

/// `{f_A, f_B}_g = G(df_A, df_B)`, equal to `f_{AB+BA}`.
pub fn bracket_g(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedState) -> Result<f64> {
    let (da, db) = (differential(a, psi)?, differential(b, psi)?);
    Ok(KaehlerTriple::new(psi.dim()).big_g(&da, &db))
}

/// `{f_A, f_B}_omega = Omega(df_A, df_B)`, equal to `f_{-i[A,B]}`.
pub fn bracket_omega(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedState) -> Result<f64> {
    let (da, db) = (differential(a, psi)?, differential(b, psi)?);
    Ok(KaehlerTriple::new(psi.dim()).big_omega(&da, &db))
}

/// `f_A * f_B = {f_A, f_B}_g + i {f_A, f_B}_omega`, equal to `2 f_{AB} = <psi, AB psi>`.
pub fn star_product(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedState) -> Result<Complex64> {
    Ok(Complex64::new(bracket_g(a, b, psi)?, bracket_omega(a, b, psi)?))
}

/// Gradient of `f_A`: the vector field `psi -> (psi, A psi)`.
pub fn gradient_vf(a: &HermitianOperator, psi: &RealifiedState) -> Result<TangentVector> {
    psi.check_operator(a)?;
    TangentVector::from_complex(psi, &a.apply(&psi.to_complex()))
}

/// Hamiltonian field of `f_A`: `psi -> (psi, J A psi)`.
pub fn hamiltonian_vf(a: &HermitianOperator, psi: &RealifiedState) -> Result<TangentVector> {
    let grad = gradient_vf(a, psi)?;
    let k = KaehlerTriple::new(psi.dim());
    TangentVector::new(psi.clone(), k.apply_j(&grad.components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::gellmann_basis;
    use crate::sampling::{random_hermitian, random_unit_vector, random_vector, rng};

    fn sigma(k: usize) -> HermitianOperator {
        gellmann_basis(2).unwrap().element(k).clone()
    }

    #[test]
    fn j_squares_to_minus_identity() {
        for n in 1..5 {
            let k = KaehlerTriple::new(n);
            let j = k.j_matrix();
            assert_eq!(&j * &j, -DMatrix::<f64>::identity(2 * n, 2 * n));
        }
    }

    #[test]
    fn triple_compatibility_on_spanning_set() {
        let n = 3;
        let k = KaehlerTriple::new(n);
        let basis: Vec<Vec<f64>> = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for x in &basis {
            for y in &basis {
                let (jx, jy) = (k.apply_j(x), k.apply_j(y));
                assert!((k.g(x, y) - k.omega(x, &jy)).abs() < 1e-12);
                assert!((k.g(&jx, &jy) - k.g(x, y)).abs() < 1e-12);
                assert!((k.omega(&jx, &jy) - k.omega(x, y)).abs() < 1e-12);
                // the opposite slot ordering differs by a sign
                assert!((k.g(x, y) + k.omega(&jx, y)).abs() < 1e-12);
            }
        }
        // matrix forms agree with the bilinear forms
        let j = k.j_matrix();
        let w = k.omega_matrix();
        assert_eq!(k.g_matrix(), &w * &j);
    }

    #[test]
    fn split_matches_complex_product() {
        let mut r = rng(3);
        let e1 = RealifiedState::basis_vector(2, 0);
        assert_eq!(hermitian_split(&e1, &e1).unwrap(), (1.0, 0.0));
        let psi = random_unit_vector(3, &mut r);
        let ipsi = psi.map(|z| z * Complex64::i());
        let (g, w) = hermitian_split(&RealifiedState::from_complex(&psi), &RealifiedState::from_complex(&ipsi)).unwrap();
        assert!(g.abs() < 1e-15 && (w - 1.0).abs() < 1e-15);
        for _ in 0..50 {
            let (u, v) = (random_vector(4, &mut r), random_vector(4, &mut r));
            let z = u.dotc(&v);
            let (g, w) = hermitian_split(&RealifiedState::from_complex(&u), &RealifiedState::from_complex(&v)).unwrap();
            assert!((g - z.re).abs() < 1e-12 && (w - z.im).abs() < 1e-12);
        }
        assert!(hermitian_split(&e1, &RealifiedState::basis_vector(3, 0)).is_err());
    }

    #[test]
    fn quadratic_function_values() {
        let e1 = RealifiedState::basis_vector(2, 0);
        assert_eq!(quadratic_function(&HermitianOperator::identity(2), &e1).unwrap(), 0.5);
        assert_eq!(quadratic_function(&sigma(3), &e1).unwrap(), 0.5);
        let mut r = rng(4);
        let k = KaehlerTriple::new(3);
        for _ in 0..20 {
            let a = random_hermitian(3, &mut r);
            let psi = RealifiedState::from_complex(&random_vector(3, &mut r));
            let f = quadratic_function(&a, &psi).unwrap();
            assert!((quadratic_function(&a, &psi.scale(2.0)).unwrap() - 4.0 * f).abs() < 1e-12 * f.abs().max(1.0));
            let intrinsic = 0.5 * k.g(&psi.dilation().components, &gradient_vf(&a, &psi).unwrap().components);
            assert!((f - intrinsic).abs() < 1e-12);
        }
        assert!(quadratic_function(&HermitianOperator::identity(3), &e1).is_err());
    }

    #[test]
    fn differential_matches_finite_differences() {
        let mut r = rng(5);
        let h = 1e-5;
        for n in [2, 3] {
            let a = random_hermitian(n, &mut r);
            let psi = RealifiedState::from_complex(&random_vector(n, &mut r));
            let d = differential(&a, &psi).unwrap();
            let x = psi.components();
            for i in 0..2 * n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fp = quadratic_function(&a, &RealifiedState::from_components(&xp).unwrap()).unwrap();
                let fm = quadratic_function(&a, &RealifiedState::from_components(&xm).unwrap()).unwrap();
                let fd = (fp - fm) / (2.0 * h);
                assert!((fd - d[i]).abs() <= 1e-6 * d[i].abs().max(1.0), "i={i} fd={fd} d={}", d[i]);
            }
        }
    }

    #[test]
    fn brackets_of_qubit_basis() {
        let id = HermitianOperator::identity(2);
        let mut r = rng(6);
        let psi = RealifiedState::from_complex(&random_vector(2, &mut r));
        assert!(bracket_omega(&id, &id, &psi).unwrap().abs() < 1e-15);
        // -i [s2, s3] computed by matrix arithmetic, then f evaluated at e1
        let (s2, s3) = (sigma(2), sigma(3));
        let comm = s2.product(&s3) - s3.product(&s2);
        let rhs = HermitianOperator::new(comm * Complex64::new(0.0, -1.0)).unwrap();
        let e1 = RealifiedState::basis_vector(2, 0);
        let lhs = bracket_omega(&s2, &s3, &e1).unwrap();
        assert!((lhs - quadratic_function(&rhs, &e1).unwrap()).abs() < 1e-15);
        // -i[s2, s3] = 2 s1 in this basis
        assert!(rhs.max_abs_diff(&sigma(1).scale(2.0)) < 1e-15);
    }

    #[test]
    fn jordan_square_and_star_product() {
        let mut r = rng(8);
        let id = HermitianOperator::identity(3);
        let unit = RealifiedState::from_complex(&random_unit_vector(3, &mut r));
        let s = star_product(&id, &id, &unit).unwrap();
        assert!((s.re - 1.0).abs() < 1e-12 && s.im.abs() < 1e-15);
        for _ in 0..50 {
            let a = random_hermitian(3, &mut r);
            let b = random_hermitian(3, &mut r);
            let v = random_vector(3, &mut r);
            let psi = RealifiedState::from_complex(&v);
            let aa = HermitianOperator::new(a.product(&a)).unwrap();
            let g = bracket_g(&a, &a, &psi).unwrap();
            assert!((g - 2.0 * quadratic_function(&aa, &psi).unwrap()).abs() < 1e-10);
            assert!((g - a.apply(&v).norm_squared()).abs() < 1e-10);
            let star = star_product(&a, &b, &psi).unwrap();
            let oracle = v.dotc(&(a.product(&b) * &v));
            assert!((star - oracle).norm() < 1e-10);
            // commuting pair: polynomial in a
            let c = HermitianOperator::new(a.product(&a)).unwrap().add(&a.scale(0.3));
            assert!(star_product(&a, &c, &psi).unwrap().im.abs() < 1e-10);
        }
    }

    #[test]
    fn vector_fields_of_identity() {
        let mut r = rng(9);
        let psi = RealifiedState::from_complex(&random_vector(3, &mut r));
        let id = HermitianOperator::identity(3);
        assert_eq!(gradient_vf(&id, &psi).unwrap().components, psi.components());
        let ham = hamiltonian_vf(&id, &psi).unwrap().to_complex();
        let rotated = psi.to_complex().map(|z| z * Complex64::i());
        assert!((ham - rotated).norm() < 1e-15);
        let a = random_hermitian(3, &mut r);
        let expected = a.matrix() * psi.to_complex() * Complex64::i();
        assert!((hamiltonian_vf(&a, &psi).unwrap().to_complex() - expected).norm() < 1e-12);
    }
}
