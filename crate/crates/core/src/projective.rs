//! Ray space: the momentum map onto rank-one projectors, expectation values,
//! the connection one-form of the `C_0`-bundle, the horizontal Hermitian
//! tensor, and the transition probability between pure states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dual_tensors::PAIRING_SCALE;
use crate::error::{Error, Result};
use crate::hermitian::{gellmann_basis, spectral_oracle, to_dual, trace_product, HermitianOperator};
use crate::kaehler::{quadratic_function, RealifiedState, TangentVector};

/// Tolerance on `rho^2 = rho` for rank-one projectors.
pub const TOL_IDEMPOTENT: f64 = 1e-10;
/// Tolerance on `Tr rho = 1` for rank-one projectors.
pub const TOL_UNIT_TRACE: f64 = 1e-12;
/// Two pure states are equal when their trace-norm distance is below this.
pub const TOL_SAME_STATE: f64 = 1e-8;

/// A ray `[psi]` stored as its unit representative whose first non-vanishing
/// coordinate is real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealifiedState", into = "RealifiedState")]
pub struct Ray {
    representative: RealifiedState,
}

impl Ray {
    pub fn new(psi: &RealifiedState) -> Result<Self> {
        let norm = psi.norm();
        if psi.is_zero() || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let v = psi.to_complex().unscale(norm);
        let lead = v
            .iter()
            .find(|z| z.norm() > 1e-12)
            .copied()
            .ok_or(Error::ZeroVector)?;
        let phase = lead.conj() / lead.norm();
        let mut rep = v * phase;
        if let Some(z) = rep.iter_mut().find(|z| z.norm() > 1e-12) {
            z.im = 0.0;
        }
        Ok(Self { representative: RealifiedState::from_complex(&rep) })
    }

    pub fn representative(&self) -> &RealifiedState {
        &self.representative
    }

    pub fn projector(&self) -> PureDensity {
        PureDensity { op: HermitianOperator::outer(&self.representative.to_complex()) }
    }
}

impl TryFrom<RealifiedState> for Ray {
    type Error = Error;

    fn try_from(s: RealifiedState) -> Result<Self> {
        Ray::new(&s)
    }
}

impl From<Ray> for RealifiedState {
    fn from(r: Ray) -> Self {
        r.representative
    }
}

/// A rank-one orthogonal projector `rho = |psi><psi| / <psi, psi>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianOperator", into = "HermitianOperator")]
pub struct PureDensity {
    op: HermitianOperator,
}

impl PureDensity {
    /// Accepts `op` when `op^2 = op` and `Tr op = 1` within tolerance.
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > TOL_UNIT_TRACE {
            return Err(Error::NotExtremal(format!("trace {tr}")));
        }
        let sq = HermitianOperator::new(op.product(&op))?;
        let dev = sq.max_abs_diff(&op);
        if dev > TOL_IDEMPOTENT {
            return Err(Error::NotExtremal(format!("|rho^2 - rho| = {dev:e}")));
        }
        Ok(Self { op })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }
}

impl TryFrom<HermitianOperator> for PureDensity {
    type Error = Error;

    fn try_from(op: HermitianOperator) -> Result<Self> {
        PureDensity::new(op)
    }
}

impl From<PureDensity> for HermitianOperator {
    fn from(p: PureDensity) -> Self {
        p.op
    }
}

fn norm_sq(psi: &RealifiedState) -> Result<f64> {
    let n2 = psi.norm().powi(2);
    if psi.is_zero() || !n2.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(n2)
}

/// `mu([psi]) = |psi><psi| / <psi, psi>`.
pub fn momentum_map(psi: &RealifiedState) -> Result<PureDensity> {
    let n2 = norm_sq(psi)?;
    Ok(PureDensity { op: HermitianOperator::outer(&psi.to_complex()).scale(1.0 / n2) })
}

/// `e_A(psi) = <psi, A psi> / <psi, psi>`.
pub fn expectation(a: &HermitianOperator, psi: &RealifiedState) -> Result<f64> {
    let n2 = norm_sq(psi)?;
    a.check_dim(psi.dim())?;
    Ok(a.expectation_unnormalized(&psi.to_complex()) / n2)
}

fn check_tangent(psi: &RealifiedState, v: &TangentVector) -> Result<()> {
    if v.base.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: v.base.dim() });
    }
    Ok(())
}

/// `theta(psi)(v) = <psi, v> / <psi, psi>`.
pub fn connection_form(psi: &RealifiedState, v: &TangentVector) -> Result<Complex64> {
    let n2 = norm_sq(psi)?;
    check_tangent(psi, v)?;
    Ok(psi.to_complex().dotc(&v.to_complex()) / n2)
}

/// `<v, w> / <psi, psi> - <v, psi><psi, w> / <psi, psi>^2`.
pub fn projected_hermitian(psi: &RealifiedState, v: &TangentVector, w: &TangentVector) -> Result<Complex64> {
    let n2 = norm_sq(psi)?;
    check_tangent(psi, v)?;
    check_tangent(psi, w)?;
    let (p, vc, wc) = (psi.to_complex(), v.to_complex(), w.to_complex());
    Ok(vc.dotc(&wc) / n2 - vc.dotc(&p) * p.dotc(&wc) / (n2 * n2))
}

/// `p(rho_1, rho_2) = Tr(rho_1 rho_2)` on extremal states.
pub fn transition_probability(rho1: &PureDensity, rho2: &PureDensity) -> Result<f64> {
    rho1.op.check_dim(rho2.op.dim())?;
    Ok(trace_product(rho1.op.matrix(), rho2.op.matrix()).re)
}

/// [`transition_probability`] for raw operators, certifying both as extremal first.
pub fn transition_probability_of(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    transition_probability(&PureDensity::new(a.clone())?, &PureDensity::new(b.clone())?)
}

/// Trace-norm distance `||rho_1 - rho_2||_1`.
pub fn trace_distance(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
    spectral_oracle(&a.sub(b)).values().iter().map(|v| v.abs()).sum()
}

pub fn same_state(rho1: &PureDensity, rho2: &PureDensity) -> bool {
    trace_distance(&rho1.op, &rho2.op) < TOL_SAME_STATE
}

/// Both sides of `mu^*(A^) = f_A`: the linear function `A^` evaluated on
/// `<psi, psi> mu(psi)` through the y-coordinates, and `f_A(psi)`.
pub fn pullback_check(psi: &RealifiedState, a: &HermitianOperator) -> Result<(f64, f64)> {
    let n2 = norm_sq(psi)?;
    let basis = gellmann_basis(psi.dim())?;
    let xi = to_dual(&momentum_map(psi)?.op.scale(n2), &basis)?;
    let ya = to_dual(a, &basis)?;
    let linear: f64 = xi.y.iter().zip(&ya.y).map(|(u, v)| u * v).sum();
    Ok((PAIRING_SCALE * linear, quadratic_function(a, psi)?))
}
