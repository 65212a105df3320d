use num_complex::Complex64;

use super::RealifiedState;
use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianOperator};

/// Default fixed step for vector-field flows.
pub const DEFAULT_FLOW_STEP: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct FlowSample {
    pub t: f64,
    pub state: RealifiedState,
}

/// Classical fixed-step fourth-order Runge-Kutta integration of
/// `d psi / dt = field(psi)` from `t = 0` to `t_end`. Returns every step,
/// including the initial point.
pub fn rk4_flow<F>(field: F, psi0: &CVector, t_end: f64, step: f64) -> Result<Vec<(f64, CVector)>>
where
    F: Fn(&CVector) -> CVector,
{
    if !(step > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidInput(format!("step {step} and horizon {t_end} must be positive")));
    }
    let steps = (t_end / step).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut psi = psi0.clone();
    out.push((0.0, psi.clone()));
    for k in 0..steps {
        let k1 = field(&psi);
        let k2 = field(&(&psi + &k1 * Complex64::from(0.5 * step)));
        let k3 = field(&(&psi + &k2 * Complex64::from(0.5 * step)));
        let k4 = field(&(&psi + &k3 * Complex64::from(step)));
        psi += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(step / 6.0);
        out.push(((k + 1) as f64 * step, psi.clone()));
    }
    Ok(out)
}

/// Flow of the Hamiltonian vector field of `f_A`, `psi' = J A psi`.
pub fn hamiltonian_flow(a: &HermitianOperator, psi0: &RealifiedState, t_end: f64, step: f64) -> Result<Vec<FlowSample>> {
    psi0.check_operator(a)?;
    let field = |v: &CVector| a.apply(v) * Complex64::i();
    Ok(rk4_flow(field, &psi0.to_complex(), t_end, step)?
        .into_iter()
        .map(|(t, v)| FlowSample { t, state: RealifiedState::from_complex(&v) })
        .collect())
}

/// Largest change of the `g`-distance between two points both moved by the
/// Hamiltonian flow of `f_A`.
pub fn flow_distance_drift(
    a: &HermitianOperator,
    psi1: &RealifiedState,
    psi2: &RealifiedState,
    t_end: f64,
    step: f64,
) -> Result<f64> {
    psi1.check_same_dim(psi2)?;
    let f1 = hamiltonian_flow(a, psi1, t_end, step)?;
    let f2 = hamiltonian_flow(a, psi2, t_end, step)?;
    let dist = |x: &RealifiedState, y: &RealifiedState| (x.to_complex() - y.to_complex()).norm();
    let d0 = dist(psi1, psi2);
    Ok(f1
        .iter()
        .zip(&f2)
        .map(|(u, v)| (dist(&u.state, &v.state) - d0).abs())
        .fold(0.0, f64::max))
}
