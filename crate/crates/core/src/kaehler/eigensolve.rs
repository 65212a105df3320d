use num_complex::Complex64;

use super::RealifiedState;
use crate::error::{Error, Result};
use crate::format::csv;
use crate::hermitian::HermitianOperator;

/// Relative stopping tolerance: stop once `||A psi - e_A(psi) psi|| < TOL_CRIT_REL * ||A||_2`.
pub const TOL_CRIT_REL: f64 = 1e-9;
/// Default step, relative to `1 / ||A||_2`.
pub const DEFAULT_STEP_REL: f64 = 0.1;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Climb `e_A` towards the largest eigenvalue.
    Ascent,
    /// Descend `e_A` towards the smallest eigenvalue.
    Descent,
}

#[derive(Clone, Debug)]
pub struct EigensolveOptions {
    pub mode: SolveMode,
    /// Absolute step; `None` means `DEFAULT_STEP_REL / ||A||_2`.
    pub step: Option<f64>,
    pub max_iter: usize,
    /// Record `(iter, e_A, residual)` for every iteration.
    pub record_trace: bool,
}

impl Default for EigensolveOptions {
    fn default() -> Self {
        Self { mode: SolveMode::Ascent, step: None, max_iter: DEFAULT_MAX_ITER, record_trace: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub iter: usize,
    pub e_a: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct EigensolveResult {
    /// `e_A(psi*) = <psi*, A psi*> / <psi*, psi*>`.
    pub eigenvalue: f64,
    /// Unit-norm critical point.
    pub state: RealifiedState,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub trace: Vec<TracePoint>,
}

impl EigensolveResult {
    /// Convergence trace as CSV with header `iter,e_A,residual`.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,e_A,residual\n");
        for t in &self.trace {
            s.push_str(&format!("{},{},{}\n", t.iter, csv(t.e_a), csv(t.residual)));
        }
        s
    }
}

/// Finds a critical point of the expectation value `e_A` on the unit sphere by
/// fixed-step projected gradient iteration
/// `psi <- normalize(psi +/- step (A psi - e_A(psi) psi))`.
///
/// Critical points of `f_A` restricted to the sphere are exactly the
/// eigenvectors of `A`; the returned eigenvalue is `e_A` at the limit.
pub fn critical_point_eigensolve(
    a: &HermitianOperator,
    psi0: &RealifiedState,
    opts: &EigensolveOptions,
) -> Result<EigensolveResult> {
    psi0.check_operator(a)?;
    let norm0 = psi0.norm();
    if psi0.is_zero() || !norm0.is_finite() {
        return Err(Error::InvalidStart);
    }
    let a_norm = a.spectral_norm();
    let step = match opts.step {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(Error::InvalidInput(format!("step must be positive, got {s}"))),
        None if a_norm > 0.0 => DEFAULT_STEP_REL / a_norm,
        None => DEFAULT_STEP_REL,
    };
    let tol = TOL_CRIT_REL * a_norm;
    let sign = match opts.mode {
        SolveMode::Ascent => 1.0,
        SolveMode::Descent => -1.0,
    };

    let mut psi = psi0.to_complex().unscale(norm0);
    let mut trace = Vec::new();
    let mut iter = 0;
    loop {
        let a_psi = a.apply(&psi);
        let e = psi.dotc(&a_psi).re;
        let grad = &a_psi - &psi * Complex64::from(e);
        let residual = grad.norm();
        if opts.record_trace {
            trace.push(TracePoint { iter, e_a: e, residual });
        }
        let converged = residual <= tol;
        if converged || iter >= opts.max_iter {
            return Ok(EigensolveResult {
                eigenvalue: e,
                state: RealifiedState::from_complex(&psi),
                converged,
                iterations: iter,
                residual,
                trace,
            });
        }
        psi += grad * Complex64::from(sign * step);
        let nrm = psi.norm();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::Numerical(format!("iterate norm {nrm} at iteration {iter}")));
        }
        psi.unscale_mut(nrm);
        iter += 1;
    }
}
