//! Subcommand bodies. Each returns the primary output text; the caller
//! decides where it goes.

use quantum_strata::dual_tensors::{distributions_at, lambda_at, riemann_jordan_at, TensorKind};
use quantum_strata::format::csv;
use quantum_strata::hermitian::{
    from_dual, gellmann_basis, qutrit_table, spectral_oracle, structure_constants, to_dual, DualVector,
    HermitianOperator,
};
use quantum_strata::kaehler::{
    critical_point_eigensolve, hamiltonian_flow, EigensolveOptions, RealifiedState, SolveMode, DEFAULT_FLOW_STEP,
};
use quantum_strata::projective::PureDensity;
use quantum_strata::sampling::{random_unit_vector, rng};
use quantum_strata::strata::{
    bloch_decompose_along, certify_density, convex_decompose_spectral, criteria_agree, face_of, orbit_dimension,
    Certification, ConvexDecomposition, DensityState,
};
use quantum_strata::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular(_) | Error::Numerical(_) | Error::BasisInvariant(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn parse_err(e: serde_json::Error) -> CliError {
    CliError::Usage(format!("invalid JSON input: {e}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A state given either as a matrix payload or by its y-coordinates.
#[derive(Deserialize)]
#[serde(untagged)]
enum OperatorInput {
    Matrix(HermitianOperator),
    Dual(DualVector),
}

fn parse_operator(text: &str) -> Result<HermitianOperator, CliError> {
    match serde_json::from_str::<OperatorInput>(text).map_err(|_| {
        CliError::Usage("expected {\"dim\",\"re\",\"im\"} or {\"dim\",\"y\"}".into())
    })? {
        OperatorInput::Matrix(op) => Ok(op),
        OperatorInput::Dual(y) => Ok(from_dual(&y, &gellmann_basis(y.dim)?)?),
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassifyReport {
    pub density: bool,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub spectrum: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violated: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Whether the explicit coordinate inequalities (n = 2, 3) give the same verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria_agree: Option<bool>,
}

pub fn classify(text: &str) -> Result<String, CliError> {
    let op = parse_operator(text)?;
    let y = to_dual(&op, &gellmann_basis(op.dim())?)?.y;
    let agree = criteria_agree(&op);
    let report = match certify_density(&op) {
        Certification::Accepted(s) => ClassifyReport {
            density: true,
            dim: s.dim(),
            rank: Some(s.rank()),
            spectrum: s.spectrum().to_vec(),
            y,
            orbit_dim: Some(orbit_dimension(&s)?),
            face_dim: Some(face_of(&s).dimension()),
            violated: None,
            detail: None,
            criteria_agree: agree,
        },
        Certification::Rejected(r) => ClassifyReport {
            density: false,
            dim: op.dim(),
            rank: None,
            spectrum: r.spectrum.clone(),
            y,
            orbit_dim: None,
            face_dim: None,
            violated: Some(r.violated()),
            detail: Some(r.describe()),
            criteria_agree: agree,
        },
    };
    to_json(&report)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub mode: String,
    pub weights: Vec<f64>,
    pub components: Vec<PureDensity>,
    pub residual: f64,
}

fn parse_state(text: &str) -> Result<DensityState, CliError> {
    let op = parse_operator(text)?;
    match certify_density(&op) {
        Certification::Accepted(s) => Ok(s),
        Certification::Rejected(r) => Err(CliError::Usage(format!("input is not a density state: {}", r.describe()))),
    }
}

fn decomposition_report(mode: &str, rho: &DensityState, d: ConvexDecomposition) -> Result<String, CliError> {
    let residual = d.residual(rho.operator());
    to_json(&DecomposeReport { mode: mode.into(), weights: d.weights, components: d.components, residual })
}

pub fn decompose_spectral(text: &str) -> Result<String, CliError> {
    let rho = parse_state(text)?;
    let d = convex_decompose_spectral(&rho);
    decomposition_report("spectral", &rho, d)
}

pub fn decompose_bloch(text: &str, direction: Option<[f64; 3]>) -> Result<String, CliError> {
    let direction = direction.ok_or_else(|| CliError::Usage("bloch mode requires --direction x,y,z".into()))?;
    let rho = parse_state(text)?;
    if rho.dim() != 2 {
        return Err(CliError::Usage(format!("bloch mode requires n = 2, got n = {}", rho.dim())));
    }
    let d = bloch_decompose_along(&rho, direction)?;
    decomposition_report("bloch", &rho, d)
}

fn parse_dual(text: &str) -> Result<DualVector, CliError> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn tensor(text: &str, kind: TensorKind) -> Result<String, CliError> {
    let y = parse_dual(text)?;
    let t = match kind {
        TensorKind::Lambda => lambda_at(&y)?,
        TensorKind::RiemannJordan => riemann_jordan_at(&y)?,
    };
    let mut v = serde_json::to_value(&t).map_err(|e| CliError::Numeric(e.to_string()))?;
    v["rank"] = t.rank().into();
    to_json(&v)
}

pub fn distributions(text: &str) -> Result<String, CliError> {
    to_json(&distributions_at(&parse_dual(text)?)?)
}

/// CSV `mu,nu,rho,C,d`; for n = 3 a final column compares against the
/// published qutrit table (`match`, `mismatch`, or `discrepancy` for rows
/// carrying a 0 index).
pub fn constants(n: usize, tol: f64) -> Result<String, CliError> {
    let sc = structure_constants(&gellmann_basis(n)?)?;
    let mut rows = sc.nonzero_entries(tol);
    let qutrit = n == 3;
    if qutrit {
        // listed 0-index entries the computation does not produce
        for j in 1..9 {
            for idx in [(j, j, 0), (0, j, j), (j, 0, j)] {
                if !rows.iter().any(|r| (r.0, r.1, r.2) == idx) {
                    rows.push((idx.0, idx.1, idx.2, sc.c(idx.0, idx.1, idx.2), sc.d(idx.0, idx.1, idx.2)));
                }
            }
        }
        rows.sort_by_key(|r| (r.0, r.1, r.2));
    }
    let mut out = String::from(if qutrit { "mu,nu,rho,C,d,match\n" } else { "mu,nu,rho,C,d\n" });
    for (mu, nu, rho, c, d) in rows {
        out.push_str(&format!("{mu},{nu},{rho},{},{}", csv(c), csv(d)));
        if qutrit {
            let verdict = if mu == 0 || nu == 0 || rho == 0 {
                let listed = qutrit_table::d_zero_index(mu, nu, rho).unwrap_or(0.0);
                if c.abs() <= tol && (d - listed).abs() <= tol { "match" } else { "discrepancy" }
            } else if (c - qutrit_table::c(mu, nu, rho)).abs() <= tol && (d - qutrit_table::d(mu, nu, rho)).abs() <= tol {
                "match"
            } else {
                "mismatch"
            };
            out.push(',');
            out.push_str(verdict);
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Deserialize)]
struct FlowInput {
    operator: HermitianOperator,
    #[serde(default)]
    psi0: Option<RealifiedState>,
}

fn parse_flow(text: &str, seed: u64) -> Result<(HermitianOperator, RealifiedState), CliError> {
    let input: FlowInput = serde_json::from_str(text).map_err(parse_err)?;
    let n = input.operator.dim();
    let psi0 = match input.psi0 {
        Some(p) => p,
        None => RealifiedState::from_complex(&random_unit_vector(n, &mut rng(seed))),
    };
    Ok((input.operator, psi0))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HamiltonianReport {
    pub mode: String,
    pub step: f64,
    pub t_end: f64,
    pub samples: usize,
    /// Largest `|‖psi(t)‖ - ‖psi(0)‖|`.
    pub norm_drift: f64,
    /// Largest `|e_A(psi(t)) - e_A(psi(0))|`.
    pub energy_drift: f64,
    pub final_state: RealifiedState,
}

fn expectation(a: &HermitianOperator, psi: &RealifiedState) -> f64 {
    let v = psi.to_complex();
    a.expectation_unnormalized(&v) / v.norm_squared()
}

pub fn flow_hamiltonian(text: &str, step: Option<f64>, t_end: f64, seed: u64) -> Result<(String, String), CliError> {
    let (a, psi0) = parse_flow(text, seed)?;
    if psi0.is_zero() {
        return Err(CliError::Usage("psi0 must be non-zero".into()));
    }
    let step = step.unwrap_or(DEFAULT_FLOW_STEP);
    let samples = hamiltonian_flow(&a, &psi0, t_end, step)?;
    let (n0, e0) = (psi0.norm(), expectation(&a, &psi0));
    let mut trace = String::from("t,e_A,norm\n");
    let (mut norm_drift, mut energy_drift) = (0.0f64, 0.0f64);
    for s in &samples {
        let (e, nrm) = (expectation(&a, &s.state), s.state.norm());
        norm_drift = norm_drift.max((nrm - n0).abs());
        energy_drift = energy_drift.max((e - e0).abs());
        trace.push_str(&format!("{},{},{}\n", csv(s.t), csv(e), csv(nrm)));
    }
    if !(norm_drift.is_finite() && energy_drift.is_finite()) {
        return Err(CliError::Numeric("flow diverged".into()));
    }
    let report = HamiltonianReport {
        mode: "hamiltonian".into(),
        step,
        t_end,
        samples: samples.len(),
        norm_drift,
        energy_drift,
        final_state: samples.last().expect("initial sample").state.clone(),
    };
    Ok((to_json(&report)?, trace))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EigensolveReport {
    pub mode: String,
    pub direction: String,
    pub converged: bool,
    pub iterations: usize,
    pub eigenvalue: f64,
    pub residual: f64,
    pub state: RealifiedState,
    /// Nearest eigenvalue reported by the dense eigensolver.
    pub oracle_eigenvalue: f64,
}

pub fn flow_eigensolve(
    text: &str,
    step: Option<f64>,
    max_iter: usize,
    descent: bool,
    seed: u64,
) -> Result<(String, String), CliError> {
    let (a, psi0) = parse_flow(text, seed)?;
    let opts = EigensolveOptions {
        mode: if descent { SolveMode::Descent } else { SolveMode::Ascent },
        step,
        max_iter,
        record_trace: true,
    };
    let res = critical_point_eigensolve(&a, &psi0, &opts)?;
    let oracle = spectral_oracle(&a)
        .values()
        .into_iter()
        .min_by(|x, y| (x - res.eigenvalue).abs().total_cmp(&(y - res.eigenvalue).abs()))
        .expect("non-empty spectrum");
    let report = EigensolveReport {
        mode: "gradient-eigensolve".into(),
        direction: if descent { "descent" } else { "ascent" }.into(),
        converged: res.converged,
        iterations: res.iterations,
        eigenvalue: res.eigenvalue,
        residual: res.residual,
        state: res.state.clone(),
        oracle_eigenvalue: oracle,
    };
    Ok((to_json(&report)?, res.trace_csv()))
}

/// Grid coordinate `i` of `resolution` points spanning `[-0.6, 0.6]`, exact at both ends and at 0.
fn grid_coordinate(i: usize, resolution: usize) -> f64 {
    -0.6 * (1.0 - 2.0 * i as f64 / (resolution - 1) as f64)
}

pub fn ballgrid(resolution: usize) -> Result<String, CliError> {
    if resolution < 2 {
        return Err(CliError::Usage(format!("resolution must be at least 2, got {resolution}")));
    }
    let basis = gellmann_basis(2)?;
    let mut out = String::from("y1,y2,y3,is_density,rank\n");
    for i in 0..resolution {
        for j in 0..resolution {
            for k in 0..resolution {
                let y = [grid_coordinate(i, resolution), grid_coordinate(j, resolution), grid_coordinate(k, resolution)];
                let op = from_dual(&DualVector { dim: 2, y: vec![0.5, y[0], y[1], y[2]] }, &basis)?;
                let (ok, rank) = match certify_density(&op) {
                    Certification::Accepted(s) => (true, s.rank()),
                    Certification::Rejected(_) => (false, 0),
                };
                out.push_str(&format!("{},{},{},{ok},{rank}\n", csv(y[0]), csv(y[1]), csv(y[2])));
            }
        }
    }
    Ok(out)
}
