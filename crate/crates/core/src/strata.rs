//! The convex body `D(H)` of density states and its stratification by rank.
//!
//! States are certified through the spectral oracle; for `n = 2` and `n = 3`
//! the explicit coordinate inequalities (Bloch ball, principal minors) are
//! evaluated alongside so that the two criteria can be compared.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::dual_tensors::{distributions_at, lambda_at};
use crate::error::{Error, Result};
use crate::format::csv;
use crate::hermitian::{
    from_dual, gellmann_basis, spectral_oracle, structure_constants, to_dual, CMatrix, CVector, DualVector,
    HermitianOperator, StructureConstants,
};
use crate::linalg::{orthogonal_residual, subspace_intersection};
use crate::projective::PureDensity;

/// Eigenvalues above `-TOL_PSD` count as non-negative.
pub const TOL_PSD: f64 = 1e-10;
/// Accepted deviation of `Tr A` from 1.
pub const TOL_TRACE: f64 = 1e-10;
/// An eigenvalue counts towards the rank when above `TOL_RANK * lambda_max`.
pub const TOL_RANK: f64 = 1e-9;
/// Largest accepted condition number of a group element.
pub const MAX_CONDITION: f64 = 1e12;
/// Maximum residual of a velocity off the stratum tangent space.
pub const TOL_TANGENT: f64 = 1e-6;
/// Kernel-inclusion tolerance for face membership.
pub const TOL_FACE: f64 = 1e-9;

/// A certified density state with its rank stratum.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    op: HermitianOperator,
    rank: usize,
    spectrum: Vec<f64>,
}

impl DensityState {
    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Shorthand for certifying a matrix expected to be a state.
    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        match certify_density(&op) {
            Certification::Accepted(s) => Ok(s),
            Certification::Rejected(r) => Err(Error::InvalidInput(format!("not a density state: {}", r.describe()))),
        }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::from_operator(HermitianOperator::identity(n).scale(1.0 / n as f64)).expect("I/n is a state")
    }
}

impl Serialize for DensityState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let base = serde_json::to_value(&self.op).map_err(serde::ser::Error::custom)?;
        let mut map = s.serialize_map(Some(5))?;
        if let serde_json::Value::Object(obj) = base {
            for (k, v) in obj {
                map.serialize_entry(&k, &v)?;
            }
        }
        map.serialize_entry("rank", &self.rank)?;
        map.serialize_entry("spectrum", &self.spectrum)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for DensityState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(flatten)]
            op: HermitianOperator,
            rank: Option<usize>,
        }
        let w = Wire::deserialize(d)?;
        let state = DensityState::from_operator(w.op).map_err(serde::de::Error::custom)?;
        if let Some(k) = w.rank {
            if k != state.rank {
                return Err(serde::de::Error::custom(format!("declared rank {k}, computed {}", state.rank)));
            }
        }
        Ok(state)
    }
}

/// Why a Hermitian operator is not a density state.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Trace { trace: f64 },
    NegativeEigenvalue { min_eigenvalue: f64 },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Trace { .. } => "trace",
            Violation::NegativeEigenvalue { .. } => "negative eigenvalue",
        }
    }
}

/// Result of the explicit coordinate criterion (`n = 2` or `n = 3`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplicitCheck {
    pub accepted: bool,
    /// Names of the violated inequalities, in the order they are listed.
    pub violated: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RejectionReport {
    pub violation: Violation,
    pub spectrum: Vec<f64>,
    pub explicit: Option<ExplicitCheck>,
}

impl RejectionReport {
    /// Most specific violated condition: the first explicit inequality when
    /// available, otherwise the spectral violation.
    pub fn violated(&self) -> String {
        self.explicit
            .as_ref()
            .and_then(|e| e.violated.first().cloned())
            .unwrap_or_else(|| self.violation.name().to_string())
    }

    pub fn describe(&self) -> String {
        match &self.violation {
            Violation::Trace { trace } => format!("trace {trace} != 1"),
            Violation::NegativeEigenvalue { min_eigenvalue } => format!("eigenvalue {min_eigenvalue:e} < 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    Accepted(DensityState),
    Rejected(RejectionReport),
}

impl Certification {
    pub fn is_density(&self) -> bool {
        matches!(self, Certification::Accepted(_))
    }

    pub fn state(self) -> Option<DensityState> {
        match self {
            Certification::Accepted(s) => Some(s),
            Certification::Rejected(_) => None,
        }
    }
}

/// Number of eigenvalues above `TOL_RANK * lambda_max`.
pub fn rank_of_spectrum(spectrum: &[f64]) -> usize {
    let top = spectrum.iter().cloned().fold(0.0, f64::max);
    if top <= 0.0 {
        return 0;
    }
    spectrum.iter().filter(|&&v| v > TOL_RANK * top).count()
}

/// Bloch-ball test `(y1)^2 + (y2)^2 + (y3)^2 <= 1/4` for a unit-trace qubit operator.
pub fn qubit_ball_check(a: &HermitianOperator) -> ExplicitCheck {
    let y = to_dual(a, &gellmann_basis(2).expect("n = 2")).expect("qubit operator");
    let r2 = y.traceless_norm_sq();
    let accepted = r2 <= 0.25 + TOL_PSD;
    ExplicitCheck { accepted, violated: if accepted { vec![] } else { vec!["ball radius".into()] } }
}

/// Principal-minor conditions for `rho = [[a, h*, g], [h, b, f*], [g*, f, c]]`.
pub fn qutrit_inequalities(rho: &HermitianOperator) -> ExplicitCheck {
    let m = rho.matrix();
    let (a, b, c) = (m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re);
    let h = m[(1, 0)];
    let g = m[(0, 2)];
    let f = m[(2, 1)];
    let det = a * b * c + 2.0 * (f * g * h).re - (a * f.norm_sqr() + b * g.norm_sqr() + c * h.norm_sqr());
    let checks = [
        ("a >= 0", a >= -TOL_PSD),
        ("b >= 0", b >= -TOL_PSD),
        ("c >= 0", c >= -TOL_PSD),
        ("|f|^2 <= bc", f.norm_sqr() <= b * c + TOL_PSD),
        ("|g|^2 <= ca", g.norm_sqr() <= c * a + TOL_PSD),
        ("|h|^2 <= ab", h.norm_sqr() <= a * b + TOL_PSD),
        ("det >= 0", det >= -TOL_PSD),
    ];
    let violated: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.to_string()).collect();
    ExplicitCheck { accepted: violated.is_empty(), violated }
}

fn explicit_check(a: &HermitianOperator) -> Option<ExplicitCheck> {
    match a.dim() {
        2 => Some(qubit_ball_check(a)),
        3 => Some(qutrit_inequalities(a)),
        _ => None,
    }
}

/// Accepts `A` iff `Tr A = 1` and its spectrum is `>= -TOL_PSD`. The
/// accepted operator is rescaled to exact unit trace.
pub fn certify_density(a: &HermitianOperator) -> Certification {
    let spectrum = spectral_oracle(a).values();
    let trace = a.trace();
    let explicit = explicit_check(a);
    if (trace - 1.0).abs() > TOL_TRACE {
        return Certification::Rejected(RejectionReport { violation: Violation::Trace { trace }, spectrum, explicit });
    }
    let min = spectrum.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -TOL_PSD {
        return Certification::Rejected(RejectionReport {
            violation: Violation::NegativeEigenvalue { min_eigenvalue: min },
            spectrum,
            explicit,
        });
    }
    let rank = rank_of_spectrum(&spectrum);
    let op = a.scale(1.0 / trace);
    let spectrum = spectrum.iter().map(|v| v / trace).collect();
    Certification::Accepted(DensityState { op, rank, spectrum })
}

/// Whether the spectral and explicit criteria agree (`None` when no explicit criterion exists).
pub fn criteria_agree(a: &HermitianOperator) -> Option<bool> {
    let spectral = certify_density(a).is_density();
    explicit_check(a).map(|e| e.accepted == spectral)
}

/// The rank stratum `k` of `D^k(H)` containing `rho`.
pub fn stratum(rho: &DensityState) -> usize {
    rho.rank
}

/// `(K_+, K_-)`: numbers of positive and negative eigenvalues.
pub fn signature(xi: &HermitianOperator) -> (usize, usize) {
    let vals = spectral_oracle(xi).values();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = TOL_RANK * scale;
    (vals.iter().filter(|&&v| v > thr).count(), vals.iter().filter(|&&v| v < -thr).count())
}

/// 2-norm condition number of a square complex matrix.
pub fn condition_number(t: &CMatrix) -> f64 {
    // realified T has the singular values of T, each doubled
    let n = t.nrows();
    let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = t[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let sv = crate::linalg::singular_values(&real);
    let (max, min) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn check_invertible(t: &CMatrix, n: usize) -> Result<()> {
    if t.nrows() != t.ncols() {
        return Err(Error::NotSquare(t.nrows(), t.ncols()));
    }
    if t.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.nrows() });
    }
    let cond = condition_number(t);
    if !(cond < MAX_CONDITION) {
        return Err(Error::Singular(cond));
    }
    Ok(())
}

/// `(T, xi) -> T xi T^dagger` on the cone of Hermitian operators.
pub fn gl_act_cone(t: &CMatrix, xi: &HermitianOperator) -> Result<HermitianOperator> {
    check_invertible(t, xi.dim())?;
    xi.congruence(t)
}

/// `(T, rho) -> T rho T^dagger / Tr(T rho T^dagger)` on density states.
pub fn gl_act_states(t: &CMatrix, rho: &DensityState) -> Result<DensityState> {
    let moved = gl_act_cone(t, &rho.op)?;
    let tr = moved.trace();
    if !(tr > 1e-14) {
        return Err(Error::Numerical(format!("Tr(T rho T^dagger) = {tr:e}")));
    }
    DensityState::from_operator(moved.scale(1.0 / tr))
}

/// Which kernel inclusion defines membership in the face through `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacePredicate {
    /// `Ker rho ⊂ Ker A`: `A` is supported on `Im rho`.
    KernelOfBaseInKernelOf,
    /// `Ker A ⊂ Ker rho`, the inclusion read in the opposite direction.
    KernelOfInKernelOfBase,
}

/// The face of `D(H)` through a state, isomorphic to `D(Im rho)`.
#[derive(Clone, Debug)]
pub struct FaceDescriptor {
    pub base: DensityState,
    /// Orthonormal basis of `Im rho` (`k` vectors).
    pub image: Vec<CVector>,
    /// Orthonormal basis of `Ker rho` (`n - k` vectors).
    pub kernel: Vec<CVector>,
}

impl FaceDescriptor {
    /// Real dimension `k^2 - 1`.
    pub fn dimension(&self) -> usize {
        self.image.len() * self.image.len() - 1
    }

    /// Membership: `A` is a state with `Ker rho ⊂ Ker A`.
    pub fn contains(&self, a: &HermitianOperator) -> bool {
        self.contains_with(a, FacePredicate::KernelOfBaseInKernelOf)
    }

    pub fn contains_with(&self, a: &HermitianOperator, predicate: FacePredicate) -> bool {
        if a.dim() != self.base.dim() || !certify_density(a).is_density() {
            return false;
        }
        match predicate {
            FacePredicate::KernelOfBaseInKernelOf => {
                self.kernel.iter().all(|v| a.apply(v).norm() <= TOL_FACE)
            }
            FacePredicate::KernelOfInKernelOfBase => kernel_vectors(a)
                .iter()
                .all(|v| self.base.op.apply(v).norm() <= TOL_FACE),
        }
    }

    /// Projector onto `Im rho` rebuilt from the image basis.
    pub fn image_projector(&self) -> HermitianOperator {
        let n = self.base.dim();
        self.image
            .iter()
            .fold(HermitianOperator::zeros(n), |acc, v| acc.add(&HermitianOperator::outer(v)))
    }
}

fn kernel_vectors(a: &HermitianOperator) -> Vec<CVector> {
    let spec = spectral_oracle(a);
    let scale = spec.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    spec.pairs
        .into_iter()
        .filter(|p| p.value.abs() <= TOL_RANK * scale)
        .map(|p| p.vector)
        .collect()
}

pub fn face_of(rho: &DensityState) -> FaceDescriptor {
    let spec = spectral_oracle(&rho.op);
    let (image, kernel): (Vec<_>, Vec<_>) = spec.pairs.into_iter().enumerate().partition(|(i, _)| *i < rho.rank);
    FaceDescriptor {
        base: rho.clone(),
        image: image.into_iter().map(|(_, p)| p.vector).collect(),
        kernel: kernel.into_iter().map(|(_, p)| p.vector).collect(),
    }
}

/// Counts of face-axiom failures of a membership predicate over random segments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FaceAxiomReport {
    pub segments: usize,
    /// Segments with an interior point in the set but an endpoint outside it.
    pub extremality_failures: usize,
    /// Segments with both endpoints in the set but the midpoint outside it.
    pub convexity_failures: usize,
}

impl FaceAxiomReport {
    pub fn holds(&self) -> bool {
        self.extremality_failures == 0 && self.convexity_failures == 0
    }
}

/// Samples segments `[A, B]` in `D(H)` (endpoints drawn both from inside the
/// face and from all of `D(H)`) and checks the face axioms for `predicate`.
pub fn check_face_axioms<R: Rng>(
    face: &FaceDescriptor,
    predicate: FacePredicate,
    trials: usize,
    rng: &mut R,
) -> FaceAxiomReport {
    let n = face.base.dim();
    let mut report = FaceAxiomReport::default();
    let inside = |r: &mut R| -> HermitianOperator {
        // random state supported on Im rho
        let k = face.image.len();
        let mut acc = HermitianOperator::zeros(n);
        for _ in 0..k {
            let coeffs: Vec<Complex64> = (0..k).map(|_| crate::sampling::gaussian_complex(r)).collect();
            let v = face.image.iter().zip(&coeffs).fold(CVector::zeros(n), |s, (b, c)| s + b * *c);
            acc = acc.add(&HermitianOperator::outer(&v));
        }
        acc.scale(1.0 / acc.trace())
    };
    let anywhere = |r: &mut R| -> HermitianOperator {
        let k = r.gen_range(1..=n);
        crate::sampling::random_density_of_rank(n, k, r)
    };
    for i in 0..trials {
        let (a, b) = match i % 3 {
            0 => (inside(rng), inside(rng)),
            1 => (inside(rng), anywhere(rng)),
            _ => (anywhere(rng), anywhere(rng)),
        };
        let t: f64 = rng.gen_range(0.05..0.95);
        let mid = a.scale(t).add(&b.scale(1.0 - t));
        let (ia, ib, im) = (
            face.contains_with(&a, predicate),
            face.contains_with(&b, predicate),
            face.contains_with(&mid, predicate),
        );
        report.segments += 1;
        if im && !(ia && ib) {
            report.extremality_failures += 1;
        }
        if ia && ib && !im {
            report.convexity_failures += 1;
        }
    }
    report
}

/// `rho = sum_i p_i rho_i` with pure components.
#[derive(Clone, Debug, Serialize)]
pub struct ConvexDecomposition {
    pub weights: Vec<f64>,
    pub components: Vec<PureDensity>,
}

impl ConvexDecomposition {
    pub fn reconstruct(&self) -> HermitianOperator {
        let n = self.components[0].operator().dim();
        self.weights
            .iter()
            .zip(&self.components)
            .fold(HermitianOperator::zeros(n), |acc, (w, c)| acc.add(&c.operator().scale(*w)))
    }

    /// Largest entry of `sum p_i rho_i - rho`.
    pub fn residual(&self, rho: &HermitianOperator) -> f64 {
        self.reconstruct().max_abs_diff(rho)
    }
}

/// Eigen-decomposition as a convex combination of orthogonal pure states.
pub fn convex_decompose_spectral(rho: &DensityState) -> ConvexDecomposition {
    let spec = spectral_oracle(&rho.op);
    let kept: Vec<_> = spec.pairs.into_iter().take(rho.rank).collect();
    let total: f64 = kept.iter().map(|p| p.value).sum();
    ConvexDecomposition {
        weights: kept.iter().map(|p| p.value / total).collect(),
        components: kept
            .iter()
            .map(|p| PureDensity::new(HermitianOperator::outer(&p.vector)).expect("unit eigenvector projector"))
            .collect(),
    }
}

fn qubit_state_from_bloch(y: [f64; 3]) -> HermitianOperator {
    let basis = gellmann_basis(2).expect("n = 2");
    from_dual(&DualVector { dim: 2, y: vec![0.5, y[0], y[1], y[2]] }, &basis).expect("qubit coordinates")
}

/// Pure qubit state at a point of the radius-1/2 sphere, re-projected onto
/// the nearest rank-one projector.
fn qubit_pure_from_bloch(y: [f64; 3]) -> PureDensity {
    let op = qubit_state_from_bloch(y);
    let top = spectral_oracle(&op).pairs.swap_remove(0);
    PureDensity::new(HermitianOperator::outer(&top.vector)).expect("unit eigenvector projector")
}

/// Splits a qubit state along the line through it with the given direction:
/// the endpoints are where the line meets the sphere of pure states.
pub fn bloch_decompose_along(rho: &DensityState, direction: [f64; 3]) -> Result<ConvexDecomposition> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::InvalidInput("direction must be a non-zero vector".into()));
    }
    let u = direction.map(|v| v / len);
    let y = to_dual(&rho.op, &gellmann_basis(2)?)?;
    let r = [y.y[1], y.y[2], y.y[3]];
    let ru: f64 = r.iter().zip(&u).map(|(a, b)| a * b).sum();
    let rr: f64 = r.iter().map(|v| v * v).sum();
    let disc = ru * ru - (rr - 0.25);
    if disc < -TOL_PSD {
        return Err(Error::Numerical(format!("line misses the sphere (discriminant {disc:e})")));
    }
    let at = |t: f64| [r[0] + t * u[0], r[1] + t * u[1], r[2] + t * u[2]];
    if disc <= 1e-12 {
        return Ok(ConvexDecomposition { weights: vec![1.0], components: vec![qubit_pure_from_bloch(at(-ru))] });
    }
    let s = disc.sqrt();
    let (t_plus, t_minus) = (-ru + s, -ru - s);
    let p = -t_minus / (t_plus - t_minus);
    let mut weights = Vec::new();
    let mut components = Vec::new();
    for (w, t) in [(p, t_plus), (1.0 - p, t_minus)] {
        if w > 1e-12 {
            weights.push(w);
            components.push(qubit_pure_from_bloch(at(t)));
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(ConvexDecomposition { weights, components })
}

fn qutrit_constants() -> &'static StructureConstants {
    static SC: OnceLock<StructureConstants> = OnceLock::new();
    SC.get_or_init(|| structure_constants(&gellmann_basis(3).expect("n = 3")).expect("orthogonal basis"))
}

/// `(a * b)_l = sqrt(3) d_{ljk} a_j b_k` on `R^8` (indices 1..=8 of the qutrit basis).
pub fn qutrit_star(a: &[f64; 8], b: &[f64; 8]) -> [f64; 8] {
    let sc = qutrit_constants();
    let s3 = 3f64.sqrt();
    let mut out = [0.0; 8];
    for (l, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..8 {
            for k in 0..8 {
                acc += sc.d(l + 1, j + 1, k + 1) * a[j] * b[k];
            }
        }
        *o = s3 * acc;
    }
    out
}

/// `n^a = sqrt(3) y^a` for a qutrit operator written as `(I + sqrt(3) n.lambda) / 3`.
pub fn qutrit_bloch_vector(rho: &HermitianOperator) -> Result<[f64; 8]> {
    rho.check_dim(3)?;
    let y = to_dual(rho, &gellmann_basis(3)?)?;
    let mut n = [0.0; 8];
    for a in 0..8 {
        n[a] = 3f64.sqrt() * y.y[a + 1];
    }
    Ok(n)
}

/// Tolerance for `|n| = 1` and `n * n = n`.
pub const TOL_QUTRIT_PURE: f64 = 1e-8;

/// Builds `rho = (I + sqrt(3) n^a lambda_a) / 3` when `n` is a unit vector
/// with `n * n = n`; otherwise rejects with the failed condition.
pub fn qutrit_pure_from_bloch(n_vec: &[f64]) -> Result<PureDensity> {
    let n: [f64; 8] = n_vec
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("expected 8 components, got {}", n_vec.len())))?;
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > TOL_QUTRIT_PURE {
        return Err(Error::NotExtremal(format!("|n| = {norm} != 1")));
    }
    let star = qutrit_star(&n, &n);
    let dev = star.iter().zip(&n).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if dev > TOL_QUTRIT_PURE {
        return Err(Error::NotExtremal(format!("n * n differs from n by {dev:e}")));
    }
    let basis = gellmann_basis(3)?;
    let mut y = vec![0.0; 9];
    y[0] = 0.5 * (2.0f64 / 3.0).sqrt();
    for a in 0..8 {
        y[a + 1] = n[a] / 3f64.sqrt();
    }
    let op = from_dual(&DualVector { dim: 3, y }, &basis)?;
    PureDensity::new(op)
}

/// Sorted spectrum (descending), a point of the Weyl chamber of the simplex.
pub fn weyl_reduce(rho: &DensityState) -> Vec<f64> {
    rho.spectrum.clone()
}

pub fn same_unitary_orbit(a: &DensityState, b: &DensityState) -> bool {
    a.dim() == b.dim() && weyl_reduce(a).iter().zip(weyl_reduce(b)).all(|(x, y)| (x - y).abs() <= 1e-10)
}

/// Batch reduction as CSV `idx,a,b,c` (columns follow the dimension).
pub fn weyl_csv(states: &[DensityState]) -> String {
    let n = states.first().map(|s| s.dim()).unwrap_or(3);
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut out = format!("idx,{}\n", names.join(","));
    for (i, s) in states.iter().enumerate() {
        let vals: Vec<String> = weyl_reduce(s).iter().map(|v| csv(*v)).collect();
        out.push_str(&format!("{i},{}\n", vals.join(",")));
    }
    out
}

/// Real dimension of the unitary (coadjoint) orbit through `rho`, the rank of `Lambda` there.
pub fn orbit_dimension(rho: &DensityState) -> Result<usize> {
    let y = to_dual(&rho.op, &gellmann_basis(rho.dim())?)?;
    Ok(lambda_at(&y)?.rank())
}

#[derive(Clone, Debug, Serialize)]
pub struct TangencyReport {
    pub rank: usize,
    /// `(t, residual)` at each interior sample.
    pub residuals: Vec<(f64, f64)>,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl TangencyReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("t,residual\n");
        for (t, r) in &self.residuals {
            s.push_str(&format!("{},{}\n", csv(*t), csv(*r)));
        }
        s
    }
}

/// Traceless part of the `D_1` distribution at `rho`, as an orthonormal
/// basis in y-coordinates.
pub fn stratum_tangent_space(rho: &HermitianOperator) -> Result<DMatrix<f64>> {
    let n = rho.dim();
    let basis = gellmann_basis(n)?;
    let d1 = distributions_at(&to_dual(rho, &basis)?)?.d1;
    let m = n * n;
    let traceless = DMatrix::from_fn(m, m - 1, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
    Ok(subspace_intersection(&d1, &traceless))
}

/// Checks that the central-difference velocity of a sampled curve of rank-`k`
/// states lies in the tangent space of `D^k` at every interior sample.
pub fn tangency_check(curve: &[(f64, HermitianOperator)], k: usize) -> Result<TangencyReport> {
    if curve.len() < 3 {
        return Err(Error::InvalidCurve(format!("need at least 3 samples, got {}", curve.len())));
    }
    let h = curve[1].0 - curve[0].0;
    if !(h > 0.0) {
        return Err(Error::InvalidCurve("sample times must increase".into()));
    }
    for w in curve.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::InvalidCurve("sample spacing is not uniform".into()));
        }
    }
    for (t, op) in curve {
        match certify_density(op) {
            Certification::Accepted(s) if s.rank == k => {}
            Certification::Accepted(s) => {
                return Err(Error::InvalidCurve(format!("sample at t={t} has rank {}, expected {k}", s.rank)))
            }
            Certification::Rejected(r) => {
                return Err(Error::InvalidCurve(format!("sample at t={t} is not a state: {}", r.describe())))
            }
        }
    }
    let basis = gellmann_basis(curve[0].1.dim())?;
    let mut residuals = Vec::with_capacity(curve.len() - 2);
    for i in 1..curve.len() - 1 {
        let velocity = curve[i + 1].1.sub(&curve[i - 1].1).scale(0.5 / h);
        let v = DVector::from_vec(to_dual(&velocity, &basis)?.y);
        let tangent = stratum_tangent_space(&curve[i].1)?;
        residuals.push((curve[i].0, orthogonal_residual(&tangent, &v).norm()));
    }
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(TangencyReport { rank: k, residuals, max_residual, tolerance: TOL_TANGENT })
}
