//! Numerical checks built on the tangents: symmetry reports, the six-path
//! stability sweep, Hill / TSTS-M⁺⁺ / determinant checks, hypoelastic
//! integration and the rate-identity audit.
//!
//! Every randomised check takes an explicit seed and records it in its report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kinematics::{make_state, spd_log, sym_eigen, sym_exp, velocity_split, DeformationState};
use crate::linalg::{det_lu, jacobi_eigen};
use crate::materials::MaterialModel;
use crate::path::MotionPath;
use crate::rates::{rate_value, rotated_frame_zj, stress_on_path, RateInput, RateKind, StressMeasure};
use crate::sample;
use crate::tangents::{abaqus_ddsdde, hzj_sigma_from_tau, kirchhoff_tangent, INPUT_SYM_TOL};
use crate::tensor::{
    apply4, eig_sym6, mandel_basis, symmetry_flags, tensor_from_mandel_vec, to_mandel_with_tol, traceless_basis,
    Tensor2, Tensor4,
};
use crate::uniaxial::grid;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Outcome of one check. `passed` is true iff `failures` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub seed: Option<u64>,
    pub samples: usize,
    pub metrics: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub details: BTreeMap<String, Value>,
}

impl CheckReport {
    fn new(check: &str, seed: Option<u64>) -> Self {
        CheckReport {
            check: check.to_string(),
            passed: true,
            seed,
            samples: 0,
            metrics: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    fn metric(&mut self, key: &str, v: f64) {
        self.metrics.insert(key.to_string(), v);
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
        self.passed = false;
    }

    pub fn get(&self, key: &str) -> f64 {
        self.metrics.get(key).copied().unwrap_or(f64::NAN)
    }
}

/// Symmetry flags of `t` plus the norm of the antisymmetric part of its
/// Mandel matrix (exactly the major-symmetry defect for minor-symmetric `t`).
pub fn symmetry_report(t: &Tensor4, tol: f64) -> CheckReport {
    let flags = symmetry_flags(t, tol);
    let mut r = CheckReport::new("symmetry", None);
    r.samples = 1;
    r.metric("norm", flags.norm);
    r.metric("minor_left", flags.residuals.minor_left);
    r.metric("minor_right", flags.residuals.minor_right);
    r.metric("major", flags.residuals.major);
    r.metric("major_absolute", flags.absolute.major);
    r.metric("tol", tol);
    if let Ok(m) = to_mandel_with_tol(t, tol) {
        r.metric("mandel_skew_norm", m.skew_norm());
    }
    for (ok, what) in [(flags.minor_left, "minor-left"), (flags.minor_right, "minor-right"), (flags.major, "major")] {
        if !ok {
            r.fail(format!("{what} symmetry violated beyond {tol:e}"));
        }
    }
    r
}

// ---------------------------------------------------------------------------
// stability sweep

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardPath {
    UniaxialTension,
    UniaxialCompression,
    EquibiaxialTension,
    EquibiaxialCompression,
    PlanarTension,
    PlanarCompression,
}

impl StandardPath {
    pub const ALL: [StandardPath; 6] = [
        StandardPath::UniaxialTension,
        StandardPath::UniaxialCompression,
        StandardPath::EquibiaxialTension,
        StandardPath::EquibiaxialCompression,
        StandardPath::PlanarTension,
        StandardPath::PlanarCompression,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StandardPath::UniaxialTension => "uniaxial_tension",
            StandardPath::UniaxialCompression => "uniaxial_compression",
            StandardPath::EquibiaxialTension => "equibiaxial_tension",
            StandardPath::EquibiaxialCompression => "equibiaxial_compression",
            StandardPath::PlanarTension => "planar_tension",
            StandardPath::PlanarCompression => "planar_compression",
        }
    }

    fn is_compression(&self) -> bool {
        matches!(
            self,
            StandardPath::UniaxialCompression | StandardPath::EquibiaxialCompression | StandardPath::PlanarCompression
        )
    }

    /// Principal stretch `s` driven along the path: `λ` in tension, `1/λ` in compression.
    pub fn stretch(&self, lam: f64) -> f64 {
        if self.is_compression() {
            1.0 / lam
        } else {
            lam
        }
    }

    pub fn f(&self, lam: f64, isochoric: bool) -> Tensor2 {
        let s = self.stretch(lam);
        match (self, isochoric) {
            (StandardPath::UniaxialTension | StandardPath::UniaxialCompression, false) => Tensor2::diag(s, 1.0, 1.0),
            (StandardPath::UniaxialTension | StandardPath::UniaxialCompression, true) => {
                let r = s.sqrt().recip();
                Tensor2::diag(s, r, r)
            }
            (StandardPath::EquibiaxialTension | StandardPath::EquibiaxialCompression, false) => {
                Tensor2::diag(s, s, 1.0)
            }
            (StandardPath::EquibiaxialTension | StandardPath::EquibiaxialCompression, true) => {
                Tensor2::diag(s, s, 1.0 / (s * s))
            }
            (StandardPath::PlanarTension | StandardPath::PlanarCompression, _) => Tensor2::diag(s, 1.0 / s, 1.0),
        }
    }

    pub fn describe(&self, isochoric: bool) -> String {
        let s = if self.is_compression() { "s = 1/λ" } else { "s = λ" };
        let f = match (self, isochoric) {
            (StandardPath::UniaxialTension | StandardPath::UniaxialCompression, false) => "diag(s, 1, 1)",
            (StandardPath::UniaxialTension | StandardPath::UniaxialCompression, true) => "diag(s, s^-1/2, s^-1/2)",
            (StandardPath::EquibiaxialTension | StandardPath::EquibiaxialCompression, false) => "diag(s, s, 1)",
            (StandardPath::EquibiaxialTension | StandardPath::EquibiaxialCompression, true) => "diag(s, s, s^-2)",
            (StandardPath::PlanarTension | StandardPath::PlanarCompression, _) => "diag(s, 1/s, 1)",
        };
        format!("F = {f}, {s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { min: 0.1, max: 10.0, step: 0.01 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        grid(self.min, self.max, self.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub stretch: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub min_eigenvalue: Option<f64>,
    pub stable: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSweep {
    pub path: StandardPath,
    pub parameterisation: String,
    pub records: Vec<SweepRecord>,
    pub unstable_points: usize,
    pub failed_points: usize,
    /// Unstable grid point reached first when loading away from `λ = 1`,
    /// i.e. the one with the smallest `|log s|`.
    pub first_unstable_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub model: String,
    /// `full` (6×6 Mandel) or `traceless` (5×5 block on `tr D = 0`).
    pub subspace: String,
    pub grid: GridSpec,
    pub criterion: String,
    pub paths: Vec<PathSweep>,
    pub evaluations: usize,
    pub unstable_points: usize,
    pub failed_points: usize,
    pub all_stable: bool,
}

fn sym5_min_eigenvalue(m: &[[f64; 5]; 5]) -> f64 {
    let s: [[f64; 5]; 5] = std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (m[i][j] + m[j][i])));
    jacobi_eigen(&s).0[0]
}

/// `(J, λ_min)` of the Abaqus tangent `𝔻 = J⁻¹ ℍ^ZJ_τ` at `F`.
pub fn abaqus_min_eigenvalue(model: &dyn MaterialModel, f: &Tensor2) -> Result<(f64, f64)> {
    let state = make_state(f)?;
    let h = kirchhoff_tangent(model, &state)?;
    let m = to_mandel_with_tol(&abaqus_ddsdde(&h, state.j)?, INPUT_SYM_TOL)?;
    let min = if model.is_incompressible() { sym5_min_eigenvalue(&m.traceless_block()) } else { eig_sym6(&m).min() };
    if !min.is_finite() {
        return Err(Error::ModelEvaluationFailed(format!("non-finite eigenvalue at F = {:?}", f.0)));
    }
    Ok((state.j, min))
}

pub fn stability_sweep(model: &dyn MaterialModel, spec: GridSpec, paths: &[StandardPath]) -> Result<SweepReport> {
    let lams = spec.points()?;
    let iso = model.is_incompressible();
    let paths: Vec<PathSweep> = paths
        .iter()
        .map(|&p| {
            let records: Vec<SweepRecord> = lams
                .iter()
                .map(|&lam| {
                    let f = p.f(lam, iso);
                    match abaqus_min_eigenvalue(model, &f) {
                        Ok((j, min)) => SweepRecord {
                            lambda: lam,
                            stretch: p.stretch(lam),
                            j,
                            min_eigenvalue: Some(min),
                            stable: min > 0.0,
                            error: None,
                        },
                        Err(e) => SweepRecord {
                            lambda: lam,
                            stretch: p.stretch(lam),
                            j: f.det(),
                            min_eigenvalue: None,
                            stable: false,
                            error: Some(e.to_string()),
                        },
                    }
                })
                .collect();
            let first_unstable_lambda = records
                .iter()
                .filter(|r| r.error.is_none() && !r.stable)
                .min_by(|a, b| a.stretch.ln().abs().total_cmp(&b.stretch.ln().abs()))
                .map(|r| r.lambda);
            PathSweep {
                path: p,
                parameterisation: p.describe(iso),
                unstable_points: records.iter().filter(|r| r.error.is_none() && !r.stable).count(),
                failed_points: records.iter().filter(|r| r.error.is_some()).count(),
                first_unstable_lambda,
                records,
            }
        })
        .collect();
    let unstable_points = paths.iter().map(|p| p.unstable_points).sum();
    let failed_points = paths.iter().map(|p| p.failed_points).sum();
    Ok(SweepReport {
        model: model.name().to_string(),
        subspace: if iso { "traceless" } else { "full" }.to_string(),
        grid: spec,
        criterion: "min eigenvalue of sym Mandel(J^-1 H^ZJ_tau) > 0".to_string(),
        evaluations: paths.iter().map(|p| p.records.len()).sum(),
        unstable_points,
        failed_points,
        all_stable: unstable_points == 0 && failed_points == 0,
        paths,
    })
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path,lambda,stretch,J,min_eigenvalue,stable\n");
        for p in &self.paths {
            for r in &p.records {
                let eig = r.min_eigenvalue.map(|v| format!("{v:.17e}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{:.10},{:.17e},{:.17e},{},{}",
                    p.path.as_str(),
                    r.lambda,
                    r.stretch,
                    r.j,
                    eig,
                    u8::from(r.stable)
                );
            }
        }
        out
    }

    pub fn summary_line(&self) -> String {
        if self.all_stable {
            format!("stable: all {} paths ({} evaluations)", self.paths.len(), self.evaluations)
        } else {
            let bad: Vec<_> = self
                .paths
                .iter()
                .filter(|p| p.unstable_points + p.failed_points > 0)
                .map(|p| match p.first_unstable_lambda {
                    Some(l) => format!("{} (first at λ = {l:.2})", p.path.as_str()),
                    None => format!("{} ({} failed points)", p.path.as_str(), p.failed_points),
                })
                .collect();
            format!("unstable: {} of {} paths: {}", bad.len(), self.paths.len(), bad.join(", "))
        }
    }
}

// ---------------------------------------------------------------------------
// Hill, TSTS-M⁺⁺ and determinant checks

fn isochoric_stretch(v: &Tensor2) -> Result<Tensor2> {
    sym_exp(&spd_log(v)?.dev())
}

/// Samples pairs of left stretches and tests
/// `⟨τ(log V₁) − τ(log V₂), log V₁ − log V₂⟩ > 0`.
pub fn hill_check(model: &dyn MaterialModel, n_samples: usize, seed: u64) -> Result<CheckReport> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("hill_check needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = CheckReport::new("hill", Some(seed));
    r.notes.push(
        "the second-order work check of some commercial codes (sum of dσ_ij dε_ij > 0) is read here as \
         Hill's inequality in log V; no separate check is made"
            .into(),
    );
    let mut min_q = f64::INFINITY;
    let mut violations = 0usize;
    let mut skipped = 0usize;
    for _ in 0..n_samples {
        let (mut v1, mut v2) = (sample::spd(&mut rng, 1.5), sample::spd(&mut rng, 1.5));
        if model.is_incompressible() {
            v1 = isochoric_stretch(&v1)?;
            v2 = isochoric_stretch(&v2)?;
        }
        let (s1, s2) = (make_state(&v1)?, make_state(&v2)?);
        let dx = s1.log_v - s2.log_v;
        let n2 = dx.inner(&dx);
        if n2 < 1e-24 {
            skipped += 1;
            continue;
        }
        let q = (model.kirchhoff(&s1)? - model.kirchhoff(&s2)?).inner(&dx) / n2;
        if q < min_q {
            min_q = q;
        }
        if !(q > 0.0) {
            violations += 1;
            r.details.entry("violating_pair".into()).or_insert_with(|| json!({ "V1": v1, "V2": v2, "quotient": q }));
        }
    }
    r.samples = n_samples - skipped;
    r.metric("min_quotient", min_q);
    r.metric("violations", violations as f64);
    r.metric("skipped_degenerate", skipped as f64);
    if violations > 0 {
        r.fail(format!("Hill's inequality violated by {violations} of {} pairs (min quotient {min_q:e})", r.samples));
    }
    Ok(r)
}

/// Directions spanning the admissible stretchings in Mandel order.
fn directions(traceless: bool) -> Vec<Tensor2> {
    if traceless {
        traceless_basis().iter().map(tensor_from_mandel_vec).collect()
    } else {
        mandel_basis().to_vec()
    }
}

fn min_sym_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let s = |i: usize, j: usize| 0.5 * (m[i][j] + m[j][i]);
    if n == 5 {
        jacobi_eigen(&std::array::from_fn::<[f64; 5], 5, _>(|i| std::array::from_fn(|j| s(i, j)))).0[0]
    } else {
        jacobi_eigen(&std::array::from_fn::<[f64; 6], 6, _>(|i| std::array::from_fn(|j| s(i, j)))).0[0]
    }
}

fn det_of(m: &[Vec<f64>]) -> f64 {
    if m.len() == 5 {
        det_lu(&std::array::from_fn::<[f64; 5], 5, _>(|i| std::array::from_fn(|j| m[i][j])))
    } else {
        det_lu(&std::array::from_fn::<[f64; 6], 6, _>(|i| std::array::from_fn(|j| m[i][j])))
    }
}

/// Matrix of `D_{log V} σ̂` on `dirs` by Richardson-extrapolated central
/// differences in logarithmic coordinates, `V = exp X`.
fn d_log_v_sigma(model: &dyn MaterialModel, log_v: &Tensor2, dirs: &[Tensor2]) -> Result<Vec<Vec<f64>>> {
    let h = 1e-4 * (1.0 + log_v.norm());
    let sigma = |x: &Tensor2| -> Result<Tensor2> {
        let s = make_state(&sym_exp(x)?)?;
        Ok(model.kirchhoff(&s)? / s.j)
    };
    let central = |n: &Tensor2, step: f64| -> Result<Tensor2> {
        Ok((sigma(&(*log_v + *n * step))? - sigma(&(*log_v - *n * step))?) / (2.0 * step))
    };
    let cols =
        dirs.iter().map(|n| Ok((central(n, 0.5 * h)? * 4.0 - central(n, h)?) / 3.0)).collect::<Result<Vec<_>>>()?;
    Ok(dirs.iter().map(|a| cols.iter().map(|c| a.inner(c)).collect()).collect())
}

/// Matrix of `ℍ^ZJ(σ)` on `dirs`.
fn hzj_sigma_matrix(model: &dyn MaterialModel, state: &DeformationState, dirs: &[Tensor2]) -> Result<Vec<Vec<f64>>> {
    let stresses = model.stresses(state)?;
    let h = hzj_sigma_from_tau(&kirchhoff_tangent(model, state)?, &stresses.sigma, state.j)?;
    let cols: Vec<Tensor2> = dirs.iter().map(|d| apply4(&h, d)).collect();
    Ok(dirs.iter().map(|a| cols.iter().map(|c| a.inner(c)).collect()).collect())
}

/// TSTS-M⁺⁺ at one state: positive definiteness of `sym D_{log V} σ̂`,
/// cross-checked against positivity of `⟨sym ℍ^ZJ(σ).D, D⟩`.
/// Incompressible models are tested on `tr D = 0` only.
pub fn tsts_check(
    model: &dyn MaterialModel,
    state: &DeformationState,
    n_random: usize,
    seed: u64,
) -> Result<CheckReport> {
    let traceless = model.is_incompressible();
    let dirs = directions(traceless);
    let mut r = CheckReport::new("tsts", Some(seed));
    let dsig = d_log_v_sigma(model, &state.log_v, &dirs)?;
    let hs = hzj_sigma_matrix(model, state, &dirs)?;
    let tsts_min = min_sym_eigenvalue(&dsig);
    let hzj_min = min_sym_eigenvalue(&hs);
    r.metric("tsts_min_eigenvalue", tsts_min);
    r.metric("sym_hzj_sigma_min_eigenvalue", hzj_min);
    r.metric("hzj_sigma_det", det_of(&hs));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_q = f64::INFINITY;
    let sym_h = state_hzj_sigma(model, state)?;
    for _ in 0..n_random {
        let mut d = sample::symmetric(&mut rng, 1.0);
        if traceless {
            d = d.dev();
        }
        let q = apply4(&sym_h, &d).inner(&d) / d.inner(&d);
        min_q = min_q.min(q);
    }
    r.samples = 1 + n_random;
    if n_random > 0 {
        r.metric("random_min_quotient", min_q);
    }
    let tsts_ok = tsts_min > 0.0;
    let hzj_ok = hzj_min > 0.0;
    r.details.insert("tsts_positive".into(), json!(tsts_ok));
    r.details.insert("sym_hzj_sigma_positive".into(), json!(hzj_ok));
    r.details.insert("subspace".into(), json!(if traceless { "traceless" } else { "full" }));
    if !tsts_ok {
        r.fail(format!("sym D_logV sigma not positive definite (min eigenvalue {tsts_min:e})"));
    }
    if tsts_ok != hzj_ok {
        r.fail(format!("verdicts disagree: TSTS min {tsts_min:e}, sym H^ZJ(sigma) min {hzj_min:e}"));
    }
    if n_random > 0 && hzj_ok && !(min_q > 0.0) {
        r.fail(format!("random stretching with non-positive quotient {min_q:e} despite positive spectrum"));
    }
    Ok(r)
}

fn state_hzj_sigma(model: &dyn MaterialModel, state: &DeformationState) -> Result<Tensor4> {
    let stresses = model.stresses(state)?;
    hzj_sigma_from_tau(&kirchhoff_tangent(model, state)?, &stresses.sigma, state.j)
}

/// Sign of `det ℍ^ZJ(σ)` along `path` at the times `ts`, audited against the
/// implication TSTS-M⁺⁺ ⇒ `det > 0`.
pub fn det_scan(model: &dyn MaterialModel, path: &MotionPath, ts: &[f64]) -> Result<CheckReport> {
    path.validate()?;
    let dirs = directions(model.is_incompressible());
    let mut r = CheckReport::new("det_scan", None);
    let mut points = Vec::with_capacity(ts.len());
    let mut counterexamples = 0usize;
    let mut crossings = Vec::new();
    let mut prev: Option<f64> = None;
    for &t in ts {
        let state = make_state(&path.f(t))?;
        let det = det_of(&hzj_sigma_matrix(model, &state, &dirs)?);
        let tsts = tsts_check(model, &state, 0, DEFAULT_SEED)?;
        let tsts_pass = tsts.get("tsts_min_eigenvalue") > 0.0;
        if tsts_pass && !(det > 0.0) {
            counterexamples += 1;
        }
        if let Some(p) = prev {
            if (p > 0.0) != (det > 0.0) {
                crossings.push(t);
            }
        }
        prev = Some(det);
        points.push(json!({ "t": t, "det": det, "tsts_pass": tsts_pass }));
    }
    r.samples = ts.len();
    r.metric("bendixson_counterexamples", counterexamples as f64);
    r.metric("zero_crossings", crossings.len() as f64);
    r.metric("min_det", points.iter().filter_map(|p| p["det"].as_f64()).fold(f64::INFINITY, f64::min));
    r.details.insert("points".into(), Value::Array(points));
    r.details.insert("crossings_t".into(), json!(crossings));
    if !crossings.is_empty() {
        r.notes.push(format!("det H^ZJ(sigma) changes sign {} time(s) along the path", crossings.len()));
    }
    if counterexamples > 0 {
        r.fail(format!("{counterexamples} grid point(s) pass TSTS-M++ but have det <= 0"));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// hypoelastic integration

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Euler,
    Rk4,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Scheme::Euler),
            "rk4" => Ok(Scheme::Rk4),
            _ => Err(Error::InvalidInput(format!("unknown scheme `{s}` (expected euler or rk4)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationReport {
    pub scheme: Scheme,
    pub steps: usize,
    pub path: String,
    pub t_span: (f64, f64),
    /// True when the tangent is evaluated at the state reconstructed from
    /// the integrated stress; false when it falls back to `F(t)`.
    pub stress_driven: bool,
    /// `τ` after each step, starting with the initial value.
    pub tau_numeric: Vec<Tensor2>,
    pub tau_exact_terminal: Tensor2,
    pub terminal_relative_error: f64,
    /// Largest relative deviation from the closed-form stress over all steps.
    pub max_drift: f64,
    /// Largest change of any principal Kirchhoff stress relative to `t₀`.
    pub max_eigenvalue_drift: f64,
}

fn rel_err(a: &Tensor2, exact: &Tensor2) -> f64 {
    let n = exact.norm();
    let d = (*a - *exact).norm();
    if n > 0.0 {
        d / n
    } else {
        d
    }
}

fn closed_form_tau(model: &dyn MaterialModel, path: &MotionPath, t: f64) -> Result<Tensor2> {
    model.kirchhoff(&make_state(&path.f(t))?)
}

/// `τ̇ = ℍ^ZJ_τ(τ).D + Wτ − τW`.
fn tau_rate(model: &dyn MaterialModel, path: &MotionPath, t: f64, tau: &Tensor2, step: usize) -> Result<Tensor2> {
    let det = path.f(t).det();
    if !(det > 0.0) {
        return Err(Error::StepRejected { step, det });
    }
    let v = velocity_split(&path.l(t)?);
    let state = match model.left_stretch_from_kirchhoff(tau) {
        Some(stretch) => make_state(&stretch?)?,
        None => make_state(&path.f(t))?,
    };
    let h = kirchhoff_tangent(model, &state)?;
    Ok((apply4(&h, &v.d) + v.w * *tau - *tau * v.w).sym())
}

pub fn integrate_hypoelastic(
    model: &dyn MaterialModel,
    path: &MotionPath,
    scheme: Scheme,
    n_steps: usize,
) -> Result<IntegrationReport> {
    if n_steps == 0 {
        return Err(Error::InvalidInput("at least one step is required".into()));
    }
    path.validate()?;
    let (t0, t1) = path.t_span;
    let dt = (t1 - t0) / n_steps as f64;
    let tau0 = closed_form_tau(model, path, t0)?;
    let eig0 = sym_eigen(&tau0).0;
    let mut tau = tau0;
    let mut history = Vec::with_capacity(n_steps + 1);
    history.push(tau);
    let (mut max_drift, mut max_eig): (f64, f64) = (0.0, 0.0);
    for k in 0..n_steps {
        let t = t0 + dt * k as f64;
        let f = |s: f64, x: &Tensor2| tau_rate(model, path, s, x, k + 1);
        tau = match scheme {
            Scheme::Euler => tau + f(t, &tau)? * dt,
            Scheme::Rk4 => {
                let k1 = f(t, &tau)?;
                let k2 = f(t + 0.5 * dt, &(tau + k1 * (0.5 * dt)))?;
                let k3 = f(t + 0.5 * dt, &(tau + k2 * (0.5 * dt)))?;
                let k4 = f(t + dt, &(tau + k3 * dt))?;
                tau + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
            }
        };
        let t_next = if k + 1 == n_steps { t1 } else { t0 + dt * (k + 1) as f64 };
        max_drift = max_drift.max(rel_err(&tau, &closed_form_tau(model, path, t_next)?));
        let eig = sym_eigen(&tau).0;
        max_eig = (0..3).map(|i| (eig[i] - eig0[i]).abs()).fold(max_eig, f64::max);
        history.push(tau);
    }
    let exact = closed_form_tau(model, path, t1)?;
    Ok(IntegrationReport {
        scheme,
        steps: n_steps,
        path: path.label.clone(),
        t_span: path.t_span,
        stress_driven: model.left_stretch_from_kirchhoff(&tau0).is_some(),
        terminal_relative_error: rel_err(&tau, &exact),
        tau_exact_terminal: exact,
        tau_numeric: history,
        max_drift,
        max_eigenvalue_drift: max_eig,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub scheme: Scheme,
    pub steps: [usize; 3],
    /// Terminal errors against the closed-form stress.
    pub errors: [f64; 3],
    /// `log₂(‖τ_n − τ_2n‖ / ‖τ_2n − τ_4n‖)`, independent of the closed form.
    pub richardson_order: f64,
    /// `log₂(e_2n / e_4n)` from the closed-form errors.
    pub exact_order: f64,
}

pub fn convergence_order(
    model: &dyn MaterialModel,
    path: &MotionPath,
    scheme: Scheme,
    base_steps: usize,
) -> Result<OrderEstimate> {
    let steps = [base_steps, 2 * base_steps, 4 * base_steps];
    let runs = steps.iter().map(|&n| integrate_hypoelastic(model, path, scheme, n)).collect::<Result<Vec<_>>>()?;
    let end = |r: &IntegrationReport| *r.tau_numeric.last().expect("non-empty history");
    let d1 = (end(&runs[0]) - end(&runs[1])).norm();
    let d2 = (end(&runs[1]) - end(&runs[2])).norm();
    let errors = [runs[0].terminal_relative_error, runs[1].terminal_relative_error, runs[2].terminal_relative_error];
    Ok(OrderEstimate {
        scheme,
        steps,
        errors,
        richardson_order: (d1 / d2).log2(),
        exact_order: (errors[1] / errors[2]).log2(),
    })
}

// ---------------------------------------------------------------------------
// rate identities

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditOptions {
    /// Step of the central differences for material time derivatives.
    pub fd_step: f64,
    /// Relative residual bound for each identity.
    pub tol: f64,
    /// Required residual reduction of identities (a) and (b) when the step
    /// is halved. Residuals already below the roundoff level `ε/h` are exempt.
    pub min_ratio: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { fd_step: 1e-5, tol: 1e-6, min_ratio: 3.0 }
    }
}

/// Relative residuals of the three identities at one time and step.
fn identity_residuals(model: &dyn MaterialModel, path: &MotionPath, t: f64, h: f64) -> Result<[f64; 3]> {
    let state = make_state(&path.f(t))?;
    let j = state.j;
    let l = path.l(t)?;
    let at = |s: f64, m| stress_on_path(model, path, s, m);
    let tau = model.kirchhoff(&state)?;
    let sigma = tau / j;
    let tau_dot = (at(t + h, StressMeasure::Kirchhoff)? - at(t - h, StressMeasure::Kirchhoff)?) / (2.0 * h);
    let sigma_dot = (at(t + h, StressMeasure::Cauchy)? - at(t - h, StressMeasure::Cauchy)?) / (2.0 * h);
    let tau_in = RateInput::new(tau, tau_dot, l);
    let sig_in = RateInput::new(sigma, sigma_dot, l);
    let scale_tau = tau_dot.norm() + 2.0 * tau.norm() * l.norm();
    let scale_sig = sigma_dot.norm() + 3.0 * sigma.norm() * l.norm();
    let rel = |a: Tensor2, b: Tensor2, scale: f64| {
        let s = a.norm().max(b.norm()).max(scale);
        if s > 0.0 {
            (a - b).norm() / s
        } else {
            0.0
        }
    };

    let zj_tau = rate_value(RateKind::ZarembaJaumann, &tau_in)?;
    let a = rel(zj_tau, rate_value(RateKind::BiezenoHencky, &sig_in)? * j, scale_tau);
    let b = rel(rate_value(RateKind::Truesdell, &sig_in)?, rate_value(RateKind::LieKirchhoff, &tau_in)? / j, scale_sig);
    let contracted = apply4(&kirchhoff_tangent(model, &state)?, &l.sym());
    let frame = rotated_frame_zj(path, t, h, model, StressMeasure::Kirchhoff)?;
    let c = rel(contracted, frame, scale_tau);
    Ok([a, b, c])
}

/// Checks at `t_samples` interior times:
/// (a) `D^ZJ[τ] = J D^Hencky[σ]`, (b) `D^TR[σ] = J⁻¹ 𝓛_v τ`,
/// (c) `ℍ^ZJ_τ.D` equals the rotated-frame difference quotient.
pub fn rate_identity_audit(
    model: &dyn MaterialModel,
    path: &MotionPath,
    t_samples: usize,
    opts: AuditOptions,
) -> Result<CheckReport> {
    if t_samples == 0 {
        return Err(Error::InvalidInput("rate_identity_audit needs at least one sample".into()));
    }
    path.validate()?;
    let (t0, t1) = path.t_span;
    let h = opts.fd_step;
    let mut worst = [[0.0f64; 3]; 2];
    for k in 0..t_samples {
        let t = t0 + (t1 - t0) * (k as f64 + 0.5) / t_samples as f64;
        for (slot, step) in [h, 0.5 * h].into_iter().enumerate() {
            let res = identity_residuals(model, path, t, step)?;
            for i in 0..3 {
                worst[slot][i] = worst[slot][i].max(res[i]);
            }
        }
    }
    let mut r = CheckReport::new("rate_identities", None);
    r.samples = t_samples;
    r.metric("fd_step", h);
    let floor = f64::EPSILON / h;
    r.metric("roundoff_floor", floor);
    let names = ["zj_tau_vs_hencky_sigma", "truesdell_vs_lie", "tangent_vs_rotated_frame"];
    for (i, name) in names.iter().enumerate() {
        let (full, half) = (worst[0][i], worst[1][i]);
        let ratio = if half > 0.0 { full / half } else { f64::INFINITY };
        r.metric(&format!("{name}_residual"), full);
        r.metric(&format!("{name}_residual_half_step"), half);
        r.metric(&format!("{name}_reduction"), ratio);
        if !(full <= opts.tol) {
            r.fail(format!("{name}: residual {full:e} exceeds {:e}", opts.tol));
        }
        if i == 2 {
            continue;
        }
        if full <= floor {
            r.notes.push(format!("{name}: residual below roundoff level {floor:.1e}, reduction not tested"));
        } else if !(ratio >= opts.min_ratio) {
            r.fail(format!("{name}: halving the step reduced the residual only {ratio:.2}x"));
        }
    }
    Ok(r)
}
