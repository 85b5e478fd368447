//! Command implementations. Each returns an [`Outcome`]; rendering and exit
//! codes are handled by the caller.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use zjtangent::kinematics::make_state;
use zjtangent::materials::{MaterialModel, Model};
use zjtangent::path::MotionPath;
use zjtangent::tangents::{hzj_sigma_from_tau, kirchhoff_tangent, TangentSet};
use zjtangent::tensor::{apply4, otimes_down, otimes_downup, otimes_up, outer, sym_downup, Tensor2, Tensor4};
use zjtangent::uniaxial::{monotonicity_scan, ScalarLaw};
use zjtangent::verify::{
    det_scan, hill_check, integrate_hypoelastic, stability_sweep, symmetry_report, tsts_check, GridSpec, Scheme,
    StandardPath,
};

use crate::config::{named_path, ConfigError, Tolerances};

pub struct Outcome {
    pub command: &'static str,
    pub result: Value,
    pub csv: Option<String>,
    pub failures: Vec<String>,
    /// One human-readable line for stderr.
    pub summary: String,
}

/// Fully resolved inputs, after merging the config file and flags.
pub struct Settings {
    pub model: Model,
    pub f: Option<Tensor2>,
    pub path: Option<MotionPath>,
    pub range: Option<(f64, f64, Option<f64>)>,
    pub step: Option<f64>,
    pub scheme: Scheme,
    pub steps: usize,
    pub seed: u64,
    pub samples: usize,
    pub law: String,
    pub tol: Tolerances,
    pub p: Tensor2,
    pub q: Tensor2,
    pub z: Tensor2,
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, ConfigError> {
    serde_json::to_value(t).map_err(|e| ConfigError(format!("serialisation failed: {e}")))
}

fn grid_spec(s: &Settings, default: GridSpec) -> GridSpec {
    let (min, max, step) = match s.range {
        Some((a, b, c)) => (a, b, c.or(s.step).unwrap_or(default.step)),
        None => (default.min, default.max, s.step.unwrap_or(default.step)),
    };
    GridSpec { min, max, step }
}

pub fn tangent(s: &Settings) -> Result<Outcome, ConfigError> {
    let f = s.f.ok_or_else(|| ConfigError("tangent needs a deformation gradient (--F)".into()))?;
    let state = make_state(&f)?;
    let set = TangentSet::build(&s.model, &state, s.tol.sym)?;
    let r = set.residuals;
    let t = s.tol;
    let mut failures = Vec::new();
    let mut bound = |name: &str, v: Option<f64>, tol: f64| {
        if let Some(v) = v {
            if !(v <= tol) {
                failures.push(format!("{name} = {v:e} exceeds {tol:e}"));
            }
        }
    };
    bound("tau_absolute_vs_lagrangian", Some(r.tau_absolute_vs_lagrangian), t.cross_exact);
    bound("tau_absolute_vs_direct", r.tau_absolute_vs_direct, t.cross);
    bound("tau_lagrangian_vs_direct", r.tau_lagrangian_vs_direct, t.cross);
    bound("sigma_absolute_vs_from_tau", Some(r.sigma_absolute_vs_from_tau), t.cross);
    bound("bridge", Some(r.bridge), t.bridge);
    let sym = set.symmetry;
    for (name, flags) in [
        ("h_zj_tau_absolute", Some(sym.tau_absolute)),
        ("h_zj_tau_lagrangian", Some(sym.tau_lagrangian)),
        ("h_zj_tau_direct", sym.tau_direct),
    ] {
        if let Some(fl) = flags {
            if !fl.all() {
                failures.push(format!("{name} is not fully symmetric at tolerance {:e}", t.sym));
            }
        }
    }
    let sigma_sym = symmetry_report(&set.h_zj_sigma_absolute, t.sym);
    let summary = format!(
        "J = {:.6}; abs/lag {:.1e}, abs/direct {}, bridge {:.1e}",
        state.j,
        r.tau_absolute_vs_lagrangian,
        r.tau_absolute_vs_direct.map_or("n/a".to_string(), |v| format!("{v:.1e}")),
        r.bridge
    );
    Ok(Outcome {
        command: "tangent",
        result: json!({
            "model": to_value(&s.model)?,
            "state": to_value(&state)?,
            "tangents": to_value(&set)?,
            "sigma_tangent_symmetry": to_value(&sigma_sym)?,
        }),
        csv: None,
        failures,
        summary,
    })
}

pub fn sweep(s: &Settings) -> Result<Outcome, ConfigError> {
    let spec = grid_spec(s, GridSpec::default());
    let report = stability_sweep(&s.model, spec, &StandardPath::ALL)?;
    let mut failures = Vec::new();
    if !report.all_stable {
        failures.push(format!(
            "{} unstable and {} failed grid points of {}",
            report.unstable_points, report.failed_points, report.evaluations
        ));
    }
    Ok(Outcome {
        command: "sweep",
        summary: report.summary_line(),
        csv: Some(report.to_csv()),
        result: to_value(&report)?,
        failures,
    })
}

pub fn check(s: &Settings) -> Result<Outcome, ConfigError> {
    let m = &s.model;
    let f = s.f.unwrap_or(Tensor2::IDENTITY);
    let state = make_state(&f)?;
    let h_tau = kirchhoff_tangent(m, &state)?;
    let sigma = m.stresses(&state)?.sigma;
    let symmetry = symmetry_report(&h_tau, s.tol.sym);
    let mut sigma_symmetry = symmetry_report(&hzj_sigma_from_tau(&h_tau, &sigma, state.j)?, s.tol.sym);
    sigma_symmetry.notes.push("informational: H^ZJ(sigma) is not expected to be major symmetric".into());
    let hill = hill_check(m, s.samples, s.seed)?;
    let tsts = tsts_check(m, &state, 100, s.seed)?;
    let path = match &s.path {
        Some(p) => p.clone(),
        None if m.is_incompressible() => named_path("uniaxial_isochoric", Some((0.5, 2.0)))?,
        None => MotionPath::uniaxial(0.5, 2.0),
    };
    let ts: Vec<f64> = (0..=100).map(|k| path.t_span.0 + (path.t_span.1 - path.t_span.0) * k as f64 / 100.0).collect();
    let det = det_scan(m, &path, &ts)?;
    let mut failures = Vec::new();
    for r in [&symmetry, &hill, &tsts, &det] {
        failures.extend(r.failures.iter().map(|f| format!("{}: {f}", r.check)));
    }
    let verdict = |r: &zjtangent::verify::CheckReport| if r.passed { "pass" } else { "FAIL" };
    let summary = format!(
        "symmetry {}, hill {}, tsts {}, det {}",
        verdict(&symmetry),
        verdict(&hill),
        verdict(&tsts),
        verdict(&det)
    );
    Ok(Outcome {
        command: "check",
        result: json!({
            "model": to_value(m)?,
            "F": to_value(&f)?,
            "symmetry": to_value(&symmetry)?,
            "sigma_tangent_symmetry": to_value(&sigma_symmetry)?,
            "hill": to_value(&hill)?,
            "tsts": to_value(&tsts)?,
            "det": to_value(&det)?,
        }),
        csv: None,
        failures,
        summary,
    })
}

pub fn simulate(s: &Settings) -> Result<Outcome, ConfigError> {
    let path = match &s.path {
        Some(p) => p.clone(),
        None => named_path("uniaxial", s.range.map(|(a, b, _)| (a, b)))?,
    };
    let report = integrate_hypoelastic(&s.model, &path, s.scheme, s.steps)?;
    let mut failures = Vec::new();
    if !(report.terminal_relative_error <= s.tol.integration) {
        failures.push(format!(
            "terminal relative error {:e} exceeds {:e}",
            report.terminal_relative_error, s.tol.integration
        ));
    }
    let mut csv = String::from("step,t,tau_11,tau_12,tau_13,tau_21,tau_22,tau_23,tau_31,tau_32,tau_33\n");
    let (t0, t1) = path.t_span;
    for (k, tau) in report.tau_numeric.iter().enumerate() {
        let t = t0 + (t1 - t0) * k as f64 / report.steps as f64;
        let _ = write!(csv, "{k},{t:.17e}");
        for x in tau.0.iter().flatten() {
            let _ = write!(csv, ",{x:.17e}");
        }
        csv.push('\n');
    }
    Ok(Outcome {
        command: "simulate",
        summary: format!(
            "{} {:?} with {} steps: terminal relative error {:.2e}",
            report.path, report.scheme, report.steps, report.terminal_relative_error
        ),
        csv: Some(csv),
        result: to_value(&report)?,
        failures,
    })
}

pub fn uniaxial(s: &Settings) -> Result<Outcome, ConfigError> {
    let law = ScalarLaw::by_name(&s.law)?;
    let spec = grid_spec(s, GridSpec::default());
    let scan = monotonicity_scan(&law, spec.min, spec.max, spec.step)?;
    let mut failures = Vec::new();
    if !(scan.max_bridge_residual <= s.tol.bridge_1d) {
        failures.push(format!("bridge residual {:e} exceeds {:e}", scan.max_bridge_residual, s.tol.bridge_1d));
    }
    let fmt = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.2}"));
    let summary = format!(
        "{}: sigma peaks at λ = {}; first H <= 0 at λ = {}; first H_tau <= 0 at λ = {}",
        scan.law,
        fmt(scan.argmax_sigma()),
        fmt(scan.sigma_first_nonpositive),
        fmt(scan.tau_first_nonpositive)
    );
    Ok(Outcome { command: "uniaxial", csv: Some(scan.to_csv()), result: to_value(&scan)?, failures, summary })
}

/// 9×9 matrix with rows `(i,j)` and columns `(k,l)`, both row-major.
fn nine(t: &Tensor4) -> Vec<Vec<f64>> {
    t.as_matrix9().iter().map(|r| r.to_vec()).collect()
}

pub fn products(s: &Settings) -> Result<Outcome, ConfigError> {
    let (p, q, z) = (&s.p, &s.q, &s.z);
    let list: [(&str, &str, Tensor4); 5] = [
        ("outer", "P_ij Q_kl", outer(p, q)),
        ("otimes_down", "P_ik Q_jl", otimes_down(p, q)),
        ("otimes_up", "P_il Q_jk", otimes_up(p, q)),
        ("otimes_downup", "(P_ik Q_jl + Q_il P_jk)/2", otimes_downup(p, q)),
        ("sym_downup", "otimes_downup(P,Q) + otimes_downup(Q,P)", sym_downup(p, q)),
    ];
    let mut csv = String::from("product,i,j,k,l,value\n");
    let mut entries = serde_json::Map::new();
    for (name, def, t) in &list {
        for (i, j, k, l) in (0..81).map(|n| (n / 27, n / 9 % 3, n / 3 % 3, n % 3)) {
            let _ = writeln!(csv, "{name},{},{},{},{},{:.17e}", i + 1, j + 1, k + 1, l + 1, t.0[i][j][k][l]);
        }
        entries.insert(
            name.to_string(),
            json!({ "definition": def, "matrix9": nine(t), "action_on_Z": to_value(&apply4(t, z))? }),
        );
    }
    Ok(Outcome {
        command: "products",
        result: json!({ "P": to_value(p)?, "Q": to_value(q)?, "Z": to_value(z)?, "products": Value::Object(entries) }),
        csv: Some(csv),
        failures: Vec::new(),
        summary: "products of P and Q; rows (i,j), columns (k,l)".into(),
    })
}
