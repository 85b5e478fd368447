//! One-dimensional uniaxial relations for `F = diag(λ, 1, 1)`.
//!
//! With `J = λ` the Cauchy stress, first Piola-Kirchhoff stress and Biot
//! stress all equal `W′(λ)`; they are still reported as separate fields.
//! Logarithmic stiffnesses are `H = D_{log λ} σ̂ = λ W″` and
//! `H_τ = D²_{log λ} Ŵ = λ² W″ + λ W′`, linked by `H_τ = λ (H + σ)`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative step of the five-point stencils used when no analytic
/// derivative is registered.
pub const FD_STEP: f64 = 1e-3;

/// A strain energy `λ ↦ W(λ)` with optional analytic derivatives.
#[derive(Clone)]
pub struct ScalarLaw {
    pub label: String,
    w: ScalarFn,
    dw: Option<ScalarFn>,
    d2w: Option<ScalarFn>,
}

impl std::fmt::Debug for ScalarLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarLaw")
            .field("label", &self.label)
            .field("analytic", &(self.dw.is_some() && self.d2w.is_some()))
            .finish()
    }
}

impl ScalarLaw {
    pub fn new(label: &str, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarLaw { label: label.to_string(), w: Arc::new(w), dw: None, d2w: None }
    }

    pub fn with_derivatives(
        mut self,
        dw: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2w: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.dw = Some(Arc::new(dw));
        self.d2w = Some(Arc::new(d2w));
        self
    }

    /// `W = ½ log² λ`.
    pub fn hencky() -> Self {
        ScalarLaw::new("hencky", |l: f64| 0.5 * l.ln().powi(2))
            .with_derivatives(|l: f64| l.ln() / l, |l: f64| (1.0 - l.ln()) / (l * l))
    }

    /// `W = ⅛ (λ² − 1)²`.
    pub fn svk() -> Self {
        ScalarLaw::new("svk", |l: f64| 0.125 * (l * l - 1.0).powi(2))
            .with_derivatives(|l: f64| 0.5 * l * (l * l - 1.0), |l: f64| 0.5 * (3.0 * l * l - 1.0))
    }

    /// `Ŵ(log λ) = (k/2) log² λ`, i.e. Kirchhoff stress linear in `log λ`.
    pub fn log_quadratic(k: f64) -> Self {
        ScalarLaw::new("log_quadratic", move |l: f64| 0.5 * k * l.ln().powi(2))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "hencky" => Ok(Self::hencky()),
            "svk" => Ok(Self::svk()),
            "log_quadratic" => Ok(Self::log_quadratic(1.0)),
            _ => match name.strip_prefix("log_quadratic:").map(str::parse::<f64>) {
                Some(Ok(k)) if k.is_finite() => Ok(Self::log_quadratic(k)),
                _ => Err(Error::InvalidInput(format!(
                    "unknown 1D law `{name}` (expected hencky, svk, log_quadratic[:k])"
                ))),
            },
        }
    }

    pub fn energy(&self, lam: f64) -> f64 {
        (self.w)(lam)
    }

    pub fn is_analytic(&self) -> bool {
        self.dw.is_some() && self.d2w.is_some()
    }

    /// `W′(λ)`.
    pub fn dw(&self, lam: f64) -> f64 {
        match &self.dw {
            Some(d) => d(lam),
            None => {
                // W′ = λ⁻¹ D_ξ Ŵ, differentiated in logarithmic coordinates
                let xi = lam.ln();
                let h = FD_STEP * (1.0 + xi.abs());
                let w = |x: f64| (self.w)(x.exp());
                (-w(xi + 2.0 * h) + 8.0 * w(xi + h) - 8.0 * w(xi - h) + w(xi - 2.0 * h)) / (12.0 * h * lam)
            }
        }
    }

    /// `W″(λ)`.
    pub fn d2w(&self, lam: f64) -> f64 {
        match &self.d2w {
            Some(d) => d(lam),
            None => {
                let h = FD_STEP * lam;
                let w = &self.w;
                (-w(lam + 2.0 * h) + 16.0 * w(lam + h) - 30.0 * w(lam) + 16.0 * w(lam - h) - w(lam - 2.0 * h))
                    / (12.0 * h * h)
            }
        }
    }

    /// `D²_ξ Ŵ(ξ)` at `ξ = log λ`, evaluated in logarithmic coordinates.
    fn d2w_hat(&self, lam: f64) -> f64 {
        if self.is_analytic() {
            return lam * lam * self.d2w(lam) + lam * self.dw(lam);
        }
        let xi = lam.ln();
        let h = FD_STEP * (1.0 + xi.abs());
        let w = |x: f64| (self.w)(x.exp());
        (-w(xi + 2.0 * h) + 16.0 * w(xi + h) - 30.0 * w(xi) + 16.0 * w(xi - h) - w(xi - 2.0 * h)) / (12.0 * h * h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stresses1d {
    pub sigma: f64,
    pub tau: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    pub biot: f64,
}

fn check_stretch(lam: f64) -> Result<()> {
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::InvalidInput(format!("stretch must be positive, got {lam}")));
    }
    Ok(())
}

pub fn stresses_1d(law: &ScalarLaw, lam: f64) -> Result<Stresses1d> {
    check_stretch(lam)?;
    let dw = law.dw(lam);
    Ok(Stresses1d { sigma: dw, tau: lam * dw, s2: dw / lam, biot: dw })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bridge1d {
    /// `D_{log λ} σ̂`.
    #[serde(rename = "H")]
    pub h: f64,
    /// `D²_{log λ} Ŵ`.
    #[serde(rename = "H_tau")]
    pub h_tau: f64,
    /// `|H_τ − λ (H + σ)|`.
    pub residual: f64,
}

pub fn stiffness_bridge(law: &ScalarLaw, lam: f64) -> Result<Bridge1d> {
    let s = stresses_1d(law, lam)?;
    let h = lam * law.d2w(lam);
    let h_tau = law.d2w_hat(lam);
    Ok(Bridge1d { h, h_tau, residual: (h_tau - lam * (h + s.sigma)).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub lambda: f64,
    pub sigma: f64,
    pub tau: f64,
    pub w_hat: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_tau")]
    pub h_tau: f64,
    pub bridge_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan1D {
    pub law: String,
    pub analytic_derivatives: bool,
    pub points: Vec<ScanPoint>,
    /// First grid point with `H ≤ 0` (Cauchy stress stops increasing in `log λ`).
    pub sigma_first_nonpositive: Option<f64>,
    /// First grid point with `H_τ ≤ 0`.
    pub tau_first_nonpositive: Option<f64>,
    /// Grid points where the sign of `H` differs from the previous point.
    pub sigma_sign_changes: Vec<f64>,
    pub tau_sign_changes: Vec<f64>,
    pub max_bridge_residual: f64,
}

/// Uniform grid from `min` to `max` inclusive, built by index to avoid drift.
pub fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && step > 0.0) || !(min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidInput(format!("invalid grid {min}:{max}:{step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| min + step * k as f64).collect())
}

fn sign_changes(points: &[ScanPoint], f: impl Fn(&ScanPoint) -> f64) -> Vec<f64> {
    points.windows(2).filter(|w| (f(&w[0]) > 0.0) != (f(&w[1]) > 0.0)).map(|w| w[1].lambda).collect()
}

pub fn monotonicity_scan(law: &ScalarLaw, lam_min: f64, lam_max: f64, step: f64) -> Result<Scan1D> {
    let points = grid(lam_min, lam_max, step)?
        .into_iter()
        .map(|lam| {
            let s = stresses_1d(law, lam)?;
            let b = stiffness_bridge(law, lam)?;
            Ok(ScanPoint {
                lambda: lam,
                sigma: s.sigma,
                tau: s.tau,
                w_hat: law.energy(lam),
                h: b.h,
                h_tau: b.h_tau,
                bridge_residual: b.residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scan1D {
        law: law.label.clone(),
        analytic_derivatives: law.is_analytic(),
        sigma_first_nonpositive: points.iter().find(|p| p.h <= 0.0).map(|p| p.lambda),
        tau_first_nonpositive: points.iter().find(|p| p.h_tau <= 0.0).map(|p| p.lambda),
        sigma_sign_changes: sign_changes(&points, |p| p.h),
        tau_sign_changes: sign_changes(&points, |p| p.h_tau),
        max_bridge_residual: points.iter().map(|p| p.bridge_residual).fold(0.0, f64::max),
        points,
    })
}

impl Scan1D {
    /// CSV with one row per grid point, including per-point monotonicity flags.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,sigma,tau,w_hat,H,H_tau,bridge_residual,sigma_monotone,tau_monotone\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.3e},{},{}",
                fmt_lambda(p.lambda),
                p.sigma,
                p.tau,
                p.w_hat,
                p.h,
                p.h_tau,
                p.bridge_residual,
                u8::from(p.h > 0.0),
                u8::from(p.h_tau > 0.0)
            );
        }
        out
    }

    pub fn argmax_sigma(&self) -> Option<f64> {
        self.points.iter().max_by(|a, b| a.sigma.total_cmp(&b.sigma)).map(|p| p.lambda)
    }
}

/// Grid values printed with enough digits to round-trip but without
/// accumulated noise like `2.7199999999999998`.
fn fmt_lambda(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}
