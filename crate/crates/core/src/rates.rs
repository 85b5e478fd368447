//! Pointwise objective stress rates and the identities linking them.
//!
//! All rates take the stress `Σ`, its material time derivative `Σ̇` and the
//! velocity gradient `L`; none differentiates a constitutive law itself. The
//! only exception is [`rotated_frame_zj`], which builds the corotational rate
//! from its definition and serves as an independent oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::make_state;
use crate::materials::MaterialModel;
use crate::path::MotionPath;
use crate::tensor::Tensor2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RateKind {
    #[serde(rename = "zj")]
    ZarembaJaumann,
    #[serde(rename = "truesdell")]
    Truesdell,
    #[serde(rename = "oldroyd")]
    Oldroyd,
    #[serde(rename = "cotter_rivlin")]
    CotterRivlin,
    #[serde(rename = "biezeno_hencky")]
    BiezenoHencky,
    #[serde(rename = "green_naghdi")]
    GreenNaghdi,
    #[serde(rename = "lie")]
    LieKirchhoff,
}

impl RateKind {
    pub const ALL: [RateKind; 7] = [
        RateKind::ZarembaJaumann,
        RateKind::Truesdell,
        RateKind::Oldroyd,
        RateKind::CotterRivlin,
        RateKind::BiezenoHencky,
        RateKind::GreenNaghdi,
        RateKind::LieKirchhoff,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RateKind::ZarembaJaumann => "zj",
            RateKind::Truesdell => "truesdell",
            RateKind::Oldroyd => "oldroyd",
            RateKind::CotterRivlin => "cotter_rivlin",
            RateKind::BiezenoHencky => "biezeno_hencky",
            RateKind::GreenNaghdi => "green_naghdi",
            RateKind::LieKirchhoff => "lie",
        }
    }
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RateKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown rate `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInput {
    pub sigma: Tensor2,
    pub sigma_dot: Tensor2,
    #[serde(rename = "L")]
    pub l: Tensor2,
    /// Polar spin `Ṙ Rᵀ`, required by the Green-Naghdi rate.
    pub spin_override: Option<Tensor2>,
}

impl RateInput {
    pub fn new(sigma: Tensor2, sigma_dot: Tensor2, l: Tensor2) -> Self {
        RateInput { sigma, sigma_dot, l, spin_override: None }
    }

    pub fn with_spin(mut self, spin: Tensor2) -> Self {
        self.spin_override = Some(spin);
        self
    }
}

fn corotational(sig: &Tensor2, sig_dot: &Tensor2, spin: &Tensor2) -> Tensor2 {
    *sig_dot + *sig * *spin - *spin * *sig
}

pub fn rate_value(kind: RateKind, input: &RateInput) -> Result<Tensor2> {
    let s = &input.sigma;
    let sd = &input.sigma_dot;
    let l = &input.l;
    let d = l.sym();
    let w = l.skew();
    let oldroyd = || *sd - *l * *s - *s * l.transpose();
    Ok(match kind {
        RateKind::ZarembaJaumann => corotational(s, sd, &w),
        RateKind::CotterRivlin => *sd + l.transpose() * *s + *s * *l,
        RateKind::Oldroyd | RateKind::LieKirchhoff => oldroyd(),
        RateKind::BiezenoHencky => corotational(s, sd, &w) + *s * d.trace(),
        RateKind::Truesdell => oldroyd() + *s * d.trace(),
        RateKind::GreenNaghdi => {
            let omega = input.spin_override.ok_or(Error::MissingSpin)?;
            corotational(s, sd, &omega)
        }
    })
}

/// `D^ZJ[τ] = 𝓛_v τ + τD + Dτ`.
pub fn zj_from_lie(lie_tau: &Tensor2, tau: &Tensor2, d: &Tensor2) -> Tensor2 {
    *lie_tau + *tau * *d + *d * *tau
}

/// `D^ZJ[σ] = D^TR[σ] + σD + Dσ − tr(D) σ`.
pub fn zj_from_truesdell(tr_sigma: &Tensor2, sigma: &Tensor2, d: &Tensor2) -> Tensor2 {
    *tr_sigma + *sigma * *d + *d * *sigma - *sigma * d.trace()
}

/// Polar spin `Ω^R = Ṙ Rᵀ` by central differences of the rotation factor.
pub fn polar_spin(path: &MotionPath, t: f64, h: f64) -> Result<Tensor2> {
    let r = |t: f64| make_state(&path.f(t)).map(|s| s.r);
    let rdot = (r(t + h)? - r(t - h)?) / (2.0 * h);
    Ok((rdot * r(t)?.transpose()).skew())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StressMeasure {
    Cauchy,
    Kirchhoff,
}

pub fn stress_on_path(model: &dyn MaterialModel, path: &MotionPath, t: f64, measure: StressMeasure) -> Result<Tensor2> {
    let state = make_state(&path.f(t))?;
    let tau = model.kirchhoff(&state)?;
    Ok(match measure {
        StressMeasure::Kirchhoff => tau,
        StressMeasure::Cauchy => tau / state.j,
    })
}

const FRAME_SUBSTEPS: usize = 8;

/// Integrates `Q̇ = W Q` from `t` to `t + dt` with `Q(t) = 𝟙` by RK4.
fn spin_frame(path: &MotionPath, t: f64, dt: f64) -> Result<Tensor2> {
    let w = |s: f64| path.l(s).map(|l| l.skew());
    let mut q = Tensor2::IDENTITY;
    let h = dt / FRAME_SUBSTEPS as f64;
    let mut s = t;
    for _ in 0..FRAME_SUBSTEPS {
        let wm = w(s + 0.5 * h)?;
        let k1 = w(s)? * q;
        let k2 = wm * (q + k1 * (0.5 * h));
        let k3 = wm * (q + k2 * (0.5 * h));
        let k4 = w(s + h)? * (q + k3 * h);
        q += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        s += h;
    }
    Ok(q)
}

/// Zaremba-Jaumann rate from its corotational definition,
/// `Q d/dt[Qᵀ Σ Q] Qᵀ` with `Q̇ = W Q` and `Q(t) = 𝟙`, by central differences.
pub fn rotated_frame_zj(
    path: &MotionPath,
    t: f64,
    h: f64,
    model: &dyn MaterialModel,
    measure: StressMeasure,
) -> Result<Tensor2> {
    let pulled = |dt: f64| -> Result<Tensor2> {
        let q = spin_frame(path, t, dt)?;
        let s = stress_on_path(model, path, t + dt, measure)?;
        Ok(q.transpose() * s * q)
    };
    Ok(((pulled(h)? - pulled(-h)?) / (2.0 * h)).sym())
}
