//! Parameterised motions `t ↦ F(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{path_l, DET_TOL};
use crate::tensor::Tensor2;

/// Built-in motions. `s` in the doc strings below is the path parameter
/// mapped from `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathKind {
    /// `diag(λ(t), 1, 1)`, `λ` linear from `from` to `to`.
    Uniaxial { from: f64, to: f64 },
    /// `diag(λ, λ^-½, λ^-½)`.
    UniaxialIsochoric { from: f64, to: f64 },
    /// `diag(λ, λ, 1)`.
    Equibiaxial { from: f64, to: f64 },
    /// `diag(λ, λ, λ⁻²)`.
    EquibiaxialIsochoric { from: f64, to: f64 },
    /// `diag(λ, 1/λ, 1)`.
    Planar { from: f64, to: f64 },
    /// `𝟙 + γ(t) e₁⊗e₂`, `γ` linear from `from` to `to`.
    SimpleShear { from: f64, to: f64 },
    /// `Q(t) F₀` with `Q` a rotation by angle `omega·t` about `axis`.
    RigidRotation { omega: f64, axis: [f64; 3], base: Tensor2 },
    /// `F₀ + t G`.
    Linear { base: Tensor2, rate: Tensor2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionPath {
    pub label: String,
    #[serde(flatten)]
    pub kind: PathKind,
    pub t_span: (f64, f64),
}

/// Rotation by angle `theta` about unit `axis` (Rodrigues).
pub fn rotation_about(axis: [f64; 3], theta: f64) -> Tensor2 {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let a = axis.map(|x| x / n);
    let k = Tensor2::new([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]]);
    Tensor2::IDENTITY + k * theta.sin() + (k * k) * (1.0 - theta.cos())
}

fn axis_skew(axis: [f64; 3]) -> Tensor2 {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let a = axis.map(|x| x / n);
    Tensor2::new([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
}

impl MotionPath {
    pub fn new(label: &str, kind: PathKind) -> Self {
        MotionPath { label: label.to_string(), kind, t_span: (0.0, 1.0) }
    }

    pub fn uniaxial(from: f64, to: f64) -> Self {
        Self::new("uniaxial", PathKind::Uniaxial { from, to })
    }

    pub fn simple_shear(from: f64, to: f64) -> Self {
        Self::new("simple_shear", PathKind::SimpleShear { from, to })
    }

    pub fn rigid_rotation(omega: f64, axis: [f64; 3], base: Tensor2) -> Self {
        Self::new("rigid_rotation", PathKind::RigidRotation { omega, axis, base })
    }

    fn param(&self, t: f64) -> (f64, f64) {
        let (t0, t1) = self.t_span;
        let (from, to) = match self.kind {
            PathKind::Uniaxial { from, to }
            | PathKind::UniaxialIsochoric { from, to }
            | PathKind::Equibiaxial { from, to }
            | PathKind::EquibiaxialIsochoric { from, to }
            | PathKind::Planar { from, to }
            | PathKind::SimpleShear { from, to } => (from, to),
            _ => (0.0, 0.0),
        };
        let rate = (to - from) / (t1 - t0);
        (from + rate * (t - t0), rate)
    }

    pub fn f(&self, t: f64) -> Tensor2 {
        let (s, _) = self.param(t);
        match self.kind {
            PathKind::Uniaxial { .. } => Tensor2::diag(s, 1.0, 1.0),
            PathKind::UniaxialIsochoric { .. } => {
                let r = s.sqrt().recip();
                Tensor2::diag(s, r, r)
            }
            PathKind::Equibiaxial { .. } => Tensor2::diag(s, s, 1.0),
            PathKind::EquibiaxialIsochoric { .. } => Tensor2::diag(s, s, 1.0 / (s * s)),
            PathKind::Planar { .. } => Tensor2::diag(s, 1.0 / s, 1.0),
            PathKind::SimpleShear { .. } => {
                let mut f = Tensor2::IDENTITY;
                f.0[0][1] = s;
                f
            }
            PathKind::RigidRotation { omega, axis, base } => rotation_about(axis, omega * t) * base,
            PathKind::Linear { base, rate } => base + rate * t,
        }
    }

    /// Analytic `Ḟ(t)`.
    pub fn fdot(&self, t: f64) -> Tensor2 {
        let (s, r) = self.param(t);
        match self.kind {
            PathKind::Uniaxial { .. } => Tensor2::diag(r, 0.0, 0.0),
            PathKind::UniaxialIsochoric { .. } => {
                let d = -0.5 * s.powf(-1.5) * r;
                Tensor2::diag(r, d, d)
            }
            PathKind::Equibiaxial { .. } => Tensor2::diag(r, r, 0.0),
            PathKind::EquibiaxialIsochoric { .. } => Tensor2::diag(r, r, -2.0 * r / (s * s * s)),
            PathKind::Planar { .. } => Tensor2::diag(r, -r / (s * s), 0.0),
            PathKind::SimpleShear { .. } => Tensor2::unit(0, 1) * r,
            PathKind::RigidRotation { omega, axis, base } => {
                axis_skew(axis) * omega * rotation_about(axis, omega * t) * base
            }
            PathKind::Linear { rate, .. } => rate,
        }
    }

    pub fn l(&self, t: f64) -> Result<Tensor2> {
        path_l(&self.f(t), &self.fdot(t))
    }

    /// Checks `det F > 0` on 100 evenly spaced points of `t_span`.
    pub fn validate(&self) -> Result<()> {
        let (t0, t1) = self.t_span;
        if !(t1 > t0) {
            return Err(Error::InvalidInput(format!("empty time span [{t0}, {t1}]")));
        }
        for k in 0..100 {
            let t = t0 + (t1 - t0) * k as f64 / 99.0;
            let det = self.f(t).det();
            if !(det > DET_TOL) {
                return Err(Error::NonInvertible { det });
            }
        }
        Ok(())
    }
}
