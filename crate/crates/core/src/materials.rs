//! Isotropic hyperelastic models: compressible Hencky, incompressible Hencky
//! and St. Venant-Kirchhoff.
//!
//! Every model produces the Kirchhoff stress from a [`DeformationState`]; the
//! remaining stress measures follow by Piola transforms. The material tangent
//! `ℂ = D_E S₂(E)` is available in closed form for every model; a
//! finite-difference Hencky tangent is kept as an independent cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    log_divided_difference, make_state, spd_eigen, spd_log, spectral_tensor, DeformationState, CONFLUENCE_TOL,
};
use crate::tensor::{from_mandel, mandel_basis, mandel_vec, otimes_downup, outer, Mandel6, Tensor2, Tensor4};

/// Largest `|det F − 1|` accepted by incompressible models.
pub const ISOCHORIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LameParams {
    pub mu: f64,
    pub lambda: f64,
}

impl LameParams {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        let p = LameParams { mu, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidInput(format!("shear modulus mu must be positive, got {}", self.mu)));
        }
        if !self.lambda.is_finite() {
            return Err(Error::InvalidInput(format!("lambda must be finite, got {}", self.lambda)));
        }
        Ok(())
    }

    /// `2μ + 3λ > 0`, i.e. positive bulk modulus.
    pub fn is_stable_range(&self) -> bool {
        2.0 * self.mu + 3.0 * self.lambda > 0.0
    }

    pub fn bulk_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu / 3.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressBundle {
    pub sigma: Tensor2,
    pub tau: Tensor2,
    #[serde(rename = "S2")]
    pub s2: Tensor2,
    #[serde(rename = "S1")]
    pub s1: Tensor2,
}

impl StressBundle {
    pub fn from_kirchhoff(state: &DeformationState, tau: &Tensor2) -> Self {
        let f_inv = state.f_inv();
        let s2 = (f_inv * *tau * f_inv.transpose()).sym();
        StressBundle { sigma: *tau / state.j, tau: *tau, s2, s1: state.f * s2 }
    }
}

/// A hyperelastic law evaluated on deformation states.
pub trait MaterialModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn energy(&self, state: &DeformationState) -> Result<f64>;

    fn kirchhoff(&self, state: &DeformationState) -> Result<Tensor2>;

    fn stresses(&self, state: &DeformationState) -> Result<StressBundle> {
        Ok(StressBundle::from_kirchhoff(state, &self.kirchhoff(state)?))
    }

    /// `ℂ = D_E S₂(E)`.
    fn material_tangent(&self, state: &DeformationState) -> Result<Tensor4>;

    /// True when the model is restricted to `det F = 1`.
    fn is_incompressible(&self) -> bool {
        false
    }

    /// Lamé parameters if the model is parameterised by them.
    fn lame(&self) -> Option<LameParams> {
        None
    }

    /// Left stretch `V` producing a given Kirchhoff stress, when the law is
    /// invertible in closed form.
    fn left_stretch_from_kirchhoff(&self, _tau: &Tensor2) -> Option<Result<Tensor2>> {
        None
    }
}

/// `μ‖log V‖² + (λ/2) tr²(log V)`.
pub fn hencky_energy(state: &DeformationState, p: &LameParams) -> f64 {
    let l = &state.log_v;
    p.mu * l.inner(l) + 0.5 * p.lambda * l.trace().powi(2)
}

/// The same energy written in `log B`: `(μ/4)‖log B‖² + (λ/8)(log det B)²`.
pub fn hencky_energy_log_b(state: &DeformationState, p: &LameParams) -> f64 {
    let l = &state.log_b;
    let log_det_b = (state.j * state.j).ln();
    0.25 * p.mu * l.inner(l) + 0.125 * p.lambda * log_det_b * log_det_b
}

/// `τ = 2μ log V + λ tr(log V) 𝟙`.
pub fn hencky_tau(state: &DeformationState, p: &LameParams) -> Tensor2 {
    hencky_tau_from_log_v(&state.log_v, p)
}

pub fn hencky_tau_from_log_v(log_v: &Tensor2, p: &LameParams) -> Tensor2 {
    *log_v * (2.0 * p.mu) + Tensor2::IDENTITY * (p.lambda * log_v.trace())
}

fn check_isochoric(state: &DeformationState) -> Result<()> {
    if (state.j - 1.0).abs() > ISOCHORIC_TOL {
        return Err(Error::NotIsochoric { det: state.j });
    }
    Ok(())
}

/// `τ = 2μ log V` on isochoric states.
pub fn incompressible_hencky_tau(state: &DeformationState, mu: f64) -> Result<Tensor2> {
    check_isochoric(state)?;
    Ok(state.log_v * (2.0 * mu))
}

/// `λ 𝟙⊗𝟙 + 2μ 𝕀_sym`.
pub fn isotropic_tangent(mu: f64, lambda: f64) -> Tensor4 {
    let i = Tensor2::IDENTITY;
    outer(&i, &i) * lambda + otimes_downup(&i, &i).minor_symmetrised() * (2.0 * mu)
}

/// `S₂` of the Hencky law as a function of the Green-Lagrange strain,
/// `(μ log C + (λ/2) tr(log C) 𝟙) C⁻¹`.
fn hencky_s2_of_e(e: &Tensor2, p: &LameParams) -> Result<Tensor2> {
    let c = Tensor2::IDENTITY + *e * 2.0;
    let log_c = spd_log(&c)?;
    let c_inv = c.inverse().ok_or(Error::NonInvertible { det: c.det() })?;
    let a = log_c * p.mu + Tensor2::IDENTITY * (0.5 * p.lambda * log_c.trace());
    Ok((a * c_inv).sym())
}

/// Materialises the Jacobian of a symmetric-tensor valued map of symmetric
/// argument by central differences along the Mandel basis, Richardson
/// extrapolated over the steps `h` and `h/2`.
pub fn fd_tangent(x: &Tensor2, h: f64, f: impl Fn(&Tensor2) -> Result<Tensor2>) -> Result<Tensor4> {
    let basis = mandel_basis();
    let mut m = [[0.0; 6]; 6];
    let central = |n: &Tensor2, step: f64| -> Result<Tensor2> {
        Ok((f(&(*x + *n * step))? - f(&(*x - *n * step))?) / (2.0 * step))
    };
    for (b, n) in basis.iter().enumerate() {
        let d1 = central(n, h)?;
        let d2 = central(n, 0.5 * h)?;
        let v = mandel_vec(&((d2 * 4.0 - d1) / 3.0));
        for a in 0..6 {
            m[a][b] = v[a];
        }
    }
    Ok(from_mandel(&Mandel6(m)))
}

/// Hencky `ℂ` by differencing `S₂(E)` with step `1e-5 (1 + ‖E‖)`.
pub fn hencky_material_tangent_fd(state: &DeformationState, p: &LameParams) -> Result<Tensor4> {
    let e = state.green_lagrange();
    fd_tangent(&e, 1e-5 * (1.0 + e.norm()), |e| hencky_s2_of_e(e, p))
}

/// Divided difference of `φ(c) = ln c / c`, written through the stable
/// logarithmic divided difference; `(1 − ln c)/c²` in the confluent limit.
fn log_over_c_divided_difference(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= CONFLUENCE_TOL * hi {
        let m = 0.5 * (hi + lo);
        return (1.0 - m.ln()) / (m * m);
    }
    (log_divided_difference(hi, lo) - lo.ln() / lo) / hi
}

/// Hencky `ℂ` in closed form. With `c_a`, `N_a` the principal pairs of `C`,
///
/// `ℂ = Σ_ab k_ab (N_a⊗N_b) ⊗ sym(N_a⊗N_b) + λ C⁻¹⊗C⁻¹`,
/// `k_ab = 2μ φ[c_a, c_b] − λ tr(log C) / (c_a c_b)`,
///
/// where `φ[·,·]` is the divided difference of `ln c / c`.
pub fn hencky_material_tangent(state: &DeformationState, p: &LameParams) -> Result<Tensor4> {
    let (c, q) = spd_eigen(&state.c)?;
    let tr_log = c.iter().map(|x| x.ln()).sum::<f64>();
    let k: [[f64; 3]; 3] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            2.0 * p.mu * log_over_c_divided_difference(c[a], c[b]) - p.lambda * tr_log / (c[a] * c[b])
        })
    });
    let c_inv = Tensor2::from_fn(|i, j| (0..3).map(|a| q.0[i][a] * q.0[j][a] / c[a]).sum());
    Ok(spectral_tensor(&q, &k) + outer(&c_inv, &c_inv) * p.lambda)
}

/// `𝕔 = J⁻¹ F_iI F_jJ ℂ_IJKL F_kK F_lL`.
pub fn spatial_tangent(state: &DeformationState, c4: &Tensor4) -> Tensor4 {
    push_forward(c4, &state.f) / state.j
}

/// Inverse of [`spatial_tangent`]: `ℂ = J F⁻¹_Ii F⁻¹_Jj 𝕔_ijkl F⁻¹_Kk F⁻¹_Ll`.
pub fn material_from_spatial(state: &DeformationState, c: &Tensor4) -> Tensor4 {
    push_forward(c, &state.f_inv()) * state.j
}

/// `T'_ijkl = A_iI A_jJ A_kK A_lL T_IJKL`, one index at a time.
fn push_forward(t: &Tensor4, a: &Tensor2) -> Tensor4 {
    let a = &a.0;
    let s1 = Tensor4::from_fn(|i, j, k, l| (0..3).map(|m| a[i][m] * t.0[m][j][k][l]).sum());
    let s2 = Tensor4::from_fn(|i, j, k, l| (0..3).map(|m| a[j][m] * s1.0[i][m][k][l]).sum());
    let s3 = Tensor4::from_fn(|i, j, k, l| (0..3).map(|m| a[k][m] * s2.0[i][j][m][l]).sum());
    Tensor4::from_fn(|i, j, k, l| (0..3).map(|m| a[l][m] * s3.0[i][j][k][m]).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hencky(pub LameParams);

impl MaterialModel for Hencky {
    fn name(&self) -> &'static str {
        "hencky"
    }

    fn energy(&self, state: &DeformationState) -> Result<f64> {
        Ok(hencky_energy(state, &self.0))
    }

    fn kirchhoff(&self, state: &DeformationState) -> Result<Tensor2> {
        Ok(hencky_tau(state, &self.0))
    }

    fn material_tangent(&self, state: &DeformationState) -> Result<Tensor4> {
        hencky_material_tangent(state, &self.0)
    }

    fn lame(&self) -> Option<LameParams> {
        Some(self.0)
    }

    fn left_stretch_from_kirchhoff(&self, tau: &Tensor2) -> Option<Result<Tensor2>> {
        let p = self.0;
        let k3 = 2.0 * p.mu + 3.0 * p.lambda;
        if k3 == 0.0 {
            return None;
        }
        let tau = tau.sym();
        let log_v = (tau - Tensor2::IDENTITY * (p.lambda / k3 * tau.trace())) / (2.0 * p.mu);
        Some(crate::kinematics::sym_exp(&log_v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenckyIncompressible {
    pub mu: f64,
}

impl MaterialModel for HenckyIncompressible {
    fn name(&self) -> &'static str {
        "hencky_incompressible"
    }

    fn energy(&self, state: &DeformationState) -> Result<f64> {
        check_isochoric(state)?;
        Ok(self.mu * state.log_v.inner(&state.log_v))
    }

    fn kirchhoff(&self, state: &DeformationState) -> Result<Tensor2> {
        incompressible_hencky_tau(state, self.mu)
    }

    fn material_tangent(&self, state: &DeformationState) -> Result<Tensor4> {
        check_isochoric(state)?;
        // perturbations in E leave the constraint surface, so the
        // unconstrained law with λ = 0 is differentiated
        hencky_material_tangent(state, &LameParams { mu: self.mu, lambda: 0.0 })
    }

    fn is_incompressible(&self) -> bool {
        true
    }

    fn lame(&self) -> Option<LameParams> {
        Some(LameParams { mu: self.mu, lambda: 0.0 })
    }

    fn left_stretch_from_kirchhoff(&self, tau: &Tensor2) -> Option<Result<Tensor2>> {
        Some(crate::kinematics::sym_exp(&(tau.sym().dev() / (2.0 * self.mu))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svk(pub LameParams);

impl Svk {
    pub fn s2(&self, e: &Tensor2) -> Tensor2 {
        Tensor2::IDENTITY * (self.0.lambda * e.trace()) + *e * (2.0 * self.0.mu)
    }
}

impl MaterialModel for Svk {
    fn name(&self) -> &'static str {
        "svk"
    }

    fn energy(&self, state: &DeformationState) -> Result<f64> {
        let e = state.green_lagrange();
        Ok(0.5 * self.0.lambda * e.trace().powi(2) + self.0.mu * e.inner(&e))
    }

    fn kirchhoff(&self, state: &DeformationState) -> Result<Tensor2> {
        let s2 = self.s2(&state.green_lagrange());
        Ok((state.f * s2 * state.f.transpose()).sym())
    }

    fn stresses(&self, state: &DeformationState) -> Result<StressBundle> {
        let s2 = self.s2(&state.green_lagrange());
        let tau = (state.f * s2 * state.f.transpose()).sym();
        Ok(StressBundle { sigma: tau / state.j, tau, s2, s1: state.f * s2 })
    }

    fn material_tangent(&self, _state: &DeformationState) -> Result<Tensor4> {
        Ok(isotropic_tangent(self.0.mu, self.0.lambda))
    }

    fn lame(&self) -> Option<LameParams> {
        Some(self.0)
    }
}

/// Serializable model specification,
/// `{"model": "hencky" | "hencky_incompressible" | "svk", "mu": …, "lambda": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum Model {
    Hencky { mu: f64, lambda: f64 },
    HenckyIncompressible { mu: f64 },
    Svk { mu: f64, lambda: f64 },
}

impl Model {
    pub fn hencky(mu: f64, lambda: f64) -> Self {
        Model::Hencky { mu, lambda }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Model::Hencky { mu, lambda } | Model::Svk { mu, lambda } => LameParams { mu, lambda }.validate(),
            Model::HenckyIncompressible { mu } => LameParams { mu, lambda: 0.0 }.validate(),
        }
    }

    fn inner(&self) -> Box<dyn MaterialModel> {
        match *self {
            Model::Hencky { mu, lambda } => Box::new(Hencky(LameParams { mu, lambda })),
            Model::HenckyIncompressible { mu } => Box::new(HenckyIncompressible { mu }),
            Model::Svk { mu, lambda } => Box::new(Svk(LameParams { mu, lambda })),
        }
    }
}

impl MaterialModel for Model {
    fn name(&self) -> &'static str {
        self.inner().name()
    }
    fn energy(&self, state: &DeformationState) -> Result<f64> {
        self.inner().energy(state)
    }
    fn kirchhoff(&self, state: &DeformationState) -> Result<Tensor2> {
        self.inner().kirchhoff(state)
    }
    fn stresses(&self, state: &DeformationState) -> Result<StressBundle> {
        self.inner().stresses(state)
    }
    fn material_tangent(&self, state: &DeformationState) -> Result<Tensor4> {
        self.inner().material_tangent(state)
    }
    fn is_incompressible(&self) -> bool {
        matches!(self, Model::HenckyIncompressible { .. })
    }
    fn lame(&self) -> Option<LameParams> {
        self.inner().lame()
    }
    fn left_stretch_from_kirchhoff(&self, tau: &Tensor2) -> Option<Result<Tensor2>> {
        self.inner().left_stretch_from_kirchhoff(tau)
    }
}

/// Convenience: state and stresses in one call.
pub fn evaluate(model: &dyn MaterialModel, f: &Tensor2) -> Result<(DeformationState, StressBundle)> {
    let state = make_state(f)?;
    let s = model.stresses(&state)?;
    Ok((state, s))
}
