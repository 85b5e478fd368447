//! Zaremba-Jaumann tangent stiffness tensors.
//!
//! `ℍ^ZJ_τ(τ)` maps the stretching `D` to the Zaremba-Jaumann rate of the
//! Kirchhoff stress and `ℍ^ZJ(σ)` maps it to that of the Cauchy stress. The
//! Kirchhoff tangent is built three independent ways (absolute spatial form,
//! Lagrangian push-forward, and the direct logarithmic form for Hencky); the
//! Cauchy tangent two ways. Nothing here is symmetrised behind the caller's
//! back: `ℍ^ZJ(σ)` keeps its `−σ⊗𝟙` asymmetry.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kinematics::{dlog_tensor, DeformationState, DET_TOL};
use crate::materials::{spatial_tangent, LameParams, MaterialModel};
use crate::tensor::{
    apply4, from_mandel, mandel_basis, mandel_vec, outer, sym_downup, symmetry_flags, to_mandel_with_tol, Mandel6,
    SymmetryFlags, Tensor2, Tensor4,
};

/// Relative asymmetry tolerated in tensors fed to the absolute constructions.
/// Loose enough for finite-difference material tangents.
pub const INPUT_SYM_TOL: f64 = 1e-6;

/// Materialises a linear map on symmetric tensors by evaluating it on the six
/// Mandel basis directions. Only the symmetric part of the image is kept.
pub fn materialise(map: impl Fn(&Tensor2) -> Tensor2) -> Tensor4 {
    let mut m = [[0.0; 6]; 6];
    for (b, n) in mandel_basis().iter().enumerate() {
        let v = mandel_vec(&map(n));
        for a in 0..6 {
            m[a][b] = v[a];
        }
    }
    from_mandel(&Mandel6(m))
}

fn check_c(c: &Tensor4) -> Result<()> {
    let f = symmetry_flags(c, INPUT_SYM_TOL);
    if !f.all() {
        let r = f.residuals;
        return Err(Error::InputAsymmetric {
            what: "spatial elasticity tensor",
            residual: r.minor_left.max(r.minor_right).max(r.major),
        });
    }
    Ok(())
}

fn check_stress(s: &Tensor2, what: &'static str) -> Result<()> {
    let residual = s.symmetry_residual();
    if residual > 1e-10 {
        return Err(Error::InputAsymmetric { what, residual });
    }
    Ok(())
}

fn check_j(j: f64) -> Result<()> {
    if !(j > DET_TOL) {
        return Err(Error::NonInvertible { det: j });
    }
    Ok(())
}

/// `ℍ^ZJ_τ = J 𝕔 + 𝟙⊗̲̄τ + τ⊗̲̄𝟙`.
pub fn hzj_tau_absolute(c_spatial: &Tensor4, tau: &Tensor2, j: f64) -> Result<Tensor4> {
    check_c(c_spatial)?;
    check_stress(tau, "kirchhoff stress")?;
    check_j(j)?;
    Ok(*c_spatial * j + sym_downup(&Tensor2::IDENTITY, tau))
}

/// `D ↦ F (ℂ.[Fᵀ D F]) Fᵀ + D τ + τ D`.
pub fn hzj_tau_lagrangian(state: &DeformationState, c4: &Tensor4, tau: &Tensor2) -> Result<Tensor4> {
    check_stress(tau, "kirchhoff stress")?;
    let f = state.f;
    let ft = f.transpose();
    Ok(materialise(|d| f * apply4(c4, &(ft * *d * f)) * ft + *d * *tau + *tau * *d))
}

/// `D ↦ μ D_B log B.[BD + DB] + λ tr(D) 𝟙` for the Hencky law.
pub fn hzj_tau_direct_hencky(state: &DeformationState, p: &LameParams) -> Result<Tensor4> {
    let b = state.b;
    let dlog = dlog_tensor(&b)?;
    Ok(materialise(|d| apply4(&dlog, &(b * *d + *d * b)) * p.mu + Tensor2::IDENTITY * (p.lambda * d.trace())))
}

/// `ℍ^ZJ(σ) = 𝕔 + 𝟙⊗̲̄σ + σ⊗̲̄𝟙 − σ⊗𝟙`.
pub fn hzj_sigma_absolute(c_spatial: &Tensor4, sigma: &Tensor2) -> Result<Tensor4> {
    check_c(c_spatial)?;
    check_stress(sigma, "cauchy stress")?;
    let i = Tensor2::IDENTITY;
    Ok(*c_spatial + sym_downup(&i, sigma) - outer(sigma, &i))
}

/// `ℍ^ZJ = J⁻¹ ℍ^ZJ_τ − σ⊗𝟙`.
pub fn hzj_sigma_from_tau(h_tau: &Tensor4, sigma: &Tensor2, j: f64) -> Result<Tensor4> {
    check_j(j)?;
    Ok(*h_tau / j - outer(sigma, &Tensor2::IDENTITY))
}

/// `𝕔_ijkl + ½(δ_ik σ_jl + σ_il δ_jk + σ_ik δ_jl + δ_il σ_jk − 2 δ_kl σ_ij)`,
/// assembled component by component.
pub fn wang_li_tensor(c_spatial: &Tensor4, sigma: &Tensor2) -> Tensor4 {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let s = &sigma.0;
    Tensor4::from_fn(|i, j, k, l| {
        c_spatial.0[i][j][k][l]
            + 0.5
                * (d(i, k) * s[j][l] + s[i][l] * d(j, k) + s[i][k] * d(j, l) + d(i, l) * s[j][k]
                    - 2.0 * d(k, l) * s[i][j])
    })
}

/// Abaqus-format consistent tangent `𝔻 = J⁻¹ ℍ^ZJ_τ`.
pub fn abaqus_ddsdde(h_tau: &Tensor4, j: f64) -> Result<Tensor4> {
    check_j(j)?;
    Ok(*h_tau / j)
}

/// Preferred `ℍ^ZJ_τ` for a model: the direct logarithmic form for Hencky
/// laws, the absolute form otherwise.
pub fn kirchhoff_tangent(model: &dyn MaterialModel, state: &DeformationState) -> Result<Tensor4> {
    match model.name() {
        "hencky" | "hencky_incompressible" => {
            let p = model.lame().expect("Hencky laws carry Lamé parameters");
            hzj_tau_direct_hencky(state, &p)
        }
        _ => {
            let c = spatial_tangent(state, &model.material_tangent(state)?);
            hzj_tau_absolute(&c, &model.kirchhoff(state)?, state.j)
        }
    }
}

/// `‖a − b‖ / max(‖a‖, ‖b‖)`, zero when both vanish.
pub fn rel_frobenius(a: &Tensor4, b: &Tensor4) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (*a - *b).norm() / scale
    }
}

fn as_mandel<S: Serializer>(t: &Tensor4, s: S) -> std::result::Result<S::Ok, S::Error> {
    // every tangent here is minor-symmetric by construction
    to_mandel_with_tol(t, INPUT_SYM_TOL).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn as_mandel_opt<S: Serializer>(t: &Option<Tensor4>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match t {
        Some(t) => as_mandel(t, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentResiduals {
    pub tau_absolute_vs_lagrangian: f64,
    pub tau_absolute_vs_direct: Option<f64>,
    pub tau_lagrangian_vs_direct: Option<f64>,
    pub sigma_absolute_vs_from_tau: f64,
    pub wang_li_vs_sigma_absolute: f64,
    /// `‖ℍ^ZJ_τ − J(ℍ^ZJ + σ⊗𝟙)‖ / ‖ℍ^ZJ_τ‖`.
    pub bridge: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentSymmetry {
    pub tau_absolute: SymmetryFlags,
    pub tau_lagrangian: SymmetryFlags,
    pub tau_direct: Option<SymmetryFlags>,
    pub sigma_absolute: SymmetryFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentSet {
    #[serde(serialize_with = "as_mandel")]
    pub h_zj_tau_absolute: Tensor4,
    #[serde(serialize_with = "as_mandel")]
    pub h_zj_tau_lagrangian: Tensor4,
    /// Only for Hencky laws.
    #[serde(serialize_with = "as_mandel_opt")]
    pub h_zj_tau_direct: Option<Tensor4>,
    #[serde(serialize_with = "as_mandel")]
    pub h_zj_sigma_absolute: Tensor4,
    #[serde(serialize_with = "as_mandel")]
    pub h_zj_sigma_from_tau: Tensor4,
    #[serde(serialize_with = "as_mandel")]
    pub wang_li: Tensor4,
    #[serde(serialize_with = "as_mandel")]
    pub d_abaqus: Tensor4,
    #[serde(rename = "J")]
    pub j: f64,
    pub residuals: TangentResiduals,
    pub symmetry: TangentSymmetry,
}

impl TangentSet {
    pub fn build(model: &dyn MaterialModel, state: &DeformationState, sym_tol: f64) -> Result<Self> {
        let stresses = model.stresses(state)?;
        let (tau, sigma, j) = (stresses.tau, stresses.sigma, state.j);
        let c4 = model.material_tangent(state)?;
        let c = spatial_tangent(state, &c4);

        let abs = hzj_tau_absolute(&c, &tau, j)?;
        let lag = hzj_tau_lagrangian(state, &c4, &tau)?;
        let direct = match model.name() {
            "hencky" | "hencky_incompressible" => Some(hzj_tau_direct_hencky(state, &model.lame().expect("Lamé"))?),
            _ => None,
        };
        let s_abs = hzj_sigma_absolute(&c, &sigma)?;
        let s_tau = hzj_sigma_from_tau(&abs, &sigma, j)?;
        let wl = wang_li_tensor(&c, &sigma);
        let d_abaqus = abaqus_ddsdde(&abs, j)?;
        let bridge_rhs = (s_abs + outer(&sigma, &Tensor2::IDENTITY)) * j;

        let residuals = TangentResiduals {
            tau_absolute_vs_lagrangian: rel_frobenius(&abs, &lag),
            tau_absolute_vs_direct: direct.as_ref().map(|d| rel_frobenius(&abs, d)),
            tau_lagrangian_vs_direct: direct.as_ref().map(|d| rel_frobenius(&lag, d)),
            sigma_absolute_vs_from_tau: rel_frobenius(&s_abs, &s_tau),
            wang_li_vs_sigma_absolute: rel_frobenius(&wl, &s_abs),
            bridge: rel_frobenius(&abs, &bridge_rhs),
        };
        let symmetry = TangentSymmetry {
            tau_absolute: symmetry_flags(&abs, sym_tol),
            tau_lagrangian: symmetry_flags(&lag, sym_tol),
            tau_direct: direct.as_ref().map(|d| symmetry_flags(d, sym_tol)),
            sigma_absolute: symmetry_flags(&s_abs, sym_tol),
        };
        Ok(TangentSet {
            h_zj_tau_absolute: abs,
            h_zj_tau_lagrangian: lag,
            h_zj_tau_direct: direct,
            h_zj_sigma_absolute: s_abs,
            h_zj_sigma_from_tau: s_tau,
            wang_li: wl,
            d_abaqus,
            j,
            residuals,
            symmetry,
        })
    }
}
