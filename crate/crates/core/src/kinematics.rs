//! Deformation measures derived from a deformation gradient, the SPD matrix
//! logarithm with its Fréchet derivative, and the velocity-gradient split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::jacobi_eigen;
use crate::tensor::{Tensor2, Tensor4};

/// Smallest admissible `det F`.
pub const DET_TOL: f64 = 1e-12;

/// Relative eigenvalue gap below which a pair is treated as coincident in the
/// divided-difference kernel.
pub const CONFLUENCE_TOL: f64 = 1e-9;

const SYM_TOL: f64 = 1e-10;

/// Everything derivable from one deformation gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationState {
    #[serde(rename = "F")]
    pub f: Tensor2,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "C")]
    pub c: Tensor2,
    #[serde(rename = "B")]
    pub b: Tensor2,
    #[serde(rename = "U")]
    pub u: Tensor2,
    #[serde(rename = "V")]
    pub v: Tensor2,
    #[serde(rename = "R")]
    pub r: Tensor2,
    #[serde(rename = "logV")]
    pub log_v: Tensor2,
    #[serde(rename = "logB")]
    pub log_b: Tensor2,
    /// Always true for states built by [`make_state`]; every other field can
    /// be recomputed from `F`.
    #[serde(rename = "derived_from_F")]
    pub derived_from_f: bool,
}

impl DeformationState {
    pub fn identity() -> Self {
        make_state(&Tensor2::IDENTITY).expect("identity is a valid deformation")
    }

    /// Green-Lagrange strain `½(C − 𝟙)`.
    pub fn green_lagrange(&self) -> Tensor2 {
        (self.c - Tensor2::IDENTITY) * 0.5
    }

    pub fn f_inv(&self) -> Tensor2 {
        self.f.inverse().expect("state has det F > 0")
    }
}

/// Eigen-decomposition of a symmetric 3×3 tensor: ascending eigenvalues and
/// the orthogonal matrix of eigenvectors (as columns).
pub fn sym_eigen(s: &Tensor2) -> ([f64; 3], Tensor2) {
    let (w, q) = jacobi_eigen(&s.0);
    (w, Tensor2(q))
}

/// `Q diag(f(λ)) Qᵀ` for the spectral decomposition of symmetric `s`.
pub fn sym_fn(s: &Tensor2, f: impl Fn(f64) -> f64) -> Tensor2 {
    let (w, q) = sym_eigen(s);
    spectral(&q, w.map(f))
}

fn spectral(q: &Tensor2, d: [f64; 3]) -> Tensor2 {
    Tensor2::from_fn(|i, j| (0..3).map(|a| q.0[i][a] * d[a] * q.0[j][a]).sum())
}

fn check_symmetric(s: &Tensor2) -> Result<()> {
    let residual = s.symmetry_residual();
    if residual > SYM_TOL {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(())
}

pub fn spd_eigen(s: &Tensor2) -> Result<([f64; 3], Tensor2)> {
    check_symmetric(s)?;
    let (w, q) = sym_eigen(&s.sym());
    if !(w[0] > f64::EPSILON * w[2].abs()) || !w[0].is_finite() || !w[2].is_finite() {
        return Err(Error::NotSpd { min_eigenvalue: w[0] });
    }
    Ok((w, q))
}

/// Principal logarithm of a symmetric positive definite tensor.
pub fn spd_log(s: &Tensor2) -> Result<Tensor2> {
    let (w, q) = spd_eigen(s)?;
    Ok(spectral(&q, w.map(f64::ln)))
}

/// Principal square root of a symmetric positive definite tensor.
pub fn spd_sqrt(s: &Tensor2) -> Result<Tensor2> {
    let (w, q) = spd_eigen(s)?;
    Ok(spectral(&q, w.map(f64::sqrt)))
}

/// Exponential of a symmetric tensor.
pub fn sym_exp(s: &Tensor2) -> Result<Tensor2> {
    check_symmetric(s)?;
    Ok(sym_fn(&s.sym(), f64::exp))
}

/// Divided difference `(log a − log b)/(a − b)` with the confluent limit.
pub fn log_divided_difference(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= CONFLUENCE_TOL * hi {
        return 2.0 / (hi + lo);
    }
    let r = (hi - lo) / lo;
    r.ln_1p() / (lo * r)
}

fn dlog_kernel(w: &[f64; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|a| std::array::from_fn(|b| log_divided_difference(w[a], w[b])))
}

/// Fréchet derivative `D_B log B . H` for SPD `B` and symmetric `H`
/// (only `sym H` is used).
pub fn dlog_frechet(b: &Tensor2, h: &Tensor2) -> Result<Tensor2> {
    let (w, q) = spd_eigen(b)?;
    let k = dlog_kernel(&w);
    let hp = q.transpose() * h.sym() * q;
    let g = Tensor2::from_fn(|i, j| k[i][j] * hp.0[i][j]);
    Ok(q * g * q.transpose())
}

/// `D_B log B` as a fourth-order tensor acting on symmetric directions.
pub fn dlog_tensor(b: &Tensor2) -> Result<Tensor4> {
    let (w, q) = spd_eigen(b)?;
    Ok(spectral_tensor(&q, &dlog_kernel(&w)))
}

/// `Σ_ab k_ab (q_a⊗q_b) ⊗ sym(q_a⊗q_b)` for orthonormal columns `q_a`, the
/// form taken by Fréchet derivatives of isotropic tensor functions in their
/// eigenbasis.
pub fn spectral_tensor(q: &Tensor2, k: &[[f64; 3]; 3]) -> Tensor4 {
    let q = &q.0;
    Tensor4::from_fn(|i, j, kk, l| {
        let mut s = 0.0;
        for a in 0..3 {
            for c in 0..3 {
                s += k[a][c] * q[i][a] * q[j][c] * 0.5 * (q[kk][a] * q[l][c] + q[l][a] * q[kk][c]);
            }
        }
        s
    })
}

/// Builds the full [`DeformationState`] from `F` via eigen-decompositions of
/// `C` and `B`.
pub fn make_state(f: &Tensor2) -> Result<DeformationState> {
    let j = f.det();
    if !(j > DET_TOL) || !f.is_finite() {
        return Err(Error::NonInvertible { det: j });
    }
    let c = (f.transpose() * *f).sym();
    let b = (*f * f.transpose()).sym();

    let (wc, qc) = spd_eigen(&c).map_err(|_| Error::NonInvertible { det: j })?;
    let u = spectral(&qc, wc.map(f64::sqrt));
    let u_inv = spectral(&qc, wc.map(|x| 1.0 / x.sqrt()));
    let r = *f * u_inv;

    let (wb, qb) = spd_eigen(&b).map_err(|_| Error::NonInvertible { det: j })?;
    let v = spectral(&qb, wb.map(f64::sqrt));
    let log_v = spectral(&qb, wb.map(|x| 0.5 * x.ln()));

    Ok(DeformationState { f: *f, j, c, b, u, v, r, log_v, log_b: log_v * 2.0, derived_from_f: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocitySplit {
    #[serde(rename = "L")]
    pub l: Tensor2,
    #[serde(rename = "D")]
    pub d: Tensor2,
    #[serde(rename = "W")]
    pub w: Tensor2,
}

pub fn velocity_split(l: &Tensor2) -> VelocitySplit {
    VelocitySplit { l: *l, d: l.sym(), w: l.skew() }
}

/// `L = Ḟ F⁻¹`.
pub fn path_l(f: &Tensor2, fdot: &Tensor2) -> Result<Tensor2> {
    let det = f.det();
    if !(det > DET_TOL) {
        return Err(Error::NonInvertible { det });
    }
    let f_inv = f.inverse().ok_or(Error::NonInvertible { det })?;
    Ok(*fdot * f_inv)
}
