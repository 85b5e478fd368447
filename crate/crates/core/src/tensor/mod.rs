//! Cartesian second- and fourth-order tensor algebra.
//!
//! Components are stored row-major and indexed from zero. All predicates use
//! tolerances relative to `max(1, ‖·‖_F)`.

mod mandel;
mod products;
mod tensor4;

use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

pub use mandel::{
    eig_sym6, from_mandel, mandel_basis, mandel_index, mandel_vec, tensor_from_mandel_vec, to_mandel,
    to_mandel_with_tol, traceless_basis, Mandel6, MandelVec, SymEigen6, MANDEL_CONVENTION, MANDEL_PAIRS,
};
pub use products::{apply4, otimes_down, otimes_downup, otimes_up, outer, sym_downup, transpose4};
pub use tensor4::{symmetry_flags, SymmetryFlags, SymmetryResiduals, Tensor4};

/// Default relative tolerance for symmetry predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A 3×3 real tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tensor2(pub [[f64; 3]; 3]);

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([[0.0; 3]; 3]);
    pub const IDENTITY: Tensor2 = Tensor2([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn new(rows: [[f64; 3]; 3]) -> Self {
        Tensor2(rows)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Tensor2([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Dyad `e_i ⊗ e_j`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut t = Self::ZERO;
        t.0[i][j] = 1.0;
        t
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = f(i, j);
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(|i, j| f(self.0[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Inverse via the adjugate; `None` if the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let a = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
        Some(Tensor2([
            [cof(1, 2, 1, 2) / d, -cof(0, 2, 1, 2) / d, cof(0, 1, 1, 2) / d],
            [-cof(1, 2, 0, 2) / d, cof(0, 2, 0, 2) / d, -cof(0, 1, 0, 2) / d],
            [cof(1, 2, 0, 1) / d, -cof(0, 2, 0, 1) / d, cof(0, 1, 0, 1) / d],
        ]))
    }

    pub fn sym(&self) -> Self {
        Self::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    pub fn skew(&self) -> Self {
        Self::from_fn(|i, j| 0.5 * (self.0[i][j] - self.0[j][i]))
    }

    pub fn dev(&self) -> Self {
        *self - Self::IDENTITY * (self.trace() / 3.0)
    }

    /// Matrix product `self · rhs`.
    pub fn dot(&self, rhs: &Tensor2) -> Self {
        Self::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }

    pub fn mul_vec(&self, v: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| self.0[i][k] * v[k]).sum())
    }

    /// Frobenius inner product `⟨self, rhs⟩ = tr(self · rhsᵀ)`.
    pub fn inner(&self, rhs: &Tensor2) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * rhs.0[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// `max|a_ij − a_ji| / max(1, ‖a‖)`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                r = r.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        r / self.norm().max(1.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_residual() <= tol
    }

    /// Relative distance `‖self − other‖ / max(1, ‖other‖)`.
    pub fn rel_diff(&self, other: &Tensor2) -> f64 {
        (*self - *other).norm() / other.norm().max(1.0)
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for Tensor2 {
    fn add_assign(&mut self, rhs: Tensor2) {
        *self = *self + rhs;
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl SubAssign for Tensor2 {
    fn sub_assign(&mut self, rhs: Tensor2) {
        *self = *self - rhs;
    }
}

impl Neg for Tensor2 {
    type Output = Tensor2;
    fn neg(self) -> Tensor2 {
        self.map(|x| -x)
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, s: f64) -> Tensor2 {
        self.map(|x| x * s)
    }
}

impl Mul<Tensor2> for f64 {
    type Output = Tensor2;
    fn mul(self, t: Tensor2) -> Tensor2 {
        t * self
    }
}

/// Matrix product.
impl Mul for Tensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: Tensor2) -> Tensor2 {
        self.dot(&rhs)
    }
}

impl Div<f64> for Tensor2 {
    type Output = Tensor2;
    fn div(self, s: f64) -> Tensor2 {
        self.map(|x| x / s)
    }
}

impl std::fmt::Display for Tensor2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.0 {
            writeln!(f, "[{:>14.6e} {:>14.6e} {:>14.6e}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}
