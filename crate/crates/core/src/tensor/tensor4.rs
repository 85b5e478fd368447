use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

type Comp4 = [[[[f64; 3]; 3]; 3]; 3];

/// A 3×3×3×3 real tensor, `T[i][j][k][l]`, acting on second-order tensors by
/// double contraction over its last index pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tensor4(pub Comp4);

impl Tensor4 {
    pub const ZERO: Tensor4 = Tensor4([[[[0.0; 3]; 3]; 3]; 3]);

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        t.0[i][j][k][l] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(|i, j, k, l| f(self.0[i][j][k][l]))
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[i][j][k][l]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().flatten().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().flatten().flatten().all(|x| x.is_finite())
    }

    /// Relative distance `‖self − other‖ / max(1, ‖other‖)`.
    pub fn rel_diff(&self, other: &Tensor4) -> f64 {
        (*self - *other).norm() / other.norm().max(1.0)
    }

    /// `T[j][i][k][l]`.
    pub fn swap_left(&self) -> Self {
        Self::from_fn(|i, j, k, l| self.0[j][i][k][l])
    }

    /// `T[i][j][l][k]`.
    pub fn swap_right(&self) -> Self {
        Self::from_fn(|i, j, k, l| self.0[i][j][l][k])
    }

    /// Projection onto tensors with both minor symmetries.
    pub fn minor_symmetrised(&self) -> Self {
        Self::from_fn(|i, j, k, l| {
            0.25 * (self.0[i][j][k][l] + self.0[j][i][k][l] + self.0[i][j][l][k] + self.0[j][i][l][k])
        })
    }

    /// Row-major 9×9 view, row index `3i+j`, column `3k+l`.
    pub fn as_matrix9(&self) -> [[f64; 9]; 9] {
        let mut m = [[0.0; 9]; 9];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m[3 * i + j][3 * k + l] = self.0[i][j][k][l];
                    }
                }
            }
        }
        m
    }
}

impl Index<(usize, usize, usize, usize)> for Tensor4 {
    type Output = f64;
    fn index(&self, (i, j, k, l): (usize, usize, usize, usize)) -> &f64 {
        &self.0[i][j][k][l]
    }
}

impl IndexMut<(usize, usize, usize, usize)> for Tensor4 {
    fn index_mut(&mut self, (i, j, k, l): (usize, usize, usize, usize)) -> &mut f64 {
        &mut self.0[i][j][k][l]
    }
}

impl Add for Tensor4 {
    type Output = Tensor4;
    fn add(self, rhs: Tensor4) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.0[i][j][k][l] + rhs.0[i][j][k][l])
    }
}

impl Sub for Tensor4 {
    type Output = Tensor4;
    fn sub(self, rhs: Tensor4) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.0[i][j][k][l] - rhs.0[i][j][k][l])
    }
}

impl Neg for Tensor4 {
    type Output = Tensor4;
    fn neg(self) -> Tensor4 {
        self.map(|x| -x)
    }
}

impl Mul<f64> for Tensor4 {
    type Output = Tensor4;
    fn mul(self, s: f64) -> Tensor4 {
        self.map(|x| x * s)
    }
}

impl Mul<Tensor4> for f64 {
    type Output = Tensor4;
    fn mul(self, t: Tensor4) -> Tensor4 {
        t * self
    }
}

impl Div<f64> for Tensor4 {
    type Output = Tensor4;
    fn div(self, s: f64) -> Tensor4 {
        self.map(|x| x / s)
    }
}

/// Frobenius norms of the antisymmetric parts `(T − π(T))/2` for each index
/// permutation π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryResiduals {
    pub minor_left: f64,
    pub minor_right: f64,
    pub major: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFlags {
    pub minor_left: bool,
    pub minor_right: bool,
    pub major: bool,
    /// Residuals divided by `max(1, ‖T‖_F)`; the flags compare these to `tol`.
    pub residuals: SymmetryResiduals,
    pub absolute: SymmetryResiduals,
    pub norm: f64,
    pub tol: f64,
}

impl SymmetryFlags {
    pub fn all(&self) -> bool {
        self.minor_left && self.minor_right && self.major
    }

    pub fn minor(&self) -> bool {
        self.minor_left && self.minor_right
    }
}

/// Tests minor-left, minor-right and major symmetry of `t` at relative tolerance `tol`.
pub fn symmetry_flags(t: &Tensor4, tol: f64) -> SymmetryFlags {
    assert!(tol > 0.0, "symmetry tolerance must be positive");
    let norm = t.norm();
    let scale = norm.max(1.0);
    let absolute = SymmetryResiduals {
        minor_left: 0.5 * (*t - t.swap_left()).norm(),
        minor_right: 0.5 * (*t - t.swap_right()).norm(),
        major: 0.5 * (*t - super::transpose4(t)).norm(),
    };
    let residuals = SymmetryResiduals {
        minor_left: absolute.minor_left / scale,
        minor_right: absolute.minor_right / scale,
        major: absolute.major / scale,
    };
    SymmetryFlags {
        minor_left: residuals.minor_left <= tol,
        minor_right: residuals.minor_right <= tol,
        major: residuals.major <= tol,
        residuals,
        absolute,
        norm,
        tol,
    }
}
