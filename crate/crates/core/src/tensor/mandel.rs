//! Orthonormal (√2-weighted) 6×6 Mandel representation.
//!
//! Index pairs are ordered (11, 22, 33, 12, 23, 31). With this scaling
//! `⟨T.H, H⟩ = hᵀ M h`, matrix symmetry of `M` is exactly major symmetry of
//! `T`, and eigenvalues of `M` are those of `T` restricted to Sym(3).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{symmetry_flags, Tensor2, Tensor4, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{det_lu, jacobi_eigen};

pub const MANDEL_CONVENTION: &str = "mandel-sqrt2-112233122331";
pub const MANDEL_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)];

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const WEIGHTS: [f64; 6] = [1.0, 1.0, 1.0, SQRT_2, SQRT_2, SQRT_2];

pub type MandelVec = [f64; 6];

/// Mandel position of the (unordered) index pair `(i, j)`.
pub fn mandel_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (1, 2) => 4,
        (0, 2) => 5,
        _ => panic!("index pair ({i}, {j}) out of range"),
    }
}

/// Mandel 6-vector of the symmetric part of `s`.
pub fn mandel_vec(s: &Tensor2) -> MandelVec {
    let s = s.sym();
    let mut v = [0.0; 6];
    for (a, &(i, j)) in MANDEL_PAIRS.iter().enumerate() {
        v[a] = WEIGHTS[a] * s.0[i][j];
    }
    v
}

pub fn tensor_from_mandel_vec(v: &MandelVec) -> Tensor2 {
    Tensor2::from_fn(|i, j| {
        let a = mandel_index(i, j);
        v[a] / WEIGHTS[a]
    })
}

/// The six orthonormal basis tensors of Sym(3) matching the Mandel ordering.
pub fn mandel_basis() -> [Tensor2; 6] {
    std::array::from_fn(|a| {
        let mut e = [0.0; 6];
        e[a] = 1.0;
        tensor_from_mandel_vec(&e)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mandel6(pub [[f64; 6]; 6]);

impl Mandel6 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 6]; 6];
        for (a, row) in m.iter_mut().enumerate() {
            row[a] = 1.0;
        }
        Mandel6(m)
    }

    pub fn transpose(&self) -> Self {
        Mandel6(std::array::from_fn(|a| std::array::from_fn(|b| self.0[b][a])))
    }

    pub fn sym(&self) -> Self {
        Mandel6(std::array::from_fn(|a| std::array::from_fn(|b| 0.5 * (self.0[a][b] + self.0[b][a]))))
    }

    pub fn skew(&self) -> Self {
        Mandel6(std::array::from_fn(|a| std::array::from_fn(|b| 0.5 * (self.0[a][b] - self.0[b][a]))))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn skew_norm(&self) -> f64 {
        self.skew().norm()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.skew_norm() <= tol * self.norm().max(1.0)
    }

    pub fn mul_vec(&self, h: &MandelVec) -> MandelVec {
        std::array::from_fn(|a| (0..6).map(|b| self.0[a][b] * h[b]).sum())
    }

    pub fn quad_form(&self, h: &MandelVec) -> f64 {
        let mh = self.mul_vec(h);
        (0..6).map(|a| h[a] * mh[a]).sum()
    }

    pub fn det(&self) -> f64 {
        det_lu(&self.0)
    }

    /// `Pᵀ M P` for an orthonormal basis `P` of the traceless subspace
    /// `{h : h₁ + h₂ + h₃ = 0}`.
    pub fn traceless_block(&self) -> [[f64; 5]; 5] {
        let basis = traceless_basis();
        let mut out = [[0.0; 5]; 5];
        for (r, br) in basis.iter().enumerate() {
            let mb = self.mul_vec(br);
            for (c, bc) in basis.iter().enumerate() {
                out[c][r] = (0..6).map(|a| bc[a] * mb[a]).sum();
            }
        }
        out
    }
}

/// Orthonormal basis of the traceless subspace in Mandel coordinates.
pub fn traceless_basis() -> [MandelVec; 5] {
    let s2 = 1.0 / SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    [
        [s2, -s2, 0.0, 0.0, 0.0, 0.0],
        [s6, s6, -2.0 * s6, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ]
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Mandel6Repr {
    convention: String,
    matrix: [[f64; 6]; 6],
}

impl Serialize for Mandel6 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Mandel6Repr { convention: MANDEL_CONVENTION.to_string(), matrix: self.0 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mandel6 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = Mandel6Repr::deserialize(d)?;
        if repr.convention != MANDEL_CONVENTION {
            return Err(serde::de::Error::custom(format!(
                "unsupported Mandel convention `{}` (expected `{MANDEL_CONVENTION}`)",
                repr.convention
            )));
        }
        Ok(Mandel6(repr.matrix))
    }
}

pub fn to_mandel(t: &Tensor4) -> Result<Mandel6> {
    to_mandel_with_tol(t, DEFAULT_TOL)
}

/// Mandel image of a minor-symmetric tensor. Fails rather than projecting
/// when either minor symmetry is violated beyond `tol`.
pub fn to_mandel_with_tol(t: &Tensor4, tol: f64) -> Result<Mandel6> {
    let flags = symmetry_flags(t, tol);
    if !flags.minor() {
        return Err(Error::NotMinorSymmetric {
            residual: flags.residuals.minor_left.max(flags.residuals.minor_right),
            tol,
        });
    }
    let ts = t.minor_symmetrised();
    let mut m = [[0.0; 6]; 6];
    for (a, &(i, j)) in MANDEL_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in MANDEL_PAIRS.iter().enumerate() {
            m[a][b] = WEIGHTS[a] * WEIGHTS[b] * ts.0[i][j][k][l];
        }
    }
    Ok(Mandel6(m))
}

pub fn from_mandel(m: &Mandel6) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| {
        let a = mandel_index(i, j);
        let b = mandel_index(k, l);
        m.0[a][b] / (WEIGHTS[a] * WEIGHTS[b])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymEigen6 {
    /// Eigenvalues of `sym(M)`, ascending.
    pub values: [f64; 6],
    /// True when `M` was not symmetric within tolerance and `sym(M)` was used.
    pub symmetrised: bool,
}

impl SymEigen6 {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.values[0] > 0.0
    }
}

pub fn eig_sym6(m: &Mandel6) -> SymEigen6 {
    let symmetrised = !m.is_symmetric(DEFAULT_TOL);
    let (values, _) = jacobi_eigen(&m.sym().0);
    SymEigen6 { values, symmetrised }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{apply4, otimes_downup, outer};

    fn isotropic(mu: f64, lambda: f64) -> Tensor4 {
        let i = Tensor2::IDENTITY;
        otimes_downup(&i, &i) * (2.0 * mu) + outer(&i, &i) * lambda
    }

    #[test]
    fn symmetriser_maps_to_identity() {
        let i = Tensor2::IDENTITY;
        let m = to_mandel(&otimes_downup(&i, &i).minor_symmetrised()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((m.0[a][b] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_outer_is_rank_one() {
        let i = Tensor2::IDENTITY;
        let m = to_mandel(&outer(&i, &i)).unwrap();
        let v = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(m.0[a][b], v[a] * v[b]);
            }
        }
        let e = eig_sym6(&m);
        assert!(e.values[..5].iter().all(|x| x.abs() < 1e-14));
        assert!((e.values[5] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn isotropic_eigenvalues() {
        let e = eig_sym6(&to_mandel(&isotropic(1.0, 1.0)).unwrap());
        for v in &e.values[..5] {
            assert!((v - 2.0).abs() < 1e-14);
        }
        assert!((e.values[5] - 5.0).abs() < 1e-14);
        assert!(!e.symmetrised);
    }

    #[test]
    fn identity_eigenvalues() {
        assert_eq!(eig_sym6(&Mandel6::identity()).values, [1.0; 6]);
    }

    #[test]
    fn rejects_raw_downup_product() {
        let p = Tensor2::new([[1.0, 0.3, 0.0], [0.1, 2.0, 0.0], [0.0, 0.4, 1.0]]);
        let err = to_mandel(&otimes_downup(&p, &Tensor2::IDENTITY)).unwrap_err();
        assert!(matches!(err, Error::NotMinorSymmetric { .. }));
    }

    #[test]
    fn vec_round_trip_and_norm() {
        let s = Tensor2::new([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]]);
        let v = mandel_vec(&s);
        assert!(tensor_from_mandel_vec(&v).rel_diff(&s) < 1e-15);
        let n2: f64 = v.iter().map(|x| x * x).sum();
        assert!((n2 - s.inner(&s)).abs() < 1e-12);
    }

    #[test]
    fn quad_form_matches_contraction() {
        let t = isotropic(0.7, -0.2) + outer(&Tensor2::diag(1.0, 2.0, 0.0), &Tensor2::diag(1.0, 2.0, 0.0));
        let m = to_mandel(&t).unwrap();
        let h = Tensor2::new([[0.3, -0.4, 0.2], [-0.4, 1.1, 0.9], [0.2, 0.9, -0.5]]);
        let direct = apply4(&t, &h).inner(&h);
        assert!((m.quad_form(&mandel_vec(&h)) - direct).abs() < 1e-13);
    }

    #[test]
    fn traceless_block_of_volumetric_projector_vanishes() {
        let i = Tensor2::IDENTITY;
        let m = to_mandel(&outer(&i, &i)).unwrap();
        let blk = m.traceless_block();
        assert!(blk.iter().flatten().all(|x| x.abs() < 1e-15));
        let blk = to_mandel(&isotropic(1.5, 4.0)).unwrap().traceless_block();
        let (w, _) = jacobi_eigen(&blk);
        assert!(w.iter().all(|x| (x - 3.0).abs() < 1e-13));
    }

    #[test]
    fn json_carries_convention_tag() {
        let s = serde_json::to_string(&Mandel6::identity()).unwrap();
        assert!(s.starts_with("{\"convention\":\"mandel-sqrt2-112233122331\""));
        let back: Mandel6 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Mandel6::identity());
        let bad = s.replace("mandel-sqrt2", "voigt");
        assert!(serde_json::from_str::<Mandel6>(&bad).is_err());
    }
}
