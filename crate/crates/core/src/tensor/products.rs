//! Standard and special tensor products of second-order tensors.
//!
//! | product        | components              | action on Z        |
//! |----------------|-------------------------|--------------------|
//! | `outer`        | `P_ij Q_kl`             | `⟨Q, Z⟩ P`         |
//! | `otimes_down`  | `P_ik Q_jl`             | `P Z Qᵀ`           |
//! | `otimes_up`    | `P_il Q_jk`             | `P Zᵀ Qᵀ`          |
//! | `otimes_downup`| `½(P_ik Q_jl + Q_il P_jk)` | `sym(P Z Qᵀ)`   |

use super::{Tensor2, Tensor4};

pub fn outer(p: &Tensor2, q: &Tensor2) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| p.0[i][j] * q.0[k][l])
}

pub fn otimes_down(p: &Tensor2, q: &Tensor2) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| p.0[i][k] * q.0[j][l])
}

pub fn otimes_up(p: &Tensor2, q: &Tensor2) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| p.0[i][l] * q.0[j][k])
}

/// `½ (P ⊗̲ Q + Q ⊗̄ P)`. Left minor symmetric only.
pub fn otimes_downup(p: &Tensor2, q: &Tensor2) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| 0.5 * (p.0[i][k] * q.0[j][l] + q.0[i][l] * p.0[j][k]))
}

/// `P ⊗̲̄ Q + Q ⊗̲̄ P`, which has both minor symmetries, and major symmetry
/// when `P` and `Q` are symmetric.
pub fn sym_downup(p: &Tensor2, q: &Tensor2) -> Tensor4 {
    otimes_downup(p, q) + otimes_downup(q, p)
}

/// `(T . Z)_ij = Σ_kl T_ijkl Z_kl`.
pub fn apply4(t: &Tensor4, z: &Tensor2) -> Tensor2 {
    Tensor2::from_fn(|i, j| {
        let mut s = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                s += t.0[i][j][k][l] * z.0[k][l];
            }
        }
        s
    })
}

/// Major transpose, `Tᵀ_klij = T_ijkl`.
pub fn transpose4(t: &Tensor4) -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| t.0[k][l][i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::symmetry_flags;

    fn p() -> Tensor2 {
        Tensor2::new([[1.0, 0.4, -0.3], [0.2, 2.0, 0.1], [-0.5, 0.7, 1.5]])
    }
    fn q() -> Tensor2 {
        Tensor2::new([[0.3, -1.2, 0.8], [0.9, 0.1, 0.4], [0.0, -0.6, 2.2]])
    }
    fn z() -> Tensor2 {
        Tensor2::new([[1.3, 0.5, -0.2], [-0.7, 0.8, 0.6], [0.25, -1.1, 0.45]])
    }

    #[test]
    fn outer_of_identities_gives_trace() {
        let t = outer(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
        let r = apply4(&t, &z());
        assert!(r.rel_diff(&(Tensor2::IDENTITY * z().trace())) < 1e-15);
    }

    #[test]
    fn down_of_identities_is_identity_map() {
        let t = otimes_down(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
        assert_eq!(apply4(&t, &z()), z());
    }

    #[test]
    fn up_of_identities_transposes() {
        let t = otimes_up(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
        assert_eq!(apply4(&t, &z()), z().transpose());
    }

    #[test]
    fn up_equals_down_on_symmetric_input() {
        let zs = z().sym();
        let a = apply4(&otimes_up(&p(), &q()), &zs);
        let b = apply4(&otimes_down(&p(), &q()), &zs);
        assert!(a.rel_diff(&b) < 1e-15);
    }

    #[test]
    fn downup_of_identities_symmetrises() {
        let t = otimes_downup(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
        assert!(apply4(&t, &z()).rel_diff(&z().sym()) < 1e-15);
    }

    #[test]
    fn downup_lacks_right_minor_symmetry() {
        let f = symmetry_flags(&otimes_downup(&p(), &q()), 1e-12);
        assert!(f.minor_left);
        assert!(!f.minor_right);
    }

    #[test]
    fn symmetrised_downup_of_symmetric_pair_is_fully_symmetric() {
        let f = symmetry_flags(&sym_downup(&p().sym(), &q().sym()), 1e-13);
        assert!(f.all(), "{f:?}");
    }

    #[test]
    fn sigma_outer_identity_major_asymmetric_unless_hydrostatic() {
        let sigma = Tensor2::new([[1.0, 0.2, 0.0], [0.2, -0.5, 0.3], [0.0, 0.3, 0.1]]);
        let f = symmetry_flags(&outer(&sigma, &Tensor2::IDENTITY), 1e-12);
        assert!(!f.major);
        let hydro = Tensor2::IDENTITY * 3.0;
        assert!(symmetry_flags(&outer(&hydro, &Tensor2::IDENTITY), 1e-12).major);
    }

    #[test]
    fn down_applied_to_identity_gives_a_at() {
        let a = p();
        let r = apply4(&otimes_down(&a, &a), &Tensor2::IDENTITY);
        assert!(r.rel_diff(&(a * a.transpose())) < 1e-15);
    }
}
