//! Shared oracles for the integration tests and the acceptance harness.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zjtangent::kinematics::{make_state, DeformationState};
use zjtangent::sample;
use zjtangent::tensor::{
    apply4, mandel_vec, otimes_down, otimes_downup, otimes_up, outer, sym_downup, symmetry_flags, to_mandel,
    transpose4, Tensor2, Tensor4,
};

/// Largest absolute component difference.
pub fn max_abs4(a: &Tensor4, b: &Tensor4) -> f64 {
    a.0.iter()
        .flatten()
        .flatten()
        .flatten()
        .zip(b.0.iter().flatten().flatten().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs2(a: &Tensor2, b: &Tensor2) -> f64 {
    (*a - *b).max_abs()
}

/// Definitional, transpose and symmetrisation identities of the special
/// products, each as `(name, absolute residual)`. Components of `p, q, r, s,
/// z, y` are expected to be O(1).
pub fn algebra_residuals(
    p: &Tensor2,
    q: &Tensor2,
    r: &Tensor2,
    s: &Tensor2,
    z: &Tensor2,
    y: &Tensor2,
) -> Vec<(&'static str, f64)> {
    let i = Tensor2::IDENTITY;
    let down = otimes_down(p, q);
    let up = otimes_up(p, q);
    let du = otimes_downup(p, q);
    let sdu = sym_downup(p, q);
    let (ps, qs) = (p.sym(), q.sym());
    let sdu_sym = sym_downup(&ps, &qs);
    let sym_flags = symmetry_flags(&sdu, 1e-13);

    // component definitions written out independently of the library
    let down_c = Tensor4::from_fn(|a, b, c, d| p.0[a][c] * q.0[b][d]);
    let up_c = Tensor4::from_fn(|a, b, c, d| p.0[a][d] * q.0[b][c]);
    let du_c = Tensor4::from_fn(|a, b, c, d| 0.5 * (p.0[a][c] * q.0[b][d] + q.0[a][d] * p.0[b][c]));
    let outer_c = Tensor4::from_fn(|a, b, c, d| p.0[a][b] * q.0[c][d]);

    let pzq = *p * *z * q.transpose();
    vec![
        ("outer components", max_abs4(&outer(p, q), &outer_c)),
        ("down components", max_abs4(&down, &down_c)),
        ("up components", max_abs4(&up, &up_c)),
        ("downup components", max_abs4(&du, &du_c)),
        ("outer action <Q,Z> P", max_abs2(&apply4(&outer(p, q), z), &(*p * q.inner(z)))),
        ("down action P Z Q^T", max_abs2(&apply4(&down, z), &pzq)),
        ("up action P Z^T Q^T", max_abs2(&apply4(&up, z), &(*p * z.transpose() * q.transpose()))),
        ("downup action sym(P Z Q^T)", max_abs2(&apply4(&du, z), &pzq.sym())),
        (
            "sym_downup action sym(P Z Q^T + Q Z P^T)",
            max_abs2(&apply4(&sdu, z), &(pzq + *q * *z * p.transpose()).sym()),
        ),
        ("downup = (down(P,Q) + up(Q,P))/2", max_abs4(&du, &((down + otimes_up(q, p)) * 0.5))),
        ("transpose outer(P,Q) = outer(Q,P)", max_abs4(&transpose4(&outer(p, q)), &outer(q, p))),
        (
            "transpose down(P,Q) = down(P^T,Q^T)",
            max_abs4(&transpose4(&down), &otimes_down(&p.transpose(), &q.transpose())),
        ),
        ("transpose up(P,Q) = up(Q^T,P^T)", max_abs4(&transpose4(&up), &otimes_up(&q.transpose(), &p.transpose()))),
        ("left swap of down(P,Q) = up(Q,P)", max_abs4(&down.swap_left(), &otimes_up(q, p))),
        ("downup left minor symmetric", max_abs4(&du.swap_left(), &du)),
        ("sym_downup left minor symmetric", sym_flags.absolute.minor_left),
        ("sym_downup right minor symmetric", sym_flags.absolute.minor_right),
        ("sym_downup(sym P, sym Q) major symmetric", max_abs4(&transpose4(&sdu_sym), &sdu_sym)),
        ("down(1,1) is the identity map", max_abs2(&apply4(&otimes_down(&i, &i), z), z)),
        ("up(1,1) is transposition", max_abs2(&apply4(&otimes_up(&i, &i), z), &z.transpose())),
        ("downup(1,1) is the symmetriser", max_abs2(&apply4(&otimes_downup(&i, &i), z), &z.sym())),
        (
            "down composition down(P,Q)down(R,S) = down(PR,QS)",
            max_abs2(&apply4(&down, &apply4(&otimes_down(r, s), z)), &apply4(&otimes_down(&(*p * *r), &(*q * *s)), z)),
        ),
        ("adjoint <T.Z,Y> = <Z,T^T.Y>", (apply4(&down, z).inner(y) - z.inner(&apply4(&transpose4(&down), y))).abs()),
        ("Mandel quadratic form of sym_downup", {
            let zs = z.sym();
            let m = to_mandel(&sdu).expect("both minor symmetries");
            (m.quad_form(&mandel_vec(&zs)) - apply4(&sdu, &zs).inner(&zs)).abs()
        }),
    ]
}

/// Seeded random states with `det F` in `[0.3, 3]`.
pub fn random_states(seed: u64, n: usize) -> Vec<DeformationState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| make_state(&sample::deformation_gradient(&mut rng, 0.3, 3.0)).expect("valid F")).collect()
}
