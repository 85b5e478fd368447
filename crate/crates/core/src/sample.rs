//! Seeded random tensors for property checks.
//!
//! Stretches are drawn log-uniformly so that samples cover a decade on either
//! side of the reference configuration.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::tensor::Tensor2;

/// Dense matrix with entries uniform in `[-scale, scale]`.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Tensor2 {
    let u = Uniform::new_inclusive(-scale, scale).expect("valid range");
    let mut t = Tensor2::ZERO;
    for x in t.0.iter_mut().flatten() {
        *x = u.sample(rng);
    }
    t
}

pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Tensor2 {
    matrix(rng, scale).sym()
}

/// Haar-distributed proper rotation from Gram-Schmidt on a Gaussian matrix.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Tensor2 {
    loop {
        let g: [[f64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(rng)));
        let mut cols: [[f64; 3]; 3] = [[0.0; 3]; 3];
        let mut ok = true;
        for k in 0..3 {
            let mut v = [g[0][k], g[1][k], g[2][k]];
            // two passes keep the columns orthogonal to roundoff
            for _ in 0..2 {
                for prev in cols.iter().take(k) {
                    let d: f64 = (0..3).map(|i| v[i] * prev[i]).sum();
                    for i in 0..3 {
                        v[i] -= d * prev[i];
                    }
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            cols[k] = v.map(|x| x / n);
        }
        if !ok {
            continue;
        }
        let mut q = Tensor2::from_fn(|i, j| cols[j][i]);
        if q.det() < 0.0 {
            for row in q.0.iter_mut() {
                row[2] = -row[2];
            }
        }
        return q;
    }
}

/// `Q diag(exp u) Qᵀ` with `u` uniform in `[-log_range, log_range]³`.
pub fn spd<R: Rng + ?Sized>(rng: &mut R, log_range: f64) -> Tensor2 {
    let u = Uniform::new_inclusive(-log_range, log_range).expect("valid range");
    let e: [f64; 3] = std::array::from_fn(|_| u.sample(rng).exp());
    let q = rotation(rng);
    q * Tensor2::diag(e[0], e[1], e[2]) * q.transpose()
}

/// Random `F = V R` with stretches in `[e^-1.5, e^1.5]` and `det F` in `[det_min, det_max]`.
pub fn deformation_gradient<R: Rng + ?Sized>(rng: &mut R, det_min: f64, det_max: f64) -> Tensor2 {
    assert!(0.0 < det_min && det_min < det_max);
    loop {
        let v = spd(rng, 1.5);
        let d = v.det();
        if d >= det_min && d <= det_max {
            return v * rotation(rng);
        }
    }
}
