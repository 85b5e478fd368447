//! Small dense kernels: cyclic Jacobi eigensolver and LU determinant.
//!
//! Both work on fixed-size arrays so that the 3×3 (strain) and 6×6 (Mandel)
//! cases share a single implementation.

/// Eigen-decomposition of a symmetric `N×N` matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matrix whose column `k`
/// is the unit eigenvector of eigenvalue `k`. Only the symmetric part of `a`
/// is used.
pub fn jacobi_eigen<const N: usize>(a: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    let target = (f64::EPSILON * scale * 1e-2).powi(2);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += m[p][q] * m[p][q];
            }
        }
        if off <= target {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = m[p][q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (akp, akq) = (m[k][p], m[k][q]);
                    m[k][p] = c * akp - s * akq;
                    m[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * apk - s * aqk;
                    m[q][k] = s * apk + c * aqk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: [usize; N] = [0; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&x, &y| m[x][x].total_cmp(&m[y][y]));
    let mut values = [0.0; N];
    let mut vectors = [[0.0; N]; N];
    for (new, &old) in order.iter().enumerate() {
        values[new] = m[old][old];
        for i in 0..N {
            vectors[i][new] = v[i][old];
        }
    }
    (values, vectors)
}

/// Determinant by LU factorisation with partial pivoting.
pub fn det_lu<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in (col + 1)..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}
