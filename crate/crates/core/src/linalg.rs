//! Singular values of small dense complex matrices.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Singular values of the `rows × cols` complex matrix `a` (row-major),
/// in descending order.
///
/// Uses one-sided Jacobi on the real embedding `[[Re, −Im], [Im, Re]]`,
/// whose singular values are those of `a`, each repeated twice.
pub(crate) fn singular_values(a: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let n = 2 * rows;
    let c = 2 * cols;
    // Column-major real embedding.
    let mut m = alloc::vec![0.0; n * c];
    for i in 0..rows {
        for j in 0..cols {
            let z = a[i * cols + j];
            m[j * n + i] = z.re;
            m[j * n + rows + i] = z.im;
            m[(cols + j) * n + i] = -z.im;
            m[(cols + j) * n + rows + i] = z.re;
        }
    }
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let x = m[p * n + i];
                    let y = m[q * n + i];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..n {
                    let x = m[p * n + i];
                    let y = m[q * n + i];
                    m[p * n + i] = cs * x - sn * y;
                    m[q * n + i] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..c).map(|j| m[j * n..(j + 1) * n].iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    // Keep one of each embedded pair.
    sv.chunks(2).map(|p| p[0]).take(rows.min(cols)).collect()
}
