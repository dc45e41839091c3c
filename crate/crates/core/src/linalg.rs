//! Minimal dense symmetric eigenvalue solver (cyclic Jacobi).
//!
//! Only the smallest eigenvalue is needed, for the positive-definiteness
//! diagnostic on kernel matrices of at most a few dozen points.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Smallest eigenvalue of a symmetric matrix given in row-major order.
pub fn min_eigenvalue_symmetric(a: &[f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut m: Vec<f64> = a.to_vec();

    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off <= 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                // Stable tangent of the rotation angle.
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;

                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[k * n + p];
                        let akq = m[k * n + q];
                        m[k * n + p] = c * akp - s * akq;
                        m[p * n + k] = m[k * n + p];
                        m[k * n + q] = s * akp + c * akq;
                        m[q * n + k] = m[k * n + q];
                    }
                }
            }
        }
    }

    let mut lo = f64::INFINITY;
    for i in 0..n {
        lo = lo.min(m[i * n + i]);
    }
    lo
}

#[allow(dead_code)]
pub fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
        let a = [2.0, 1.0, 1.0, 2.0];
        assert!((min_eigenvalue_symmetric(&a, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite() {
        // [[0,1],[1,0]] has eigenvalues -1 and 1.
        let a = [0.0, 1.0, 1.0, 0.0];
        assert!((min_eigenvalue_symmetric(&a, 2) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn diag_dominant_psd() {
        let n = 8;
        let mut a = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = if i == j { 2.0 } else { 1.0 / (1.0 + (i as f64 - j as f64).abs()) / 8.0 };
            }
        }
        assert!(min_eigenvalue_symmetric(&a, n) > 0.0);
    }
}
