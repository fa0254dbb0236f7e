//! Small dense linear algebra helpers: LU inversion with partial pivoting,
//! Gauss-Jordan inversion over jets, and cyclic Jacobi eigenvalues for
//! signature and conditioning checks. Matrices here are tiny (<= 12x12).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::jet::Jet;

#[derive(Clone, Debug, PartialEq)]
pub enum LinalgError {
    Singular,
    /// Condition estimate exceeded the acceptance bound.
    IllConditioned { cond: f64 },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::Singular => write!(f, "singular matrix"),
            LinalgError::IllConditioned { cond } => {
                write!(f, "ill-conditioned matrix (condition estimate {cond:.3e})")
            }
        }
    }
}

impl core::error::Error for LinalgError {}

/// Condition-number bound used everywhere a metric is inverted.
pub const MAX_CONDITION: f64 = 1e8;

/// Invert a row-major `n x n` matrix by LU with partial pivoting.
pub fn invert(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    debug_assert_eq!(a.len(), n * n);
    let mut lu = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[col * n + col].abs();
        for row in col + 1..n {
            let v = lu[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for k in 0..n {
                lu.swap(col * n + k, pivot * n + k);
            }
            perm.swap(col, pivot);
        }
        let d = lu[col * n + col];
        for row in col + 1..n {
            let f = lu[row * n + col] / d;
            lu[row * n + col] = f;
            for k in col + 1..n {
                lu[row * n + k] -= f * lu[col * n + k];
            }
        }
    }
    // solve for each unit vector
    let mut inv = vec![0.0; n * n];
    let mut col_buf = vec![0.0; n];
    for e in 0..n {
        for (i, b) in col_buf.iter_mut().enumerate() {
            *b = if perm[i] == e { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            for k in 0..i {
                col_buf[i] -= lu[i * n + k] * col_buf[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                col_buf[i] -= lu[i * n + k] * col_buf[k];
            }
            col_buf[i] /= lu[i * n + i];
        }
        for i in 0..n {
            inv[i * n + e] = col_buf[i];
        }
    }
    Ok(inv)
}

/// Gauss-Jordan inversion of a matrix of jets; pivots are selected on the
/// value parts, derivative parts ride along through exact jet arithmetic.
/// Equivalent to propagating d(A^-1) = -A^-1 dA A^-1 to the jet order.
pub fn invert_jets(a: &[Jet], n: usize) -> Result<Vec<Jet>, LinalgError> {
    debug_assert_eq!(a.len(), n * n);
    let one = a[0].zero_like();
    let mut work: Vec<Jet> = a.to_vec();
    let mut inv: Vec<Jet> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = one.clone();
            if i == j {
                e = &e + &Jet::constant(1.0, e.dim(), e.order()).expect("valid dims");
            }
            inv.push(e);
        }
    }
    for col in 0..n {
        let mut pivot = col;
        let mut best = work[col * n + col].value().abs();
        for row in col + 1..n {
            let v = work[row * n + col].value().abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for k in 0..n {
                work.swap(col * n + k, pivot * n + k);
                inv.swap(col * n + k, pivot * n + k);
            }
        }
        let d = work[col * n + col].clone();
        for k in 0..n {
            work[col * n + k] = work[col * n + k].div(&d).expect("pivot value nonzero");
            inv[col * n + k] = inv[col * n + k].div(&d).expect("pivot value nonzero");
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = work[row * n + col].clone();
            for k in 0..n {
                work[row * n + k] = &work[row * n + k] - &(&f * &work[col * n + k]);
                inv[row * n + k] = &inv[row * n + k] - &(&f * &inv[col * n + k]);
            }
        }
    }
    Ok(inv)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

/// (negative count, positive count, condition estimate |l|max/|l|min).
pub fn signature_and_condition(a: &[f64], n: usize) -> (usize, usize, f64) {
    let eig = symmetric_eigenvalues(a, n);
    let neg = eig.iter().filter(|v| **v < 0.0).count();
    let pos = eig.iter().filter(|v| **v > 0.0).count();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for v in &eig {
        let m = v.abs();
        if m < lo {
            lo = m;
        }
        if m > hi {
            hi = m;
        }
    }
    let cond = if lo == 0.0 { f64::INFINITY } else { hi / lo };
    (neg, pos, cond)
}
