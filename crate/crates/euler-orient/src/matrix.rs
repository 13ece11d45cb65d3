//! Dense square f64 matrices sized for desk-scale spectral work (n <= ~2000):
//! cyclic Jacobi eigendecomposition, Gauss-Jordan inversion, Cholesky, and
//! the induced matrix norms.

use crate::error::{Error, Result};

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    n: usize,
    a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.a[i * self.n + j] = x;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * other.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.n {
            let s: f64 = (0..self.n).map(|i| self.get(i, j).abs()).sum();
            best = best.max(s);
        }
        best
    }

    /// Maximum absolute row sum (the induced infinity-norm).
    pub fn norm_inf(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            let s: f64 = self.row(i).iter().map(|x| x.abs()).sum();
            best = best.max(s);
        }
        best
    }

    /// Largest singular value. For symmetric input this is the largest
    /// eigenvalue magnitude; otherwise it is computed from `AᵀA`.
    pub fn norm_two(&self) -> Result<f64> {
        if self.n == 0 {
            return Ok(0.0);
        }
        if self.is_symmetric(1e-12 * self.norm_inf().max(1.0)).is_none() {
            let eig = jacobi_eigenvalues(self)?;
            Ok(eig
                .iter()
                .map(|x| x.abs())
                .fold(0.0f64, f64::max))
        } else {
            let gram = self.transpose().matmul(self);
            let eig = jacobi_eigenvalues(&gram)?;
            let top = eig.iter().fold(0.0f64, |m, &x| m.max(x.max(0.0)));
            Ok(top.sqrt())
        }
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Mat> {
        let n = self.n;
        let mut work = self.clone();
        let mut inv = Mat::identity(n);
        let scale = self.norm_inf().max(1.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = work.get(col, col).abs();
            for r in (col + 1)..n {
                let x = work.get(r, col).abs();
                if x > best {
                    best = x;
                    pivot = r;
                }
            }
            if best <= 1e-13 * scale {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = work.get(col, j);
                    work.set(col, j, work.get(pivot, j));
                    work.set(pivot, j, tmp);
                    let tmp = inv.get(col, j);
                    inv.set(col, j, inv.get(pivot, j));
                    inv.set(pivot, j, tmp);
                }
            }
            let p = work.get(col, col);
            for j in 0..n {
                work.set(col, j, work.get(col, j) / p);
                inv.set(col, j, inv.get(col, j) / p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = work.get(r, col);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let w = work.get(r, j) - f * work.get(col, j);
                    work.set(r, j, w);
                    let v = inv.get(r, j) - f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Lower-triangular Cholesky factor `L` with `L Lᵀ = self`.
    pub fn cholesky(&self) -> Result<Mat> {
        let n = self.n;
        let mut l = Mat::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l.set(i, i, s.sqrt());
                } else {
                    l.set(i, j, s / l.get(j, j));
                }
            }
        }
        Ok(l)
    }

    /// Solves `Lᵀ x = b` for lower-triangular `L` (back substitution).
    pub fn solve_lt_transposed(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        for ii in (0..n).rev() {
            let mut s = b[ii];
            for k in (ii + 1)..n {
                s -= self.get(k, ii) * x[k];
            }
            x[ii] = s / self.get(ii, ii);
        }
    }
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &Mat) -> Result<Vec<f64>> {
    Ok(jacobi_eigen(m)?.0)
}

/// Full symmetric eigendecomposition: ascending eigenvalues and the matching
/// eigenvectors as columns of the returned matrix.
pub fn jacobi_eigen(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    let n = m.n();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0)));
    }
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    let frob: f64 = a.a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = 1e-14 * frob.max(f64::MIN_POSITIVE);

    for sweep in 0..=MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= stop / (n as f64) {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = Mat::from_fn(n, |i, j| v.get(i, order[j]));
    Ok((values, vectors))
}
