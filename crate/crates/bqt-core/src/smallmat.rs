//! Minimal dense complex matrices for the handful of small fixed sizes this
//! crate needs (2x2 gate algebra, 4x4 superoperator solves, 8x8 three-qubit
//! gate audits). Row-major storage, no broadcasting, no views — just the
//! operations used elsewhere, each with an error path instead of a panic
//! where input can be singular.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub(crate) type C = Complex64;

pub(crate) fn c(re: f64, im: f64) -> C {
    Complex64::new(re, im)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CMat {
    pub n: usize,
    a: Vec<C>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            a: vec![c(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let n = rows.len();
        debug_assert!(rows.iter().all(|r| r.len() == n));
        let mut m = CMat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dag(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x -= y;
        }
        out
    }

    /// `U * M * U^dag`.
    pub fn conjugate_by(&self, u: &CMat) -> CMat {
        u.mul(self).mul(&u.dag())
    }

    /// Kronecker product; `self` indexes the coarse blocks.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (n, m) = (self.n, other.n);
        let mut out = CMat::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let s = self[(i, j)];
                if s == c(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = s * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Solve `self * x = rhs` for one right-hand side by LU with partial
    /// pivoting. Fails with `SingularDensity` when a pivot falls below the
    /// spectral cutoff (the only singular systems this crate encounters come
    /// from rank-deficient density operators).
    pub fn lu_solve(&self, rhs: &[C]) -> Result<Vec<C>> {
        let n = self.n;
        debug_assert_eq!(rhs.len(), n);
        let mut lu = self.a.clone();
        let mut x: Vec<C> = rhs.to_vec();
        for col in 0..n {
            // Pivot search.
            let mut pivot_row = col;
            let mut pivot_mag = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let mag = lu[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag <= tol::SPECTRAL_CUTOFF {
                return Err(Error::SingularDensity {
                    min_eig: pivot_mag,
                    cutoff: tol::SPECTRAL_CUTOFF,
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                x.swap(col, pivot_row);
            }
            // Eliminate below.
            let pivot = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                if factor == c(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = lu[col * n + j];
                    lu[r * n + j] -= factor * v;
                }
                let xc = x[col];
                x[r] -= factor * xc;
            }
        }
        // Back substitution.
        for row in (0..n).rev() {
            let mut acc = x[row];
            for j in (row + 1)..n {
                acc -= lu[row * n + j] * x[j];
            }
            x[row] = acc / lu[row * n + row];
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.a[i * self.n + j]
    }
}

// ====== single-qubit constants ======

pub(crate) fn pauli_i() -> CMat {
    CMat::identity(2)
}

pub(crate) fn pauli_x() -> CMat {
    CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]])
}

pub(crate) fn pauli_y() -> CMat {
    CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
}

pub(crate) fn pauli_z() -> CMat {
    CMat::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]])
}

#[cfg(test)]
pub(crate) fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-s, 0.0)]])
}

/// Column-stacking vectorization of a 2x2 matrix: `[m00, m10, m01, m11]`.
pub(crate) fn vec_col_2x2(m: &[[C; 2]; 2]) -> [C; 4] {
    [m[0][0], m[1][0], m[0][1], m[1][1]]
}
