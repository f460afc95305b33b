// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense linear-algebra helpers over `nalgebra` matrices.
//!
//! Everything here works on matrices of size at most 81 x 81 (qutrit
//! superoperators), so plain dense algorithms are the right tool.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `|a><b|` in dimension `d`.
pub fn ket_bra(d: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(a, b)] = ONE;
    m
}

/// Projector onto the (not necessarily normalized) vector `v`.
pub fn projector(v: &[Complex64]) -> CMat {
    let d = v.len();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    CMat::from_fn(d, d, |i, j| v[i] * v[j].conj() / norm)
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest elementwise deviation of `a` from its adjoint.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &RMat, b: &RMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    // symmetrize first; nalgebra only reads one triangle
    let h = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Result of a cyclic Jacobi diagonalization.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: RMat,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Sweeps rotate away every off-diagonal pair in row order until the
/// largest off-diagonal magnitude falls below `JACOBI_OFFDIAG` times the
/// matrix scale. The input must be symmetric to `tolerances::SYMMETRY`.
pub fn jacobi_eigen(w: &RMat) -> Result<SymmetricEigen> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ncols(),
        });
    }
    let asymmetry = (w - w.transpose()).abs().max();
    if asymmetry > tolerances::SYMMETRY {
        return Err(Error::NotSymmetric { asymmetry });
    }

    let mut a = (w + w.transpose()).scale(0.5);
    let mut v = RMat::identity(n, n);
    let scale = a.abs().max().max(1.0);
    let threshold = tolerances::JACOBI_OFFDIAG * scale;
    let mut sweeps = 0;

    while sweeps < 64 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= threshold {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cs * akp - sn * akq;
                    a[(k, q)] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk - sn * aqk;
                    a[(q, k)] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // descending; ties broken by index for deterministic output
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = RMat::from_fn(n, n, |r, col| v[(r, order[col])]);
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Real part of a complex matrix, failing if any imaginary part exceeds `tol`.
pub fn real_part(a: &CMat, tol: f64) -> Option<RMat> {
    if a.iter().any(|z| z.im.abs() > tol) {
        return None;
    }
    Some(a.map(|z| z.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes_known_matrix() {
        let w = RMat::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let eig = jacobi_eigen(&w).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        let expect = [2.0 + s2, 2.0, 2.0 - s2];
        for (a, b) in eig.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
        let recon = &eig.vectors * RMat::from_diagonal(&RVec::from_vec(eig.values.clone())) * eig.vectors.transpose();
        assert!(max_abs_diff_real(&recon, &w) < 1e-13);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let w = RMat::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(jacobi_eigen(&w), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn jacobi_handles_identity_and_zero() {
        let eig = jacobi_eigen(&RMat::identity(4, 4)).unwrap();
        assert_eq!(eig.values, vec![1.0; 4]);
        assert_eq!(eig.sweeps, 0);
        let eig = jacobi_eigen(&RMat::zeros(3, 3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
    }

    #[test]
    fn paulis_anticommute() {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        assert!(max_abs_diff(&(&x * &y), &(&z * I)) < 1e-15);
        assert!(max_abs_diff(&(&x * &y + &y * &x), &CMat::zeros(2, 2)) < 1e-15);
    }
}
