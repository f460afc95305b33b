// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear maps on `d x d` matrices in superoperator form.
//!
//! Matrices are vectorized row-major, `vec(rho)[i d + j] = rho[i, j]`, so
//! `vec(A rho B) = (A (x) B^T) vec(rho)`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    d: usize,
    matrix: CMat,
}

/// A channel given either by Kraus operators or directly as a superoperator.
#[derive(Debug, Clone)]
pub enum Channel {
    Kraus(Vec<CMat>),
    Superoperator(Superoperator),
}

impl Channel {
    pub fn to_superoperator(&self) -> Result<Superoperator> {
        match self {
            Channel::Kraus(ops) => {
                let d = ops.first().map(|k| k.nrows()).ok_or(Error::DimensionMismatch {
                    expected: 1,
                    found: 0,
                })?;
                if let Some(bad) = ops.iter().find(|k| k.nrows() != d || k.ncols() != d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: bad.ncols().max(bad.nrows()),
                    });
                }
                Ok(Superoperator::from_kraus(ops))
            }
            Channel::Superoperator(s) => Ok(s.clone()),
        }
    }
}

impl From<Superoperator> for Channel {
    fn from(s: Superoperator) -> Self {
        Channel::Superoperator(s)
    }
}

impl From<Vec<CMat>> for Channel {
    fn from(k: Vec<CMat>) -> Self {
        Channel::Kraus(k)
    }
}

impl Superoperator {
    pub fn from_matrix(d: usize, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != d * d || matrix.ncols() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: matrix.nrows(),
            });
        }
        Ok(Superoperator { d, matrix })
    }

    pub fn identity(d: usize) -> Self {
        Superoperator {
            d,
            matrix: CMat::identity(d * d, d * d),
        }
    }

    pub fn zero(d: usize) -> Self {
        Superoperator {
            d,
            matrix: CMat::zeros(d * d, d * d),
        }
    }

    /// `rho -> sum_k K rho K^dag`.
    pub fn from_kraus(kraus: &[CMat]) -> Self {
        let d = kraus[0].nrows();
        let mut matrix = CMat::zeros(d * d, d * d);
        for k in kraus {
            matrix += linalg::kron(k, &k.conjugate());
        }
        Superoperator { d, matrix }
    }

    /// `rho -> U rho U^dag`.
    pub fn unitary(u: &CMat) -> Self {
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// `rho -> A rho B`.
    pub fn sandwich(a: &CMat, b: &CMat) -> Self {
        Superoperator {
            d: a.nrows(),
            matrix: linalg::kron(a, &b.transpose()),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        let d = self.d;
        let v = nalgebra::DVector::from_fn(d * d, |idx, _| rho[(idx / d, idx % d)]);
        let out = &self.matrix * v;
        CMat::from_fn(d, d, |i, j| out[i * d + j])
    }

    /// `self after other`, i.e. `rho -> self(other(rho))`.
    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            d: self.d,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn scale(&self, s: f64) -> Superoperator {
        Superoperator {
            d: self.d,
            matrix: &self.matrix * linalg::c(s, 0.0),
        }
    }

    pub fn add(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            d: self.d,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            d: self.d,
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn try_inverse(&self) -> Option<Superoperator> {
        self.matrix.clone().try_inverse().map(|matrix| Superoperator { d: self.d, matrix })
    }

    /// Choi matrix `sum_ab |a><b| (x) Phi(|a><b|)`.
    pub fn choi(&self) -> CMat {
        let d = self.d;
        CMat::from_fn(d * d, d * d, |r, col| {
            let (a, i) = (r / d, r % d);
            let (b, j) = (col / d, col % d);
            self.matrix[(i * d + j, a * d + b)]
        })
    }

    pub fn choi_min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.choi())[0]
    }

    /// Largest `|Tr Phi(|a><b|) - delta_ab|` over the matrix-unit basis.
    pub fn trace_preservation_defect(&self) -> f64 {
        self.trace_defect(true)
    }

    /// Largest `|Tr L(|a><b|)|` over the matrix-unit basis.
    pub fn trace_annihilation_defect(&self) -> f64 {
        self.trace_defect(false)
    }

    fn trace_defect(&self, preserving: bool) -> f64 {
        let d = self.d;
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                let mut tr = ZERO;
                for i in 0..d {
                    tr += self.matrix[(i * d + i, a * d + b)];
                }
                if preserving && a == b {
                    tr -= ONE;
                }
                worst = worst.max(tr.norm());
            }
        }
        worst
    }

    /// Largest deviation of `Phi(1)` from the identity.
    pub fn unitality_defect(&self) -> f64 {
        linalg::max_abs_diff(&self.apply(&linalg::identity(self.d)), &linalg::identity(self.d))
    }

    /// Fail unless trace preserving to `TRACE_PRESERVATION` and completely
    /// positive to `CHOI_FLOOR`.
    pub fn ensure_cptp(&self) -> Result<()> {
        let deviation = self.trace_preservation_defect();
        if deviation > tolerances::TRACE_PRESERVATION {
            return Err(Error::NotTracePreserving { deviation });
        }
        let min = self.choi_min_eigenvalue();
        if min < tolerances::CHOI_FLOOR {
            return Err(Error::NotCptp(format!("Choi matrix has eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Adjoint map with respect to the Hilbert-Schmidt inner product.
    pub fn adjoint(&self) -> Superoperator {
        Superoperator {
            d: self.d,
            matrix: self.matrix.adjoint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, pauli_x, pauli_z};

    #[test]
    fn apply_matches_kraus_action() {
        let x = pauli_x();
        let s = Superoperator::unitary(&x);
        let rho = CMat::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let direct = &x * &rho * x.adjoint();
        assert!(linalg::max_abs_diff(&s.apply(&rho), &direct) < 1e-15);
    }

    #[test]
    fn sandwich_matches_product() {
        let a = pauli_x() + pauli_z() * c(0.0, 0.5);
        let b = pauli_z() * c(2.0, 0.0);
        let rho = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(3.0, 0.0), c(4.0, -1.0)]);
        let s = Superoperator::sandwich(&a, &b);
        assert!(linalg::max_abs_diff(&s.apply(&rho), &(&a * &rho * &b)) < 1e-14);
    }

    #[test]
    fn choi_of_identity_is_maximally_entangled() {
        let choi = Superoperator::identity(2).choi();
        let eig = linalg::hermitian_eigenvalues(&choi);
        assert!((eig[3] - 2.0).abs() < 1e-14);
        assert!(eig[..3].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn transpose_is_not_cp() {
        let d = 2;
        let mut m = CMat::zeros(4, 4);
        for i in 0..d {
            for j in 0..d {
                m[(j * d + i, i * d + j)] = ONE;
            }
        }
        let t = Superoperator::from_matrix(2, m).unwrap();
        assert!(t.trace_preservation_defect() < 1e-15);
        assert!(matches!(t.ensure_cptp(), Err(Error::NotCptp(_))));
    }

    #[test]
    fn kraus_dimension_mismatch() {
        let ch = Channel::Kraus(vec![linalg::identity(2), linalg::identity(3)]);
        assert!(matches!(ch.to_superoperator(), Err(Error::DimensionMismatch { .. })));
    }
}
