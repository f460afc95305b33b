// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Random states, unitaries and channels for randomized checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::Superoperator;
use crate::linalg::{c, CMat};

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random Hermitian matrix (GUE-like).
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Hilbert-Schmidt random density matrix; `rank = d` gives full rank.
pub fn density_matrix<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, rank.max(1), rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Haar-random pure state as a density matrix.
pub fn pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    density_matrix(d, 1, rng)
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_fn(d, d, |i, j| {
        if i == j {
            let rii = r[(i, i)];
            if rii.norm() > 0.0 {
                rii / rii.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// Random channel with `kraus_count` Kraus operators, obtained from a
/// Haar-random isometry.
pub fn kraus_channel<R: Rng + ?Sized>(d: usize, kraus_count: usize, rng: &mut R) -> Vec<CMat> {
    let big = unitary(d * kraus_count, rng);
    (0..kraus_count)
        .map(|k| big.view((k * d, 0), (d, d)).into_owned())
        .collect()
}

pub fn channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Superoperator {
    let count = rng.random_range(1..=d * d);
    Superoperator::from_kraus(&kraus_channel(d, count, rng))
}

/// Random two-outcome-or-more POVM `{M_k}` with `outcomes` elements.
pub fn povm<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Vec<CMat> {
    // M_k = K_k^dag K_k for Kraus operators of a random instrument
    kraus_channel(d, outcomes, rng)
        .into_iter()
        .map(|k| k.adjoint() * k)
        .collect()
}
