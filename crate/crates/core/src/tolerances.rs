// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical tolerances shared by every module.

/// Structural identities of frames and quasi-stochastic matrices.
pub const STRUCTURAL: f64 = 1e-12;
/// Reconstruction of operators from quasiprobabilities; Born-rule agreement.
pub const RECONSTRUCTION: f64 = 1e-10;
/// Trace preservation of channels and trace annihilation of generators.
pub const TRACE_PRESERVATION: f64 = 1e-10;
/// Hermiticity of input operators.
pub const HERMITICITY: f64 = 1e-10;
/// Lowest eigenvalue accepted for a density matrix or effect.
pub const PSD_FLOOR: f64 = -1e-10;
/// Lowest Choi eigenvalue accepted for a completely positive map.
pub const CHOI_FLOOR: f64 = -1e-8;
/// Largest condition number of a frame Gram matrix.
pub const GRAM_CONDITION: f64 = 1e10;
/// Decoherence functions below this magnitude have undefined rates.
pub const DECOHERENCE_FLOOR: f64 = 1e-12;
/// Central-difference step for numerical derivatives of scalar functions.
pub const DERIVATIVE_STEP: f64 = 1e-6;
/// Adaptive quadrature tolerance.
pub const QUADRATURE: f64 = 1e-10;
/// Off-diagonal convergence of the Jacobi eigensolver.
pub const JACOBI_OFFDIAG: f64 = 1e-14;
/// Symmetry accepted by the witness eigensolver.
pub const SYMMETRY: f64 = 1e-12;
/// Sign dead-band on the witness flow.
pub const ZETA_DEADBAND: f64 = 1e-12;
/// Dead-band on Markovian criterion left-hand sides.
pub const CRITERION_DEADBAND: f64 = 1e-10;
/// Entries of a quasi-stochastic matrix below `-NEGATIVITY` count as negative.
pub const NEGATIVITY: f64 = 1e-12;
/// Slope below `-H2_SLOPE` counts as a collision-entropy decrease.
pub const H2_SLOPE: f64 = 1e-10;
/// Probabilities below this value trigger a warning.
pub const PROBABILITY_WARNING: f64 = -1e-8;
/// Linear-program feasibility tolerance.
pub const LP_FEASIBILITY: f64 = 1e-9;
/// Column sums of represented generators.
pub const GENERATOR_COLUMN_SUM: f64 = 1e-10;
