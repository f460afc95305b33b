// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::config::ConfigIssue;
use crate::frames::FrameKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported frame {kind:?} in dimension {d}")]
    UnsupportedFrame { kind: FrameKind, d: usize },

    #[error("frame Gram matrix is singular or ill-conditioned (condition number {condition:.3e})")]
    SingularFrame { condition: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame mismatch: {left:?} vs {right:?}")]
    FrameMismatch { left: FrameKind, right: FrameKind },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("map is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("generator is not trace annihilating (deviation {deviation:.3e})")]
    NotTraceAnnihilating { deviation: f64 },

    #[error("not an effect operator: {0}")]
    NotAnEffect(String),

    #[error("map is not CPTP: {0}")]
    NotCptp(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("decoherence function vanishes at t = {t} (|G| = {magnitude:.3e}); rate undefined")]
    SingularDecoherence { t: f64, magnitude: f64 },

    #[error("index ({k}, {l}) out of range for dimension {d}")]
    IndexOutOfRange { d: usize, k: usize, l: usize },

    #[error("adaptive quadrature failed to converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("alpha = {0} is not of the form 2a/(2b-1) with integers a >= b >= 1")]
    InvalidAlpha(String),

    #[error("power sum is not positive ({0:.3e}); entropy undefined")]
    DivergentSum(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid state specification: {0}")]
    InvalidStateSpec(String),

    #[error("configuration error:\n{}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}
