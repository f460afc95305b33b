// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Quasi-stochastic representations of open-system dynamics and a
//! state-independent witness of non-Markovian information backflow.

pub mod channel;
pub mod cli;
pub mod config;
pub mod entropy;
pub mod error;
pub mod frames;
pub mod grid;
pub mod linalg;
pub mod lp;
pub mod models;
pub mod presets;
pub mod qpr;
pub mod quadrature;
pub mod random;
pub mod tolerances;
pub mod validation;
pub mod witness;

pub use error::{Error, Result};
