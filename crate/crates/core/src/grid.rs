// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Uniform time grid `t0, t0 + h, ..., t1` with `steps + 1` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    steps: usize,
}

impl TimeGrid {
    pub const DEFAULT_STEPS: usize = 2000;

    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        if t0 < 0.0 {
            return Err(Error::InvalidGrid(format!("t0 = {t0} is negative")));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!("steps = {steps}; need at least 2 (3 points)")));
        }
        Ok(TimeGrid { t0, t1, steps })
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.t1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i == self.steps {
            self.t1
        } else {
            self.t0 + i as f64 * self.step()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Same interval with twice as many steps.
    pub fn refined(&self) -> TimeGrid {
        TimeGrid {
            steps: self.steps * 2,
            ..*self
        }
    }
}
