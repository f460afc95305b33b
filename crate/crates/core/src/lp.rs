// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear feasibility `A x = b, x >= 0`, solved with `microlp`.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::linalg::RMat;

#[derive(Debug, Clone)]
pub struct Feasibility {
    pub feasible: bool,
    /// Max equality residual `|A x - b|` of the returned point (infinite if none).
    pub residual: f64,
    pub point: Vec<f64>,
}

/// Decide whether `{x >= 0 : A x = b}` is non-empty.
///
/// The solver's answer is re-checked: a point is accepted only if its
/// residual is within `tol * (1 + max|b|)` and no entry is below `-tol`.
pub fn feasible_point(a: &RMat, b: &[f64], tol: f64) -> Feasibility {
    let (m, n) = a.shape();
    assert_eq!(m, b.len(), "row count must match right-hand side");

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..n).map(|_| problem.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for i in 0..m {
        let row: Vec<_> = (0..n)
            .filter(|&j| a[(i, j)] != 0.0)
            .map(|j| (vars[j], a[(i, j)]))
            .collect();
        problem.add_constraint(row.as_slice(), ComparisonOp::Eq, b[i]);
    }

    let none = Feasibility { feasible: false, residual: f64::INFINITY, point: vec![0.0; n] };
    let point: Vec<f64> = match problem.solve() {
        Ok(out) => match out.solution() {
            Some(sol) => vars.iter().map(|&v| sol.var_value(v)).collect(),
            None => return none,
        },
        Err(microlp::Error::Infeasible) => return none,
        Err(e) => {
            log::warn!("lp solver failed: {e}");
            return none;
        }
    };

    let residual = (0..m)
        .map(|i| ((0..n).map(|j| a[(i, j)] * point[j]).sum::<f64>() - b[i]).abs())
        .fold(0.0, f64::max);
    let scale = 1.0 + b.iter().fold(0.0_f64, |s, x| s.max(x.abs()));
    let feasible = residual <= tol * scale && point.iter().all(|&x| x >= -tol);
    Feasibility { feasible, residual, point }
}
