// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Renyi entropies of quasi-distributions, collision-entropy scans along a
//! trajectory, and majorization between quasi-distributions.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::FrameSet;
use crate::grid::TimeGrid;
use crate::linalg::RMat;
use crate::lp;
use crate::models::{DynamicalModel, Dynamics};
use crate::qpr::{self, QuasiState};
use crate::quadrature::{self, Segment};
use crate::tolerances;

/// Renyi order `alpha = 2a / (2b - 1)` with integers `a >= b >= 1`, the
/// orders for which `q^alpha` is real for negative `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaOrder {
    a: u32,
    b: u32,
}

impl AlphaOrder {
    pub const COLLISION: AlphaOrder = AlphaOrder { a: 1, b: 1 };

    pub fn new(a: u32, b: u32) -> Result<Self> {
        if b == 0 || a < b {
            return Err(Error::InvalidAlpha(format!("(a, b) = ({a}, {b})")));
        }
        Ok(AlphaOrder { a, b })
    }

    /// Finds `(a, b)` with `b <= 1000` reproducing `alpha` to 1e-12.
    pub fn from_value(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 {
            for b in 1..=1000u32 {
                let a = alpha * (2 * b - 1) as f64 / 2.0;
                let rounded = a.round();
                if (a - rounded).abs() <= 1e-12 * a.max(1.0) && rounded >= b as f64 && rounded <= u32::MAX as f64 {
                    return Ok(AlphaOrder { a: rounded as u32, b });
                }
            }
        }
        Err(Error::InvalidAlpha(alpha.to_string()))
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn value(&self) -> f64 {
        2.0 * self.a as f64 / (2 * self.b - 1) as f64
    }

    fn is_two(&self) -> bool {
        self.a == 2 * self.b - 1
    }

    /// `x^alpha` as the real `(2b-1)`-th root of `x^(2a)`.
    pub fn power(&self, x: f64) -> f64 {
        if self.is_two() {
            return x * x;
        }
        let even = x.abs().powi(2 * self.a as i32);
        if self.b == 1 {
            even
        } else {
            even.powf(1.0 / (2 * self.b - 1) as f64)
        }
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", 2 * self.a, 2 * self.b - 1)
    }
}

/// `H_alpha(q) = log(sum_k q_k^alpha) / (1 - alpha)`. Negative values are
/// possible for quasi-distributions.
pub fn renyi_entropy(q: &QuasiState, order: AlphaOrder) -> Result<f64> {
    let sum: f64 = if order.is_two() {
        q.values().dot(q.values())
    } else {
        q.values().iter().map(|&x| order.power(x)).sum()
    };
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(Error::DivergentSum(sum));
    }
    Ok(sum.ln() / (1.0 - order.value()))
}

/// `H_2(q) = -log(q^T q)`.
pub fn collision_entropy(q: &QuasiState) -> f64 {
    -q.values().dot(q.values()).ln()
}

#[derive(Debug, Clone)]
pub struct EntropyScan {
    pub times: Vec<f64>,
    pub h2: Vec<f64>,
    pub slope: Vec<f64>,
    pub violation: Vec<bool>,
    /// Maximal runs with slope below `-H2_SLOPE`, interpolated endpoints.
    pub intervals: Vec<Segment>,
    /// Some grid point had a quasi-channel that is not bistochastic.
    pub not_bistochastic: bool,
}

impl EntropyScan {
    pub fn violated(&self) -> bool {
        !self.intervals.is_empty()
    }
}

/// Tracks `H_2(S_t q0)` and reports where it decreases.
pub fn h2_monotonicity_scan(m: &DynamicalModel, fs: &FrameSet, q0: &QuasiState, grid: &TimeGrid) -> Result<EntropyScan> {
    if q0.len() != fs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: q0.len(),
        });
    }
    if q0.frame_kind() != fs.kind() {
        return Err(Error::FrameMismatch {
            left: q0.frame_kind(),
            right: fs.kind(),
        });
    }
    let cached = m.cached(grid)?;
    let times = grid.times();
    let points: Vec<(f64, bool)> = times
        .par_iter()
        .map(|&t| {
            let s = qpr::rep_superoperator(&cached.map_at(t)?, fs)?;
            let q = s.apply(q0)?;
            Ok((collision_entropy(&q), s.is_bistochastic(tolerances::TRACE_PRESERVATION)))
        })
        .collect::<Result<_>>()?;
    let h2: Vec<f64> = points.iter().map(|p| p.0).collect();
    let not_bistochastic = points.iter().any(|p| !p.1);
    if not_bistochastic {
        log::warn!("quasi-channel is not bistochastic on the grid; H2 monotonicity is not guaranteed");
    }
    let slope = quadrature::grid_derivative(&h2, grid.step());
    let violation = slope.iter().map(|&s| s < -tolerances::H2_SLOPE).collect();
    let decrease: Vec<f64> = slope.iter().map(|s| -s).collect();
    let (_, intervals) = quadrature::positive_part_integral(&times, &decrease, tolerances::H2_SLOPE);
    Ok(EntropyScan {
        times,
        h2,
        slope,
        violation,
        intervals,
        not_bistochastic,
    })
}

fn majorization_system(q: &QuasiState, q2: &QuasiState) -> Result<(RMat, Vec<f64>)> {
    let n = q.len();
    if q2.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q2.len() });
    }
    // unknowns a_ij at column i * n + j
    let mut a = RMat::zeros(3 * n, n * n);
    let mut b = vec![0.0; 3 * n];
    for i in 0..n {
        for j in 0..n {
            a[(i, i * n + j)] = 1.0;
            a[(n + j, i * n + j)] = 1.0;
            a[(2 * n + i, i * n + j)] = q.values()[j];
        }
        b[i] = 1.0;
        b[n + i] = 1.0;
        b[2 * n + i] = q2.values()[i];
    }
    Ok((a, b))
}

/// A bistochastic `A >= 0` with `A q = q2`, if one exists.
pub fn majorization_witness(q: &QuasiState, q2: &QuasiState) -> Result<Option<RMat>> {
    let n = q.len();
    let (a, b) = majorization_system(q, q2)?;
    let f = lp::feasible_point(&a, &b, tolerances::LP_FEASIBILITY);
    Ok(f.feasible.then(|| RMat::from_row_slice(n, n, &f.point)))
}

/// Does `q` majorize `q2`, i.e. is there a bistochastic `A` with `A q = q2`?
pub fn majorization_check(q: &QuasiState, q2: &QuasiState) -> Result<bool> {
    majorization_witness(q, q2).map(|w| w.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{build_frame, FrameKind};
    use crate::linalg;
    use crate::models::DecoherenceFunction;

    const W: FrameKind = FrameKind::WoottersWigner;

    fn q(v: &[f64]) -> QuasiState {
        QuasiState::from_slice(v, W).unwrap()
    }

    #[test]
    fn admissible_orders() {
        assert_eq!(AlphaOrder::from_value(2.0).unwrap(), AlphaOrder::COLLISION);
        let o = AlphaOrder::from_value(4.0 / 3.0).unwrap();
        assert_eq!((o.a(), o.b()), (2, 2));
        assert_eq!(o.to_string(), "4/3");
        assert!(matches!(AlphaOrder::from_value(0.5), Err(Error::InvalidAlpha(_))));
        assert!(AlphaOrder::from_value(1.0).is_err());
        assert!(AlphaOrder::from_value(f64::NAN).is_err());
        assert!(AlphaOrder::new(1, 2).is_err());
        assert!(AlphaOrder::new(3, 0).is_err());
    }

    #[test]
    fn fractional_powers_are_real_roots() {
        let o = AlphaOrder::new(2, 2).unwrap();
        assert!((o.power(-8.0) - 16.0).abs() < 1e-12);
        assert!((o.power(0.125) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let uniform = q(&[0.25; 4]);
        assert!((renyi_entropy(&uniform, AlphaOrder::COLLISION).unwrap() - 4f64.ln()).abs() < 1e-15);
        let neg = q(&[1.5, -0.5, 0.0, 0.0]);
        assert!((renyi_entropy(&neg, AlphaOrder::COLLISION).unwrap() + 2.5f64.ln()).abs() < 1e-15);
        let nine = QuasiState::uniform(9, FrameKind::GrossWigner);
        assert!((collision_entropy(&nine) - 9f64.ln()).abs() < 1e-14);
        let fs = build_frame(W, 2).unwrap();
        let zero = qpr::rep_state(&linalg::ket_bra(2, 0, 0), &fs).unwrap();
        assert!((collision_entropy(&zero) - 2f64.ln()).abs() < 1e-14);
        // alpha -> large emphasizes the largest magnitude
        let h = renyi_entropy(&neg, AlphaOrder::new(3, 1).unwrap()).unwrap();
        assert!((h - (1.5f64.powi(6) + 0.5f64.powi(6)).ln() / -5.0).abs() < 1e-14);
    }

    #[test]
    fn collision_is_renyi_two() {
        let v = q(&[0.7, -0.2, 0.4, 0.1]);
        assert_eq!(collision_entropy(&v), renyi_entropy(&v, AlphaOrder::COLLISION).unwrap());
        assert_eq!(collision_entropy(&v), renyi_entropy(&v, AlphaOrder::new(3, 2).unwrap()).unwrap());
    }

    #[test]
    fn majorization_examples() {
        let a = q(&[1.5, -0.5, 0.0, 0.0]);
        let b = q(&[0.5, 0.5, 0.0, 0.0]);
        let witness = majorization_witness(&a, &b).unwrap().unwrap();
        assert!(witness.iter().all(|&x| x >= -1e-9));
        assert!((&witness * a.values() - b.values()).amax() < 1e-9);
        assert!(collision_entropy(&a) <= collision_entropy(&b));
        assert!(!majorization_check(&b, &a).unwrap());
        assert!(majorization_check(&a, &a).unwrap());
        assert!(majorization_check(&a, &QuasiState::uniform(4, W)).unwrap());
        let short = QuasiState::uniform(9, FrameKind::GrossWigner);
        assert!(matches!(majorization_check(&a, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn markovian_scan_has_no_violations() {
        let fs = build_frame(W, 2).unwrap();
        let plus = qpr::rep_state(&crate::config::parse_state_spec("plus", 2).unwrap(), &fs).unwrap();
        let m = DynamicalModel::PureDecoherence(DecoherenceFunction::exponential(1.0).unwrap());
        let grid = TimeGrid::new(0.0, 5.0, 500).unwrap();
        let scan = h2_monotonicity_scan(&m, &fs, &plus, &grid).unwrap();
        assert!(!scan.violated());
        assert!(!scan.not_bistochastic);
        let uniform = QuasiState::uniform(4, W);
        let scan = h2_monotonicity_scan(&m, &fs, &uniform, &grid).unwrap();
        assert!(scan.h2.iter().all(|h| (h - 4f64.ln()).abs() < 1e-14));
        assert!(!scan.violated());
    }

    #[test]
    fn strong_coupling_scan_revives() {
        let fs = build_frame(W, 2).unwrap();
        let plus = qpr::rep_state(&crate::config::parse_state_spec("plus", 2).unwrap(), &fs).unwrap();
        let m = DynamicalModel::PureDecoherence(DecoherenceFunction::jaynes_cummings(1.0, 5.0).unwrap());
        let grid = TimeGrid::new(0.0, 10.0, 2000).unwrap();
        let scan = h2_monotonicity_scan(&m, &fs, &plus, &grid).unwrap();
        assert!(scan.violated());
    }
}
