// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Independent cross-checks for the witness: trace-distance (BLP) flow,
//! rate-sign CP-divisibility reports and non-negativity audits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{self, c, CMat};
use crate::models::{rate_of, DynamicalModel, Dynamics, RateConvention};
use crate::qpr::{self, QuasiChannel};
use crate::quadrature::{self, Segment};
use crate::tolerances;

/// `D(rho1, rho2) = (1/2) sum |eig(rho1 - rho2)|`.
pub fn trace_distance(rho1: &CMat, rho2: &CMat) -> Result<f64> {
    if rho1.shape() != rho2.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho1.nrows(),
            found: rho2.nrows(),
        });
    }
    qpr::ensure_state(rho1, rho1.nrows())?;
    qpr::ensure_state(rho2, rho2.nrows())?;
    Ok(half_trace_norm(&(rho1 - rho2)))
}

fn half_trace_norm(x: &CMat) -> f64 {
    0.5 * linalg::hermitian_eigenvalues(x).iter().map(|e| e.abs()).sum::<f64>()
}

/// Trace distance and its time derivative `sigma` along a trajectory.
#[derive(Debug, Clone)]
pub struct BlpFlow {
    pub times: Vec<f64>,
    pub distance: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl BlpFlow {
    /// `int_{sigma > 0} sigma dt` and its segments.
    pub fn positive_part(&self) -> (f64, Vec<Segment>) {
        quadrature::positive_part_integral(&self.times, &self.sigma, tolerances::ZETA_DEADBAND)
    }
}

fn channels_on_grid(m: &DynamicalModel, grid: &TimeGrid) -> Result<Vec<Superoperator>> {
    let cached = m.cached(grid)?;
    grid.times().par_iter().map(|&t| cached.channel_at(t)).collect()
}

fn flow_of(channels: &[Superoperator], times: &[f64], h: f64, difference: &CMat) -> BlpFlow {
    let distance: Vec<f64> = channels.iter().map(|ch| half_trace_norm(&ch.apply(difference))).collect();
    let sigma = quadrature::grid_derivative(&distance, h);
    BlpFlow {
        times: times.to_vec(),
        distance,
        sigma,
    }
}

/// `sigma(rho1, rho2; t) = d/dt D(Lambda_t rho1, Lambda_t rho2)` on the grid.
pub fn blp_flow(m: &DynamicalModel, rho1: &CMat, rho2: &CMat, grid: &TimeGrid) -> Result<BlpFlow> {
    let d = m.dim();
    qpr::ensure_state(rho1, d)?;
    qpr::ensure_state(rho2, d)?;
    let channels = channels_on_grid(m, grid)?;
    Ok(flow_of(&channels, &grid.times(), grid.step(), &(rho1 - rho2)))
}

/// Pure qubit state with Bloch angles `(theta, phi)`.
pub fn bloch_state(theta: f64, phi: f64) -> CMat {
    let psi = [c((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)];
    linalg::projector(&psi)
}

#[derive(Debug, Clone)]
pub struct BlpResult {
    /// Largest positive-flow integral over the angular grid.
    pub measure: f64,
    /// Bloch angles of the first state of the best antipodal pair.
    pub best_pair: (f64, f64),
    pub flow: BlpFlow,
}

/// Grid search of the BLP measure over antipodal pure qubit pairs with
/// `theta_i = i pi / res` (`i = 0..=res`) and `phi_j = 2 pi j / res`.
pub fn blp_measure(m: &DynamicalModel, grid: &TimeGrid, resolution: usize) -> Result<BlpResult> {
    if m.dim() != 2 {
        return Err(Error::UnsupportedDimension(m.dim()));
    }
    if resolution < 12 {
        return Err(Error::InvalidParams(format!("angular resolution {resolution} is below 12")));
    }
    let channels = channels_on_grid(m, grid)?;
    let times = grid.times();
    let h = grid.step();
    let mut pairs = Vec::new();
    for i in 0..=resolution {
        let theta = i as f64 * PI / resolution as f64;
        // the poles do not depend on phi
        let phis = if i == 0 || i == resolution { 1 } else { resolution };
        for j in 0..phis {
            pairs.push((theta, 2.0 * PI * j as f64 / resolution as f64));
        }
    }
    let best = pairs
        .par_iter()
        .map(|&(theta, phi)| {
            let diff = bloch_state(theta, phi) - bloch_state(PI - theta, phi + PI);
            let flow = flow_of(&channels, &times, h, &diff);
            let (measure, _) = flow.positive_part();
            (measure, (theta, phi), flow)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("angular grid is non-empty");
    Ok(BlpResult {
        measure: best.0,
        best_pair: best.1,
        flow: best.2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSign {
    pub name: String,
    pub value: f64,
    pub nonnegative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpReport {
    pub t: f64,
    pub rates: Vec<RateSign>,
    /// Qutrit only: every triple sum of rates is non-negative, which is
    /// sufficient for the random unitary criteria.
    pub triples_nonnegative: Option<bool>,
}

impl CpReport {
    /// CP-divisible at `t`: all rates are non-negative.
    pub fn cp_divisible(&self) -> bool {
        self.rates.iter().all(|r| r.nonnegative)
    }

    pub fn min_rate(&self) -> f64 {
        self.rates.iter().map(|r| r.value).fold(f64::INFINITY, f64::min)
    }
}

fn sign(name: String, value: f64) -> RateSign {
    RateSign {
        name,
        value,
        nonnegative: value >= -tolerances::CRITERION_DEADBAND,
    }
}

/// Per-rate sign flags of the master equation at `t`.
pub fn cp_rate_report(m: &DynamicalModel, t: f64) -> Result<CpReport> {
    let (rates, triples) = match m {
        DynamicalModel::PureDecoherence(g) => (
            vec![sign("gamma".into(), rate_of(g, t, RateConvention::PureDecoherence)?.gamma())],
            None,
        ),
        DynamicalModel::Dissipation(g) => (
            vec![sign("gamma".into(), rate_of(g, t, RateConvention::Dissipation)?.gamma())],
            None,
        ),
        DynamicalModel::RandomUnitary(r) => {
            let values = r.values(t);
            let triples = (r.dim() == 3).then(|| {
                let n = values.len();
                (0..n).all(|i| {
                    (i + 1..n).all(|j| {
                        (j + 1..n).all(|k| values[i] + values[j] + values[k] >= -tolerances::CRITERION_DEADBAND)
                    })
                })
            });
            let rates = values
                .into_iter()
                .enumerate()
                .map(|(k, v)| sign(format!("gamma_{}", k + 1), v))
                .collect();
            (rates, triples)
        }
    };
    Ok(CpReport {
        t,
        rates,
        triples_nonnegative: triples,
    })
}

/// Where CP-divisibility fails along a grid.
#[derive(Debug, Clone)]
pub struct CpTimeline {
    /// Fraction of evaluated grid points that are CP-divisible.
    pub cp_fraction: f64,
    /// Maximal runs where some rate is negative.
    pub violations: Vec<Segment>,
    /// Points where rates are undefined (zeros of `G`).
    pub singular_points: usize,
}

pub fn cp_timeline(m: &DynamicalModel, grid: &TimeGrid) -> CpTimeline {
    let times = grid.times();
    let deficits: Vec<f64> = times
        .iter()
        .map(|&t| cp_rate_report(m, t).map_or(f64::NAN, |r| -r.min_rate()))
        .collect();
    let evaluated = deficits.iter().filter(|v| v.is_finite()).count();
    let cp = deficits.iter().filter(|v| v.is_finite() && **v <= tolerances::CRITERION_DEADBAND).count();
    let (_, violations) = quadrature::positive_part_integral(&times, &deficits, tolerances::CRITERION_DEADBAND);
    CpTimeline {
        cp_fraction: if evaluated == 0 { f64::NAN } else { cp as f64 / evaluated as f64 },
        violations,
        singular_points: times.len() - evaluated,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonnegativityAudit {
    pub min_entry: f64,
    pub nonnegative: bool,
}

/// Smallest entry of `S` and whether it is above `-NEGATIVITY`.
pub fn nonnegativity_audit(s: &QuasiChannel) -> NonnegativityAudit {
    let min_entry = s.min_entry();
    NonnegativityAudit {
        min_entry,
        nonnegative: min_entry >= -tolerances::NEGATIVITY,
    }
}

/// `|A and B| / |A or B|` of two flag sequences; 1 when both are empty.
pub fn jaccard(a: &[bool], b: &[bool]) -> f64 {
    let both = a.iter().zip(b).filter(|(x, y)| **x && **y).count();
    let either = a.iter().zip(b).filter(|(x, y)| **x || **y).count();
    if either == 0 {
        1.0
    } else {
        both as f64 / either as f64
    }
}
