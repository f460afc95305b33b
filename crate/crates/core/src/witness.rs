// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! The witness `W = S^T S <= 1` on quasi-stochastic channel matrices, its
//! flow along a trajectory, and the measure of non-Markovianity.
//!
//! A trajectory carries two flows. `zeta` is the derivative of `Tr W` and
//! drives the measure. `spectral_flow` is the largest eigenvalue of `dW/dt`;
//! it is positive exactly when `W` stops decreasing in the Loewner order,
//! which is what the rate criteria of unital random unitary dynamics
//! express. For bistochastic `S` the backflow flag follows the spectral
//! flow, otherwise it follows `zeta`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{FrameKind, FrameSet};
use crate::grid::TimeGrid;
use crate::linalg::{self, RMat};
use crate::models::{rate_of, DynamicalModel, Dynamics, RateConvention};
use crate::qpr::{self, QuasiChannel};
use crate::quadrature::{self, Segment};
use crate::tolerances;

/// `W = S^T S`, symmetrized exactly.
pub fn witness_matrix(s: &QuasiChannel) -> RMat {
    let m = s.matrix();
    let w = m.transpose() * m;
    (&w + w.transpose()) * 0.5
}

/// Eigenvalues of a symmetric witness matrix by cyclic Jacobi, descending.
pub fn witness_eigenvalues(w: &RMat) -> Result<Vec<f64>> {
    linalg::jacobi_eigen(w).map(|e| e.values)
}

/// A grid point where the model or representation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub index: usize,
    pub t: f64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct WitnessTrajectory {
    pub frame_kind: FrameKind,
    pub times: Vec<f64>,
    /// Spectrum of `S^T S` per point, descending. NaN at gaps.
    pub eigenvalues: Vec<Vec<f64>>,
    /// `Tr(S^T S)`, the trace norm of the PSD witness.
    pub trace_norm: Vec<f64>,
    /// `d/dt Tr(S^T S)`.
    pub zeta: Vec<f64>,
    /// Largest eigenvalue of `d/dt (S^T S)`.
    pub spectral_flow: Vec<f64>,
    /// Per-point detection of information backflow.
    pub backflow: Vec<bool>,
    /// `S` has an entry below `-NEGATIVITY`.
    pub negativity_flag: Vec<bool>,
    pub min_entry: Vec<f64>,
    /// Every valid point had unit row sums.
    pub bistochastic: bool,
    pub gaps: Vec<Gap>,
    /// `N = int_{zeta > 0} zeta dt`.
    pub measure: f64,
    pub segments: Vec<Segment>,
}

impl WitnessTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn size(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    pub fn precondition_violated(&self) -> bool {
        self.negativity_flag.iter().any(|&f| f)
    }

    pub fn detects_backflow(&self) -> bool {
        self.backflow.iter().any(|&b| b) || self.measure > 0.0
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter_map(|ev| ev.first().copied())
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Signal that decides the backflow flag.
    pub fn flow(&self) -> &[f64] {
        if self.bistochastic {
            &self.spectral_flow
        } else {
            &self.zeta
        }
    }

    /// Report annotations, e.g. a violated witness precondition.
    pub fn annotations(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.precondition_violated() {
            let min = self.min_entry.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
            notes.push(format!("witness precondition violated: S has negative entries (min {min:.3e})"));
        }
        if !self.bistochastic {
            notes.push("S is not bistochastic: backflow judged from the trace flow".to_string());
        }
        for g in &self.gaps {
            notes.push(format!("gap at t = {}: {}", g.t, g.message));
        }
        notes
    }
}

struct PointData {
    w: RMat,
    eigenvalues: Vec<f64>,
    min_entry: f64,
    row_defect: f64,
}

fn evaluate<D: Dynamics + ?Sized>(dynamics: &D, fs: &FrameSet, t: f64) -> Result<PointData> {
    let s = qpr::rep_superoperator(&dynamics.map_at(t)?, fs)?;
    let w = witness_matrix(&s);
    let eigenvalues = witness_eigenvalues(&w)?;
    Ok(PointData {
        eigenvalues,
        min_entry: s.min_entry(),
        row_defect: s.row_sum_defect(),
        w,
    })
}

/// Witness trajectory of any dynamics over a grid. Points are evaluated in
/// parallel; failures become gaps.
pub fn trajectory_of<D: Dynamics + ?Sized>(dynamics: &D, fs: &FrameSet, grid: &TimeGrid) -> Result<WitnessTrajectory> {
    if fs.dim() != dynamics.dim() {
        return Err(Error::DimensionMismatch {
            expected: dynamics.dim(),
            found: fs.dim(),
        });
    }
    if grid.len() < 3 {
        return Err(Error::InvalidGrid("need at least 3 points".into()));
    }
    let times = grid.times();
    let points: Vec<Result<PointData>> = times.par_iter().map(|&t| evaluate(dynamics, fs, t)).collect();

    let n = fs.len();
    let len = times.len();
    let h = grid.step();
    let mut gaps = Vec::new();
    let mut eigenvalues = Vec::with_capacity(len);
    let mut trace_norm = Vec::with_capacity(len);
    let mut min_entry = Vec::with_capacity(len);
    let mut negativity_flag = Vec::with_capacity(len);
    let mut bistochastic = true;
    for (i, p) in points.iter().enumerate() {
        match p {
            Ok(p) => {
                trace_norm.push(p.w.trace());
                eigenvalues.push(p.eigenvalues.clone());
                min_entry.push(p.min_entry);
                negativity_flag.push(p.min_entry < -tolerances::NEGATIVITY);
                bistochastic &= p.row_defect <= tolerances::TRACE_PRESERVATION;
            }
            Err(e) => {
                gaps.push(Gap {
                    index: i,
                    t: times[i],
                    message: e.to_string(),
                });
                trace_norm.push(f64::NAN);
                eigenvalues.push(vec![f64::NAN; n]);
                min_entry.push(f64::NAN);
                negativity_flag.push(false);
            }
        }
    }
    if gaps.len() == len {
        return Err(Error::InvalidGrid(format!("model failed on every grid point: {}", gaps[0].message)));
    }

    let mut zeta = vec![f64::NAN; len];
    let mut spectral_flow = vec![f64::NAN; len];
    for i in 0..len {
        let stencil = quadrature::derivative_stencil(i, len);
        let Some(ws) = stencil
            .iter()
            .map(|&(j, _)| points[j].as_ref().ok().map(|p| &p.w))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let mut dw = RMat::zeros(n, n);
        let mut dz = 0.0;
        for (&(j, weight), w) in stencil.iter().zip(&ws) {
            dw += *w * (weight / h);
            dz += trace_norm[j] * weight / h;
        }
        zeta[i] = dz;
        let dw = (&dw + dw.transpose()) * 0.5;
        spectral_flow[i] = match linalg::jacobi_eigen(&dw) {
            Ok(e) => e.values[0],
            Err(_) => f64::NAN,
        };
    }

    let flow = if bistochastic { &spectral_flow } else { &zeta };
    let backflow = flow.iter().map(|&v| v > tolerances::CRITERION_DEADBAND).collect();
    let (measure, segments) = quadrature::positive_part_integral(&times, &zeta, tolerances::ZETA_DEADBAND);

    let traj = WitnessTrajectory {
        frame_kind: fs.kind(),
        times,
        eigenvalues,
        trace_norm,
        zeta,
        spectral_flow,
        backflow,
        negativity_flag,
        min_entry,
        bistochastic,
        gaps,
        measure,
        segments,
    };
    if traj.precondition_violated() {
        log::info!("witness precondition violated: quasi-channel has negative entries");
    }
    Ok(traj)
}

/// Witness trajectory of a model, with integrated rates cached on the grid.
pub fn zeta_trajectory(m: &DynamicalModel, fs: &FrameSet, grid: &TimeGrid) -> Result<WitnessTrajectory> {
    trajectory_of(&m.cached(grid)?, fs, grid)
}

/// `N = int_{zeta > 0} zeta dt` by the trapezoid rule over segments where
/// `zeta` exceeds the dead-band, with interpolated zero crossings.
pub fn nm_measure(traj: &WitnessTrajectory) -> f64 {
    nm_segments(traj).0
}

pub fn nm_segments(traj: &WitnessTrajectory) -> (f64, Vec<Segment>) {
    quadrature::positive_part_integral(&traj.times, &traj.zeta, tolerances::ZETA_DEADBAND)
}

/// One inequality of a Markovianity criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub t: f64,
    pub criteria: Vec<Criterion>,
}

impl CriteriaReport {
    pub fn markovian(&self) -> bool {
        self.criteria.iter().all(|c| c.satisfied)
    }

    /// Smallest left-hand side.
    pub fn min_value(&self) -> f64 {
        self.criteria.iter().map(|c| c.value).fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for CriteriaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criteria at t = {}", self.t)?;
        let width = self.criteria.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.criteria {
            let mark = if c.satisfied { "ok" } else { "VIOLATED" };
            writeln!(f, "  {:<width$}  {:>+.6e}  {mark}", c.name, c.value)?;
        }
        write!(f, "markovian: {}", if self.markovian() { "yes" } else { "no" })
    }
}

/// Rate groups whose sums must stay non-negative for qutrit random unitary
/// dynamics (1-based rate indices).
pub const QUTRIT_GROUPS: [[usize; 6]; 4] = [
    [1, 2, 4, 5, 7, 8],
    [1, 2, 3, 4, 6, 8],
    [1, 2, 3, 5, 6, 7],
    [3, 4, 5, 6, 7, 8],
];

pub const QUBIT_PAIRS: [[usize; 2]; 3] = [[1, 2], [1, 3], [2, 3]];

fn criterion(name: String, value: f64) -> Criterion {
    Criterion {
        name,
        value,
        satisfied: value >= -tolerances::CRITERION_DEADBAND,
    }
}

fn group_sums(rates: &[f64], groups: &[&[usize]]) -> Vec<Criterion> {
    groups
        .iter()
        .map(|g| {
            let name = g.iter().map(|k| format!("g{k}")).collect::<Vec<_>>().join("+");
            criterion(name, g.iter().map(|&k| rates[k - 1]).sum())
        })
        .collect()
}

/// Criteria from instantaneous random unitary rates.
pub fn rate_criteria(d: usize, rates: &[f64]) -> Result<Vec<Criterion>> {
    match d {
        2 => Ok(group_sums(rates, &QUBIT_PAIRS.iter().map(|g| g.as_slice()).collect::<Vec<_>>())),
        3 => Ok(group_sums(rates, &QUTRIT_GROUPS.iter().map(|g| g.as_slice()).collect::<Vec<_>>())),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Model-specific Markovianity inequalities at time `t`.
pub fn markov_criteria(m: &DynamicalModel, t: f64) -> Result<CriteriaReport> {
    let criteria = match m {
        DynamicalModel::PureDecoherence(g) => {
            vec![criterion("gamma".into(), rate_of(g, t, RateConvention::PureDecoherence)?.gamma())]
        }
        DynamicalModel::Dissipation(g) => {
            vec![criterion("gamma".into(), rate_of(g, t, RateConvention::Dissipation)?.gamma())]
        }
        DynamicalModel::RandomUnitary(r) => match r.dim() {
            2 | 3 => rate_criteria(r.dim(), &r.values(t))?,
            d => return Err(Error::UnsupportedModel(format!("random unitary criteria for d = {d}"))),
        },
    };
    Ok(CriteriaReport { t, criteria })
}
