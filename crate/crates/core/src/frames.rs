// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Frames and dual frames for qubit and qutrit quasiprobability
//! representations.
//!
//! A [`FrameSet`] holds a minimal frame `{F_j}` of `d^2` Hermitian operators
//! with `sum_j F_j = 1`, and its unique dual `{G_j}` with `Tr G_j = 1` and
//! `Tr(F_j G_k) = delta_jk`. Elements are indexed lexicographically by
//! `(j1, j2)` in `Z_d x Z_d`, i.e. `j = j1 * d + j2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, RMat, ONE, ZERO};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameKind {
    /// Wootters' discrete Wigner function, qubit.
    WoottersWigner,
    /// Gross' discrete Wigner function, odd prime dimension (here d = 3).
    GrossWigner,
    /// Symmetric informationally-complete POVM representation.
    SicPovm,
}

impl FrameKind {
    pub fn name(self) -> &'static str {
        match self {
            FrameKind::WoottersWigner => "wootters",
            FrameKind::GrossWigner => "gross",
            FrameKind::SicPovm => "sic",
        }
    }

    pub fn is_wigner(self) -> bool {
        matches!(self, FrameKind::WoottersWigner | FrameKind::GrossWigner)
    }

    /// The discrete Wigner frame for dimension `d`.
    pub fn wigner_for(d: usize) -> Result<FrameKind> {
        match d {
            2 => Ok(FrameKind::WoottersWigner),
            3 => Ok(FrameKind::GrossWigner),
            _ => Err(Error::UnsupportedDimension(d)),
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "wootters" | "wootterswigner" => Ok(FrameKind::WoottersWigner),
            "gross" | "grosswigner" => Ok(FrameKind::GrossWigner),
            "sic" | "sicpovm" => Ok(FrameKind::SicPovm),
            other => Err(format!("unknown frame kind `{other}` (expected wootters, gross or sic)")),
        }
    }
}

/// A minimal frame together with its dual. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FrameSet {
    kind: FrameKind,
    d: usize,
    frame: Vec<CMat>,
    dual: Vec<CMat>,
}

impl FrameSet {
    /// Assemble a frame set from explicit operators, without validation.
    /// Use [`validate_frame`] to check the result.
    pub fn from_parts(kind: FrameKind, d: usize, frame: Vec<CMat>, dual: Vec<CMat>) -> Self {
        FrameSet { kind, d, frame, dual }
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of frame elements (`d^2`).
    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn frame(&self) -> &[CMat] {
        &self.frame
    }

    pub fn dual(&self) -> &[CMat] {
        &self.dual
    }

    /// Frame element `F_(j1, j2)`.
    pub fn element(&self, j1: usize, j2: usize) -> &CMat {
        &self.frame[j1 * self.d + j2]
    }
}

/// Build one of the supported frame sets.
pub fn build_frame(kind: FrameKind, d: usize) -> Result<FrameSet> {
    let frame = match (kind, d) {
        (FrameKind::WoottersWigner, 2) => wootters_frame(),
        (FrameKind::GrossWigner, 3) => gross_frame(),
        (FrameKind::SicPovm, 2) => sic_frame(&qubit_sic_states()),
        (FrameKind::SicPovm, 3) => sic_frame(&weyl_orbit(&hesse_fiducial())),
        _ => return Err(Error::UnsupportedFrame { kind, d }),
    };
    let dual = if kind.is_wigner() {
        let scale = c(d as f64, 0.0);
        frame.iter().map(|f| f * scale).collect()
    } else {
        dual_of(&frame)?
    };
    Ok(FrameSet { kind, d, frame, dual })
}

/// `F_j = (1 + (-1)^j1 Z + (-1)^j2 X + (-1)^(j1+j2) Y) / 4`.
fn wootters_frame() -> Vec<CMat> {
    let (x, y, z) = (linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z());
    let id = linalg::identity(2);
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(4);
    for j1 in 0..2 {
        for j2 in 0..2 {
            let f = &id + &z * c(sign(j1), 0.0) + &x * c(sign(j2), 0.0) + &y * c(sign(j1 + j2), 0.0);
            out.push(f * c(0.25, 0.0));
        }
    }
    out
}

/// Qutrit phase-point operators `F_(j1, j2) = (1/3) sum_m w^(-j1 (m - j2)) |2 j2 - m><m|`,
/// i.e. displaced parity operators. Entry-by-entry these are the qutrit
/// Wigner operators in the usual lexicographic listing (see the tests).
fn gross_frame() -> Vec<CMat> {
    let d = 3usize;
    let omega = |k: i64| Complex64::from_polar(1.0, 2.0 * PI * (k.rem_euclid(3) as f64) / 3.0);
    let mut out = Vec::with_capacity(9);
    for j1 in 0..d as i64 {
        for j2 in 0..d as i64 {
            let mut f = CMat::zeros(d, d);
            for m in 0..d as i64 {
                let row = (2 * j2 - m).rem_euclid(3) as usize;
                f[(row, m as usize)] = omega(-j1 * (m - j2)) / 3.0;
            }
            out.push(f);
        }
    }
    out
}

/// Tetrahedral qubit SIC states with Bloch vectors `(+-1, +-1, +-1)/sqrt(3)`
/// having an even number of minus signs.
fn qubit_sic_states() -> Vec<CMat> {
    let s = 1.0 / 3.0_f64.sqrt();
    let dirs = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let (x, y, z) = (linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z());
    dirs.iter()
        .map(|n| {
            (linalg::identity(2) + &x * c(n[0], 0.0) + &y * c(n[1], 0.0) + &z * c(n[2], 0.0)) * c(0.5, 0.0)
        })
        .collect()
}

/// Hesse-configuration fiducial `(0, 1, -1)/sqrt(2)`.
fn hesse_fiducial() -> Vec<Complex64> {
    let s = 1.0 / 2.0_f64.sqrt();
    vec![ZERO, c(s, 0.0), c(-s, 0.0)]
}

/// Projectors onto `U_(k,l) |psi>` for all Weyl operators, lexicographic in `(k, l)`.
fn weyl_orbit(fiducial: &[Complex64]) -> Vec<CMat> {
    let d = fiducial.len();
    let psi = nalgebra::DVector::from_column_slice(fiducial);
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let u = crate::models::weyl_matrix(d, k, l);
            let v = &u * &psi;
            out.push(linalg::projector(v.as_slice()));
        }
    }
    out
}

/// `F_j = Pi_j / d` for rank-one projectors `Pi_j`.
fn sic_frame(projectors: &[CMat]) -> Vec<CMat> {
    let d = projectors[0].nrows() as f64;
    projectors.iter().map(|p| p / c(d, 0.0)).collect()
}

/// Gram matrix `Tr(F_j F_k)` of a set of Hermitian operators.
pub fn gram_matrix(frame: &[CMat]) -> RMat {
    let n = frame.len();
    RMat::from_fn(n, n, |j, k| linalg::trace_product(&frame[j], &frame[k]).re)
}

/// Unique dual of a minimal frame, `G_j = sum_k (Gram^-1)_jk F_k`.
pub fn dual_of(frame: &[CMat]) -> Result<Vec<CMat>> {
    let Some(first) = frame.first() else {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    };
    let d = first.nrows();
    if frame.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: frame.len(),
        });
    }
    if let Some(bad) = frame.iter().find(|f| f.nrows() != d || f.ncols() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.nrows(),
        });
    }
    let gram = gram_matrix(frame);
    let condition = condition_number(&gram);
    if !(condition <= tolerances::GRAM_CONDITION) {
        return Err(Error::SingularFrame { condition });
    }
    let inv = gram
        .try_inverse()
        .ok_or(Error::SingularFrame { condition: f64::INFINITY })?;
    let n = frame.len();
    Ok((0..n)
        .map(|j| {
            let mut g = CMat::zeros(d, d);
            for k in 0..n {
                g += &frame[k] * c(inv[(j, k)], 0.0);
            }
            // remove rounding asymmetry
            (&g + g.adjoint()) * c(0.5, 0.0)
        })
        .collect())
}

fn condition_number(gram: &RMat) -> f64 {
    let ev = linalg::jacobi_eigen(gram).map(|e| e.values).unwrap_or_default();
    match (ev.first(), ev.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// A single named check in a [`FrameReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCheck {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct FrameReport {
    pub kind: FrameKind,
    pub d: usize,
    pub checks: Vec<FrameCheck>,
}

impl FrameReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&FrameCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for FrameReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frame {} (d = {}, {} elements)", self.kind, self.d, self.d * self.d)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for check in &self.checks {
            writeln!(
                f,
                "  {:<width$}  {}  max deviation {:>10.3e}  (tolerance {:.0e})",
                check.name,
                if check.passed { "PASS" } else { "FAIL" },
                check.max_deviation,
                check.tolerance,
            )?;
        }
        write!(f, "result: {}", if self.all_passed() { "all checks passed" } else { "FAILED" })
    }
}

fn check(name: &'static str, deviation: f64, tolerance: f64) -> FrameCheck {
    FrameCheck {
        name,
        passed: deviation.is_finite() && deviation <= tolerance,
        max_deviation: deviation,
        tolerance,
    }
}

/// Check every structural identity of a frame set.
pub fn validate_frame(fs: &FrameSet) -> FrameReport {
    let d = fs.d;
    let n = fs.frame.len();
    let tol = tolerances::STRUCTURAL;
    let mut checks = Vec::new();

    checks.push(check("count", n.abs_diff(d * d) as f64, 0.0));

    let sum = fs.frame.iter().fold(CMat::zeros(d, d), |acc, f| acc + f);
    checks.push(check("normalization", linalg::max_abs_diff(&sum, &linalg::identity(d)), tol));

    let dual_trace = fs
        .dual
        .iter()
        .map(|g| (linalg::trace(g) - ONE).norm())
        .fold(0.0, f64::max);
    checks.push(check("dual_trace", dual_trace, tol));

    let mut duality = 0.0_f64;
    for (j, f) in fs.frame.iter().enumerate() {
        for (k, g) in fs.dual.iter().enumerate() {
            let target = if j == k { ONE } else { ZERO };
            duality = duality.max((linalg::trace_product(f, g) - target).norm());
        }
    }
    if fs.dual.len() != n {
        duality = f64::INFINITY;
    }
    checks.push(check("duality", duality, tol));

    let herm = fs
        .frame
        .iter()
        .chain(fs.dual.iter())
        .map(linalg::hermiticity_defect)
        .fold(0.0, f64::max);
    checks.push(check("hermiticity", herm, tol));

    let rank = span_rank(&fs.frame);
    checks.push(check("span_rank", rank.abs_diff(d * d) as f64, 0.0));

    FrameReport { kind: fs.kind, d, checks }
}

/// [`validate_frame`] plus a reconstruction probe on `probes` random
/// Hermitian operators drawn from `rng`.
pub fn validate_frame_with_probes<R: Rng + ?Sized>(fs: &FrameSet, probes: usize, rng: &mut R) -> FrameReport {
    let mut report = validate_frame(fs);
    let mut worst = 0.0_f64;
    for _ in 0..probes {
        let a = crate::random::hermitian(fs.d, rng);
        let mut recon = CMat::zeros(fs.d, fs.d);
        for (f, g) in fs.frame.iter().zip(&fs.dual) {
            recon += g * linalg::trace_product(&a, f);
        }
        worst = worst.max(linalg::max_abs_diff(&recon, &a));
    }
    report
        .checks
        .push(check("reconstruction", worst, tolerances::RECONSTRUCTION));
    report
}

/// Rank of the real span of Hermitian operators, from the Gram spectrum.
fn span_rank(ops: &[CMat]) -> usize {
    let gram = gram_matrix(ops);
    let Ok(eig) = linalg::jacobi_eigen(&gram) else {
        return 0;
    };
    let top = eig.values.first().copied().unwrap_or(0.0).abs();
    eig.values
        .iter()
        .filter(|&&v| v > top / tolerances::GRAM_CONDITION)
        .count()
}
