// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Simpson quadrature and finite-difference helpers.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol` by adaptive Simpson.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let value = recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
        .ok_or(Error::QuadratureFailure { a, b })?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::QuadratureFailure { a, b })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

/// Derivative of sampled values on a uniform grid with spacing `h`.
///
/// Interior points use central differences; the two endpoints use the
/// second-order one-sided stencils so the whole trajectory is O(h^2).
/// Non-finite samples propagate as NaN to every stencil that touches them.
pub fn grid_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![f64::NAN; n];
    if n < 3 {
        return out;
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    out
}

/// Stencil weights used by [`grid_derivative`] at index `i` of `n` points:
/// `(index, weight)` pairs, to be divided by `h`.
pub fn derivative_stencil(i: usize, n: usize) -> [(usize, f64); 3] {
    if i == 0 {
        [(0, -1.5), (1, 2.0), (2, -0.5)]
    } else if i == n - 1 {
        [(n - 1, 1.5), (n - 2, -2.0), (n - 3, 0.5)]
    } else {
        [(i - 1, -0.5), (i, 0.0), (i + 1, 0.5)]
    }
}

/// Central difference of a scalar function.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// A maximal run where a sampled signal exceeds a threshold, with
/// endpoints refined by linear interpolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    /// Integral of the signal over the segment (trapezoid rule).
    pub integral: f64,
}

/// Trapezoid integral of the part of `values` above zero, counting only
/// samples that exceed `deadband`. Zero crossings are located by linear
/// interpolation between neighbouring samples. Returns the total and the
/// maximal positive segments.
pub fn positive_part_integral(times: &[f64], values: &[f64], deadband: f64) -> (f64, Vec<Segment>) {
    let mut segments: Vec<Segment> = Vec::new();
    let mut current: Option<Segment> = None;
    let mut total = 0.0;
    let n = times.len().min(values.len());

    for i in 0..n.saturating_sub(1) {
        let (t0, t1) = (times[i], times[i + 1]);
        let (v0, v1) = (values[i], values[i + 1]);
        if !v0.is_finite() || !v1.is_finite() {
            if let Some(seg) = current.take() {
                segments.push(seg);
            }
            continue;
        }
        let p0 = v0 > deadband;
        let p1 = v1 > deadband;
        let (piece, lo, hi) = match (p0, p1) {
            (true, true) => (0.5 * (v0 + v1) * (t1 - t0), t0, t1),
            (true, false) if v1 >= 0.0 => (0.5 * (v0 + v1) * (t1 - t0), t0, t1),
            (false, true) if v0 >= 0.0 => (0.5 * (v0 + v1) * (t1 - t0), t0, t1),
            (true, false) => {
                let tc = crossing(t0, t1, v0, v1);
                (0.5 * v0 * (tc - t0), t0, tc)
            }
            (false, true) => {
                let tc = crossing(t0, t1, v0, v1);
                (0.5 * v1 * (t1 - tc), tc, t1)
            }
            (false, false) => {
                if let Some(seg) = current.take() {
                    segments.push(seg);
                }
                continue;
            }
        };
        total += piece;
        match current.as_mut() {
            Some(seg) if (seg.end - lo).abs() <= f64::EPSILON * (1.0 + lo.abs()) => {
                seg.end = hi;
                seg.integral += piece;
            }
            _ => {
                if let Some(seg) = current.take() {
                    segments.push(seg);
                }
                current = Some(Segment {
                    start: lo,
                    end: hi,
                    integral: piece,
                });
            }
        }
        if !p1 {
            if let Some(seg) = current.take() {
                segments.push(seg);
            }
        }
    }
    if let Some(seg) = current.take() {
        segments.push(seg);
    }
    (total, segments)
}

// v0 and v1 have strictly opposite signs here
fn crossing(t0: f64, t1: f64, v0: f64, v1: f64) -> f64 {
    t0 + (t1 - t0) * v0 / (v0 - v1)
}
