// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Parametrized dynamical maps: qubit pure decoherence, qubit dissipation,
//! and random unitary (Weyl) channels in dimension 2 or 3.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{self, c, CMat, I, ONE};
use crate::quadrature;
use crate::tolerances;

/// Anything that yields a CPTP map for each `t >= 0`.
pub trait Dynamics: Sync {
    fn dim(&self) -> usize;
    fn channel_at(&self, t: f64) -> Result<Superoperator>;

    /// The map at `t` with trace preservation enforced but complete
    /// positivity only reported. Scans use this so that a quasi-channel
    /// is still produced when mixing weights turn negative.
    fn map_at(&self, t: f64) -> Result<Superoperator> {
        self.channel_at(t)
    }
}

/// Decoherence function `G(t)` with `G(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoherenceFunction {
    /// `G = exp(-kappa t)`.
    Exponential { kappa: f64 },
    /// `G = exp(-kappa t) cos(omega t)`; vanishes at the zeros of the cosine.
    DampedOscillatory { kappa: f64, omega: f64 },
    /// Damped Jaynes-Cummings amplitude
    /// `G = exp(-lambda t / 2) [cosh(D t / 2) + (lambda / D) sinh(D t / 2)]`,
    /// `D = sqrt(lambda^2 - 2 gamma0 lambda)`. Oscillates through zero when
    /// `gamma0 > lambda / 2`.
    JaynesCummings { lambda: f64, gamma0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoherenceFamily {
    Exponential,
    DampedOscillatory,
    JaynesCummings,
}

impl DecoherenceFunction {
    pub fn exponential(kappa: f64) -> Result<Self> {
        let f = DecoherenceFunction::Exponential { kappa };
        f.validate()?;
        Ok(f)
    }

    pub fn damped_oscillatory(kappa: f64, omega: f64) -> Result<Self> {
        let f = DecoherenceFunction::DampedOscillatory { kappa, omega };
        f.validate()?;
        Ok(f)
    }

    pub fn jaynes_cummings(lambda: f64, gamma0: f64) -> Result<Self> {
        let f = DecoherenceFunction::JaynesCummings { lambda, gamma0 };
        f.validate()?;
        Ok(f)
    }

    pub fn family(&self) -> DecoherenceFamily {
        match self {
            DecoherenceFunction::Exponential { .. } => DecoherenceFamily::Exponential,
            DecoherenceFunction::DampedOscillatory { .. } => DecoherenceFamily::DampedOscillatory,
            DecoherenceFunction::JaynesCummings { .. } => DecoherenceFamily::JaynesCummings,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match *self {
            DecoherenceFunction::Exponential { kappa } => {
                if !(kappa >= 0.0 && kappa.is_finite()) {
                    return bad(format!("kappa = {kappa} must be finite and non-negative"));
                }
            }
            DecoherenceFunction::DampedOscillatory { kappa, omega } => {
                if !(kappa >= 0.0 && kappa.is_finite()) {
                    return bad(format!("kappa = {kappa} must be finite and non-negative"));
                }
                if !omega.is_finite() {
                    return bad(format!("omega = {omega} must be finite"));
                }
            }
            DecoherenceFunction::JaynesCummings { lambda, gamma0 } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return bad(format!("lambda = {lambda} must be finite and positive"));
                }
                if !(gamma0 >= 0.0 && gamma0.is_finite()) {
                    return bad(format!("gamma0 = {gamma0} must be finite and non-negative"));
                }
            }
        }
        Ok(())
    }

    /// `(G(t), dG/dt)`, both analytic.
    pub fn value_and_derivative(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParams(format!("time t = {t} must be non-negative")));
        }
        let (g, dg) = match *self {
            DecoherenceFunction::Exponential { kappa } => {
                let g = (-kappa * t).exp();
                (g, -kappa * g)
            }
            DecoherenceFunction::DampedOscillatory { kappa, omega } => {
                let e = (-kappa * t).exp();
                let (s, co) = (omega * t).sin_cos();
                (e * co, -kappa * e * co - omega * e * s)
            }
            DecoherenceFunction::JaynesCummings { lambda, gamma0 } => {
                let e = (-lambda * t / 2.0).exp();
                let disc = lambda * lambda - 2.0 * gamma0 * lambda;
                // even part C and odd part sinh(D t / 2) / D, continued through D = 0
                let (even, odd) = if disc > 0.0 {
                    let delta = disc.sqrt();
                    let x = delta * t / 2.0;
                    (x.cosh(), x.sinh() / delta)
                } else if disc < 0.0 {
                    let delta = (-disc).sqrt();
                    let x = delta * t / 2.0;
                    (x.cos(), x.sin() / delta)
                } else {
                    (1.0, t / 2.0)
                };
                (e * (even + lambda * odd), -gamma0 * lambda * e * odd)
            }
        };
        Ok((c(g, 0.0), c(dg, 0.0)))
    }

    pub fn value(&self, t: f64) -> Result<Complex64> {
        self.value_and_derivative(t).map(|(g, _)| g)
    }

    /// Fail unless `|G(t)| <= 1` on every grid point.
    pub fn check_on_grid(&self, grid: &TimeGrid) -> Result<()> {
        for t in grid.times() {
            let g = self.value(t)?;
            if g.norm() > 1.0 + tolerances::STRUCTURAL {
                return Err(Error::InvalidParams(format!("|G({t})| = {} exceeds 1", g.norm())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DecoherenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoherenceFunction::Exponential { kappa } => write!(f, "exponential(kappa={kappa})"),
            DecoherenceFunction::DampedOscillatory { kappa, omega } => {
                write!(f, "damped_oscillatory(kappa={kappa}, omega={omega})")
            }
            DecoherenceFunction::JaynesCummings { lambda, gamma0 } => {
                write!(f, "jaynes_cummings(lambda={lambda}, gamma0={gamma0})")
            }
        }
    }
}

/// `G(t)`; see [`DecoherenceFunction`] for the families.
pub fn decoherence_value(f: &DecoherenceFunction, t: f64) -> Result<Complex64> {
    f.value(t)
}

/// Which master-equation convention a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateConvention {
    /// `gamma = -(dG/dt) / G`.
    PureDecoherence,
    /// `gamma = -2 Re[(dG/dt) / G]`, `s = -2 Im[(dG/dt) / G]`.
    Dissipation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rates {
    Dephasing { gamma: f64 },
    Dissipation { gamma: f64, lamb_shift: f64 },
}

impl Rates {
    pub fn gamma(&self) -> f64 {
        match *self {
            Rates::Dephasing { gamma } | Rates::Dissipation { gamma, .. } => gamma,
        }
    }
}

fn log_derivative(f: &DecoherenceFunction, t: f64) -> Result<Complex64> {
    let (g, dg) = f.value_and_derivative(t)?;
    let magnitude = g.norm();
    if magnitude <= tolerances::DECOHERENCE_FLOOR {
        return Err(Error::SingularDecoherence { t, magnitude });
    }
    Ok(dg / g)
}

/// Time-local rates generated by `G` in the requested convention.
pub fn rate_of(f: &DecoherenceFunction, t: f64, convention: RateConvention) -> Result<Rates> {
    let ld = log_derivative(f, t)?;
    Ok(match convention {
        RateConvention::PureDecoherence => Rates::Dephasing { gamma: -ld.re },
        RateConvention::Dissipation => Rates::Dissipation {
            gamma: -2.0 * ld.re,
            lamb_shift: -2.0 * ld.im,
        },
    })
}

/// A scalar rate `gamma_k(t)` for random unitary dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateFunction {
    Constant { c: f64 },
    /// `a + b t`.
    Ramp { a: f64, b: f64 },
    /// `c exp(-kappa t) cos(omega t)`.
    DampedOscillatory { c: f64, kappa: f64, omega: f64 },
}

impl RateFunction {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            RateFunction::Constant { c } => c,
            RateFunction::Ramp { a, b } => a + b * t,
            RateFunction::DampedOscillatory { c, kappa, omega } => c * (-kappa * t).exp() * (omega * t).cos(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            RateFunction::Constant { c } => c.is_finite(),
            RateFunction::Ramp { a, b } => a.is_finite() && b.is_finite(),
            RateFunction::DampedOscillatory { c, kappa, omega } => {
                c.is_finite() && kappa.is_finite() && omega.is_finite()
            }
        }
    }

    /// `int_a^b gamma(s) ds` by adaptive Simpson.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        match *self {
            // polynomial families are integrated exactly by a single Simpson panel
            RateFunction::Constant { .. } | RateFunction::Ramp { .. } => {
                quadrature::adaptive_simpson(|s| self.value(s), a, b, tolerances::QUADRATURE)
            }
            RateFunction::DampedOscillatory { .. } => {
                quadrature::adaptive_simpson(|s| self.value(s), a, b, tolerances::QUADRATURE)
            }
        }
    }
}

/// The `d^2 - 1` rates of a random unitary master equation, indexed
/// `k = 1 .. d^2 - 1` (stored zero-based).
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunctions {
    d: usize,
    rates: Vec<RateFunction>,
}

impl RateFunctions {
    pub fn new(d: usize, rates: Vec<RateFunction>) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension(d));
        }
        if rates.len() != d * d - 1 {
            return Err(Error::InvalidParams(format!(
                "dimension {d} needs {} rates, got {}",
                d * d - 1,
                rates.len()
            )));
        }
        if let Some(k) = rates.iter().position(|r| !r.is_finite()) {
            return Err(Error::InvalidParams(format!("rate {} has non-finite parameters", k + 1)));
        }
        Ok(RateFunctions { d, rates })
    }

    pub fn constant(d: usize, values: &[f64]) -> Result<Self> {
        Self::new(d, values.iter().map(|&c| RateFunction::Constant { c }).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn functions(&self) -> &[RateFunction] {
        &self.rates
    }

    /// `(gamma_1(t), ..., gamma_{d^2-1}(t))`.
    pub fn values(&self, t: f64) -> Vec<f64> {
        self.rates.iter().map(|r| r.value(t)).collect()
    }

    /// `Gamma_k(t) = int_0^t gamma_k`.
    pub fn integrated(&self, t: f64) -> Result<Vec<f64>> {
        self.rates.iter().map(|r| r.integral(0.0, t)).collect()
    }

    /// Cumulative integrals at every grid point, built interval by interval.
    pub fn integrated_on_grid(&self, grid: &TimeGrid) -> Result<Vec<Vec<f64>>> {
        let times = grid.times();
        let mut current = self.integrated(times[0])?;
        let mut out = Vec::with_capacity(times.len());
        out.push(current.clone());
        for w in times.windows(2) {
            for (acc, r) in current.iter_mut().zip(&self.rates) {
                *acc += r.integral(w[0], w[1])?;
            }
            out.push(current.clone());
        }
        Ok(out)
    }
}

/// Unchecked shift-and-phase operator `sum_m w^(m l) |m><m + k|`.
pub(crate) fn weyl_matrix(d: usize, k: usize, l: usize) -> CMat {
    let mut u = CMat::zeros(d, d);
    for m in 0..d {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * ((m * l) % d) as f64 / d as f64);
        u[(m, (m + k) % d)] = phase;
    }
    u
}

/// Weyl operator `U_(k,l) = sum_m w^(m l) |m><m + k mod d|`, `w = exp(2 pi i / d)`.
pub fn weyl_operator(d: usize, k: usize, l: usize) -> Result<CMat> {
    if d == 0 || k >= d || l >= d {
        return Err(Error::IndexOutOfRange { d, k, l });
    }
    Ok(weyl_matrix(d, k, l))
}

/// Symplectic form `(k, l) x (m, n) = k n - l m` of flattened indices `alpha = k d + l`.
fn symplectic(d: usize, alpha: usize, beta: usize) -> i64 {
    let (k, l) = ((alpha / d) as i64, (alpha % d) as i64);
    let (m, n) = ((beta / d) as i64, (beta % d) as i64);
    (k * n - l * m).rem_euclid(d as i64)
}

/// Complex Hadamard matrix `H_ab = w^(a x b)` of size `d^2`.
pub fn weyl_hadamard(d: usize) -> CMat {
    let n = d * d;
    CMat::from_fn(n, n, |a, b| {
        Complex64::from_polar(1.0, 2.0 * PI * symplectic(d, a, b) as f64 / d as f64)
    })
}

/// Mixing weights of a random unitary channel.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomUnitaryWeights {
    /// `p_alpha(t)`, `alpha = 0 .. d^2 - 1`.
    pub p: Vec<f64>,
    /// Eigenvalues `lambda_beta(t)` of the channel on the Weyl operators.
    pub lambdas: Vec<Complex64>,
    /// Largest imaginary part discarded from `p`.
    pub imaginary_residue: f64,
}

impl RandomUnitaryWeights {
    pub fn min_probability(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Warning text when some weight is negative beyond `PROBABILITY_WARNING`.
    pub fn warning(&self) -> Option<String> {
        let min = self.min_probability();
        (min < tolerances::PROBABILITY_WARNING)
            .then(|| format!("non-positive probability: min p_alpha = {min:.3e}"))
    }
}

/// Weights from integrated rates `Gamma_1 .. Gamma_{d^2-1}`.
///
/// `lambda_b = exp(sum_{k=0}^{d^2-1} H_bk Gamma_k)` with the identity term
/// `Gamma_0 = -sum_k Gamma_k`, which makes `lambda_0 = 1` and matches the
/// solution of the master equation; `p_a = (1/d^2) sum_b H_ab lambda_b`.
pub fn weights_from_integrals(d: usize, integrals: &[f64]) -> RandomUnitaryWeights {
    let n = d * d;
    let h = weyl_hadamard(d);
    let mut full = Vec::with_capacity(n);
    full.push(-integrals.iter().sum::<f64>());
    full.extend_from_slice(integrals);
    let lambdas: Vec<Complex64> = (0..n)
        .map(|b| {
            let exponent: Complex64 = (0..n).map(|k| h[(b, k)] * full[k]).sum();
            exponent.exp()
        })
        .collect();
    let mut residue = 0.0_f64;
    let p = (0..n)
        .map(|a| {
            let pa: Complex64 = (0..n).map(|b| h[(a, b)] * lambdas[b]).sum::<Complex64>() / n as f64;
            residue = residue.max(pa.im.abs());
            pa.re
        })
        .collect();
    RandomUnitaryWeights {
        p,
        lambdas,
        imaginary_residue: residue,
    }
}

/// Weights `p_alpha(t)` of the random unitary channel at time `t`.
pub fn random_unitary_probabilities(r: &RateFunctions, t: f64) -> Result<RandomUnitaryWeights> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("time t = {t} must be non-negative")));
    }
    let integrals = r.integrated(t)?;
    let w = weights_from_integrals(r.d, &integrals);
    if let Some(msg) = w.warning() {
        log::warn!("t = {t}: {msg}");
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    PureDecoherence,
    Dissipation,
    RandomUnitary,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::PureDecoherence => "pure_decoherence",
            ModelKind::Dissipation => "dissipation",
            ModelKind::RandomUnitary => "random_unitary",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicalModel {
    /// Qubit, `rho_01 -> G rho_01`, generated by `gamma (Z rho Z - rho)`.
    PureDecoherence(DecoherenceFunction),
    /// Qubit amplitude damping towards `|0>` with coherence factor `G`.
    Dissipation(DecoherenceFunction),
    /// `rho -> sum_alpha p_alpha(t) U_alpha rho U_alpha^dag`.
    RandomUnitary(RateFunctions),
}

impl DynamicalModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            DynamicalModel::PureDecoherence(_) => ModelKind::PureDecoherence,
            DynamicalModel::Dissipation(_) => ModelKind::Dissipation,
            DynamicalModel::RandomUnitary(_) => ModelKind::RandomUnitary,
        }
    }

    pub fn decoherence(&self) -> Option<&DecoherenceFunction> {
        match self {
            DynamicalModel::PureDecoherence(g) | DynamicalModel::Dissipation(g) => Some(g),
            DynamicalModel::RandomUnitary(_) => None,
        }
    }

    pub fn rate_functions(&self) -> Option<&RateFunctions> {
        match self {
            DynamicalModel::RandomUnitary(r) => Some(r),
            _ => None,
        }
    }

    /// Named rates at `t` in the model's own master-equation convention.
    pub fn rates_at(&self, t: f64) -> Result<Vec<(String, f64)>> {
        match self {
            DynamicalModel::PureDecoherence(g) => {
                Ok(vec![("gamma".into(), rate_of(g, t, RateConvention::PureDecoherence)?.gamma())])
            }
            DynamicalModel::Dissipation(g) => {
                Ok(vec![("gamma".into(), rate_of(g, t, RateConvention::Dissipation)?.gamma())])
            }
            DynamicalModel::RandomUnitary(r) => Ok(r
                .values(t)
                .into_iter()
                .enumerate()
                .map(|(k, v)| (format!("gamma_{}", k + 1), v))
                .collect()),
        }
    }

    /// Channel at `t`, with precomputed integrated rates when available.
    pub fn channel_with_integrals(&self, t: f64, integrals: Option<&[f64]>) -> Result<Superoperator> {
        let sup = self.map_with_integrals(t, integrals)?;
        sup.ensure_cptp()?;
        Ok(sup)
    }

    /// Like [`Self::channel_with_integrals`] without the Choi check.
    pub fn map_with_integrals(&self, t: f64, integrals: Option<&[f64]>) -> Result<Superoperator> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParams(format!("time t = {t} must be non-negative")));
        }
        let sup = match self {
            DynamicalModel::PureDecoherence(f) => {
                let g = f.value(t)?;
                if g.im.abs() > tolerances::STRUCTURAL {
                    return Err(Error::InvalidParams("pure decoherence requires a real G(t)".into()));
                }
                if g.norm() > 1.0 + tolerances::STRUCTURAL {
                    return Err(Error::NotCptp(format!("|G({t})| = {} exceeds 1", g.norm())));
                }
                let mut m = CMat::identity(4, 4);
                m[(1, 1)] = g;
                m[(2, 2)] = g;
                Superoperator::from_matrix(2, m)?
            }
            DynamicalModel::Dissipation(f) => {
                let g = f.value(t)?;
                let g2 = g.norm_sqr();
                if g2 > 1.0 + tolerances::STRUCTURAL {
                    return Err(Error::NotCptp(format!("|G({t})| = {} exceeds 1", g.norm())));
                }
                let mut m = CMat::zeros(4, 4);
                m[(0, 0)] = ONE;
                m[(0, 3)] = c(1.0 - g2, 0.0);
                m[(1, 1)] = g.conj();
                m[(2, 2)] = g;
                m[(3, 3)] = c(g2, 0.0);
                Superoperator::from_matrix(2, m)?
            }
            DynamicalModel::RandomUnitary(r) => {
                let w = match integrals {
                    Some(ints) => weights_from_integrals(r.d, ints),
                    None => weights_from_integrals(r.d, &r.integrated(t)?),
                };
                if let Some(msg) = w.warning() {
                    log::debug!("t = {t}: {msg}");
                }
                let d = r.d;
                let mut m = CMat::zeros(d * d, d * d);
                for (alpha, &p) in w.p.iter().enumerate() {
                    let u = weyl_matrix(d, alpha / d, alpha % d);
                    m += linalg::kron(&u, &u.conjugate()) * c(p, 0.0);
                }
                Superoperator::from_matrix(d, m)?
            }
        };
        let deviation = sup.trace_preservation_defect();
        if deviation > tolerances::TRACE_PRESERVATION {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(sup)
    }

    /// Time-local generator `L_t` with `d/dt Lambda_t = L_t Lambda_t`.
    pub fn generator_at(&self, t: f64) -> Result<Superoperator> {
        match self {
            DynamicalModel::PureDecoherence(f) => {
                // rho_01 -> G rho_01 is generated by (gamma / 2)(Z rho Z - rho)
                let gamma = rate_of(f, t, RateConvention::PureDecoherence)?.gamma();
                let z = linalg::pauli_z();
                Ok(Superoperator::unitary(&z).sub(&Superoperator::identity(2)).scale(0.5 * gamma))
            }
            DynamicalModel::Dissipation(f) => {
                let Rates::Dissipation { gamma, lamb_shift } = rate_of(f, t, RateConvention::Dissipation)? else {
                    unreachable!("dissipation convention yields dissipation rates");
                };
                let id = linalg::identity(2);
                let lower = linalg::ket_bra(2, 0, 1);
                let excited = linalg::ket_bra(2, 1, 1);
                // -i (s/2) [|1><1|, rho]
                let hamiltonian = Superoperator::sandwich(&excited, &id)
                    .sub(&Superoperator::sandwich(&id, &excited));
                let hamiltonian = Superoperator::from_matrix(2, hamiltonian.matrix() * (-I * (lamb_shift / 2.0)))?;
                let n = lower.adjoint() * &lower;
                let dissipator = Superoperator::sandwich(&lower, &lower.adjoint())
                    .sub(&Superoperator::sandwich(&n, &id).scale(0.5))
                    .sub(&Superoperator::sandwich(&id, &n).scale(0.5));
                Ok(hamiltonian.add(&dissipator.scale(gamma)))
            }
            DynamicalModel::RandomUnitary(r) => {
                let d = r.d;
                let id = Superoperator::identity(d);
                let mut total = Superoperator::zero(d);
                for (k, gamma) in r.values(t).into_iter().enumerate() {
                    let alpha = k + 1;
                    let u = weyl_matrix(d, alpha / d, alpha % d);
                    total = total.add(&Superoperator::unitary(&u).sub(&id).scale(gamma));
                }
                Ok(total)
            }
        }
    }

    /// Channels on every grid point, integrating rates once along the grid.
    pub fn cached(&self, grid: &TimeGrid) -> Result<CachedModel<'_>> {
        let integrals = match self {
            DynamicalModel::RandomUnitary(r) => Some(r.integrated_on_grid(grid)?),
            _ => None,
        };
        Ok(CachedModel {
            model: self,
            times: grid.times(),
            integrals,
        })
    }
}

impl Dynamics for DynamicalModel {
    fn dim(&self) -> usize {
        match self {
            DynamicalModel::PureDecoherence(_) | DynamicalModel::Dissipation(_) => 2,
            DynamicalModel::RandomUnitary(r) => r.d,
        }
    }

    fn channel_at(&self, t: f64) -> Result<Superoperator> {
        self.channel_with_integrals(t, None)
    }

    fn map_at(&self, t: f64) -> Result<Superoperator> {
        self.map_with_integrals(t, None)
    }
}

/// `Lambda_t` for a model.
pub fn channel_at(m: &DynamicalModel, t: f64) -> Result<Superoperator> {
    m.channel_at(t)
}

/// A model with integrated rates precomputed on a time grid. Read-only, so
/// it can be shared by parallel scan workers.
#[derive(Debug, Clone)]
pub struct CachedModel<'a> {
    model: &'a DynamicalModel,
    times: Vec<f64>,
    integrals: Option<Vec<Vec<f64>>>,
}

impl CachedModel<'_> {
    fn lookup(&self, t: f64) -> Option<&[f64]> {
        let ints = self.integrals.as_ref()?;
        let idx = self.times.partition_point(|&s| s < t);
        let scale = 1.0 + t.abs();
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .find(|&i| i < self.times.len() && (self.times[i] - t).abs() <= 1e-12 * scale)
            .map(|i| ints[i].as_slice())
    }
}

impl Dynamics for CachedModel<'_> {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn channel_at(&self, t: f64) -> Result<Superoperator> {
        self.model.channel_with_integrals(t, self.lookup(t))
    }

    fn map_at(&self, t: f64) -> Result<Superoperator> {
        self.model.map_with_integrals(t, self.lookup(t))
    }
}

/// Generator estimated as `(Lambda_{t+h} - Lambda_{t-h}) / (2h) * Lambda_t^-1`.
/// Uses a forward stencil when `t < h`.
pub fn finite_difference_generator<D: Dynamics + ?Sized>(dynamics: &D, t: f64, h: f64) -> Result<Superoperator> {
    let now = dynamics.channel_at(t)?;
    let derivative = if t >= h {
        dynamics
            .channel_at(t + h)?
            .sub(&dynamics.channel_at(t - h)?)
            .scale(0.5 / h)
    } else {
        let f1 = dynamics.channel_at(t + h)?;
        let f2 = dynamics.channel_at(t + 2.0 * h)?;
        now.scale(-1.5).add(&f1.scale(2.0)).sub(&f2.scale(0.5)).scale(1.0 / h)
    };
    let inverse = now
        .try_inverse()
        .ok_or_else(|| Error::NotCptp(format!("Lambda_{t} is not invertible")))?;
    Ok(derivative.compose(&inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, pauli_x, pauli_y, pauli_z};

    fn jc_strong() -> DecoherenceFunction {
        DecoherenceFunction::jaynes_cummings(1.0, 5.0).unwrap()
    }

    fn first_zero(f: &DecoherenceFunction) -> f64 {
        let (mut lo, mut hi) = (0.0, 0.0);
        let mut t = 0.0;
        while f.value(t).unwrap().re > 0.0 {
            lo = t;
            t += 0.01;
            hi = t;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f.value(mid).unwrap().re > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn every_family_starts_at_one() {
        for f in [
            DecoherenceFunction::exponential(1.0).unwrap(),
            DecoherenceFunction::damped_oscillatory(0.2, 3.0).unwrap(),
            jc_strong(),
            DecoherenceFunction::jaynes_cummings(1.0, 0.5).unwrap(),
            DecoherenceFunction::jaynes_cummings(1.0, 0.1).unwrap(),
        ] {
            assert_eq!(decoherence_value(&f, 0.0).unwrap(), ONE, "{f}");
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        for f in [
            DecoherenceFunction::exponential(0.7).unwrap(),
            DecoherenceFunction::damped_oscillatory(0.2, 3.0).unwrap(),
            jc_strong(),
            DecoherenceFunction::jaynes_cummings(1.0, 0.5).unwrap(),
            DecoherenceFunction::jaynes_cummings(1.0, 0.2).unwrap(),
        ] {
            for t in [0.1, 0.9, 2.3, 4.0] {
                let (_, dg) = f.value_and_derivative(t).unwrap();
                let fd = quadrature::central_difference(|s| f.value(s).unwrap().re, t, 1e-5);
                assert!((dg.re - fd).abs() < 1e-8, "{f} at {t}: {} vs {fd}", dg.re);
            }
        }
    }

    #[test]
    fn exponential_rate_is_constant() {
        let f = DecoherenceFunction::exponential(1.3).unwrap();
        for t in [0.0, 0.5, 3.0, 10.0] {
            assert!((rate_of(&f, t, RateConvention::PureDecoherence).unwrap().gamma() - 1.3).abs() < 1e-14);
            let Rates::Dissipation { gamma, lamb_shift } = rate_of(&f, t, RateConvention::Dissipation).unwrap() else {
                panic!()
            };
            assert!((gamma - 2.6).abs() < 1e-14);
            assert_eq!(lamb_shift, 0.0);
        }
    }

    #[test]
    fn rate_at_zero_is_minus_initial_slope() {
        let f = DecoherenceFunction::damped_oscillatory(0.4, 2.0).unwrap();
        let (_, dg) = f.value_and_derivative(0.0).unwrap();
        assert_eq!(rate_of(&f, 0.0, RateConvention::PureDecoherence).unwrap().gamma(), -dg.re);
    }

    #[test]
    fn strong_coupling_crosses_zero() {
        let f = jc_strong();
        let t_star = first_zero(&f);
        assert!(f.value(t_star).unwrap().norm() < 1e-12);
        assert!(f.value(t_star - 0.01).unwrap().re > 0.0);
        assert!(f.value(t_star + 0.01).unwrap().re < 0.0);
        assert!(matches!(
            rate_of(&f, t_star, RateConvention::PureDecoherence),
            Err(Error::SingularDecoherence { .. })
        ));
        // weak coupling stays positive
        let weak = DecoherenceFunction::jaynes_cummings(1.0, 0.3).unwrap();
        assert!((0..200).all(|i| weak.value(i as f64 * 0.1).unwrap().re > 0.0));
    }

    #[test]
    fn invalid_parameters() {
        assert!(DecoherenceFunction::exponential(-1.0).is_err());
        assert!(DecoherenceFunction::jaynes_cummings(0.0, 1.0).is_err());
        assert!(DecoherenceFunction::damped_oscillatory(0.1, f64::NAN).is_err());
        assert!(DecoherenceFunction::exponential(1.0).unwrap().value(-0.1).is_err());
        assert!(RateFunctions::constant(2, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn weyl_operators() {
        let z = weyl_operator(2, 0, 1).unwrap();
        assert!(max_abs_diff(&z, &pauli_z()) < 1e-15);
        assert!(max_abs_diff(&weyl_operator(2, 1, 0).unwrap(), &pauli_x()) < 1e-15);
        assert!(max_abs_diff(&weyl_operator(2, 1, 1).unwrap(), &(pauli_y() * I)) < 1e-15);
        assert_eq!(weyl_operator(3, 0, 0).unwrap(), linalg::identity(3));
        let shift = weyl_operator(3, 1, 0).unwrap();
        for m in 0..3 {
            for n in 0..3 {
                let expect = if n == (m + 1) % 3 { ONE } else { linalg::ZERO };
                assert_eq!(shift[(m, n)], expect);
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                let u = weyl_operator(3, k, l).unwrap();
                assert!(max_abs_diff(&(&u * u.adjoint()), &linalg::identity(3)) < 1e-14);
            }
        }
        assert!(matches!(weyl_operator(3, 3, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn random_unitary_weights_start_at_identity() {
        let r = RateFunctions::constant(3, &[0.3, -0.1, 0.2, 0.5, 0.1, 0.0, 0.7, 0.4]).unwrap();
        let w = random_unitary_probabilities(&r, 0.0).unwrap();
        assert!((w.p[0] - 1.0).abs() < 1e-15);
        assert!(w.p[1..].iter().all(|p| p.abs() < 1e-15));
        for t in [0.1, 0.8, 2.5] {
            let w = random_unitary_probabilities(&r, t).unwrap();
            assert!((w.p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(w.imaginary_residue < 1e-10);
            assert!((w.lambdas[0] - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn random_unitary_weights_match_matrix_exponential() {
        // constant rates: Lambda_t = exp(t L)
        for (d, rates) in [
            (2usize, vec![0.4, 0.4, 0.4]),
            (2, vec![0.9, 0.2, 0.35]),
            (3, vec![0.3, 0.1, 0.2, 0.5, 0.1, 0.05, 0.7, 0.4]),
        ] {
            let model = DynamicalModel::RandomUnitary(RateFunctions::constant(d, &rates).unwrap());
            let gen = model.generator_at(0.0).unwrap();
            for t in [0.3, 1.1] {
                let exp = (gen.matrix() * c(t, 0.0)).exp();
                let ch = model.channel_at(t).unwrap();
                assert!(max_abs_diff(ch.matrix(), &exp) < 1e-8, "d = {d}, t = {t}");
            }
        }
    }

    #[test]
    fn identity_at_time_zero_and_for_zero_rates() {
        let models = [
            DynamicalModel::PureDecoherence(jc_strong()),
            DynamicalModel::Dissipation(jc_strong()),
            DynamicalModel::RandomUnitary(RateFunctions::constant(3, &[0.1; 8]).unwrap()),
        ];
        for m in &models {
            let ch = m.channel_at(0.0).unwrap();
            assert!(max_abs_diff(ch.matrix(), Superoperator::identity(m.dim()).matrix()) < 1e-15);
        }
        let still = DynamicalModel::RandomUnitary(RateFunctions::constant(2, &[0.0; 3]).unwrap());
        let ch = still.channel_at(2.0).unwrap();
        assert!(max_abs_diff(ch.matrix(), Superoperator::identity(2).matrix()) < 1e-15);
    }

    #[test]
    fn dissipation_collapses_to_ground_state() {
        // exponential G with large kappa gives |G| ~ 0 at t = 40
        let m = DynamicalModel::Dissipation(DecoherenceFunction::exponential(1.0).unwrap());
        let ch = m.channel_at(40.0).unwrap();
        let rho = linalg::ket_bra(2, 1, 1) * c(0.3, 0.0) + linalg::ket_bra(2, 0, 0) * c(0.7, 0.0)
            + linalg::ket_bra(2, 0, 1) * c(0.2, 0.1)
            + linalg::ket_bra(2, 1, 0) * c(0.2, -0.1);
        assert!(max_abs_diff(&ch.apply(&rho), &linalg::ket_bra(2, 0, 0)) < 1e-15);
    }

    #[test]
    fn channels_are_trace_preserving_on_grid() {
        let grid = TimeGrid::new(0.0, 8.0, 400).unwrap();
        let rates = RateFunctions::new(
            2,
            vec![
                RateFunction::DampedOscillatory { c: 1.0, kappa: 0.3, omega: 2.0 },
                RateFunction::Ramp { a: 0.5, b: 0.1 },
                RateFunction::Constant { c: 0.4 },
            ],
        )
        .unwrap();
        let models = [
            DynamicalModel::PureDecoherence(jc_strong()),
            DynamicalModel::Dissipation(jc_strong()),
            DynamicalModel::RandomUnitary(rates),
        ];
        for m in &models {
            let cached = m.cached(&grid).unwrap();
            for t in grid.times() {
                let ch = cached.channel_at(t).unwrap();
                assert!(ch.trace_preservation_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn cached_integrals_match_direct_quadrature() {
        let r = RateFunctions::new(
            2,
            vec![
                RateFunction::DampedOscillatory { c: 1.0, kappa: 0.3, omega: 2.0 },
                RateFunction::Ramp { a: -0.5, b: 0.25 },
                RateFunction::Constant { c: 0.4 },
            ],
        )
        .unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 50).unwrap();
        let table = r.integrated_on_grid(&grid).unwrap();
        for (i, t) in grid.times().into_iter().enumerate() {
            // closed forms of the three integrals
            let (k, w) = (0.3_f64, 2.0_f64);
            let osc = ((-k * t).exp() * (w * (w * t).sin() - k * (w * t).cos()) + k) / (k * k + w * w);
            let expect = [osc, -0.5 * t + 0.125 * t * t, 0.4 * t];
            for (a, b) in table[i].iter().zip(expect) {
                assert!((a - b).abs() < 1e-9, "t = {t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn analytic_generators_match_finite_differences() {
        let rates = RateFunctions::new(
            3,
            (0..8)
                .map(|k| RateFunction::DampedOscillatory { c: 0.2 + 0.1 * k as f64, kappa: 0.2, omega: 1.5 })
                .collect(),
        )
        .unwrap();
        let models = [
            DynamicalModel::PureDecoherence(DecoherenceFunction::damped_oscillatory(0.3, 2.0).unwrap()),
            DynamicalModel::Dissipation(jc_strong()),
            DynamicalModel::RandomUnitary(rates),
        ];
        for m in &models {
            for t in [0.2, 0.45, 1.3] {
                let analytic = m.generator_at(t).unwrap();
                let numeric = finite_difference_generator(m, t, 1e-5).unwrap();
                assert!(max_abs_diff(analytic.matrix(), numeric.matrix()) < 1e-6, "{:?} t = {t}", m.kind());
                assert!(analytic.trace_annihilation_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn negative_weights_are_rejected_as_non_cp() {
        // strongly negative constant rates drive p_alpha below zero
        let m = DynamicalModel::RandomUnitary(RateFunctions::constant(2, &[-1.0, -1.0, -1.0]).unwrap());
        let w = random_unitary_probabilities(m.rate_functions().unwrap(), 0.5).unwrap();
        assert!(w.warning().is_some());
        assert!(matches!(m.channel_at(0.5), Err(Error::NotCptp(_))));
        let map = m.map_at(0.5).unwrap();
        assert!(map.trace_preservation_defect() < 1e-12);
    }
}
