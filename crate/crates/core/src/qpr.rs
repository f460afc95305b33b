// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Quasiprobability representation of states, channels, effects and
//! generators relative to a [`FrameSet`].
//!
//! States become quasi-distributions `q_j = Tr(rho F_j)`, channels become
//! quasi-stochastic matrices `S_jk = Tr(F_j E[G_k])`, effects become row
//! vectors `v_j = Tr(M G_j)` and the Born rule reads `v S q`.

use crate::channel::{Channel, Superoperator};
use crate::error::{Error, Result};
use crate::frames::{FrameKind, FrameSet};
use crate::linalg::{self, CMat, RMat, RVec};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiState {
    q: RVec,
    frame_kind: FrameKind,
}

impl QuasiState {
    /// Wrap a quasi-distribution; fails unless the entries sum to one.
    pub fn new(q: RVec, frame_kind: FrameKind) -> Result<Self> {
        let total = q.sum();
        if (total - 1.0).abs() > tolerances::STRUCTURAL * (q.len() as f64).max(1.0) {
            return Err(Error::NotAState(format!("quasiprobabilities sum to {total}")));
        }
        Ok(QuasiState { q, frame_kind })
    }

    pub fn from_slice(q: &[f64], frame_kind: FrameKind) -> Result<Self> {
        Self::new(RVec::from_column_slice(q), frame_kind)
    }

    /// Uniform distribution of length `n`, the image of the maximally mixed state.
    pub fn uniform(n: usize, frame_kind: FrameKind) -> Self {
        QuasiState {
            q: RVec::from_element(n, 1.0 / n as f64),
            frame_kind,
        }
    }

    pub fn values(&self) -> &RVec {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn frame_kind(&self) -> FrameKind {
        self.frame_kind
    }

    /// Sum of the absolute values of the negative entries.
    pub fn negativity(&self) -> f64 {
        self.q.iter().filter(|v| **v < 0.0).map(|v| -v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiChannel {
    s: RMat,
    frame_kind: FrameKind,
}

impl QuasiChannel {
    /// Wrap an arbitrary square matrix without checking column sums.
    pub fn from_matrix(s: RMat, frame_kind: FrameKind) -> Self {
        QuasiChannel { s, frame_kind }
    }

    pub fn identity(n: usize, frame_kind: FrameKind) -> Self {
        QuasiChannel {
            s: RMat::identity(n, n),
            frame_kind,
        }
    }

    pub fn matrix(&self) -> &RMat {
        &self.s
    }

    pub fn frame_kind(&self) -> FrameKind {
        self.frame_kind
    }

    pub fn size(&self) -> usize {
        self.s.nrows()
    }

    pub fn column_sum_defect(&self) -> f64 {
        self.s
            .column_iter()
            .map(|col| (col.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_sum_defect(&self) -> f64 {
        self.s
            .row_iter()
            .map(|row| (row.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Rows and columns both sum to one within `tol`.
    pub fn is_bistochastic(&self, tol: f64) -> bool {
        self.column_sum_defect() <= tol && self.row_sum_defect() <= tol
    }

    pub fn min_entry(&self) -> f64 {
        self.s.min()
    }

    pub fn apply(&self, q: &QuasiState) -> Result<QuasiState> {
        ensure_same_frame(self.frame_kind, q.frame_kind)?;
        ensure_len(self.s.ncols(), q.len())?;
        Ok(QuasiState {
            q: &self.s * &q.q,
            frame_kind: q.frame_kind,
        })
    }

    /// `self * other`, the representation of `self after other`.
    pub fn compose(&self, other: &QuasiChannel) -> Result<QuasiChannel> {
        ensure_same_frame(self.frame_kind, other.frame_kind)?;
        ensure_len(self.s.ncols(), other.s.nrows())?;
        Ok(QuasiChannel {
            s: &self.s * &other.s,
            frame_kind: self.frame_kind,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiEffect {
    v: RVec,
    frame_kind: FrameKind,
}

impl QuasiEffect {
    pub fn values(&self) -> &RVec {
        &self.v
    }

    pub fn frame_kind(&self) -> FrameKind {
        self.frame_kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiGenerator {
    l: RMat,
    frame_kind: FrameKind,
}

impl QuasiGenerator {
    pub fn from_matrix(l: RMat, frame_kind: FrameKind) -> Self {
        QuasiGenerator { l, frame_kind }
    }

    pub fn matrix(&self) -> &RMat {
        &self.l
    }

    pub fn frame_kind(&self) -> FrameKind {
        self.frame_kind
    }

    pub fn column_sum_defect(&self) -> f64 {
        self.l.column_iter().map(|c| c.sum().abs()).fold(0.0, f64::max)
    }
}

fn ensure_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn ensure_same_frame(left: FrameKind, right: FrameKind) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::FrameMismatch { left, right })
    }
}

fn ensure_square(op: &CMat, d: usize) -> Result<()> {
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if op.nrows() != d { op.nrows() } else { op.ncols() },
        });
    }
    Ok(())
}

/// Check that `rho` is a density matrix of dimension `d`.
pub fn ensure_state(rho: &CMat, d: usize) -> Result<()> {
    ensure_square(rho, d)?;
    let herm = linalg::hermiticity_defect(rho);
    if herm > tolerances::HERMITICITY {
        return Err(Error::NotAState(format!("not Hermitian (defect {herm:.3e})")));
    }
    let tr = linalg::trace(rho);
    if (tr.re - 1.0).abs() > tolerances::TRACE_PRESERVATION || tr.im.abs() > tolerances::TRACE_PRESERVATION {
        return Err(Error::NotAState(format!("trace is {tr}")));
    }
    let min = linalg::hermitian_eigenvalues(rho)[0];
    if min < tolerances::PSD_FLOOR {
        return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

/// `q_j = Tr(rho F_j)`.
pub fn rep_state(rho: &CMat, fs: &FrameSet) -> Result<QuasiState> {
    ensure_state(rho, fs.dim())?;
    let q = RVec::from_iterator(
        fs.len(),
        fs.frame().iter().map(|f| linalg::trace_product(rho, f).re),
    );
    Ok(QuasiState {
        q,
        frame_kind: fs.kind(),
    })
}

/// `rho = sum_j q_j G_j`.
pub fn reconstruct_state(q: &QuasiState, fs: &FrameSet) -> Result<CMat> {
    ensure_same_frame(fs.kind(), q.frame_kind)?;
    ensure_len(fs.len(), q.len())?;
    let d = fs.dim();
    Ok(fs
        .dual()
        .iter()
        .zip(q.q.iter())
        .fold(CMat::zeros(d, d), |acc, (g, &qj)| acc + g * linalg::c(qj, 0.0)))
}

/// `S_jk = Tr(F_j E[G_k])` for a trace-preserving map `E`.
pub fn rep_channel(channel: &Channel, fs: &FrameSet) -> Result<QuasiChannel> {
    let sup = channel.to_superoperator()?;
    rep_superoperator(&sup, fs)
}

/// [`rep_channel`] for a map already in superoperator form.
pub fn rep_superoperator(sup: &Superoperator, fs: &FrameSet) -> Result<QuasiChannel> {
    ensure_len(fs.dim(), sup.dim())?;
    let deviation = sup.trace_preservation_defect();
    if deviation > tolerances::TRACE_PRESERVATION {
        return Err(Error::NotTracePreserving { deviation });
    }
    Ok(QuasiChannel {
        s: represent_map(sup, fs),
        frame_kind: fs.kind(),
    })
}

fn represent_map(sup: &Superoperator, fs: &FrameSet) -> RMat {
    let n = fs.len();
    let images: Vec<CMat> = fs.dual().iter().map(|g| sup.apply(g)).collect();
    RMat::from_fn(n, n, |j, k| linalg::trace_product(&fs.frame()[j], &images[k]).re)
}

/// `v_j = Tr(M G_j)` for an effect `0 <= M <= 1`.
pub fn rep_effect(m: &CMat, fs: &FrameSet) -> Result<QuasiEffect> {
    ensure_square(m, fs.dim())?;
    let herm = linalg::hermiticity_defect(m);
    if herm > tolerances::HERMITICITY {
        return Err(Error::NotAnEffect(format!("not Hermitian (defect {herm:.3e})")));
    }
    let ev = linalg::hermitian_eigenvalues(m);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo < tolerances::PSD_FLOOR || hi > 1.0 - tolerances::PSD_FLOOR {
        return Err(Error::NotAnEffect(format!("spectrum [{lo:.3e}, {hi:.3e}] outside [0, 1]")));
    }
    let v = RVec::from_iterator(fs.len(), fs.dual().iter().map(|g| linalg::trace_product(m, g).re));
    Ok(QuasiEffect {
        v,
        frame_kind: fs.kind(),
    })
}

/// `P(M | rho, E) = v^M S^E q^rho`.
pub fn born_probability(v: &QuasiEffect, s: &QuasiChannel, q: &QuasiState) -> Result<f64> {
    ensure_same_frame(v.frame_kind, s.frame_kind)?;
    ensure_same_frame(s.frame_kind, q.frame_kind)?;
    ensure_len(s.s.nrows(), v.v.len())?;
    ensure_len(s.s.ncols(), q.q.len())?;
    Ok(v.v.dot(&(&s.s * &q.q)))
}

/// `L_jk = Tr(F_j L[G_k])` for a trace-annihilating generator `L`.
pub fn rep_generator(generator: &Superoperator, fs: &FrameSet) -> Result<QuasiGenerator> {
    ensure_len(fs.dim(), generator.dim())?;
    let deviation = generator.trace_annihilation_defect();
    if deviation > tolerances::TRACE_PRESERVATION {
        return Err(Error::NotTraceAnnihilating { deviation });
    }
    Ok(QuasiGenerator {
        l: represent_map(generator, fs),
        frame_kind: fs.kind(),
    })
}

/// Total magnitude of the negative off-diagonal entries of `L`; zero exactly
/// when `L` has the form of a classical Kolmogorov rate matrix.
pub fn kolmogorov_negativity(l: &QuasiGenerator) -> f64 {
    let n = l.l.nrows();
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k && l.l[(j, k)] < 0.0 {
                total -= l.l[(j, k)];
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::build_frame;
    use crate::linalg::{c, ket_bra, pauli_x, pauli_y, pauli_z};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn wootters() -> FrameSet {
        build_frame(FrameKind::WoottersWigner, 2).unwrap()
    }

    fn all_frames() -> Vec<FrameSet> {
        vec![
            build_frame(FrameKind::WoottersWigner, 2).unwrap(),
            build_frame(FrameKind::SicPovm, 2).unwrap(),
            build_frame(FrameKind::GrossWigner, 3).unwrap(),
            build_frame(FrameKind::SicPovm, 3).unwrap(),
        ]
    }

    fn assert_vec(actual: &RVec, expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() < tol, "{actual} vs {expected:?}");
        }
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let q = rep_state(&(linalg::identity(2) * c(0.5, 0.0)), &wootters()).unwrap();
        assert_vec(q.values(), &[0.25; 4], 1e-15);
    }

    #[test]
    fn ground_state_in_wootters() {
        let q = rep_state(&ket_bra(2, 0, 0), &wootters()).unwrap();
        assert_vec(q.values(), &[0.5, 0.5, 0.0, 0.0], 1e-15);
        let back = reconstruct_state(&q, &wootters()).unwrap();
        assert!(linalg::max_abs_diff(&back, &ket_bra(2, 0, 0)) < 1e-15);
        let uniform = QuasiState::uniform(4, FrameKind::WoottersWigner);
        let mixed = reconstruct_state(&uniform, &wootters()).unwrap();
        assert!(linalg::max_abs_diff(&mixed, &(linalg::identity(2) * c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn rep_state_rejects_non_states() {
        let fs = wootters();
        assert!(matches!(rep_state(&ket_bra(3, 0, 0), &fs), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(rep_state(&(ket_bra(2, 0, 0) * c(2.0, 0.0)), &fs), Err(Error::NotAState(_))));
        let neg = ket_bra(2, 0, 0) * c(1.5, 0.0) - ket_bra(2, 1, 1) * c(0.5, 0.0);
        assert!(matches!(rep_state(&neg, &fs), Err(Error::NotAState(_))));
    }

    #[test]
    fn state_roundtrip_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for fs in all_frames() {
            for _ in 0..20 {
                let rho = random::density_matrix(fs.dim(), fs.dim(), &mut rng);
                let q = rep_state(&rho, &fs).unwrap();
                assert!((q.values().sum() - 1.0).abs() < 1e-12);
                let back = reconstruct_state(&q, &fs).unwrap();
                assert!(linalg::max_abs_diff(&back, &rho) < 1e-10);
            }
        }
    }

    #[test]
    fn identity_channel_is_identity_matrix() {
        for fs in all_frames() {
            let s = rep_channel(&Superoperator::identity(fs.dim()).into(), &fs).unwrap();
            assert!(linalg::max_abs_diff_real(s.matrix(), &RMat::identity(fs.len(), fs.len())) < 1e-12);
        }
    }

    #[test]
    fn dephasing_channel_in_wootters() {
        let g = 0.37;
        // rho -> (1+g)/2 rho + (1-g)/2 Z rho Z scales coherences by g
        let kraus = vec![
            linalg::identity(2) * c(((1.0 + g) / 2.0_f64).sqrt(), 0.0),
            pauli_z() * c(((1.0 - g) / 2.0_f64).sqrt(), 0.0),
        ];
        let s = rep_channel(&Channel::Kraus(kraus), &wootters()).unwrap();
        let (a, b) = ((1.0 + g) / 2.0, (1.0 - g) / 2.0);
        let expected = RMat::from_row_slice(4, 4, &[a, b, 0.0, 0.0, b, a, 0.0, 0.0, 0.0, 0.0, a, b, 0.0, 0.0, b, a]);
        assert!(linalg::max_abs_diff_real(s.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn pauli_mixture_is_bistochastic() {
        let p = [0.4, 0.3, 0.2, 0.1];
        let ops = [linalg::identity(2), pauli_x(), pauli_y(), pauli_z()];
        let kraus: Vec<CMat> = ops.iter().zip(p).map(|(u, pk): (&CMat, f64)| u * c(pk.sqrt(), 0.0)).collect();
        for fs in [wootters(), build_frame(FrameKind::SicPovm, 2).unwrap()] {
            let s = rep_channel(&Channel::Kraus(kraus.clone()), &fs).unwrap();
            assert!(s.is_bistochastic(1e-12));
        }
    }

    #[test]
    fn non_trace_preserving_map_is_rejected() {
        let kraus = vec![ket_bra(2, 0, 0)];
        assert!(matches!(
            rep_channel(&Channel::Kraus(kraus), &wootters()),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn composition_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for fs in all_frames() {
            for _ in 0..10 {
                let e1 = random::channel(fs.dim(), &mut rng);
                let e2 = random::channel(fs.dim(), &mut rng);
                let s1 = rep_superoperator(&e1, &fs).unwrap();
                let s2 = rep_superoperator(&e2, &fs).unwrap();
                let s21 = rep_superoperator(&e2.compose(&e1), &fs).unwrap();
                let product = s2.compose(&s1).unwrap();
                assert!(linalg::max_abs_diff_real(s21.matrix(), product.matrix()) < 1e-10);
                assert!(s1.column_sum_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn effects() {
        let fs = wootters();
        let v = rep_effect(&linalg::identity(2), &fs).unwrap();
        assert_vec(v.values(), &[1.0; 4], 1e-15);
        let v0 = rep_effect(&ket_bra(2, 0, 0), &fs).unwrap();
        assert_vec(v0.values(), &[1.0, 1.0, 0.0, 0.0], 1e-15);
        assert!(matches!(rep_effect(&(linalg::identity(2) * c(2.0, 0.0)), &fs), Err(Error::NotAnEffect(_))));
        assert!(matches!(rep_effect(&pauli_z(), &fs), Err(Error::NotAnEffect(_))));
    }

    #[test]
    fn povm_effects_sum_to_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for fs in all_frames() {
            let povm = random::povm(fs.dim(), 3, &mut rng);
            let mut total = RVec::zeros(fs.len());
            for m in &povm {
                total += rep_effect(m, &fs).unwrap().values();
            }
            assert_vec(&total, &vec![1.0; fs.len()], 1e-12);
        }
    }

    #[test]
    fn born_rule_basis_cases() {
        let fs = wootters();
        let v0 = rep_effect(&ket_bra(2, 0, 0), &fs).unwrap();
        let id = QuasiChannel::identity(4, fs.kind());
        let q0 = rep_state(&ket_bra(2, 0, 0), &fs).unwrap();
        let q1 = rep_state(&ket_bra(2, 1, 1), &fs).unwrap();
        assert!((born_probability(&v0, &id, &q0).unwrap() - 1.0).abs() < 1e-15);
        assert!(born_probability(&v0, &id, &q1).unwrap().abs() < 1e-15);
        let sic_q = QuasiState::uniform(4, FrameKind::SicPovm);
        assert!(matches!(born_probability(&v0, &id, &sic_q), Err(Error::FrameMismatch { .. })));
    }

    #[test]
    fn born_rule_matches_hilbert_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for fs in all_frames() {
            for _ in 0..25 {
                let rho = random::density_matrix(fs.dim(), fs.dim(), &mut rng);
                let e = random::channel(fs.dim(), &mut rng);
                let m = &random::povm(fs.dim(), 2, &mut rng)[0];
                let hilbert = linalg::trace_product(m, &e.apply(&rho)).re;
                let p = born_probability(
                    &rep_effect(m, &fs).unwrap(),
                    &rep_superoperator(&e, &fs).unwrap(),
                    &rep_state(&rho, &fs).unwrap(),
                )
                .unwrap();
                assert!((p - hilbert).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn generator_representation() {
        let fs = wootters();
        let zero = rep_generator(&Superoperator::zero(2), &fs).unwrap();
        assert_eq!(kolmogorov_negativity(&zero), 0.0);
        assert!(zero.matrix().iter().all(|v| *v == 0.0));

        let dephase = Superoperator::unitary(&pauli_z()).sub(&Superoperator::identity(2));
        for (gamma, negative) in [(0.8, false), (-0.3, true)] {
            let l = rep_generator(&dephase.scale(gamma), &fs).unwrap();
            assert!(l.column_sum_defect() < 1e-12);
            let neg = kolmogorov_negativity(&l);
            assert_eq!(neg > 0.0, negative, "gamma = {gamma}");
        }

        let not_generator = Superoperator::identity(2);
        assert!(matches!(rep_generator(&not_generator, &fs), Err(Error::NotTraceAnnihilating { .. })));
    }

    #[test]
    fn quasi_state_requires_normalization() {
        assert!(QuasiState::from_slice(&[0.5, 0.6], FrameKind::SicPovm).is_err());
        let q = QuasiState::from_slice(&[1.5, -0.5, 0.0, 0.0], FrameKind::WoottersWigner).unwrap();
        assert_eq!(q.negativity(), 0.5);
    }
}
