// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

use approx::assert_abs_diff_eq;
use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::models::{self, DecoherenceFunction, DynamicalModel, RateFunctions};
use qsbackflow::presets;
use qsbackflow::qpr;
use qsbackflow::validation;
use qsbackflow::witness;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn witness_spectrum_matches_singular_values() {
    let fs = build_frame(FrameKind::SicPovm, 3).unwrap();
    let m = presets::preset("weyl-qutrit").unwrap();
    for t in [0.1, 0.5, 1.3, 2.0] {
        let s = qpr::rep_superoperator(&models::channel_at(&m, t).unwrap(), &fs).unwrap();
        let ev = witness::witness_eigenvalues(&witness::witness_matrix(&s)).unwrap();
        let mut sv: Vec<f64> = s.matrix().clone().svd(false, false).singular_values.iter().map(|x| x * x).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ev.iter().zip(&sv) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }
}

#[test]
fn markovian_rates_keep_witness_contractive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fs = build_frame(FrameKind::WoottersWigner, 2).unwrap();
    for _ in 0..50 {
        let rates: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
        let m = DynamicalModel::RandomUnitary(RateFunctions::constant(2, &rates).unwrap());
        assert!(witness::markov_criteria(&m, 1.0).unwrap().markovian());
        let grid = TimeGrid::new(0.0, 2.0, 200).unwrap();
        let traj = witness::trajectory_of(&m, &fs, &grid).unwrap();
        assert!(traj.max_eigenvalue() <= 1.0 + 1e-10);
        assert!(!traj.detects_backflow());
    }
}

#[test]
fn dissipation_violates_nonnegativity_in_wigner_frame() {
    let m = presets::preset("dissipation-exponential").unwrap();
    let fs = build_frame(FrameKind::WoottersWigner, 2).unwrap();
    let grid = TimeGrid::new(0.0, 3.0, 300).unwrap();
    let traj = witness::zeta_trajectory(&m, &fs, &grid).unwrap();
    assert!(traj.precondition_violated());
    assert!(traj.min_entry.iter().copied().fold(f64::INFINITY, f64::min) < -0.1);
    assert!(traj.annotations().iter().any(|a| a.contains("precondition")));
}

#[test]
fn trace_flow_alone_misses_early_backflow() {
    // g2 + g3 < 0, so one Pauli eigenvalue grows from t = 0, but the decay of
    // the other two dominates Tr(S^T S) at short times.
    let fs = build_frame(FrameKind::WoottersWigner, 2).unwrap();
    let m = DynamicalModel::RandomUnitary(RateFunctions::constant(2, &[1.0, -0.6, 0.3]).unwrap());
    assert!(!witness::markov_criteria(&m, 0.1).unwrap().markovian());
    let grid = TimeGrid::new(0.0, 0.2, 200).unwrap();
    let traj = witness::trajectory_of(&m, &fs, &grid).unwrap();
    assert!(traj.zeta.iter().all(|&z| z < 0.0));
    assert!(traj.spectral_flow.iter().all(|&x| x > 1e-10));
    assert!(traj.detects_backflow());
}

#[test]
fn dephasing_blp_flow_tracks_coherence() {
    let f = DecoherenceFunction::jaynes_cummings(1.0, 5.0).unwrap();
    let m = DynamicalModel::PureDecoherence(f);
    let plus = validation::bloch_state(std::f64::consts::FRAC_PI_2, 0.0);
    let minus = validation::bloch_state(std::f64::consts::FRAC_PI_2, std::f64::consts::PI);
    let grid = TimeGrid::new(0.0, 5.0, 500).unwrap();
    let flow = validation::blp_flow(&m, &plus, &minus, &grid).unwrap();
    for (&t, &dist) in flow.times.iter().zip(&flow.distance) {
        assert_abs_diff_eq!(dist, f.value(t).unwrap().norm(), epsilon = 1e-10);
    }
    assert!(flow.positive_part().0 > 0.0);
}
