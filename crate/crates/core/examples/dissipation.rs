// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Amplitude damping: rates, witness eigenvalues and the sign of S.

use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::models::{DecoherenceFunction, DynamicalModel};
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let m = DynamicalModel::Dissipation(DecoherenceFunction::jaynes_cummings(1.0, 5.0)?);
    for t in [0.5, 1.0, 1.5] {
        let rates = m.rates_at(t)?;
        println!("t = {t}: {rates:?}");
    }
    let grid = TimeGrid::new(0.0, 6.0, 1200)?;
    for kind in [FrameKind::WoottersWigner, FrameKind::SicPovm] {
        let traj = witness::zeta_trajectory(&m, &build_frame(kind, 2)?, &grid)?;
        println!(
            "{kind}: N = {:.5}, max eigenvalue {:.4}, backflow {}",
            witness::nm_measure(&traj),
            traj.max_eigenvalue(),
            traj.detects_backflow()
        );
        for note in traj.annotations() {
            println!("  note: {note}");
        }
    }
    Ok(())
}
