// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Witness scan for dephasing with a Jaynes-Cummings decoherence function.

use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::models::{DecoherenceFunction, DynamicalModel};
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let fs = build_frame(FrameKind::WoottersWigner, 2)?;
    let grid = TimeGrid::new(0.0, 10.0, 2000)?;
    for gamma0 in [0.3, 5.0] {
        let m = DynamicalModel::PureDecoherence(DecoherenceFunction::jaynes_cummings(1.0, gamma0)?);
        let traj = witness::zeta_trajectory(&m, &fs, &grid)?;
        let (n, segments) = witness::nm_segments(&traj);
        println!("gamma0 = {gamma0}: N = {n:.6}, {} backflow intervals", segments.len());
        for s in segments.iter().take(3) {
            println!("  [{:.3}, {:.3}]  +{:.4}", s.start, s.end, s.integral);
        }
    }
    Ok(())
}
