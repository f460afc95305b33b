// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli channels: Markov criteria against the spectral witness flow.

use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::models::{DynamicalModel, RateFunctions};
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let fs = build_frame(FrameKind::SicPovm, 2)?;
    let grid = TimeGrid::new(0.0, 1.0, 200)?;
    for rates in [[0.5, 0.3, 0.2], [1.0, 1.0, -0.3], [1.0, -0.6, 0.3]] {
        let m = DynamicalModel::RandomUnitary(RateFunctions::constant(2, &rates)?);
        let report = witness::markov_criteria(&m, 0.5)?;
        let traj = witness::trajectory_of(&m, &fs, &grid)?;
        println!("rates {rates:?}");
        println!("{report}");
        println!("witness flags backflow: {}\n", traj.detects_backflow());
    }
    Ok(())
}
