// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Trace-distance measure next to the witness measure.

use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::presets;
use qsbackflow::validation;
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let grid = TimeGrid::new(0.0, 10.0, 2000)?;
    let fs = build_frame(FrameKind::WoottersWigner, 2)?;
    for name in ["pure-jc-weak", "pure-jc-strong", "pure-damped-cosine"] {
        let m = presets::preset(name)?;
        let blp = validation::blp_measure(&m, &grid, 24)?;
        let n = witness::nm_measure(&witness::zeta_trajectory(&m, &fs, &grid)?);
        let cp = validation::cp_timeline(&m, &grid);
        println!(
            "{name:<20} N_BLP = {:.5}  N = {n:.5}  CP fraction {:.3}  best pair (theta, phi) = ({:.3}, {:.3})",
            blp.measure, cp.cp_fraction, blp.best_pair.0, blp.best_pair.1
        );
    }
    Ok(())
}
