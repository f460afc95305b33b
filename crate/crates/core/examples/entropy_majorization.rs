// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Collision entropy along a trajectory and a majorization check.

use qsbackflow::entropy::{self, AlphaOrder};
use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::grid::TimeGrid;
use qsbackflow::models::{self, DecoherenceFunction, DynamicalModel};
use qsbackflow::qpr;
use qsbackflow::validation::bloch_state;

fn main() -> qsbackflow::Result<()> {
    let fs = build_frame(FrameKind::WoottersWigner, 2)?;
    let rho = bloch_state(std::f64::consts::FRAC_PI_2, 0.0);
    let q0 = qpr::rep_state(&rho, &fs)?;
    let m = DynamicalModel::PureDecoherence(DecoherenceFunction::jaynes_cummings(1.0, 5.0)?);

    let scan = entropy::h2_monotonicity_scan(&m, &fs, &q0, &TimeGrid::new(0.0, 5.0, 1000)?)?;
    println!("H2 decreases on {} intervals", scan.intervals.len());
    for s in scan.intervals.iter().take(3) {
        println!("  [{:.3}, {:.3}]", s.start, s.end);
    }

    let s = qpr::rep_superoperator(&models::channel_at(&m, 0.7)?, &fs)?;
    let q1 = s.apply(&q0)?;
    println!("q0 majorizes q(0.7): {}", entropy::majorization_check(&q0, &q1)?);
    for alpha in [AlphaOrder::COLLISION, AlphaOrder::new(2, 1)?] {
        println!("H_{alpha} = {:.5} -> {:.5}", entropy::renyi_entropy(&q0, alpha)?, entropy::renyi_entropy(&q1, alpha)?);
    }
    Ok(())
}
