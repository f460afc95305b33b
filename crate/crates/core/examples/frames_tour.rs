// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Build every supported frame, validate it, and round-trip a state.

use qsbackflow::frames::{build_frame, validate_frame, FrameKind};
use qsbackflow::linalg;
use qsbackflow::qpr;
use qsbackflow::validation::bloch_state;

fn main() -> qsbackflow::Result<()> {
    for (kind, d) in [
        (FrameKind::WoottersWigner, 2),
        (FrameKind::SicPovm, 2),
        (FrameKind::GrossWigner, 3),
        (FrameKind::SicPovm, 3),
    ] {
        let fs = build_frame(kind, d)?;
        let report = validate_frame(&fs);
        println!("{kind} (d = {d}): {} elements, max deviation {:.2e}", fs.len(), report.max_deviation());
    }

    let fs = build_frame(FrameKind::WoottersWigner, 2)?;
    let rho = bloch_state(1.0, 0.5);
    let q = qpr::rep_state(&rho, &fs)?;
    println!("quasiprobabilities of a Bloch state: {:.4?}", q.values().as_slice());
    println!("negativity: {:.2e}", q.negativity());
    let back = qpr::reconstruct_state(&q, &fs)?;
    println!("reconstruction error: {:.2e}", linalg::max_abs_diff(&rho, &back));
    Ok(())
}
