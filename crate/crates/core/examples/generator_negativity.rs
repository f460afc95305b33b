// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Kolmogorov negativity of the represented generator.

use qsbackflow::frames::{build_frame, FrameKind};
use qsbackflow::presets;
use qsbackflow::qpr;

fn main() -> qsbackflow::Result<()> {
    let fs = build_frame(FrameKind::WoottersWigner, 2)?;
    for name in ["pure-exponential", "pure-jc-strong", "pauli-oscillating", "dissipation-exponential"] {
        let m = presets::preset(name)?;
        print!("{name:<24}");
        for t in [0.2, 0.8, 1.4] {
            match m.generator_at(t).and_then(|g| qpr::rep_generator(&g, &fs)) {
                Ok(l) => print!("  {:.4}", qpr::kolmogorov_negativity(&l)),
                Err(e) => print!("  ({e})"),
            }
        }
        println!();
    }
    Ok(())
}
