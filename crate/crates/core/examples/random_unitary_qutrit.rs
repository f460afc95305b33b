// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Weyl channels on a qutrit: weights and criteria over time.

use qsbackflow::models::random_unitary_probabilities;
use qsbackflow::presets;
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let m = presets::preset("weyl-qutrit")?;
    let rates = m.rate_functions().expect("random unitary model");
    for t in [0.25, 1.0, 2.0] {
        let w = random_unitary_probabilities(rates, t)?;
        let p: Vec<String> = w.p.iter().map(|x| format!("{x:.3}")).collect();
        println!("t = {t}: p = [{}]", p.join(", "));
        let report = witness::markov_criteria(&m, t)?;
        println!("  min criterion {:.4}, markovian {}", report.min_value(), report.markovian());
    }
    Ok(())
}
