// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Named models for quick experiments.

use crate::error::{Error, Result};
use crate::models::{DecoherenceFunction, DynamicalModel, RateFunction, RateFunctions};

pub const NAMES: [&str; 9] = [
    "pure-exponential",
    "pure-damped-cosine",
    "pure-jc-weak",
    "pure-jc-strong",
    "dissipation-exponential",
    "dissipation-jc-strong",
    "pauli-constant",
    "pauli-oscillating",
    "weyl-qutrit",
];

fn oscillating(d: usize, amplitudes: &[f64]) -> Result<RateFunctions> {
    RateFunctions::new(
        d,
        amplitudes
            .iter()
            .map(|&c| RateFunction::DampedOscillatory { c, kappa: 1.0, omega: 2.0 })
            .collect(),
    )
}

/// Model by preset name; see [`NAMES`].
pub fn preset(name: &str) -> Result<DynamicalModel> {
    use DecoherenceFunction as G;
    Ok(match name {
        "pure-exponential" => DynamicalModel::PureDecoherence(G::exponential(1.0)?),
        "pure-damped-cosine" => DynamicalModel::PureDecoherence(G::damped_oscillatory(0.1, 1.0)?),
        "pure-jc-weak" => DynamicalModel::PureDecoherence(G::jaynes_cummings(1.0, 0.3)?),
        "pure-jc-strong" => DynamicalModel::PureDecoherence(G::jaynes_cummings(1.0, 5.0)?),
        "dissipation-exponential" => DynamicalModel::Dissipation(G::exponential(1.0)?),
        "dissipation-jc-strong" => DynamicalModel::Dissipation(G::jaynes_cummings(1.0, 5.0)?),
        "pauli-constant" => DynamicalModel::RandomUnitary(RateFunctions::constant(2, &[0.5, 0.3, 0.2])?),
        "pauli-oscillating" => DynamicalModel::RandomUnitary(oscillating(2, &[1.0, 0.8, 0.6])?),
        "weyl-qutrit" => DynamicalModel::RandomUnitary(RateFunctions::constant(
            3,
            &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
        )?),
        other => {
            return Err(Error::UnsupportedModel(format!(
                "unknown preset `{other}` (known: {})",
                NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Dynamics;

    #[test]
    fn every_preset_is_cptp_on_a_coarse_grid() {
        for name in NAMES {
            let m = preset(name).unwrap();
            for i in 0..=40 {
                let t = i as f64 * 0.25;
                m.channel_at(t).unwrap_or_else(|e| panic!("{name} at {t}: {e}"));
            }
        }
        assert!(preset("nope").is_err());
    }
}
