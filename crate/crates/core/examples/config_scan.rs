// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Load a TOML scan configuration and write the witness CSV to stdout.

use std::io;
use std::path::PathBuf;

use qsbackflow::cli::write_scan_csv;
use qsbackflow::config::load_config;
use qsbackflow::frames::build_frame;
use qsbackflow::witness;

fn main() -> qsbackflow::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/pure_jc_strong.toml")));
    let cfg = load_config(&path)?;
    let fs = build_frame(cfg.frame, cfg.dim)?;
    let traj = witness::zeta_trajectory(&cfg.model, &fs, &cfg.grid)?;
    eprintln!("{}: N = {:.6}", path.display(), witness::nm_measure(&traj));
    write_scan_csv(&traj, cfg.emit_eigenvalues, io::stdout().lock())
}
