// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(qsbackflow::cli::main_with_args(std::env::args_os()));
}
