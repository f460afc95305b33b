// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Exit codes: 0 Markovian, 1 error, 2
//! non-Markovianity detected.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{self, ScanConfig};
use crate::entropy::{self, EntropyScan};
use crate::error::Result;
use crate::frames::{self, FrameKind};
use crate::models::{DynamicalModel, Dynamics};
use crate::presets;
use crate::qpr;
use crate::validation;
use crate::witness::{self, WitnessTrajectory};

pub const EXIT_MARKOVIAN: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NON_MARKOVIAN: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qsbackflow", version, about = "Quasi-stochastic witnesses of non-Markovian backflow")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for grid evaluation (0 = all cores).
    #[arg(long, global = true, env = "QSBACKFLOW_THREADS")]
    pub threads: Option<usize>,
    /// Only print results and errors.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame utilities.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Print the quasi-stochastic matrix of a model at one time, row-major CSV.
    Represent(RepresentArgs),
    /// Witness trajectory to CSV.
    Scan(ScanArgs),
    /// Measure of non-Markovianity and backflow segments.
    Measure(ConfigArgs),
    /// Markovianity inequalities at one time.
    Criteria(CriteriaArgs),
    /// Collision entropy along a trajectory to CSV.
    EntropyScan(EntropyArgs),
    /// Witness against the trace-distance oracle and rate signs.
    Compare(ConfigArgs),
}

#[derive(Debug, Subcommand)]
pub enum FrameCommand {
    /// Check the frame identities and print a report.
    Validate {
        #[arg(long)]
        kind: FrameKind,
        #[arg(long)]
        dim: usize,
        /// Random states used to probe reconstruction.
        #[arg(long, default_value_t = 16)]
        probes: usize,
    },
}

#[derive(Debug, Args)]
pub struct RepresentArgs {
    /// Preset name or path to a config file.
    #[arg(long)]
    pub model: String,
    /// Frame kind; defaults to the Wigner frame of the model's dimension.
    #[arg(long)]
    pub frame: Option<FrameKind>,
    #[arg(long)]
    pub time: f64,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV; overrides `output.path`, stdout when neither is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub time: f64,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Initial state: 0, 1, plus, minus, mixed, bloch:THETA,PHI, ket:A,B[,C].
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `{:.16e}`: 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Writes the witness trajectory with header
/// `t,ev_1..ev_n,trace_norm,zeta,neg_flag`.
pub fn write_scan_csv<W: Write>(traj: &WitnessTrajectory, with_eigenvalues: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = traj.size();
    let mut header = vec!["t".to_string()];
    if with_eigenvalues {
        header.extend((1..=n).map(|k| format!("ev_{k}")));
    }
    header.extend(["trace_norm", "zeta", "neg_flag"].map(String::from));
    w.write_record(&header)?;
    for i in 0..traj.len() {
        let mut row = vec![fmt_num(traj.times[i])];
        if with_eigenvalues {
            row.extend(traj.eigenvalues[i].iter().map(|&v| fmt_num(v)));
        }
        row.push(fmt_num(traj.trace_norm[i]));
        row.push(fmt_num(traj.zeta[i]));
        row.push(u8::from(traj.negativity_flag[i]).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes an entropy scan with header `t,H2,slope,violation_flag`.
pub fn write_entropy_csv<W: Write>(scan: &EntropyScan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "H2", "slope", "violation_flag"])?;
    for i in 0..scan.times.len() {
        w.write_record([
            fmt_num(scan.times[i]),
            fmt_num(scan.h2[i]),
            fmt_num(scan.slope[i]),
            u8::from(scan.violation[i]).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn load_model(spec: &str) -> Result<DynamicalModel> {
    let path = Path::new(spec);
    if path.is_file() {
        Ok(config::load_config(path)?.model)
    } else {
        presets::preset(spec)
    }
}

fn frame_set(cfg: &ScanConfig) -> Result<frames::FrameSet> {
    frames::build_frame(cfg.frame, cfg.dim)
}

fn trajectory(cfg: &ScanConfig) -> Result<WitnessTrajectory> {
    witness::zeta_trajectory(&cfg.model, &frame_set(cfg)?, &cfg.grid)
}

fn exit_for(backflow: bool) -> i32 {
    if backflow {
        EXIT_NON_MARKOVIAN
    } else {
        EXIT_MARKOVIAN
    }
}

struct Ctx<'a> {
    quiet: bool,
    seed: u64,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn cmd_frame(ctx: &mut Ctx<'_>, kind: FrameKind, dim: usize, probes: usize) -> Result<i32> {
    let fs = frames::build_frame(kind, dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let report = frames::validate_frame_with_probes(&fs, probes, &mut rng);
    writeln!(ctx.out, "{report}")?;
    Ok(if report.all_passed() { EXIT_MARKOVIAN } else { EXIT_ERROR })
}

fn cmd_represent(ctx: &mut Ctx<'_>, args: &RepresentArgs) -> Result<i32> {
    let model = load_model(&args.model)?;
    let kind = match args.frame {
        Some(k) => k,
        None => FrameKind::wigner_for(model.dim())?,
    };
    let fs = frames::build_frame(kind, model.dim())?;
    let s = qpr::rep_superoperator(&model.channel_at(args.time)?, &fs)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut *ctx.out);
    for row in s.matrix().row_iter() {
        w.write_record(row.iter().map(|&v| fmt_num(v)))?;
    }
    w.flush()?;
    Ok(EXIT_MARKOVIAN)
}

fn annotate(ctx: &Ctx<'_>, traj: &WitnessTrajectory) {
    for note in traj.annotations() {
        ctx.note(&format!("note: {note}"));
    }
}

fn cmd_scan(ctx: &mut Ctx<'_>, args: &ScanArgs) -> Result<i32> {
    let cfg = config::load_config(&args.config)?;
    let traj = trajectory(&cfg)?;
    let path = args.out.clone().or_else(|| cfg.output.clone());
    {
        let out = open_output(path.as_deref(), &mut *ctx.out)?;
        write_scan_csv(&traj, cfg.emit_eigenvalues, out)?;
    }
    if cfg.emit_entropy {
        let fs = frame_set(&cfg)?;
        let q0 = qpr::rep_state(&config::parse_state_spec("plus", cfg.dim)?, &fs)?;
        let scan = entropy::h2_monotonicity_scan(&cfg.model, &fs, &q0, &cfg.grid)?;
        match &path {
            Some(p) => write_entropy_csv(&scan, File::create(p.with_extension("entropy.csv"))?)?,
            None => ctx.note("emit_entropy needs an output path; skipped"),
        }
    }
    if cfg.compare_oracles {
        let mut table = Vec::new();
        compare_table(&cfg, &traj, &mut table)?;
        ctx.note(String::from_utf8_lossy(&table).trim_end());
    }
    ctx.note(&format!("N = {:.6}", traj.measure));
    annotate(ctx, &traj);
    Ok(exit_for(traj.detects_backflow()))
}

fn cmd_measure(ctx: &mut Ctx<'_>, args: &ConfigArgs) -> Result<i32> {
    let cfg = config::load_config(&args.config)?;
    let traj = trajectory(&cfg)?;
    writeln!(ctx.out, "N = {:.6}", traj.measure)?;
    for seg in &traj.segments {
        writeln!(ctx.out, "  backflow [{:.6}, {:.6}]  {:.6e}", seg.start, seg.end, seg.integral)?;
    }
    for note in traj.annotations() {
        writeln!(ctx.out, "note: {note}")?;
    }
    Ok(exit_for(traj.detects_backflow()))
}

fn cmd_criteria(ctx: &mut Ctx<'_>, args: &CriteriaArgs) -> Result<i32> {
    let cfg = config::load_config(&args.config)?;
    let report = witness::markov_criteria(&cfg.model, args.time)?;
    writeln!(ctx.out, "{report}")?;
    Ok(exit_for(!report.markovian()))
}

fn cmd_entropy(ctx: &mut Ctx<'_>, args: &EntropyArgs) -> Result<i32> {
    let cfg = config::load_config(&args.config)?;
    let fs = frame_set(&cfg)?;
    let q0 = qpr::rep_state(&config::parse_state_spec(&args.state, cfg.dim)?, &fs)?;
    let scan = entropy::h2_monotonicity_scan(&cfg.model, &fs, &q0, &cfg.grid)?;
    {
        let out = open_output(args.out.as_deref(), &mut *ctx.out)?;
        write_entropy_csv(&scan, out)?;
    }
    if scan.not_bistochastic {
        ctx.note("note: quasi-channel is not bistochastic; monotonicity is not guaranteed");
    }
    ctx.note(&format!("H2 violation intervals: {}", scan.intervals.len()));
    Ok(EXIT_MARKOVIAN)
}

fn compare_table(cfg: &ScanConfig, traj: &WitnessTrajectory, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{:<24} {:.6}", "N (witness)", traj.measure)?;
    let blp = if cfg.dim == 2 {
        match validation::blp_measure(&cfg.model, &cfg.grid, cfg.blp_resolution) {
            Ok(r) => format!("{:.6}  (pair theta={:.4}, phi={:.4})", r.measure, r.best_pair.0, r.best_pair.1),
            Err(e) => format!("n/a ({e})"),
        }
    } else {
        "n/a (qubit only)".to_string()
    };
    writeln!(out, "{:<24} {blp}", "N_BLP (oracle)")?;
    let tl = validation::cp_timeline(&cfg.model, &cfg.grid);
    writeln!(
        out,
        "{:<24} {:.1}% of grid, {} violation interval(s), {} singular point(s)",
        "CP-divisible",
        100.0 * tl.cp_fraction,
        tl.violations.len(),
        tl.singular_points
    )?;
    for seg in &tl.violations {
        writeln!(out, "{:<24} [{:.6}, {:.6}]", "", seg.start, seg.end)?;
    }
    let min = traj.min_entry.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
    writeln!(
        out,
        "{:<24} min entry {:.3e}, {}",
        "non-negativity",
        min,
        if traj.precondition_violated() { "violated" } else { "ok" }
    )?;
    writeln!(
        out,
        "{:<24} {}",
        "backflow",
        if traj.detects_backflow() { "detected" } else { "none" }
    )?;
    Ok(())
}

fn cmd_compare(ctx: &mut Ctx<'_>, args: &ConfigArgs) -> Result<i32> {
    let cfg = config::load_config(&args.config)?;
    let traj = trajectory(&cfg)?;
    compare_table(&cfg, &traj, &mut *ctx.out)?;
    annotate(ctx, &traj);
    Ok(EXIT_MARKOVIAN)
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut ctx = Ctx {
        quiet: cli.quiet,
        seed: cli.seed,
        out,
    };
    match &cli.command {
        Command::Frame(FrameCommand::Validate { kind, dim, probes }) => cmd_frame(&mut ctx, *kind, *dim, *probes),
        Command::Represent(a) => cmd_represent(&mut ctx, a),
        Command::Scan(a) => cmd_scan(&mut ctx, a),
        Command::Measure(a) => cmd_measure(&mut ctx, a),
        Command::Criteria(a) => cmd_criteria(&mut ctx, a),
        Command::EntropyScan(a) => cmd_entropy(&mut ctx, a),
        Command::Compare(a) => cmd_compare(&mut ctx, a),
    }
}

/// Entry point for the binary: parses arguments, configures logging and
/// threads, runs, and maps errors to exit code 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_MARKOVIAN };
        }
    };
    let level = if cli.quiet { "error" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
