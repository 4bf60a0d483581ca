use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cta_core::harness::{
    parse_config, preset, run_sweep, summarize, write_summary_json, write_sweep_csv, write_trace_csv, SweepSpec,
    DEFAULT_THRESHOLD, PRESET_NAMES,
};
use cta_core::{run_simulation, Error, Method, SimConfig64};

/// Continuous twisting algorithm simulator.
#[derive(Parser, Debug)]
#[command(name = "cta", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one closed-loop experiment and export its trace and metrics.
    Simulate(SimulateArgs),
    /// Run an experiment at several step sizes and fit precision orders.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Experiment preset (paper-explicit, paper-implicit, paper-implicit-nominal, zero).
    #[arg(long)]
    preset: String,
    /// Flat `key = value` file applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Control discretization: explicit, implicit or implicit-nominal.
    #[arg(long)]
    method: Option<Method>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Sampling period in seconds.
    #[arg(long)]
    h: Option<f64>,
    /// Simulated horizon in seconds.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Scaled gains `kp1,kp2,kp3,kp4`.
    #[arg(long)]
    gains: Option<String>,
    /// Initial state `z1,z2,eta`.
    #[arg(long)]
    init: Option<String>,
    /// CSV trace destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary destination; printed to stdout when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Convergence threshold on |z1| and |z2|.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated step sizes, e.g. `1e-3,5e-4,2e-4`.
    #[arg(long = "h-list", value_delimiter = ',', required = true)]
    h_list: Vec<f64>,
    /// CSV table destination.
    #[arg(long)]
    out: PathBuf,
}

fn base_config(common: &Common, flags: &[(&str, String)]) -> Result<SimConfig64, Error> {
    let mut cfg = preset(&common.preset)
        .map_err(|_| Error::Config(format!("unknown preset {:?} (known: {})", common.preset, PRESET_NAMES.join(", "))))?
        .cfg;
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        cta_core::harness::apply_overrides(&mut cfg, &parse_config(&text)?)?;
    }
    if let Some(m) = common.method {
        cfg.method = m;
    }
    cta_core::harness::apply_overrides(&mut cfg, flags)?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let mut flags = Vec::new();
    if let Some(h) = args.h {
        flags.push(("h", h.to_string()));
    }
    if let Some(t) = args.t_final {
        flags.push(("t_final", t.to_string()));
    }
    if let Some(g) = args.gains {
        flags.push(("gains", g));
    }
    if let Some(i) = args.init {
        flags.push(("init", i));
    }
    let cfg = base_config(&args.common, &flags)?;
    let trace = run_simulation(&cfg)?;
    let summary = summarize(&trace, args.threshold)?;

    if let Some(path) = &args.out {
        let mut w = create(path)?;
        write_trace_csv(&trace, &mut w)?;
        w.flush()?;
    }
    match &args.summary {
        Some(path) => {
            let mut w = create(path)?;
            write_summary_json(&summary, &mut w)?;
            w.flush()?;
        }
        None => write_summary_json(&summary, io::stdout().lock())?,
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let base = base_config(&args.common, &[])?;
    let spec = SweepSpec { h_values: args.h_list, method: base.method, base };
    let table = run_sweep(&spec)?;
    let mut w = create(&args.out)?;
    write_sweep_csv(&table, &mut w)?;
    w.flush()?;
    let [s1, s2, s3] = table.slopes;
    println!("{} slopes: x1 {s1:.3}, x2 {s2:.3}, x3 {s3:.3}", table.method);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Diverged { .. }) => {
            eprintln!("cta: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("cta: {e}");
            ExitCode::from(1)
        }
    }
}
