//! Experiment presets, configuration overrides, run summaries and the
//! step-size sweep used by the command-line front end.

mod config;
mod sweep;
mod trace_csv;

use serde::Serialize;

pub use config::{apply_override, apply_overrides, parse_config};
pub use sweep::{fit_slope, run_sweep, write_sweep_csv, SweepRow, SweepSpec, SweepTable};
pub use trace_csv::{read_trace_csv, write_trace_csv, TRACE_HEADER};

use crate::controller::Method;
use crate::error::{Error, Result};
use crate::metrics::{chatter_metrics, convergence_time, precision_envelope, Window};
use crate::plant::{run_simulation, Disturbance, SimConfig, SimTrace};

/// Default `|z1|, |z2|` threshold for convergence time, in `z` units.
pub const DEFAULT_THRESHOLD: f64 = 0.01;

/// Length of the steady-state window at the end of a run, in seconds.
pub const STEADY_WINDOW: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub cfg: SimConfig<f64>,
}

pub const PRESET_NAMES: [&str; 4] = ["paper-explicit", "paper-implicit", "paper-implicit-nominal", "zero"];

pub fn preset(name: &str) -> Result<ExperimentPreset> {
    let (name, cfg) = match name {
        "paper-explicit" => ("paper-explicit", SimConfig::paper(Method::Explicit)),
        "paper-implicit" => ("paper-implicit", SimConfig::paper(Method::Implicit)),
        "paper-implicit-nominal" => ("paper-implicit-nominal", SimConfig::paper(Method::ImplicitNominal)),
        "zero" => {
            let mut cfg = SimConfig::paper(Method::Implicit);
            cfg.z1_0 = 0.0;
            cfg.z2_0 = 0.0;
            cfg.eta_0 = 0.0;
            cfg.disturbance = Disturbance::zero();
            ("zero", cfg)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?} (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(ExperimentPreset { name, cfg })
}

/// Metrics written next to a trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub method: Method,
    pub h: f64,
    pub steps: usize,
    pub threshold: f64,
    /// `null` when the run never settles.
    pub convergence_time_s: Option<f64>,
    pub window: [f64; 2],
    pub orders: [i32; 3],
    pub sup_abs_x: [f64; 3],
    pub v_constants: [f64; 3],
    pub tv_u: f64,
    pub sign_flips: usize,
}

/// Steady window `[t_end - 2, t_end]`, clipped at zero; `[8, 10]` for a 10 s run.
pub fn steady_window(trace: &SimTrace<f64>) -> Result<Window<f64>> {
    let (_, end) = trace.span().ok_or(Error::EmptyWindow { start: 0.0, end: 0.0 })?;
    Ok(Window::new((end - STEADY_WINDOW).max(0.0), end))
}

pub fn summarize(trace: &SimTrace<f64>, threshold: f64) -> Result<Summary> {
    if !(threshold > 0.0) {
        return Err(Error::Config(format!("threshold must be positive, got {threshold}")));
    }
    let window = steady_window(trace)?;
    let orders = trace.method.precision_orders();
    let precision = precision_envelope(trace, window, trace.h, orders)?;
    let chatter = chatter_metrics(trace, window)?;
    let ct = convergence_time(trace, threshold);
    Ok(Summary {
        method: trace.method,
        h: trace.h,
        steps: trace.len().saturating_sub(1),
        threshold,
        convergence_time_s: ct.is_finite().then_some(ct),
        window: [window.start, window.end],
        orders,
        sup_abs_x: precision.sup_abs_x,
        v_constants: precision.v,
        tv_u: chatter.total_variation_u,
        sign_flips: chatter.sign_flips_u_delta,
    })
}

/// Resolves a preset, applies `key = value` overrides in order, runs it and summarizes it.
pub fn run_preset<K: AsRef<str>, V: AsRef<str>>(
    name: &str,
    overrides: &[(K, V)],
    threshold: f64,
) -> Result<(SimTrace<f64>, Summary)> {
    let mut cfg = preset(name)?.cfg;
    apply_overrides(&mut cfg, overrides)?;
    let trace = run_simulation(&cfg)?;
    let summary = summarize(&trace, threshold)?;
    Ok((trace, summary))
}

pub fn write_summary_json<W: std::io::Write>(summary: &Summary, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    writeln!(out)?;
    Ok(())
}
