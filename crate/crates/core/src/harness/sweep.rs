use std::io::Write;
use std::thread;

use serde::Serialize;

use crate::controller::Method;
use crate::error::{Error, Result};
use crate::metrics::precision_envelope;
use crate::plant::{run_simulation, SimConfig};

use super::steady_window;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub h_values: Vec<f64>,
    pub method: Method,
    pub base: SimConfig<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub h: f64,
    /// `None` for a divergent run.
    pub sup_abs_x: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub method: Method,
    pub rows: Vec<SweepRow>,
    /// Least-squares slopes of `log sup|x_i|` against `log h`.
    pub slopes: [f64; 3],
}

/// Least-squares slope of `y` on `x`; `NaN` with fewer than two points.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Runs the base configuration at every `h` (in parallel) and fits the
/// steady-state precision order of each state.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.h_values.len() < 3 {
        return Err(Error::Config(format!("a sweep needs at least 3 step sizes, got {}", spec.h_values.len())));
    }
    if let Some(h) = spec.h_values.iter().find(|h| !(**h > 0.0)) {
        return Err(Error::NonPositiveStep(*h));
    }

    let results: Vec<Result<Option<[f64; 3]>>> = thread::scope(|s| {
        let handles: Vec<_> = spec
            .h_values
            .iter()
            .map(|&h| {
                s.spawn(move || {
                    let mut cfg = spec.base.clone();
                    cfg.h = h;
                    cfg.method = spec.method;
                    match run_simulation(&cfg) {
                        Ok(trace) => {
                            let window = steady_window(&trace)?;
                            let rep = precision_envelope(&trace, window, h, spec.method.precision_orders())?;
                            Ok(Some(rep.sup_abs_x))
                        }
                        Err(Error::Diverged { .. }) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let rows = spec
        .h_values
        .iter()
        .zip(results)
        .map(|(&h, r)| Ok(SweepRow { h, sup_abs_x: r? }))
        .collect::<Result<Vec<_>>>()?;

    let slopes = [0, 1, 2].map(|i| {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.sup_abs_x.map(|s| (r.h, s[i])))
            .filter(|(_, s)| *s > 0.0)
            .map(|(h, s)| (h.ln(), s.ln()))
            .collect();
        fit_slope(&pts)
    });

    Ok(SweepTable { method: spec.method, rows, slopes })
}

/// One row per step size followed by a `slope` row.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["h", "sup_abs_x1", "sup_abs_x2", "sup_abs_x3", "status"])?;
    for row in &table.rows {
        match row.sup_abs_x {
            Some(s) => w.write_record([
                format!("{:.16e}", row.h),
                format!("{:.16e}", s[0]),
                format!("{:.16e}", s[1]),
                format!("{:.16e}", s[2]),
                "ok".to_string(),
            ])?,
            None => w.write_record([format!("{:.16e}", row.h), String::new(), String::new(), String::new(), "diverged".into()])?,
        }
    }
    let [a, b, c] = table.slopes.map(|s| format!("{s:.6}"));
    w.write_record(["slope".to_string(), a, b, c, "fit".to_string()])?;
    w.flush()?;
    Ok(())
}
