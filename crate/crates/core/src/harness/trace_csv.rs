use std::io::{Read, Write};

use crate::controller::Method;
use crate::error::{Error, Result};
use crate::plant::{SimTrace, TraceRecord};

pub const TRACE_HEADER: [&str; 11] = ["t", "z1", "z2", "z3", "x1", "x2", "x3", "u", "u1", "eta", "delta"];

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace_csv<W: Write>(trace: &SimTrace<f64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in &trace.records {
        w.write_record([r.t, r.z1, r.z2, r.z3, r.x1, r.x2, r.x3, r.u, r.u1, r.eta, r.delta].map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trace written by [`write_trace_csv`]. `h` is recovered from the
/// first two time stamps and `L` from `z1 / x1` where possible.
pub fn read_trace_csv<R: Read>(input: R, method: Method) -> Result<SimTrace<f64>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::Config(format!("unexpected trace header {header:?}")));
    }
    let mut records = Vec::new();
    for row in rd.records() {
        let row = row?;
        let v: Vec<f64> = row
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::Config(format!("bad number {s:?} in trace"))))
            .collect::<Result<_>>()?;
        let [t, z1, z2, z3, x1, x2, x3, u, u1, eta, delta] = v[..] else {
            return Err(Error::Config(format!("expected 11 columns, got {}", v.len())));
        };
        records.push(TraceRecord { t, z1, z2, z3, x1, x2, x3, u, u1, eta, delta });
    }
    let h = match records.as_slice() {
        [a, b, ..] => b.t - a.t,
        _ => 0.0,
    };
    let scale = records
        .iter()
        .find(|r| r.x1 != 0.0)
        .map_or(1.0, |r| r.z1 / r.x1);
    Ok(SimTrace { h, scale, method, records })
}
