//! Post-processing of closed-loop traces: steady-state precision envelopes,
//! convergence time and chattering measures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plant::{SimTrace, TraceRecord};
use crate::scalar::Real;

/// Closed time window `[start, end]` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window<T> {
    pub start: T,
    pub end: T,
}

impl<T: Real> Window<T> {
    pub fn new(start: T, end: T) -> Self {
        Self { start, end }
    }

    /// `[8, 10]` s.
    pub fn steady() -> Self {
        Self::new(T::lit(8.0), T::lit(10.0))
    }

    pub fn contains(&self, t: T) -> bool {
        self.start <= t && t <= self.end
    }

    fn select<'a>(&self, trace: &'a SimTrace<T>) -> Result<Vec<&'a TraceRecord<T>>> {
        let recs: Vec<_> = trace.records.iter().filter(|r| self.contains(r.t)).collect();
        if recs.is_empty() {
            Err(Error::EmptyWindow { start: self.start.as_f64(), end: self.end.as_f64() })
        } else {
            Ok(recs)
        }
    }
}

/// `sup |x_i|` over a window and the constants `v_i = sup |x_i| / h^p_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionReport<T> {
    pub window: Window<T>,
    pub orders: [i32; 3],
    pub sup_abs_x: [T; 3],
    pub v: [T; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChatterReport<T> {
    /// `Σ |u_{k+1} - u_k|` over the window.
    pub total_variation_u: T,
    /// Sign changes of `u_{k+1} - u_k`; zero increments are skipped.
    pub sign_flips_u_delta: usize,
}

pub fn precision_envelope<T: Real>(
    trace: &SimTrace<T>,
    window: Window<T>,
    h: T,
    orders: [i32; 3],
) -> Result<PrecisionReport<T>> {
    if !(h > T::zero()) {
        return Err(Error::NonPositiveStep(h.as_f64()));
    }
    let recs = window.select(trace)?;
    let mut sup = [T::zero(); 3];
    for r in recs {
        for (s, x) in sup.iter_mut().zip([r.x1, r.x2, r.x3]) {
            *s = s.max(x.abs());
        }
    }
    let v = [0, 1, 2].map(|i| sup[i] / h.powi(orders[i]));
    Ok(PrecisionReport { window, orders, sup_abs_x: sup, v })
}

/// Smallest `t` after which `|z1|` and `|z2|` stay below `threshold` for the
/// rest of the trace. `+∞` if the last record is still outside.
pub fn convergence_time<T: Real>(trace: &SimTrace<T>, threshold: T) -> T {
    let inside = |r: &TraceRecord<T>| r.z1.abs() < threshold && r.z2.abs() < threshold;
    match trace.records.iter().rposition(|r| !inside(r)) {
        None => trace.records.first().map_or(T::zero(), |r| r.t),
        Some(i) => trace.records.get(i + 1).map_or(T::infinity(), |r| r.t),
    }
}

pub fn chatter_metrics<T: Real>(trace: &SimTrace<T>, window: Window<T>) -> Result<ChatterReport<T>> {
    let recs = window.select(trace)?;
    let mut tv = T::zero();
    let mut flips = 0;
    let mut last_sign = T::zero();
    for pair in recs.windows(2) {
        let d = pair[1].u - pair[0].u;
        tv = tv + d.abs();
        if d != T::zero() {
            let s = d.signum();
            if last_sign != T::zero() && s != last_sign {
                flips += 1;
            }
            last_sign = s;
        }
    }
    Ok(ChatterReport { total_variation_u: tv, sign_flips_u_delta: flips })
}
