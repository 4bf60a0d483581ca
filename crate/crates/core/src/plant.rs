//! Perturbed double integrator, disturbance signals and the fixed-step
//! closed-loop driver.

use serde::{Deserialize, Serialize};

use crate::controller::{ControllerState, Gains, Method};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Any `|z|` beyond this aborts a run.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState<T> {
    pub z1: T,
    pub z2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sin,
    Cos,
}

/// `amplitude · sin(ω t)` or `amplitude · cos(ω t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid<T> {
    pub amplitude: T,
    pub frequency: T,
    pub phase: Phase,
}

/// Matched disturbance `δ(t) = constant + Σ sinusoids`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disturbance<T> {
    pub constant: T,
    pub sinusoids: Vec<Sinusoid<T>>,
}

impl<T: Real> Disturbance<T> {
    pub fn zero() -> Self {
        Self { constant: T::zero(), sinusoids: Vec::new() }
    }

    /// `δ(t) = 35 + 0.6 cos(2t) + 0.4 sin(√10 t)`.
    pub fn paper() -> Self {
        Self {
            constant: T::lit(35.0),
            sinusoids: vec![
                Sinusoid { amplitude: T::lit(0.6), frequency: T::lit(2.0), phase: Phase::Cos },
                Sinusoid { amplitude: T::lit(0.4), frequency: T::lit(10.0).sqrt(), phase: Phase::Sin },
            ],
        }
    }

    /// Value and exact time derivative at `t`.
    pub fn eval(&self, t: T) -> (T, T) {
        self.sinusoids.iter().fold((self.constant, T::zero()), |(d, dd), s| {
            let (sin, cos) = (s.frequency * t).sin_cos();
            match s.phase {
                Phase::Sin => (d + s.amplitude * sin, dd + s.amplitude * s.frequency * cos),
                Phase::Cos => (d + s.amplitude * cos, dd - s.amplitude * s.frequency * sin),
            }
        })
    }

    pub fn value(&self, t: T) -> T {
        self.eval(t).0
    }
}

/// Forward-Euler plant: `z1⁺ = z1 + h z2`, `z2⁺ = z2 + h u + h δ`.
pub fn plant_step<T: Real>(s: PlantState<T>, u: T, delta: T, h: T) -> Result<PlantState<T>> {
    if !(h > T::zero()) {
        return Err(Error::NonPositiveStep(h.as_f64()));
    }
    let next = PlantState { z1: s.z1 + h * s.z2, z2: s.z2 + h * u + h * delta };
    if next.z1.is_finite() && next.z2.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite("plant state"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub h: T,
    pub t_final: T,
    pub method: Method,
    pub gains: Gains<T>,
    pub z1_0: T,
    pub z2_0: T,
    pub eta_0: T,
    pub disturbance: Disturbance<T>,
}

impl<T: Real> SimConfig<T> {
    /// The closed-loop experiment: 10 s at `h = 1 ms` from `(8, -12)` with `η(0) = 0`.
    pub fn paper(method: Method) -> Self {
        Self {
            h: T::lit(0.001),
            t_final: T::lit(10.0),
            method,
            gains: Gains::paper(),
            z1_0: T::lit(8.0),
            z2_0: T::lit(-12.0),
            eta_0: T::zero(),
            disturbance: Disturbance::paper(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > T::zero()) || !self.h.is_finite() {
            return Err(Error::NonPositiveStep(self.h.as_f64()));
        }
        if !(self.t_final > T::zero()) || !self.t_final.is_finite() {
            return Err(Error::Config(format!("t_final must be positive, got {}", self.t_final)));
        }
        Gains::new(self.gains.kp1, self.gains.kp2, self.gains.kp3, self.gains.kp4, self.gains.scale)?;
        if self.method != Method::Explicit {
            self.gains.check_integral_dominance()?;
        }
        for (name, v) in [("z1_0", self.z1_0), ("z2_0", self.z2_0), ("eta_0", self.eta_0)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// `round(t_final / h)`.
    pub fn steps(&self) -> usize {
        (self.t_final / self.h).round().to_usize().unwrap_or(0)
    }
}

/// One sample of a closed-loop run.
///
/// `eta` is the integrator value contained in `u`, so `u = u1 + eta` for both
/// methods and `z3 = eta + delta` is the residual acting on the plant beyond `u1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord<T> {
    pub t: T,
    pub z1: T,
    pub z2: T,
    pub z3: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
    pub u: T,
    pub u1: T,
    pub eta: T,
    pub delta: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace<T> {
    pub h: T,
    pub scale: T,
    pub method: Method,
    pub records: Vec<TraceRecord<T>>,
}

impl<T: Real> SimTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn span(&self) -> Option<(T, T)> {
        Some((self.records.first()?.t, self.records.last()?.t))
    }
}

/// Runs the closed loop with the configured disturbance.
pub fn run_simulation<T: Real>(cfg: &SimConfig<T>) -> Result<SimTrace<T>> {
    run_simulation_with(cfg, |t| cfg.disturbance.value(t))
}

/// Runs the closed loop with an arbitrary disturbance signal.
///
/// Each step computes `u_k` from `(z1_k, z2_k)` and the controller state only,
/// samples `δ_k = δ(t_k)` and then advances the plant. The trace holds
/// `round(t_final/h) + 1` records, the last one without a plant update.
pub fn run_simulation_with<T: Real, F: Fn(T) -> T>(cfg: &SimConfig<T>, delta: F) -> Result<SimTrace<T>> {
    cfg.validate()?;
    let steps = cfg.steps();
    let h = cfg.h;
    let scale = cfg.gains.scale;
    let limit = T::lit(DIVERGENCE_LIMIT);
    let mut plant = PlantState { z1: cfg.z1_0, z2: cfg.z2_0 };
    let mut ctrl = ControllerState::new(cfg.z1_0, cfg.z2_0, cfg.eta_0);
    let mut records = Vec::with_capacity(steps + 1);

    for k in 0..=steps {
        let t = T::from_usize(k).expect("step index fits scalar") * h;
        let (out, next) = cfg.method.step(plant.z1, plant.z2, &ctrl, &cfg.gains, h).map_err(|e| match e {
            Error::NonFinite(_) => Error::Diverged { step: k },
            other => other,
        })?;
        let d = delta(t);
        let z3 = out.eta_applied + d;
        records.push(TraceRecord {
            t,
            z1: plant.z1,
            z2: plant.z2,
            z3,
            x1: plant.z1 / scale,
            x2: plant.z2 / scale,
            x3: z3 / scale,
            u: out.u,
            u1: out.u1,
            eta: out.eta_applied,
            delta: d,
        });
        if k == steps {
            break;
        }
        plant = plant_step(plant, out.u, d, h).map_err(|_| Error::Diverged { step: k })?;
        if !(plant.z1.abs() <= limit && plant.z2.abs() <= limit && next.eta.abs() <= limit) {
            return Err(Error::Diverged { step: k + 1 });
        }
        ctrl = next;
    }

    Ok(SimTrace { h, scale, method: cfg.method, records })
}
