//! Continuous twisting algorithm (CTA) for a perturbed double integrator,
//! discretized with the conventional forward Euler method and with a
//! two-stage implicit Euler method whose set-valued sign terms are resolved
//! in closed form by nested projections.
//!
//! The math is generic over the scalar type (`f32`, `f64`, and for the
//! projection kernel also exact rationals). Concrete `f64` aliases live at
//! the crate root.
//!
//! ```
//! use cta_core::{run_simulation, Method, SimConfig64};
//!
//! let mut cfg = SimConfig64::paper(Method::Implicit);
//! cfg.t_final = 3.0;
//! let trace = run_simulation(&cfg).unwrap();
//! assert!(trace.records.last().unwrap().z1.abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controller;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod plant;
pub mod resolvent;
pub mod scalar;

pub use controller::{
    explicit_step, implicit_stage1, implicit_stage2, implicit_step, ControlOutput, ControllerState, Gains, Method,
    StageOne, StageTwo, Z3Feedback,
};
pub use error::{Error, Result};
pub use metrics::{chatter_metrics, convergence_time, precision_envelope, ChatterReport, PrecisionReport, Window};
pub use plant::{
    plant_step, run_simulation, run_simulation_with, Disturbance, Phase, PlantState, SimConfig, SimTrace, Sinusoid,
    TraceRecord,
};
pub use resolvent::{proj, sgn_set, solve_interval_sgn, solve_sgnsat, solve_two_sgn, Interval};
pub use scalar::Real;

pub type Interval64 = Interval<f64>;
pub type Gains64 = Gains<f64>;
pub type ControllerState64 = ControllerState<f64>;
pub type Disturbance64 = Disturbance<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type SimTrace64 = SimTrace<f64>;
pub type TraceRecord64 = TraceRecord<f64>;

pub type Interval32 = Interval<f32>;
pub type Gains32 = Gains<f32>;
pub type SimConfig32 = SimConfig<f32>;
pub type SimTrace32 = SimTrace<f32>;
