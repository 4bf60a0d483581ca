//! Continuous twisting control law for the double integrator, in the
//! conventional forward-Euler form and in the two-stage implicit Euler form.
//!
//! The implicit form resolves the set-valued sign terms at the *next* sample
//! with nested projections (see [`crate::resolvent`]):
//!
//! * Stage I computes the proportional-like input `u1` so that the predicted
//!   pair `(z̃1, z̃2)` satisfies its sign inclusion exactly.
//! * Stage II advances the integrator `η` so that the predicted triple
//!   `(z̄1, z̄2, z̄3)` satisfies the discontinuous integral law.
//!
//! All steps are pure: state in, state out.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resolvent::{nested_proj, solve_two_sgn, Interval};
use crate::scalar::{sign, signed_pow, Real};

/// Scaled CTA gains `kp1..kp4` together with the state scaling factor `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gains<T> {
    pub kp1: T,
    pub kp2: T,
    pub kp3: T,
    pub kp4: T,
    /// State scaling `z = L·x`; only used to report unscaled states.
    pub scale: T,
}

impl<T: Real> Gains<T> {
    pub fn new(kp1: T, kp2: T, kp3: T, kp4: T, scale: T) -> Result<Self> {
        for (name, v) in [("kp1", kp1), ("kp2", kp2), ("kp3", kp3), ("kp4", kp4), ("L", scale)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidGain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { kp1, kp2, kp3, kp4, scale })
    }

    /// Builds scaled gains from unscaled `k1..k4`:
    /// `kp1 = L^(2/3) k1`, `kp2 = L^(1/2) k2`, `kp3 = L k3`, `kp4 = L k4`.
    pub fn from_unscaled(k: [T; 4], scale: T) -> Result<Self> {
        let two_thirds = T::lit(2.0) / T::lit(3.0);
        Self::new(
            scale.powf(two_thirds) * k[0],
            scale.sqrt() * k[1],
            scale * k[2],
            scale * k[3],
            scale,
        )
    }

    /// `kp1=160.236, kp2=60.3738, kp3=28.5, kp4=15`, `L=5`.
    pub fn paper() -> Self {
        Self {
            kp1: T::lit(160.236),
            kp2: T::lit(60.3738),
            kp3: T::lit(28.5),
            kp4: T::lit(15.0),
            scale: T::lit(5.0),
        }
    }

    /// Stage II needs `kp3 > kp4` so that its resolvent interval has a positive lower end.
    pub fn check_integral_dominance(&self) -> Result<()> {
        if self.kp3 > self.kp4 {
            Ok(())
        } else {
            Err(Error::InvalidGain(format!(
                "implicit integral stage requires kp3 > kp4, got kp3={} kp4={}",
                self.kp3, self.kp4
            )))
        }
    }
}

/// Measurement and Stage I input of the previous sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub z2: T,
    pub u1: T,
}

/// Controller memory carried from one sample to the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerState<T> {
    /// Disturbance-compensating integrator.
    pub eta: T,
    pub zbar1: T,
    pub zbar2: T,
    pub zbar3: T,
    /// Last sample, used to reconstruct the lumped state `z3 = η + δ`.
    pub previous: Option<Sample<T>>,
}

impl<T: Real> ControllerState<T> {
    /// Seeds the predicted states with the measured initial state.
    pub fn new(z1: T, z2: T, eta: T) -> Self {
        Self { eta, zbar1: z1, zbar2: z2, zbar3: eta, previous: None }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    fn is_finite(&self) -> bool {
        self.eta.is_finite() && self.zbar1.is_finite() && self.zbar2.is_finite() && self.zbar3.is_finite()
    }

    /// Estimate of the lumped state `z3 = η + δ` available to the controller at this sample.
    ///
    /// With [`Z3Feedback::Reconstructed`] the disturbance is recovered from the
    /// measured velocity increment, `δ ≈ (z2 - z2_prev)/h - u_prev`. Since
    /// `u_prev = u1_prev + η`, this reduces to `(z2 - z2_prev)/h - u1_prev`.
    pub fn lumped_state(&self, z2: T, h: T, feedback: Z3Feedback) -> T {
        match (feedback, self.previous) {
            (Z3Feedback::Reconstructed, Some(prev)) => (z2 - prev.z2) / h - prev.u1,
            _ => self.eta,
        }
    }
}

/// Source of `z3` in the integral stage of the implicit controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Z3Feedback {
    /// `z3 := η`, ignoring the disturbance.
    Nominal,
    /// `z3 := η + δ̂` with `δ̂` recovered from the last velocity increment.
    Reconstructed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput<T> {
    /// Total input applied to the plant.
    pub u: T,
    pub u1: T,
    /// Integrator value after this step.
    pub eta_next: T,
    /// Integrator value contained in `u`: the current one for the explicit
    /// law, the updated one for the implicit law.
    pub eta_applied: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageOne<T> {
    pub u1: T,
    pub ztilde1: T,
    pub ztilde2: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTwo<T> {
    pub eta_next: T,
    pub zbar1: T,
    pub zbar2: T,
    pub zbar3: T,
}

fn check_step<T: Real>(h: T) -> Result<()> {
    if h > T::zero() && h.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveStep(h.as_f64()))
    }
}

/// Forward-Euler CTA: `u = -kp1⌊z1⌉^(1/3) - kp2⌊z2⌉^(1/2) + η`,
/// `η⁺ = η - h·kp3·sign(z1) - h·kp4·sign(z2)` with `sign(0) = 0`.
pub fn explicit_step<T: Real>(
    z1: T,
    z2: T,
    state: &ControllerState<T>,
    g: &Gains<T>,
    h: T,
) -> Result<(ControlOutput<T>, ControllerState<T>)> {
    check_step(h)?;
    let third = T::one() / T::lit(3.0);
    let half = T::lit(0.5);
    let u1 = -g.kp1 * signed_pow(z1, third) - g.kp2 * signed_pow(z2, half);
    let u = u1 + state.eta;
    let eta_next = state.eta - h * g.kp3 * sign(z1) - h * g.kp4 * sign(z2);
    let out = ControlOutput { u, u1, eta_next, eta_applied: state.eta };
    let next = ControllerState { eta: eta_next, ..*state };
    Ok((out, next))
}

/// Stage I: solves
/// `z̃2 ∈ z2 - h·a·sgn(z̃1) - h·b·sgn(z̃2)`, `z̃1 = z1 + h·z̃2`
/// with `a = kp1|z̄1|^(1/3)`, `b = kp2|z̄2|^(1/2)` taken from the previous prediction.
///
/// With `𝒜 = [h(a - b), h(a + b)]`:
/// `h·u1 = proj([proj(-𝒜, -z2), proj(𝒜, -z2)], -z2 - z1/h)`.
pub fn implicit_stage1<T: Real>(
    z1: T,
    z2: T,
    state: &ControllerState<T>,
    g: &Gains<T>,
    h: T,
) -> Result<StageOne<T>> {
    check_step(h)?;
    let a = g.kp1 * state.zbar1.abs().cbrt();
    let b = g.kp2 * state.zbar2.abs().sqrt();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("stage I interval"));
    }
    let interval = Interval::new(h * (a - b), h * (a + b))?;
    let increment = nested_proj(&interval, -z2 - z1 / h, -z2)?;
    let u1 = increment / h;
    let ztilde2 = z2 + increment;
    let ztilde1 = z1 + h * ztilde2;
    Ok(StageOne { u1, ztilde1, ztilde2 })
}

/// Stage II: advances `η` by the increment `Δ` solving
/// `Δ ∈ -h·kp3·sgn(y2 + Δ) - h·kp4·sgn(y1 + Δ)` where
/// `y1 = (z2 + h·u1)/h + z3`, `y2 = z1/h² + y1`, i.e.
/// `Δ = proj([proj(-ℬ, -y1), proj(ℬ, -y1)], -y2)` with `ℬ = [h(kp3 - kp4), h(kp3 + kp4)]`.
pub fn implicit_stage2<T: Real>(
    z1: T,
    z2: T,
    u1: T,
    z3: T,
    state: &ControllerState<T>,
    g: &Gains<T>,
    h: T,
) -> Result<StageTwo<T>> {
    check_step(h)?;
    g.check_integral_dominance()?;
    let drift = (z2 + h * u1) / h;
    let y1 = drift + z3;
    let y2 = z1 / (h * h) + y1;
    let delta_eta = solve_two_sgn(h * g.kp3, h * g.kp4, -y2, -y1)?;
    let zbar3 = z3 + delta_eta;
    let zbar2 = (drift + zbar3) * h;
    let zbar1 = z1 + h * z2 + h * h * u1 + h * h * zbar3;
    Ok(StageTwo { eta_next: state.eta + delta_eta, zbar1, zbar2, zbar3 })
}

/// One implicit CTA step: Stage I, then Stage II, `u = u1 + η⁺`.
pub fn implicit_step<T: Real>(
    z1: T,
    z2: T,
    state: &ControllerState<T>,
    g: &Gains<T>,
    h: T,
    feedback: Z3Feedback,
) -> Result<(ControlOutput<T>, ControllerState<T>)> {
    let one = implicit_stage1(z1, z2, state, g, h)?;
    let z3 = state.lumped_state(z2, h, feedback);
    let two = implicit_stage2(z1, z2, one.u1, z3, state, g, h)?;
    let out = ControlOutput {
        u: one.u1 + two.eta_next,
        u1: one.u1,
        eta_next: two.eta_next,
        eta_applied: two.eta_next,
    };
    let next = ControllerState {
        eta: two.eta_next,
        zbar1: two.zbar1,
        zbar2: two.zbar2,
        zbar3: two.zbar3,
        previous: Some(Sample { z2, u1: one.u1 }),
    };
    if !next.is_finite() {
        return Err(Error::NonFinite("implicit controller state"));
    }
    Ok((out, next))
}

/// Discretization of the control law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Explicit,
    /// Implicit law with the reconstructed lumped state.
    Implicit,
    /// Implicit law with `z3 := η`.
    ImplicitNominal,
}

impl Method {
    pub fn step<T: Real>(
        self,
        z1: T,
        z2: T,
        state: &ControllerState<T>,
        g: &Gains<T>,
        h: T,
    ) -> Result<(ControlOutput<T>, ControllerState<T>)> {
        match self {
            Method::Explicit => explicit_step(z1, z2, state, g, h),
            Method::Implicit => implicit_step(z1, z2, state, g, h, Z3Feedback::Reconstructed),
            Method::ImplicitNominal => implicit_step(z1, z2, state, g, h, Z3Feedback::Nominal),
        }
    }

    /// Steady-state precision orders `(p1, p2, p3)` in `|x_i| <= v_i h^p_i`.
    pub fn precision_orders(self) -> [i32; 3] {
        match self {
            Method::Explicit => [3, 2, 1],
            Method::Implicit | Method::ImplicitNominal => [4, 3, 2],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Explicit => "explicit",
            Method::Implicit => "implicit",
            Method::ImplicitNominal => "implicit-nominal",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "explicit" => Ok(Method::Explicit),
            "implicit" => Ok(Method::Implicit),
            "implicit-nominal" => Ok(Method::ImplicitNominal),
            other => Err(Error::Config(format!(
                "unknown method {other:?} (expected explicit, implicit or implicit-nominal)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvent::sgn_set;
    use proptest::prelude::*;

    const H: f64 = 0.001;

    fn unit_gains() -> Gains<f64> {
        Gains::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    fn sgn_eps(x: f64, eps: f64) -> Interval<f64> {
        if x.abs() <= eps {
            Interval::new(-1.0, 1.0).unwrap()
        } else {
            sgn_set(x)
        }
    }

    #[test]
    fn gains_validation() {
        assert!(Gains::new(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Gains::new(-1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(Gains::new(1.0, 1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(unit_gains().check_integral_dominance().is_err());
        assert!(Gains::<f64>::paper().check_integral_dominance().is_ok());
    }

    #[test]
    fn unscaled_gain_map() {
        let g: Gains<f64> = Gains::from_unscaled([1.0, 1.0, 1.0, 1.0], 8.0).unwrap();
        assert!((g.kp1 - 4.0).abs() < 1e-12);
        assert!((g.kp2 - 8.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!((g.kp3, g.kp4), (8.0, 8.0));
    }

    #[test]
    fn explicit_origin_is_equilibrium() {
        let (out, next) = explicit_step(0.0, 0.0, &ControllerState::zero(), &Gains::paper(), H).unwrap();
        assert_eq!((out.u, out.eta_next), (0.0, 0.0));
        assert_eq!(next, ControllerState::zero());
    }

    #[test]
    fn explicit_first_step_from_reference_state() {
        let g = Gains::paper();
        let state = ControllerState::new(8.0, -12.0, 0.0);
        let (out, next) = explicit_step(8.0, -12.0, &state, &g, H).unwrap();
        // 8^(1/3) = 2, 12^(1/2) = 3.4641016151377544
        let expected_u1 = -160.236 * 2.0 + 60.3738 * 3.4641016151377544;
        assert!((out.u1 - expected_u1).abs() < 1e-10, "{}", out.u1);
        assert_eq!(out.u, out.u1);
        assert!((out.eta_next + 0.0135).abs() < 1e-15);
        assert_eq!(next.eta, out.eta_next);
    }

    #[test]
    fn explicit_hand_evaluated_step() {
        let state = ControllerState { eta: 2.0, ..ControllerState::zero() };
        let (out, _) = explicit_step(-1.0, 0.0, &state, &unit_gains(), 0.1).unwrap();
        assert_eq!(out.u1, 1.0);
        assert_eq!(out.u, 3.0);
        assert!((out.eta_next - 2.1).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_step_is_rejected() {
        let s = ControllerState::zero();
        let g = Gains::paper();
        assert!(matches!(explicit_step(0.0, 0.0, &s, &g, 0.0), Err(Error::NonPositiveStep(_))));
        assert!(implicit_step(0.0, 0.0, &s, &g, -1.0, Z3Feedback::Nominal).is_err());
        assert!(implicit_stage1(0.0, 0.0, &s, &g, f64::NAN).is_err());
    }

    #[test]
    fn stage1_origin() {
        let one = implicit_stage1(0.0, 0.0, &ControllerState::zero(), &Gains::paper(), H).unwrap();
        assert_eq!(one, StageOne { u1: 0.0, ztilde1: 0.0, ztilde2: 0.0 });
    }

    #[test]
    fn stage1_first_step_saturates_low() {
        let g = Gains::paper();
        let state = ControllerState::new(8.0, -12.0, 0.0);
        let one = implicit_stage1(8.0, -12.0, &state, &g, H).unwrap();
        // a = 160.236·2, b = 60.3738·√12, interval h·[a−b, a+b];
        // inner interval [−h(a−b), h(a+b)], outer argument 12 − 8000 saturates at −h(a−b)
        let a: f64 = 160.236 * 2.0;
        let b = 60.3738 * 3.4641016151377544;
        let expected: f64 = -(a - b);
        assert!((expected + 111.331022).abs() < 1e-6);
        assert!((one.u1 - expected).abs() < 1e-9, "{}", one.u1);
        assert!((one.ztilde2 - (-12.0 + H * expected)).abs() < 1e-12);
        assert!((one.ztilde1 - (8.0 + H * one.ztilde2)).abs() < 1e-12);
    }

    #[test]
    fn stage1_negative_lower_endpoint() {
        let g = unit_gains();
        let state = ControllerState::new(0.0, 1.0, 0.0);
        let one = implicit_stage1(0.0, 1.0, &state, &g, 1.0).unwrap();
        assert_eq!(one, StageOne { u1: -1.0, ztilde1: 0.0, ztilde2: 0.0 });
    }

    #[test]
    fn stage1_rejects_nan_magnitudes() {
        let state = ControllerState::new(f64::NAN, 0.0, 0.0);
        assert!(matches!(
            implicit_stage1(0.0, 0.0, &state, &Gains::paper(), H),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn stage2_origin() {
        let two = implicit_stage2(0.0, 0.0, 0.0, 0.0, &ControllerState::zero(), &Gains::paper(), H).unwrap();
        assert_eq!(two, StageTwo { eta_next: 0.0, zbar1: 0.0, zbar2: 0.0, zbar3: 0.0 });
    }

    #[test]
    fn stage2_reference_interval() {
        let g = Gains::<f64>::paper();
        let lo = H * (g.kp3 - g.kp4);
        let hi = H * (g.kp3 + g.kp4);
        assert!((lo - 0.0135).abs() < 1e-15);
        assert!((hi - 0.0435).abs() < 1e-15);
        // large positive y saturates the increment at −h(kp3+kp4)
        let state = ControllerState { eta: 10.0, ..ControllerState::zero() };
        let two = implicit_stage2(0.0, 0.0, 0.0, 10.0, &state, &g, H).unwrap();
        assert!((two.eta_next - (10.0 - hi)).abs() < 1e-12);
    }

    #[test]
    fn stage2_hand_evaluated() {
        let g = Gains::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        let state = ControllerState { eta: 10.0, ..ControllerState::zero() };
        let two = implicit_stage2(0.0, 0.0, 0.0, 10.0, &state, &g, 1.0).unwrap();
        assert_eq!(two, StageTwo { eta_next: 7.0, zbar1: 7.0, zbar2: 7.0, zbar3: 7.0 });
    }

    #[test]
    fn stage2_requires_kp3_above_kp4() {
        let r = implicit_stage2(0.0, 0.0, 0.0, 0.0, &ControllerState::zero(), &unit_gains(), H);
        assert!(matches!(r, Err(Error::InvalidGain(_))));
    }

    #[test]
    fn implicit_origin_stays_put() {
        for fb in [Z3Feedback::Nominal, Z3Feedback::Reconstructed] {
            let (out, next) = implicit_step(0.0, 0.0, &ControllerState::zero(), &Gains::paper(), H, fb).unwrap();
            assert_eq!((out.u, out.u1, out.eta_next), (0.0, 0.0, 0.0));
            assert_eq!((next.eta, next.zbar1, next.zbar2, next.zbar3), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn implicit_first_step_from_reference_state() {
        let g = Gains::paper();
        let state = ControllerState::new(8.0, -12.0, 0.0);
        let (out, next) = implicit_step(8.0, -12.0, &state, &g, H, Z3Feedback::Reconstructed).unwrap();
        let one = implicit_stage1(8.0, -12.0, &state, &g, H).unwrap();
        assert_eq!(out.u1, one.u1);
        assert_eq!(out.u, out.u1 + out.eta_next);
        // y1 = −12/h + u1 ≈ −12111 < 0 < y2 = 8/h² + y1: the two sign terms oppose,
        // inner interval [−h(kp3−kp4), h(kp3+kp4)], −y2 saturates low → Δη = −0.0135
        assert!((out.eta_next + 0.0135).abs() < 1e-15);
        let u1 = -(160.236 * 2.0 - 60.3738 * 12.0_f64.sqrt());
        assert!((out.u - (u1 - 0.0135)).abs() < 1e-9, "{}", out.u);
        assert_eq!(next.previous, Some(Sample { z2: -12.0, u1: one.u1 }));
    }

    #[test]
    fn reconstruction_recovers_constant_disturbance() {
        // z2 advanced by h·(u1 + η⁺ + δ) must give back η⁺ + δ
        let g = Gains::paper();
        let delta = 35.6;
        let mut state = ControllerState::new(8.0, -12.0, 0.0);
        let (mut z1, mut z2) = (8.0, -12.0);
        for _ in 0..3 {
            let (out, next) = implicit_step(z1, z2, &state, &g, H, Z3Feedback::Reconstructed).unwrap();
            z1 += H * z2;
            z2 += H * (out.u + delta);
            state = next;
        }
        let z3 = state.lumped_state(z2, H, Z3Feedback::Reconstructed);
        assert!((z3 - (state.eta + delta)).abs() < 1e-9, "{z3}");
        assert_eq!(state.lumped_state(z2, H, Z3Feedback::Nominal), state.eta);
    }

    #[test]
    fn method_parse_roundtrip() {
        for m in [Method::Explicit, Method::Implicit, Method::ImplicitNominal] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("euler".parse::<Method>().is_err());
    }

    #[test]
    fn f32_step_runs() {
        let g = Gains::<f32>::paper();
        let state = ControllerState::new(8.0_f32, -12.0, 0.0);
        let (out, _) = implicit_step(8.0_f32, -12.0, &state, &g, 1e-3, Z3Feedback::Reconstructed).unwrap();
        assert!((out.u1 + 111.331_02).abs() < 1e-2);
    }

    fn arb_state() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
        (-10.0..10.0_f64, -10.0..10.0_f64, -40.0..40.0_f64, -10.0..10.0_f64, -10.0..10.0_f64)
    }

    proptest! {
        #[test]
        fn stage1_saturation_bound((z1, z2, eta, zb1, zb2) in arb_state(), h in 1e-4..1e-1_f64) {
            let g = Gains::paper();
            let state = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let one = implicit_stage1(z1, z2, &state, &g, h).unwrap();
            let bound = g.kp1 * zb1.abs().cbrt() + g.kp2 * zb2.abs().sqrt();
            prop_assert!(one.u1.abs() <= bound * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn stage2_rate_limit((z1, z2, eta, zb1, zb2) in arb_state(), h in 1e-4..1e-1_f64, z3 in -50.0..50.0_f64) {
            let g = Gains::paper();
            let state = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let one = implicit_stage1(z1, z2, &state, &g, h).unwrap();
            let two = implicit_stage2(z1, z2, one.u1, z3, &state, &g, h).unwrap();
            prop_assert!((two.eta_next - eta).abs() <= h * (g.kp3 + g.kp4) * (1.0 + 1e-9));
        }

        #[test]
        fn stage1_satisfies_its_inclusion((z1, z2, eta, zb1, zb2) in arb_state(), h in 1e-3..1e-1_f64) {
            let g = Gains::paper();
            let state = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let a = g.kp1 * zb1.abs().cbrt();
            let b = g.kp2 * zb2.abs().sqrt();
            prop_assume!(a > b);
            let one = implicit_stage1(z1, z2, &state, &g, h).unwrap();
            let eps = 1e-9;
            // z̃2 ∈ z2 − h·a·sgn(z̃1) − h·b·sgn(z̃2)
            let rhs = sgn_eps(one.ztilde1, eps).scale(-h * a) + sgn_eps(one.ztilde2, eps).scale(-h * b) + z2;
            prop_assert!(rhs.distance(one.ztilde2) <= eps, "residual {}", rhs.distance(one.ztilde2));
            prop_assert!((one.ztilde1 - (z1 + h * one.ztilde2)).abs() <= 1e-12 * (1.0 + z1.abs()));
        }

        #[test]
        fn stage2_satisfies_its_inclusion(
            (z1, z2, eta, zb1, zb2) in arb_state(),
            h in 1e-3..1e-1_f64,
            z3 in -50.0..50.0_f64,
        ) {
            let g = Gains::paper();
            let state = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let one = implicit_stage1(z1, z2, &state, &g, h).unwrap();
            let two = implicit_stage2(z1, z2, one.u1, z3, &state, &g, h).unwrap();
            // z̄3 ∈ z3 − h·kp3·sgn(z̄1) − h·kp4·sgn(z̄2), with sign arguments scaled to y-units
            let s1 = sgn_eps(two.zbar1 / (h * h), 1e-6);
            let s2 = sgn_eps(two.zbar2 / h, 1e-6);
            let rhs = s1.scale(-h * g.kp3) + s2.scale(-h * g.kp4) + z3;
            prop_assert!(rhs.distance(two.zbar3) <= 1e-9);
        }

        #[test]
        fn both_methods_are_odd((z1, z2, eta, zb1, zb2) in arb_state()) {
            let g = Gains::paper();
            let s = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let n = ControllerState { eta: -eta, zbar1: -zb1, zbar2: -zb2, zbar3: -eta, previous: None };
            for m in [Method::Explicit, Method::Implicit, Method::ImplicitNominal] {
                let (a, _) = m.step(z1, z2, &s, &g, H).unwrap();
                let (b, _) = m.step(-z1, -z2, &n, &g, H).unwrap();
                prop_assert_eq!(a.u, -b.u);
            }
        }

        #[test]
        fn output_is_sum_of_components((z1, z2, eta, zb1, zb2) in arb_state()) {
            let g = Gains::paper();
            let s = ControllerState { eta, zbar1: zb1, zbar2: zb2, zbar3: eta, previous: None };
            let (out, next) = Method::Implicit.step(z1, z2, &s, &g, H).unwrap();
            prop_assert_eq!(out.u, out.u1 + out.eta_next);
            prop_assert_eq!(next.eta, out.eta_next);
            let (out, _) = Method::Explicit.step(z1, z2, &s, &g, H).unwrap();
            prop_assert_eq!(out.u, out.u1 + eta);
        }
    }
}
