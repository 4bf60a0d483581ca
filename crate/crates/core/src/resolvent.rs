//! Closed intervals, projection onto them, the set-valued signum and
//! closed-form resolvents of the scalar sign inclusions that the implicit
//! controller has to solve at every step.
//!
//! Everything here is generic over any signed ordered number, so the same
//! code runs on `f64`, `f32` and exact rationals.

use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Ordered signed scalar usable by the resolvents.
pub trait Ordered: Signed + Copy + PartialOrd + Debug + ToPrimitive {}
impl<T: Signed + Copy + PartialOrd + Debug + ToPrimitive> Ordered for T {}

fn report<T: ToPrimitive>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Ordered> Interval<T> {
    /// Rejects `lo > hi` and unordered (NaN) bounds. Bounds are never swapped.
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo: report(lo), hi: report(hi) })
        }
    }

    pub fn point(x: T) -> Self {
        Self { lo: x, hi: x }
    }

    /// `[-r, r]` for `r >= 0`.
    pub fn symmetric(radius: T) -> Result<Self> {
        Self::new(-radius, radius)
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn negate(&self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance(&self, x: T) -> T {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            T::zero()
        }
    }

    /// Closest point of the interval to `x`.
    pub fn project(&self, x: T) -> T {
        proj(self, x)
    }

    /// Minkowski sum.
    pub fn shift(&self, other: &Self) -> Self {
        Self { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    /// `c * I` for any scalar `c`; a negative `c` flips the bounds.
    pub fn scale(&self, c: T) -> Self {
        if c >= T::zero() {
            Self { lo: self.lo * c, hi: self.hi * c }
        } else {
            Self { lo: self.hi * c, hi: self.lo * c }
        }
    }
}

impl<T: Ordered> Add<T> for Interval<T> {
    type Output = Self;

    fn add(self, rhs: T) -> Self {
        Self { lo: self.lo + rhs, hi: self.hi + rhs }
    }
}

impl<T: Ordered> Add for Interval<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.shift(&rhs)
    }
}

impl<T: Ordered> Mul<T> for Interval<T> {
    type Output = Self;

    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

/// Projection of `x` onto `a`: the upper bound above it, the lower bound below it, `x` inside.
pub fn proj<T: Ordered>(a: &Interval<T>, x: T) -> T {
    if x > a.hi {
        a.hi
    } else if x < a.lo {
        a.lo
    } else {
        x
    }
}

/// Set-valued signum: `{-1}`, `[-1, 1]` at zero, `{1}`.
pub fn sgn_set<T: Ordered>(x: T) -> Interval<T> {
    if x > T::zero() {
        Interval::point(T::one())
    } else if x < T::zero() {
        Interval::point(-T::one())
    } else {
        Interval { lo: -T::one(), hi: T::one() }
    }
}

/// A single selection from [`sgn_set`]; `0` is selected at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignSelection<T>(T);

impl<T: Ordered> SignSelection<T> {
    pub fn of(x: T) -> Self {
        if x > T::zero() {
            Self(T::one())
        } else if x < T::zero() {
            Self(-T::one())
        } else {
            Self(T::zero())
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Unique solution `x` of `x ∈ F·sgn(y - x)`, namely `proj([-F, F], y)`.
pub fn solve_sgnsat<T: Ordered>(f: T, y: T) -> Result<T> {
    if !(f >= T::zero()) {
        return Err(Error::InvalidGain(format!("saturation level must be non-negative, got {:?}", f)));
    }
    Ok(proj(&Interval::symmetric(f)?, y))
}

/// `[proj(-c, y), proj(c, y)]`, well ordered whenever `c.lo() + c.hi() >= 0`.
pub fn inner_interval<T: Ordered>(c: &Interval<T>, y: T) -> Result<Interval<T>> {
    Interval::new(proj(&c.negate(), y), proj(c, y))
}

/// Nested projection `proj([proj(-c, y), proj(c, y)], x)`.
///
/// This is the common kernel of [`solve_two_sgn`]. It also accepts intervals
/// with a non-positive lower bound, which the Stage I resolvent produces when
/// the second term dominates the first.
pub fn nested_proj<T: Ordered>(c: &Interval<T>, x: T, y: T) -> Result<T> {
    Ok(proj(&inner_interval(c, y)?, x))
}

fn check_pair<T: Ordered>(a: T, b: T) -> Result<()> {
    if !(a > T::zero()) {
        return Err(Error::InvalidGain(format!("first coefficient must be positive, got {:?}", a)));
    }
    if !(b >= T::zero()) {
        return Err(Error::InvalidGain(format!("second coefficient must be non-negative, got {:?}", b)));
    }
    Ok(())
}

/// Solution set of `y ∈ [-A, A] + B·sgn(x - y)`: with `C = [A - B, A + B]`
/// it is `[proj(-C, x), proj(C, x)]`.
///
/// The equivalence holds for `A > B > 0`. For `A <= B` the formula is still
/// evaluated, but the result is then only an empirical answer.
pub fn solve_interval_sgn<T: Ordered>(a: T, b: T, x: T) -> Result<Interval<T>> {
    check_pair(a, b)?;
    if !(b > T::zero()) {
        return Err(Error::InvalidGain(format!("second coefficient must be positive, got {:?}", b)));
    }
    inner_interval(&Interval::new(a - b, a + b)?, x)
}

/// Unique `z` with `z ∈ A·sgn(x - z) + B·sgn(y - z)`, computed as
/// `proj([proj(-C, y), proj(C, y)], x)` with `C = [A - B, A + B]`.
///
/// Proven for `A > B > 0`; evaluated verbatim for any `A > 0, B >= 0`.
pub fn solve_two_sgn<T: Ordered>(a: T, b: T, x: T, y: T) -> Result<T> {
    check_pair(a, b)?;
    nested_proj(&Interval::new(a - b, a + b)?, x, y)
}
