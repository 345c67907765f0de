//! Macroscopic susceptible-infected model `ds/dt = beta * s * (1 - s)`,
//! integrated with fixed-step classical Runge-Kutta.

use crate::error::{check_unit, ModelError, Result};
use crate::Scalar;

/// Default integration step in days.
pub const DEFAULT_DT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiParams<T = f64> {
    /// Infection coefficient per day.
    pub beta: T,
    /// Initial infected fraction.
    pub s0: T,
    /// Integration length in days.
    pub days: T,
    /// Requested step; the effective step is the largest `1/n <= dt`.
    pub dt: T,
}

impl<T: Scalar> SiParams<T> {
    pub fn new(beta: T, s0: T, days: T) -> Self {
        Self {
            beta,
            s0,
            days,
            dt: T::lit(DEFAULT_DT),
        }
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return Err(ModelError::Config(
                "beta must be finite and nonnegative".into(),
            ));
        }
        check_unit("s0", self.s0)?;
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(ModelError::Config("dt must be positive".into()));
        }
        if !(self.days >= self.dt) || !self.days.is_finite() {
            return Err(ModelError::Config("days must be at least dt".into()));
        }
        Ok(())
    }
}

/// Right-hand side `beta * s * (1 - s)`.
pub fn si_derivative<T: Scalar>(s: T, beta: T) -> Result<T> {
    check_unit("s", s)?;
    Ok(rate(s, beta))
}

#[inline]
fn rate<T: Scalar>(s: T, beta: T) -> T {
    beta * s * (T::one() - s)
}

fn rk4_step<T: Scalar>(s: T, beta: T, h: T) -> T {
    let half = T::half();
    let k1 = rate(s, beta);
    let k2 = rate(s + half * h * k1, beta);
    let k3 = rate(s + half * h * k2, beta);
    let k4 = rate(s + h * k3, beta);
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    (s + h * (k1 + two * k2 + two * k3 + k4) / six)
        .max(T::zero())
        .min(T::one())
}

/// Integrates from `t = 0` to `t = days` and returns `(t, s)` at every
/// integer day, plus the end point when `days` is fractional.
///
/// Each day is split into `n = ceil(1/dt)` equal steps so that samples land
/// exactly on integer days. Values are clamped to `[0, 1]`.
pub fn integrate<T: Scalar>(params: &SiParams<T>) -> Result<Vec<(T, T)>> {
    params.validate()?;
    let per_day = (T::one() / params.dt - T::lit(1e-9)).ceil().max(T::one());
    let steps_per_day = per_day
        .to_usize()
        .ok_or_else(|| ModelError::Config("dt too small".into()))?;
    let h = T::one() / per_day;

    let whole_days = params.days.floor().to_usize().expect("finite days");
    let mut out = Vec::with_capacity(whole_days + 2);
    let mut s = params.s0;
    out.push((T::zero(), s));
    for day in 1..=whole_days {
        for _ in 0..steps_per_day {
            s = rk4_step(s, params.beta, h);
        }
        out.push((T::from_count(day), s));
    }
    let rest = params.days - T::from_count(whole_days);
    if rest > T::zero() {
        let n = (rest / h).ceil().max(T::one());
        let sub = rest / n;
        for _ in 0..n.to_usize().expect("finite step count") {
            s = rk4_step(s, params.beta, sub);
        }
        out.push((params.days, s));
    }
    Ok(out)
}
