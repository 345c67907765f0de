//! Single-stage game: expected costs, Nash equilibria with and without cost
//! shaping, the centralized system optimum, and the welfare gap between them.
//!
//! With zero discount an infected agent's expected cost `1 + alpha p(u)`
//! (plus `q(u)` when shaped) does not depend on anyone else, so infected
//! agents play `ubar = argmin alpha p(u) [+ q(u)]`. Healthy agents then
//! best-respond to `ubar` by minimizing `1 - (1 - min(u, ubar))^m + alpha p(u)`.

use std::fmt;
use std::sync::Arc;

use crate::dynamics::{infection_probability, AgentState};
use crate::error::{check_unit, ModelError, Result};
use crate::Scalar;

/// Intervals of the coarse grid used by [`scalar_minimize`].
pub const SCALAR_GRID: usize = 10_000;
/// Intervals per axis of the coarse grid used by [`system_optimum`].
pub const SYSTEM_GRID: usize = 400;
/// Default argument tolerance of the scalar minimizer.
pub const DEFAULT_TOL: f64 = 1e-10;

const P_CLAMP: f64 = 1e-12;

/// `exp(1 / (u - 1))`, extended by continuity to `p(1) = 0`.
pub fn p_default<T: Scalar>(u: T) -> Result<T> {
    check_unit("u", u)?;
    Ok(exp_activity_cost(u))
}

#[inline]
fn exp_activity_cost<T: Scalar>(u: T) -> T {
    if u >= T::one() {
        return T::zero();
    }
    let u = u.min(T::one() - T::lit(P_CLAMP));
    (T::one() / (u - T::one())).exp()
}

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Cost `p(u)` of keeping activity level `u`.
#[derive(Clone)]
pub enum ActivityCost<T = f64> {
    /// `exp(1 / (u - 1))`: strictly decreasing, zero at full activity.
    Exponential,
    /// `scale * (u - center)^2`.
    Parabolic {
        center: T,
        scale: T,
    },
    Custom(ScalarFn<T>),
}

impl<T: Scalar> ActivityCost<T> {
    pub fn custom<F: Fn(T) -> T + Send + Sync + 'static>(f: F) -> Self {
        ActivityCost::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        match self {
            ActivityCost::Exponential => exp_activity_cost(u),
            ActivityCost::Parabolic { center, scale } => {
                let d = u - *center;
                *scale * d * d
            }
            ActivityCost::Custom(f) => f(u),
        }
    }

    /// Closed-form minimizer on `[0, 1]` when one is known.
    pub fn minimizer(&self) -> Option<T> {
        match self {
            ActivityCost::Exponential => Some(T::one()),
            ActivityCost::Parabolic { center, scale } if *scale > T::zero() => {
                Some(center.max(T::zero()).min(T::one()))
            }
            _ => None,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ActivityCost<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActivityCost::Exponential => f.write_str("Exponential"),
            ActivityCost::Parabolic { center, scale } => f
                .debug_struct("Parabolic")
                .field("center", center)
                .field("scale", scale)
                .finish(),
            ActivityCost::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Penalty `q(u)` charged to infected agents under cost shaping.
#[derive(Clone)]
pub enum Shaping<T = f64> {
    /// `slope * u`.
    Linear {
        slope: T,
    },
    Custom(ScalarFn<T>),
}

impl<T: Scalar> Shaping<T> {
    /// `q(u) = u`.
    pub fn identity() -> Self {
        Shaping::Linear { slope: T::one() }
    }

    pub fn custom<F: Fn(T) -> T + Send + Sync + 'static>(f: F) -> Self {
        Shaping::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        match self {
            Shaping::Linear { slope } => *slope * u,
            Shaping::Custom(f) => f(u),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Shaping<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shaping::Linear { slope } => f.debug_struct("Linear").field("slope", slope).finish(),
            Shaping::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Preferences shared by every agent.
#[derive(Debug, Clone)]
pub struct CostParams<T = f64> {
    /// Weight `alpha` on the activity cost.
    pub alpha: T,
    /// Discount factor. The stage-game solvers here assume zero discount.
    pub gamma: T,
    pub activity_cost: ActivityCost<T>,
    /// Shaping term; a missing term acts as `q = 0` even when shaping is requested.
    pub shaping: Option<Shaping<T>>,
}

impl<T: Scalar> CostParams<T> {
    /// Exponential activity cost, zero discount, no shaping.
    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            gamma: T::zero(),
            activity_cost: ActivityCost::Exponential,
            shaping: None,
        }
    }

    pub fn with_shaping(mut self, shaping: Shaping<T>) -> Self {
        self.shaping = Some(shaping);
        self
    }

    pub fn with_activity_cost(mut self, activity_cost: ActivityCost<T>) -> Self {
        self.activity_cost = activity_cost;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(ModelError::Config("alpha must be positive".into()));
        }
        check_unit("gamma", self.gamma)?;
        if let Some(q) = &self.shaping {
            if q.eval(T::zero()) != T::zero() {
                return Err(ModelError::Config(
                    "shaping function must vanish at u = 0".into(),
                ));
            }
            let mut prev = T::zero();
            for i in 1..=100 {
                let v = q.eval(T::from_count(i) / T::lit(100.0));
                if !v.is_finite() || v < prev {
                    return Err(ModelError::Config(
                        "shaping function must be finite and nondecreasing".into(),
                    ));
                }
                prev = v;
            }
        }
        Ok(())
    }

    /// `alpha * p(u)`.
    #[inline]
    pub fn weighted_activity_cost(&self, u: T) -> T {
        self.alpha * self.activity_cost.eval(u)
    }

    /// `q(u)` if `shaped` and a shaping term is configured, else zero.
    #[inline]
    pub fn shaping_penalty(&self, u: T, shaped: bool) -> T {
        match (&self.shaping, shaped) {
            (Some(q), true) => q.eval(u),
            _ => T::zero(),
        }
    }

    /// Objective minimized by an infected agent.
    fn infected_objective(&self, u: T, shaped: bool) -> T {
        T::one() + self.weighted_activity_cost(u) + self.shaping_penalty(u, shaped)
    }

    /// Objective minimized by a healthy agent facing `m` infected agents at `u_infected`.
    fn healthy_objective(&self, u: T, m: usize, u_infected: T) -> T {
        let risk = T::one() - (T::one() - u.min(u_infected)).powi(m as i32);
        risk + self.weighted_activity_cost(u)
    }
}

/// Expected one-day cost of an agent in state `x` playing `u` when `m`
/// infected agents all play `u_infected`.
pub fn expected_stage_cost<T: Scalar>(
    x: AgentState,
    u: T,
    m: usize,
    u_infected: T,
    params: &CostParams<T>,
    shaped: bool,
) -> Result<T> {
    check_unit("u", u)?;
    check_unit("u_infected", u_infected)?;
    Ok(match x {
        AgentState::Healthy => params.healthy_objective(u, m, u_infected),
        AgentState::Infected => params.infected_objective(u, shaped),
    })
}

/// Same as [`expected_stage_cost`] with heterogeneous infected levels.
pub fn expected_stage_cost_with_levels<T: Scalar>(
    x: AgentState,
    u: T,
    infected_levels: &[T],
    params: &CostParams<T>,
    shaped: bool,
) -> Result<T> {
    check_unit("u", u)?;
    Ok(match x {
        AgentState::Healthy => {
            infection_probability(u, infected_levels)? + params.weighted_activity_cost(u)
        }
        AgentState::Infected => params.infected_objective(u, shaped),
    })
}

/// Minimizer returned by [`scalar_minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub arg: T,
    pub value: T,
}

fn finite<T: Scalar>(u: T, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ModelError::NonFinite {
            at: u.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Global minimization of `f` on `[0, 1]`.
///
/// Scans a grid of `SCALAR_GRID + 1` points, then golden-section refines the
/// two cells around the best grid point until the bracket is narrower than
/// `tol`. Exact ties go to the smaller argument.
pub fn scalar_minimize<T: Scalar, F: Fn(T) -> T>(f: F, tol: T) -> Result<Minimum<T>> {
    if !(tol > T::zero()) {
        return Err(ModelError::Config("tolerance must be positive".into()));
    }
    let n = T::from_count(SCALAR_GRID);
    let mut best = Minimum {
        arg: T::zero(),
        value: finite(T::zero(), f(T::zero()))?,
    };
    let mut best_idx = 0;
    for i in 1..=SCALAR_GRID {
        let u = T::from_count(i) / n;
        let v = finite(u, f(u))?;
        if v < best.value {
            best = Minimum { arg: u, value: v };
            best_idx = i;
        }
    }
    let lo = T::from_count(best_idx.saturating_sub(1)) / n;
    let hi = T::from_count((best_idx + 1).min(SCALAR_GRID)) / n;
    let refined = golden_section(&f, lo, hi, tol)?;
    if refined.value < best.value {
        best = refined;
    }
    Ok(best)
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    mut lo: T,
    mut hi: T,
    tol: T,
) -> Result<Minimum<T>> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::half();
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = finite(x1, f(x1))?;
    let mut f2 = finite(x2, f(x2))?;
    for _ in 0..500 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = finite(x1, f(x1))?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = finite(x2, f(x2))?;
        }
    }
    Ok(if f1 <= f2 {
        Minimum { arg: x1, value: f1 }
    } else {
        Minimum { arg: x2, value: f2 }
    })
}

/// Equilibrium actions and costs of the stage game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageEquilibrium<T = f64> {
    pub u_healthy: T,
    pub u_infected: T,
    pub cost_healthy: T,
    /// Includes the shaping penalty when the game is shaped.
    pub cost_infected: T,
    /// `m * cost_infected + (M - m) * cost_healthy`.
    pub system_cost: T,
    pub infected: usize,
    pub population: usize,
}

fn check_counts(m: usize, population: usize) -> Result<()> {
    if population == 0 || m > population {
        return Err(ModelError::Config(format!(
            "need 0 <= m <= M and M >= 1, got m = {m}, M = {population}"
        )));
    }
    Ok(())
}

/// Argmin of `alpha p(u)`, using the closed form when the cost has one.
fn activity_minimizer<T: Scalar>(params: &CostParams<T>) -> Result<Minimum<T>> {
    match params.activity_cost.minimizer() {
        Some(u) => Ok(Minimum {
            arg: u,
            value: params.weighted_activity_cost(u),
        }),
        None => scalar_minimize(|u| params.weighted_activity_cost(u), T::lit(DEFAULT_TOL)),
    }
}

/// Nash equilibrium of the one-day game with `m` of `population` agents infected.
pub fn stage_nash<T: Scalar>(
    m: usize,
    population: usize,
    params: &CostParams<T>,
    shaped: bool,
) -> Result<StageEquilibrium<T>> {
    check_counts(m, population)?;
    params.validate()?;
    let tol = T::lit(DEFAULT_TOL);
    let uses_shaping = shaped && params.shaping.is_some();

    let infected = if uses_shaping {
        scalar_minimize(
            |u| params.weighted_activity_cost(u) + params.shaping_penalty(u, true),
            tol,
        )?
    } else {
        activity_minimizer(params)?
    };
    let u_infected = infected.arg;

    let healthy = if m == 0 {
        activity_minimizer(params)?
    } else if u_infected == T::zero() {
        // No infection risk left: healthy agents only weigh activity cost.
        activity_minimizer(params)?
    } else {
        scalar_minimize(|u| params.healthy_objective(u, m, u_infected), tol)?
    };
    let u_healthy = healthy.arg;

    let cost_healthy = params.healthy_objective(u_healthy, m, u_infected);
    let cost_infected = params.infected_objective(u_infected, uses_shaping);
    let system_cost =
        T::from_count(m) * cost_infected + T::from_count(population - m) * cost_healthy;
    Ok(StageEquilibrium {
        u_healthy,
        u_infected,
        cost_healthy,
        cost_infected,
        system_cost,
        infected: m,
        population,
    })
}

/// Centralized optimum over role-homogeneous action pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemOptimum<T = f64> {
    pub u_healthy: T,
    pub u_infected: T,
    /// `L_o`.
    pub cost: T,
}

/// Total expected cost when healthy agents play `u_healthy` and infected agents `u_infected`.
pub fn system_cost<T: Scalar>(
    m: usize,
    population: usize,
    u_healthy: T,
    u_infected: T,
    params: &CostParams<T>,
    shaped: bool,
) -> T {
    T::from_count(m) * params.infected_objective(u_infected, shaped)
        + T::from_count(population - m) * params.healthy_objective(u_healthy, m, u_infected)
}

/// Minimizes the unshaped system cost. See [`optimize_system`].
pub fn system_optimum<T: Scalar>(
    m: usize,
    population: usize,
    params: &CostParams<T>,
) -> Result<SystemOptimum<T>> {
    optimize_system(m, population, params, false)
}

/// Minimizes the system cost (shaped or not) over `[0, 1]^2`.
///
/// A `(SYSTEM_GRID + 1)^2` grid scan and the stage Nash profile seed a
/// coordinate-descent golden-section refinement. When a coordinate sits on a
/// plateau where rounding hides the activity cost, it is moved to the
/// closed-form minimizer of `p` if that does not raise the total.
pub fn optimize_system<T: Scalar>(
    m: usize,
    population: usize,
    params: &CostParams<T>,
    shaped: bool,
) -> Result<SystemOptimum<T>> {
    check_counts(m, population)?;
    params.validate()?;
    let cost = |uh: T, ui: T| system_cost(m, population, uh, ui, params, shaped);
    let n = T::from_count(SYSTEM_GRID);

    let mut best = SystemOptimum {
        u_healthy: T::zero(),
        u_infected: T::zero(),
        cost: T::infinity(),
    };
    for i in 0..=SYSTEM_GRID {
        let uh = T::from_count(i) / n;
        for j in 0..=SYSTEM_GRID {
            let ui = T::from_count(j) / n;
            let v = finite(uh, cost(uh, ui))?;
            if v < best.cost {
                best = SystemOptimum {
                    u_healthy: uh,
                    u_infected: ui,
                    cost: v,
                };
            }
        }
    }
    for eq in [
        stage_nash(m, population, params, false)?,
        stage_nash(m, population, params, shaped)?,
    ] {
        let v = cost(eq.u_healthy, eq.u_infected);
        if v < best.cost {
            best = SystemOptimum {
                u_healthy: eq.u_healthy,
                u_infected: eq.u_infected,
                cost: v,
            };
        }
    }

    let tol = T::lit(DEFAULT_TOL);
    let cell = T::one() / n;
    let bracket = |x: T| ((x - cell).max(T::zero()), (x + cell).min(T::one()));
    for _ in 0..100 {
        let before = best.cost;
        let (lo, hi) = bracket(best.u_healthy);
        let ui = best.u_infected;
        let r = golden_section(&|uh| cost(uh, ui), lo, hi, tol)?;
        if r.value < best.cost {
            best = SystemOptimum {
                u_healthy: r.arg,
                u_infected: ui,
                cost: r.value,
            };
        }
        let (lo, hi) = bracket(best.u_infected);
        let uh = best.u_healthy;
        let r = golden_section(&|ui| cost(uh, ui), lo, hi, tol)?;
        if r.value < best.cost {
            best = SystemOptimum {
                u_healthy: uh,
                u_infected: r.arg,
                cost: r.value,
            };
        }
        if !(best.cost < before) {
            break;
        }
    }

    if let Some(star) = params.activity_cost.minimizer() {
        let v = cost(star, best.u_infected);
        if v <= best.cost {
            best = SystemOptimum {
                u_healthy: star,
                u_infected: best.u_infected,
                cost: v,
            };
        }
        let v = cost(best.u_healthy, star);
        if v <= best.cost {
            best = SystemOptimum {
                u_healthy: best.u_healthy,
                u_infected: star,
                cost: v,
            };
        }
    }
    Ok(best)
}

/// Loss of social welfare `L* - L_o` of the unshaped game.
pub fn welfare_loss<T: Scalar>(m: usize, population: usize, params: &CostParams<T>) -> Result<T> {
    let nash = stage_nash(m, population, params, false)?;
    let opt = system_optimum(m, population, params)?;
    Ok(nash.system_cost - opt.cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn unit_alpha() -> CostParams<f64> {
        CostParams::new(1.0)
    }

    #[test]
    fn p_default_values() {
        assert!((p_default(0.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(p_default(1.0).unwrap(), 0.0);
        assert!((p_default(0.5).unwrap() - (-2.0f64).exp()).abs() < 1e-16);
        assert!(p_default(1.0 + 1e-9).is_err());
        assert!(p_default(-0.1).is_err());
        let mut prev = f64::INFINITY;
        for i in 0..=500 {
            let p = p_default(i as f64 / 500.0).unwrap();
            assert!(p < prev || p == 0.0);
            prev = p;
        }
    }

    #[test]
    fn stage_cost_examples() {
        let c = unit_alpha();
        assert_eq!(
            expected_stage_cost(AgentState::Infected, 1.0, 1, 1.0, &c, false).unwrap(),
            1.0
        );
        let h = expected_stage_cost(AgentState::Healthy, 0.0, 1, 1.0, &c, false).unwrap();
        assert!((h - 1.0 / E).abs() < 1e-16);
        assert_eq!(
            expected_stage_cost(AgentState::Healthy, 1.0, 1, 0.0, &c, false).unwrap(),
            0.0
        );
        let shaped = c.clone().with_shaping(Shaping::identity());
        let v = expected_stage_cost(AgentState::Infected, 0.5, 3, 0.0, &shaped, true).unwrap();
        assert!((v - (1.0 + (-2.0f64).exp() + 0.5)).abs() < 1e-15);
        assert!(expected_stage_cost(AgentState::Healthy, 1.5, 1, 0.0, &c, false).is_err());
    }

    #[test]
    fn heterogeneous_levels_reduce_to_homogeneous() {
        let c = unit_alpha();
        let a =
            expected_stage_cost_with_levels(AgentState::Healthy, 0.3, &[0.2, 0.2, 0.2], &c, false)
                .unwrap();
        let b = expected_stage_cost(AgentState::Healthy, 0.3, 3, 0.2, &c, false).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn scalar_minimize_examples() {
        let r = scalar_minimize(|u: f64| u, 1e-10).unwrap();
        assert_eq!((r.arg, r.value), (0.0, 0.0));
        let r = scalar_minimize(|u: f64| (u - 0.3) * (u - 0.3), 1e-10).unwrap();
        assert!((r.arg - 0.3).abs() < 1e-8);
        let r = scalar_minimize(|u: f64| exp_activity_cost(u) + u, 1e-10).unwrap();
        assert_eq!(r.arg, 0.0);
        assert!(scalar_minimize(|u: f64| u, 0.0).is_err());
    }

    #[test]
    fn scalar_minimize_rejects_non_finite() {
        let err = scalar_minimize(|u: f64| if u > 0.5 { f64::NAN } else { u }, 1e-8).unwrap_err();
        assert!(matches!(err, ModelError::NonFinite { .. }));
    }

    #[test]
    fn scalar_minimize_breaks_ties_low() {
        let r = scalar_minimize(|u: f64| if u < 0.25 { 1.0 } else { 0.0 }, 1e-10).unwrap();
        assert_eq!(r.arg, 0.25);
    }

    #[test]
    fn four_agent_nash() {
        let eq = stage_nash(1, 4, &unit_alpha(), false).unwrap();
        assert_eq!(eq.u_infected, 1.0);
        assert_eq!(eq.u_healthy, 0.0);
        assert_eq!(eq.cost_infected, 1.0);
        assert!((eq.cost_healthy - 1.0 / E).abs() < 1e-15);
        assert!((eq.system_cost - (1.0 + 3.0 / E)).abs() < 1e-12);
    }

    #[test]
    fn four_agent_shaped_nash() {
        let c = unit_alpha().with_shaping(Shaping::identity());
        let eq = stage_nash(1, 4, &c, true).unwrap();
        assert_eq!(eq.u_infected, 0.0);
        assert_eq!(eq.u_healthy, 1.0);
        assert!((eq.cost_infected - (1.0 + 1.0 / E)).abs() < 1e-15);
        assert_eq!(eq.cost_healthy, 0.0);
        assert!((eq.system_cost - (1.0 + 1.0 / E)).abs() < 1e-12);
    }

    #[test]
    fn no_infection_means_pure_activity_choice() {
        let c = unit_alpha();
        let eq = stage_nash(0, 5, &c, false).unwrap();
        assert_eq!(eq.u_healthy, 1.0);
        assert_eq!(eq.cost_healthy, 0.0);
        let parabolic = CostParams::new(2.0).with_activity_cost(ActivityCost::Parabolic {
            center: 0.4,
            scale: 1.0,
        });
        let eq = stage_nash(0, 5, &parabolic, false).unwrap();
        assert_eq!(eq.u_healthy, 0.4);
        assert_eq!(eq.system_cost, 0.0);
    }

    #[test]
    fn four_agent_system_optimum() {
        let opt = system_optimum(1, 4, &unit_alpha()).unwrap();
        assert_eq!(opt.u_infected, 0.0);
        assert_eq!(opt.u_healthy, 1.0);
        assert!((opt.cost - (1.0 + 1.0 / E)).abs() < 1e-12);
        let loss = welfare_loss(1, 4, &unit_alpha()).unwrap();
        assert!((loss - 2.0 / E).abs() < 1e-12);
    }

    #[test]
    fn system_optimum_extremes() {
        let c = unit_alpha();
        let none = system_optimum(0, 6, &c).unwrap();
        assert_eq!(none.cost, 0.0);
        assert_eq!(c.activity_cost.eval(none.u_healthy), 0.0);
        let all = system_optimum(6, 6, &c).unwrap();
        assert_eq!(all.cost, 6.0);
        assert_eq!(c.activity_cost.eval(all.u_infected), 0.0);
        assert_eq!(welfare_loss(0, 6, &c).unwrap(), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(stage_nash(5, 4, &unit_alpha(), false).is_err());
        assert!(stage_nash(0, 0, &unit_alpha(), false).is_err());
        assert!(stage_nash(1, 4, &CostParams::new(0.0), false).is_err());
        let bad_q = unit_alpha().with_shaping(Shaping::custom(|u: f64| 1.0 - u));
        assert!(stage_nash(1, 4, &bad_q, true).is_err());
        let bad_gamma = unit_alpha().with_gamma(1.5);
        assert!(bad_gamma.validate().is_err());
    }

    #[test]
    fn shaping_without_term_is_unshaped() {
        let a = stage_nash(2, 5, &unit_alpha(), true).unwrap();
        let b = stage_nash(2, 5, &unit_alpha(), false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn works_in_single_precision() {
        let eq = stage_nash(1, 4, &CostParams::<f32>::new(1.0), false).unwrap();
        assert_eq!(eq.u_infected, 1.0);
        assert_eq!(eq.u_healthy, 0.0);
        assert!((eq.system_cost - (1.0 + 3.0 / std::f32::consts::E)).abs() < 1e-6);
    }
}
