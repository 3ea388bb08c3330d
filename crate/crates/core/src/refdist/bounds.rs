use super::tw::{f_goe, f_gue};
use crate::scalings::{goe_shock_constants, gue_shock_params};
use crate::{Error, Result};
use serde::Serialize;

/// `2^(4/3)`.
pub fn two_four_thirds() -> f64 {
    2f64.powf(4.0 / 3.0)
}

/// Which rescaling the offset `u` of the second marginal lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scale {
    /// Particle-position scale: second argument `s - u 2^(4/3)`.
    Tasep,
    /// Last-passage scale: second argument `s - u / 2^(4/3)`.
    Lpp,
}

impl Scale {
    fn shift(self, u: f64) -> f64 {
        match self {
            Scale::Tasep => u * two_four_thirds(),
            Scale::Lpp => u / two_four_thirds(),
        }
    }
}

/// `F_GUE(s) F_GUE(s - shift(u))`: the law of the maximum of two
/// independent GUE Tracy-Widom variables, the second one offset.
pub fn product_limit(s: f64, u: f64, scale: Scale) -> f64 {
    f_gue(s) * f_gue(s - scale.shift(u))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

/// Parameters of the restricted-problem construction behind the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SandwichParams {
    /// Horizontal offset parameter of the end point.
    pub u: f64,
    /// Distance between the two start points, in units of `t^(2/3)`.
    pub a: f64,
    /// Offset of the forbidden segments, in units of `t^(2/3)`.
    pub k: f64,
    /// Fraction of the path after the intermediate point.
    pub epsilon: f64,
    /// Free parameter of the upper bound.
    pub delta: f64,
    /// Stand-in for the crossing probabilities, added to the upper bound.
    pub surrogate: f64,
}

impl SandwichParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.k > 0.0 && self.k < self.a) {
            return Err(Error::domain(format!("need 0 < k < a, got k={}, a={}", self.k, self.a)));
        }
        if !(self.epsilon > self.k / self.a && self.epsilon < 1.0) {
            return Err(Error::domain(format!(
                "need k/a < epsilon < 1, got epsilon={} with k/a={}",
                self.epsilon,
                self.k / self.a
            )));
        }
        if !(self.delta > 0.0) || !(self.surrogate >= 0.0) {
            return Err(Error::domain("need delta > 0 and surrogate >= 0"));
        }
        Ok(())
    }
}

/// Lower and upper bounds for `P(max of the two rescaled passage times <= s)`
/// in the limit, with the crossing terms replaced by `surrogate`. The upper
/// bound is capped at 1.
pub fn sandwich_bounds(s: f64, p: &SandwichParams, scale: Scale) -> Result<Bounds> {
    p.validate()?;
    let second = f_gue(s - scale.shift(p.u));
    let lower = f_gue(s) * second;
    let stretched = f_gue((s + p.delta) / (1.0 - p.epsilon).cbrt());
    let short_piece = f_gue(-p.delta / p.epsilon.cbrt());
    let upper = (stretched * second + short_piece + p.surrogate).min(1.0);
    Ok(Bounds { lower, upper })
}

/// The same sandwich for arbitrary marginal laws: `g1` and `g2` are the
/// limits of the two marginals, `g0` that of the short piece between the
/// intermediate point and the end, and `c_eps` rescales the first argument
/// of the upper bound.
#[allow(clippy::too_many_arguments)]
pub fn general_sandwich(
    g1: &dyn Fn(f64) -> f64,
    g2: &dyn Fn(f64) -> f64,
    g0: &dyn Fn(f64) -> f64,
    s1: f64,
    s2: f64,
    c_eps: f64,
    delta: f64,
    surrogate: f64,
) -> Bounds {
    let lower = g1(s1) * g2(s2);
    let upper = (g1((s1 + delta) * c_eps) * g2(s2) + g0(-delta) + surrogate).min(1.0);
    Bounds { lower, upper }
}

/// Limit law of a particle at a shock between densities `rho1 >= rho2`
/// (GOE marginals).
pub fn goe_shock_product(s: f64, xi: f64, rho1: f64, rho2: f64) -> Result<f64> {
    if !(0.0 < rho2 && rho2 <= rho1 && rho1 < 1.0) {
        return Err(Error::domain(format!("need 0 < rho2 <= rho1 < 1, got {rho1}, {rho2}")));
    }
    let (c1, c2) = goe_shock_constants(rho1, rho2)?;
    let k = 2f64.powf(2.0 / 3.0);
    Ok(f_goe(k * (s - xi / rho1) * c1) * f_goe(k * (s - xi / rho2) * c2))
}

/// Limit law of a particle at the shock created by initial densities
/// `(1 - beta) / 2` and `(1 + beta) / 2` (GUE marginals).
pub fn gue_shock_product(s: f64, xi: f64, beta: f64) -> Result<f64> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(Error::domain(format!("need 0 < beta < 1, got {beta}")));
    }
    let p = gue_shock_params(beta)?;
    Ok(f_gue((s - xi / p.rho1) / p.sigma1) * f_gue((s - xi / p.rho2) / p.sigma2))
}
