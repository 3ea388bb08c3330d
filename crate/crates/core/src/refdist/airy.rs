//! Airy function Ai and its derivative.
//!
//! For `x >= 10` the exponentially small asymptotic series is used directly;
//! its smallest term there is below 1e-18. Elsewhere the Airy equation
//! `y'' = x y` is integrated by Taylor series between anchors spaced 0.5
//! apart: towards the left starting from the exact values at 0, and for
//! `0 < x < 10` backwards from the asymptotic values at 10, the direction in
//! which Ai dominates. An evaluation is one Taylor step from the nearest anchor.

use crate::{Error, Result};
use std::sync::OnceLock;

/// Ai(0) = 3^(-2/3) / Gamma(2/3).
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -3^(-1/3) / Gamma(1/3).
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

/// Supported argument range of the checked entry points.
pub const AIRY_RANGE: (f64, f64) = (-40.0, 200.0);

const ASYMPTOTIC_FROM: f64 = 10.0;
const SPACING: f64 = 0.5;
const LEFTMOST_ANCHOR: i64 = -90;

/// `Ai(x)` on the supported range.
pub fn airy_ai(x: f64) -> Result<f64> {
    check(x)?;
    Ok(airy_pair(x).0)
}

/// `Ai'(x)` on the supported range.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    check(x)?;
    Ok(airy_pair(x).1)
}

fn check(x: f64) -> Result<()> {
    let (lo, hi) = AIRY_RANGE;
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutOfRange { value: x, lo, hi });
    }
    Ok(())
}

/// `(Ai(x), Ai'(x))` without range checking. Arguments beyond 200 return
/// (underflowed) asymptotic values; arguments below -45 are not supported.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_FROM {
        return asymptotic(x);
    }
    let anchors = anchors();
    let k = (x / SPACING).round() as i64;
    let k = k.clamp(LEFTMOST_ANCHOR, (ASYMPTOTIC_FROM / SPACING) as i64);
    let x0 = k as f64 * SPACING;
    let (a, ap) = anchors[(k - LEFTMOST_ANCHOR) as usize];
    taylor_step(x0, a, ap, x - x0)
}

fn anchors() -> &'static [(f64, f64)] {
    static ANCHORS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    ANCHORS.get_or_init(|| {
        let top = (ASYMPTOTIC_FROM / SPACING) as i64;
        let count = (top - LEFTMOST_ANCHOR + 1) as usize;
        let mut v = vec![(0.0, 0.0); count];
        let idx = |k: i64| (k - LEFTMOST_ANCHOR) as usize;
        v[idx(top)] = asymptotic(ASYMPTOTIC_FROM);
        for k in (1..top).rev() {
            let (a, ap) = v[idx(k + 1)];
            v[idx(k)] = taylor_step((k + 1) as f64 * SPACING, a, ap, -SPACING);
        }
        v[idx(0)] = (AI_ZERO, AI_PRIME_ZERO);
        for k in (LEFTMOST_ANCHOR..0).rev() {
            let (a, ap) = v[idx(k + 1)];
            v[idx(k)] = taylor_step((k + 1) as f64 * SPACING, a, ap, -SPACING);
        }
        v
    })
}

/// Advances the solution of `y'' = x y` from `x0` by `h` using its Taylor series.
fn taylor_step(x0: f64, y0: f64, yp0: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (y0, yp0);
    }
    // Coefficients a_k of y(x0 + h) = sum a_k h^k satisfy
    // (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}.
    let mut a_prev2 = y0; // a_{k-2}
    let mut a_prev1 = yp0; // a_{k-1}
    let mut a_cur = x0 * y0 / 2.0; // a_2
    let mut y = y0 + yp0 * h;
    let mut yp = yp0;
    let mut hk = h * h; // h^k for k = 2
    let mut small = 0;
    let scale = y0.abs() + yp0.abs() * h.abs() + f64::MIN_POSITIVE;
    for k in 2..120usize {
        let term = a_cur * hk;
        y += term;
        yp += k as f64 * a_cur * hk / h;
        if term.abs() <= 1e-18 * (y.abs().max(scale)) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        let next = (x0 * a_prev1 + a_prev2) / (((k + 1) * k) as f64);
        a_prev2 = a_prev1;
        a_prev1 = a_cur;
        a_cur = next;
        hk *= h;
    }
    (y, yp)
}

/// Large positive argument expansions of Ai and Ai'.
fn asymptotic(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let mut u = 1.0;
    let mut sum_u = 1.0;
    let mut sum_v = 1.0;
    let mut sign = 1.0;
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        sign = -sign;
        zpow *= zeta;
        let tu = u / zpow;
        if tu > last {
            break;
        }
        last = tu;
        sum_u += sign * tu;
        sum_v += sign * v / zpow;
        if tu < 1e-18 {
            break;
        }
    }
    let pref = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let q = x.sqrt().sqrt();
    (pref / q * sum_u, -pref * q * sum_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        assert!((airy_ai(0.0).unwrap() - 0.355_028_053_887_817).abs() < 1e-15);
        assert!((airy_ai_prime(0.0).unwrap() + 0.258_819_403_792_806_8).abs() < 1e-15);
    }

    #[test]
    fn backward_integration_reaches_exact_origin_values() {
        // The positive anchors are integrated from x = 10 down to 0.5; one
        // more step must land on the closed-form values at the origin.
        let (a, ap) = anchors()[(1 - LEFTMOST_ANCHOR) as usize];
        let (a0, ap0) = taylor_step(SPACING, a, ap, -SPACING);
        assert!((a0 - AI_ZERO).abs() < 1e-14 * AI_ZERO, "{a0}");
        assert!((ap0 - AI_PRIME_ZERO).abs() < 1e-14, "{ap0}");
    }

    #[test]
    fn continuous_across_asymptotic_switch() {
        let below = airy_pair(ASYMPTOTIC_FROM - 1e-9);
        let above = airy_pair(ASYMPTOTIC_FROM);
        assert!(((below.0 - above.0) / above.0).abs() < 1e-8);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(airy_ai(-41.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(airy_ai(200.5), Err(Error::OutOfRange { .. })));
    }
}
