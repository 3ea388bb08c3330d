//! Centering constants, fluctuation scales and the lattice points, windows
//! and forbidden segments of every experiment geometry.
//!
//! Floors are applied to the outermost expression of each coordinate unless
//! a constructor says otherwise.

use crate::lattice::Point;
use crate::lpp::ForbiddenRegion;
use crate::{Error, Result};
use serde::Serialize;

/// Thickness of the forbidden segments.
pub const SEGMENT_THICKNESS: u32 = 2;

/// Default exponent for slow-decorrelation offsets.
pub const DEFAULT_NU: f64 = 0.9;

fn two_four_thirds() -> f64 {
    2f64.powf(4.0 / 3.0)
}

/// `t^(2/3)` as a squared cube root, exact for perfect cubes.
fn t23(t: f64) -> f64 {
    let c = t.cbrt();
    c * c
}

fn floor_i64(x: f64) -> i64 {
    x.floor() as i64
}

/// `center(t) = linear t + two_thirds t^(2/3) + one_third t^(1/3)` and
/// `scale(t) = scale_coeff t^(1/3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingSpec {
    pub t: f64,
    pub linear: f64,
    pub two_thirds: f64,
    pub one_third: f64,
    pub scale_coeff: f64,
}

impl ScalingSpec {
    pub fn center(&self) -> f64 {
        let c = self.t.cbrt();
        self.linear * self.t + self.two_thirds * c * c + self.one_third * c
    }

    pub fn scale(&self) -> f64 {
        self.scale_coeff * self.t.cbrt()
    }

    /// `(value - center) / scale`.
    pub fn rescale(&self, value: f64) -> f64 {
        (value - self.center()) / self.scale()
    }
}

/// Point-to-point law along slope `eta`: `L_{0 -> (eta t, t)}` is centred by
/// `(1 + sqrt eta)^2 t` and scaled by `eta^(-1/6) (1 + sqrt eta)^(4/3) t^(1/3)`.
pub fn mu_sigma_pp(eta: f64, t: f64) -> Result<ScalingSpec> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain(format!("slope must be positive, got {eta}")));
    }
    let r = 1.0 + eta.sqrt();
    Ok(ScalingSpec {
        t,
        linear: r * r,
        two_thirds: 0.0,
        one_third: 0.0,
        scale_coeff: eta.powf(-1.0 / 6.0) * r.powf(4.0 / 3.0),
    })
}

/// [`mu_sigma_pp`] for the displacement `(dx, dy)` of a point-to-point
/// problem, i.e. `eta = dx / dy` and `t = dy`.
pub fn point_to_point(dx: f64, dy: f64) -> Result<ScalingSpec> {
    if !(dy > 0.0) {
        return Err(Error::domain(format!("vertical extent must be positive, got {dy}")));
    }
    mu_sigma_pp(dx / dy, dy)
}

/// Centering of the two-source problem towards `(t + u t^(2/3) / a, t)`.
pub fn mu_a(t: f64, a: f64, u: f64) -> Result<ScalingSpec> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::domain("a must be nonzero"));
    }
    let w = a + u / a;
    Ok(ScalingSpec { t, linear: 4.0, two_thirds: 2.0 * w, one_third: -w * w / 4.0, scale_coeff: two_four_thirds() })
}

/// End point and the two sources of the critical two-source problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoints {
    /// `(floor(t + u t^(2/3) / a), floor(t))`.
    pub end: Point,
    /// `(-floor(a t^(2/3)), 0)`.
    pub left: Point,
    /// `(0, -floor(a t^(2/3)))`.
    pub lower: Point,
}

pub fn critical_points(t: f64, a: f64, u: f64) -> Result<CriticalPoints> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    let t23 = t23(t);
    let shift = floor_i64(a * t23);
    Ok(CriticalPoints {
        end: Point::new(floor_i64(t + u * t23 / a), floor_i64(t)),
        left: Point::new(-shift, 0),
        lower: Point::new(0, -shift),
    })
}

/// Intermediate point on the segment from the left source to the end point,
/// a fraction `epsilon` of the way back from the end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EPlus {
    pub point: Point,
    /// Law of the piece from `point` to the end point.
    pub spec: ScalingSpec,
    /// `(1 - epsilon)^(-1/3)`.
    pub c_eps: f64,
}

pub fn eplus(t: f64, a: f64, u: f64, epsilon: f64) -> Result<EPlus> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    if a == 0.0 {
        return Err(Error::domain("a must be nonzero"));
    }
    let t23 = t23(t);
    let w = u / a + a;
    let x = t * (1.0 - epsilon) + t23 * (u / a - epsilon * w);
    let point = Point::new(floor_i64(x), floor_i64(t * (1.0 - epsilon)));
    let spec = ScalingSpec {
        t,
        linear: 4.0 * epsilon,
        two_thirds: 2.0 * epsilon * w,
        one_third: -epsilon * w * w / 4.0,
        scale_coeff: two_four_thirds() * epsilon.cbrt(),
    };
    Ok(EPlus { point, spec, c_eps: (1.0 - epsilon).powf(-1.0 / 3.0) })
}

/// Default window parameter `k(a) = sqrt(a)`.
pub fn schedule_k(a: f64) -> f64 {
    a.sqrt()
}

/// Default intermediate fraction: `2 / sqrt(a)`, capped at the midpoint
/// between `k(a) / a` and 1 so that it stays admissible for small `a`.
pub fn schedule_eps(a: f64) -> Result<f64> {
    let ratio = schedule_k(a) / a;
    if !(ratio < 1.0) {
        return Err(Error::domain(format!("no admissible epsilon for a = {a}; need a > 1")));
    }
    Ok((2.0 / a.sqrt()).min((1.0 + ratio) / 2.0))
}

/// Densities and scale factors of the step-shock initial data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GueShock {
    pub rho1: f64,
    pub rho2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

pub fn gue_shock_params(beta: f64) -> Result<GueShock> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::domain(format!("need 0 <= beta < 1, got {beta}")));
    }
    let cbrt2 = 2f64.cbrt();
    Ok(GueShock {
        rho1: (1.0 - beta) / 2.0,
        rho2: (1.0 + beta) / 2.0,
        sigma1: (1.0 + beta).powf(2.0 / 3.0) / (cbrt2 * (1.0 - beta).cbrt()),
        sigma2: (1.0 - beta).powf(2.0 / 3.0) / (cbrt2 * (1.0 + beta).cbrt()),
    })
}

/// `c_i = (1 - rho_i)^(-2/3) rho_i^(1/3)` for a pair of flat densities.
pub fn goe_shock_constants(rho1: f64, rho2: f64) -> Result<(f64, f64)> {
    let c = |r: f64| -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(format!("density must lie in (0, 1), got {r}")));
        }
        Ok((1.0 - r).powf(-2.0 / 3.0) * r.cbrt())
    };
    Ok((c(rho1)?, c(rho2)?))
}

/// Quantities mapping the critical step-shock TASEP question at time `T`
/// onto a two-source last-passage problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TasepCritical {
    pub c1: f64,
    pub c2: f64,
    pub xi2: f64,
    /// Observed particle label and row of the end point.
    pub t: i64,
    /// Column of the end point.
    pub m: i64,
    pub hat_left: Point,
    pub hat_lower: Point,
    /// Expansion of `T` in powers of `t`.
    pub threshold: f64,
}

impl TasepCritical {
    /// Position threshold: the event is `x_t(T) >= m - t`.
    pub fn position_threshold(&self) -> i64 {
        self.m - self.t
    }
}

pub fn tasep_critical_constants(big_t: f64, a: f64, u: f64, s: f64) -> Result<TasepCritical> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    if !(big_t >= 1.0) {
        return Err(Error::domain(format!("T must be at least 1, got {big_t}")));
    }
    let c1 = -(u / a + a) / 2.0;
    let c2 = u / a;
    let xi2 = (u / a + a).powi(2) / 2.0 - s / 2f64.cbrt();
    let big13 = big_t.cbrt();
    let big23 = big13 * big13;
    let t = floor_i64(big_t / 4.0 + c1 * big23);
    let m = t + floor_i64(c2 * big23 + xi2 * big13);
    let tf = t as f64;
    let t13 = tf.cbrt();
    let shift = floor_i64(-a * ((4.0 * tf).powf(2.0 / 3.0) - c1 * (2.0 / 3.0) * t13 * 4f64.powf(4.0 / 3.0)));
    let threshold = 4.0 * tf - c1 * t13 * t13 * 4f64.powf(5.0 / 3.0)
        + c1 * c1 * (2.0 / 3.0) * t13 * 4f64.powf(7.0 / 3.0);
    Ok(TasepCritical {
        c1,
        c2,
        xi2,
        t,
        m,
        hat_left: Point::new(shift, 0),
        hat_lower: Point::new(0, shift),
        threshold,
    })
}

/// Particle label of the critical step-shock statistic and the particle
/// label of the macroscopic shock it imitates, at `a = beta T^(1/3)`.
pub fn particle_number_pair(big_t: f64, beta: f64, u: f64) -> (f64, f64) {
    let a = beta * big_t.cbrt();
    let w = a + u / a;
    let lhs = big_t / 4.0 - t23(big_t) * w / 2.0 + big_t.cbrt() * w * w / 4.0;
    let xi = u / 2.0 * (beta - 1.0) / beta;
    let rhs = big_t * (1.0 - beta).powi(2) / 4.0 + xi * big_t.cbrt();
    (lhs, rhs)
}

/// Start point `P(x, y) = (floor(-y (x t)^(2/3)), 0)` towards
/// `(floor(x t), floor(x t))` together with its centering.
pub fn timelike_start(x: f64, y: f64, t: f64) -> Result<(Point, ScalingSpec)> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    let xt = x * t;
    let p = Point::new(floor_i64(-y * t23(xt)), 0);
    let spec = ScalingSpec { t: xt, linear: 4.0, two_thirds: 2.0 * y, one_third: -y * y / 4.0, scale_coeff: two_four_thirds() };
    Ok((p, spec))
}

/// Intermediate point `P2(u)` on the way from `P(a, u)` to `(a t, a t)` at
/// height `tau t`, and the center of the piece from `P(a, u)` to it.
pub fn timelike_intermediate(tau: f64, a: f64, u: f64, t: f64) -> Result<(Point, f64)> {
    if !(a > tau && tau > 0.0) {
        return Err(Error::domain(format!("need a > tau > 0, got a={a}, tau={tau}")));
    }
    let t13 = t.cbrt();
    let t23 = t13 * t13;
    let p = Point::new(
        floor_i64(tau * t + u * t23 * (tau * a.powf(-1.0 / 3.0) - a.powf(2.0 / 3.0))),
        floor_i64(tau * t + 1.0),
    );
    let center =
        4.0 * tau * t + 2.0 * tau * t23 * u * a.powf(-1.0 / 3.0) - u * u * tau * t13 / (4.0 * a.powf(2.0 / 3.0));
    Ok((p, center))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    /// Fences the left source away from the lower one, ending right of `E+`.
    Plus,
    /// Fences the lower source away from the left one, ending above `E`.
    Minus,
}

/// Forbidden segment of the two-source problem.
pub fn forbidden_segment(
    kind: SegmentKind,
    k: f64,
    t: f64,
    a: f64,
    u: f64,
    epsilon: f64,
    thickness: u32,
) -> Result<ForbiddenRegion> {
    if !(k > 0.0) {
        return Err(Error::domain(format!("k must be positive, got {k}")));
    }
    let t23 = t23(t);
    let foot = ((k - a) * t23).floor();
    Ok(match kind {
        SegmentKind::Plus => {
            let e = eplus(t, a, u, epsilon)?.point;
            ForbiddenRegion::new((foot, 0.0), (e.x as f64 + k * t23, e.y as f64), thickness)
        }
        SegmentKind::Minus => {
            let e = critical_points(t, a, u)?.end;
            ForbiddenRegion::new((0.0, foot), (e.x as f64, e.y as f64 + k * t23), thickness)
        }
    })
}

/// Intersection of the lines carrying the two forbidden segments.
pub fn crossing_point(k: f64, t: f64, a: f64, u: f64, epsilon: f64) -> Result<(f64, f64)> {
    let plus = forbidden_segment(SegmentKind::Plus, k, t, a, u, epsilon, 0)?;
    let minus = forbidden_segment(SegmentKind::Minus, k, t, a, u, epsilon, 0)?;
    let (p, r) = (plus.from, (plus.to.0 - plus.from.0, plus.to.1 - plus.from.1));
    let (q, s) = (minus.from, (minus.to.0 - minus.from.0, minus.to.1 - minus.from.1));
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return Err(Error::domain("forbidden segments are parallel"));
    }
    let lambda = ((q.0 - p.0) * s.1 - (q.1 - p.1) * s.0) / denom;
    Ok((p.0 + lambda * r.0, p.1 + lambda * r.1))
}

/// Cells lying on some up-right path from `start` to `end` that avoids
/// `region`, one membership vector per row over columns `start.x..=end.x`.
fn admissible_cells(start: Point, end: Point, region: &ForbiddenRegion) -> Vec<Vec<bool>> {
    if !start.precedes(&end) {
        return Vec::new();
    }
    let w = (end.x - start.x + 1) as usize;
    let h = (end.y - start.y + 1) as usize;
    let free = |i: usize, j: usize| !region.contains(Point::new(start.x + i as i64, start.y + j as i64));
    let mut fwd = vec![vec![false; w]; h];
    for j in 0..h {
        for i in 0..w {
            let from_start = i == 0 && j == 0;
            let from_prev = (i > 0 && fwd[j][i - 1]) || (j > 0 && fwd[j - 1][i]);
            fwd[j][i] = (from_start || from_prev) && free(i, j);
        }
    }
    let mut both = vec![vec![false; w]; h];
    for j in (0..h).rev() {
        for i in (0..w).rev() {
            let at_end = i == w - 1 && j == h - 1;
            let to_next = (i + 1 < w && both[j][i + 1]) || (j + 1 < h && both[j + 1][i]);
            both[j][i] = fwd[j][i] && (at_end || to_next);
        }
    }
    both
}

/// Whether the restricted problems `left -> E+` avoiding the plus segment
/// and `lower -> E` avoiding the minus segment use disjoint sets of cells.
/// Cost is quadratic in `t`.
pub fn restricted_disjoint(k: f64, t: f64, a: f64, u: f64, epsilon: f64, thickness: u32) -> Result<bool> {
    let pts = critical_points(t, a, u)?;
    let ep = eplus(t, a, u, epsilon)?.point;
    let plus = forbidden_segment(SegmentKind::Plus, k, t, a, u, epsilon, thickness)?;
    let minus = forbidden_segment(SegmentKind::Minus, k, t, a, u, epsilon, thickness)?;
    let upper = admissible_cells(pts.left, ep, &plus);
    let lower = admissible_cells(pts.lower, pts.end, &minus);
    for (j, row) in upper.iter().enumerate() {
        let y = pts.left.y + j as i64;
        let jl = y - pts.lower.y;
        if jl < 0 || jl as usize >= lower.len() {
            continue;
        }
        let other = &lower[jl as usize];
        for (i, &used) in row.iter().enumerate() {
            let x = pts.left.x + i as i64;
            let il = x - pts.lower.x;
            if used && il >= 0 && (il as usize) < other.len() && other[il as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Critical perturbation `rho2 + a T^(-1/3)` of the lower density.
pub fn critical_density(rho2: f64, a: f64, big_t: f64) -> f64 {
    rho2 + a / big_t.cbrt()
}

/// Geometry of the shock between two flat regions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoDensityPoints {
    pub end: Point,
    /// Characteristic start points of the two maximizers, unfloored.
    pub s_rho1: (f64, f64),
    pub s_rho2: (f64, f64),
    /// Point on the second characteristic, `T^nu` before the end.
    pub e_rho2: Point,
}

pub fn two_density_points(rho1: f64, rho2: f64, xi: f64, s: f64, big_t: f64, nu: f64) -> Result<TwoDensityPoints> {
    if !(0.0 < rho2 && rho2 <= rho1 && rho1 < 1.0) {
        return Err(Error::domain(format!("need 0 < rho2 <= rho1 < 1, got {rho1}, {rho2}")));
    }
    let t13 = big_t.cbrt();
    let ex = (1.0 - rho1 - rho2 + rho1 * rho2) * big_t - (s - xi) * t13;
    let ey = rho1 * rho2 * big_t + xi * t13;
    let tn = big_t.powf(nu);
    let d = rho1 - rho2;
    Ok(TwoDensityPoints {
        end: Point::new(floor_i64(ex), floor_i64(ey)),
        s_rho1: ((1.0 - rho1) * d * big_t, -rho1 * d * big_t),
        s_rho2: (-(1.0 - rho2) * d * big_t, d * rho2 * big_t),
        e_rho2: Point::new(floor_i64(ex - (1.0 - rho2).powi(2) * tn), floor_i64(ey - rho2 * rho2 * tn)),
    })
}

/// `E(k) = (floor(t - k t^(2/3)), floor(t + k t^(2/3)))`.
pub fn diagonal_offset_point(t: f64, k: f64) -> Point {
    let t23 = t23(t);
    Point::new(floor_i64(t - k * t23), floor_i64(t + k * t23))
}

fn anti_diagonal_point(c: f64, t23: f64) -> Point {
    let n = floor_i64(c * t23);
    Point::new(-n, n)
}

fn window(center: Point, half: i64) -> Vec<Point> {
    (-half..=half).map(|i| center.offset(-i, i)).collect()
}

fn shifted_segment(a: Point, b: Point, dx: i64, dy: i64, thickness: u32) -> ForbiddenRegion {
    ForbiddenRegion::between(a.offset(dx, dy), b.offset(dx, dy), thickness)
}

/// Geometry of two line-to-point problems from the full anti-diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Airy1Geometry {
    pub e1: Point,
    pub e2: Point,
    pub e3: Point,
    pub e4: Point,
    pub e5: Point,
    pub e6: Point,
    /// Start windows around the characteristic feet of `e1` and `e2`.
    pub f1: Vec<Point>,
    pub f2: Vec<Point>,
    pub r1: ForbiddenRegion,
    pub r2: ForbiddenRegion,
}

pub fn airy1_geometry(t: f64, a: f64, k: f64, thickness: u32) -> Result<Airy1Geometry> {
    if !(t >= 1.0) {
        return Err(Error::domain(format!("t must be at least 1, got {t}")));
    }
    let t23 = t23(t);
    let ft = floor_i64(t);
    let shift = floor_i64(a * t23);
    let half = floor_i64(k * t23);
    let e1 = Point::new(ft, ft);
    let e2 = Point::new(ft - shift, ft + shift);
    let e3 = anti_diagonal_point(a / 4.0, t23);
    let e4 = Point::new(e3.x + e1.x, e3.y + e1.y);
    let e5 = anti_diagonal_point(3.0 * a / 4.0, t23);
    let e6 = Point::new(e5.x + e1.x, e5.y + e1.y);
    Ok(Airy1Geometry {
        e1,
        e2,
        e3,
        e4,
        e5,
        e6,
        f1: window(Point::new(0, 0), half),
        f2: window(Point::new(-shift, shift), half),
        r1: shifted_segment(e3, e4, -half, half, thickness),
        r2: shifted_segment(e5, e6, half, -half, thickness),
    })
}

/// Geometry of two line-to-point problems from the half anti-diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Airy21Geometry {
    /// `E(b)`.
    pub near: Point,
    /// `E(|b| + a)`.
    pub far: Point,
    /// `E(|b| + a/5)`.
    pub middle: Point,
    pub e7: Point,
    pub e8: Point,
    pub f3: Vec<Point>,
    pub f4: Vec<Point>,
    pub r3: ForbiddenRegion,
    pub r4: ForbiddenRegion,
}

pub fn airy21_geometry(t: f64, a: f64, b: f64, k: f64, thickness: u32) -> Result<Airy21Geometry> {
    if !(t >= 1.0) {
        return Err(Error::domain(format!("t must be at least 1, got {t}")));
    }
    let t23 = t23(t);
    let half = floor_i64(k * t23);
    let near = diagonal_offset_point(t, b);
    let far = diagonal_offset_point(t, b.abs() + a);
    let middle = diagonal_offset_point(t, b.abs() + a / 5.0);
    let e7 = anti_diagonal_point(b.abs() + a, t23);
    let e8 = anti_diagonal_point(b.abs() + a / 5.0, t23);
    Ok(Airy21Geometry {
        near,
        far,
        middle,
        e7,
        e8,
        f3: window(e7, half),
        f4: window(e8, half),
        r3: shifted_segment(e8, middle, -half, half, thickness),
        r4: shifted_segment(e7, far, half, -half, thickness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pp_values() {
        let s = mu_sigma_pp(1.0, 1.0).unwrap();
        assert_eq!(s.linear, 4.0);
        assert!(close(s.scale_coeff, two_four_thirds(), 1e-15));
        assert_eq!(mu_sigma_pp(4.0, 1.0).unwrap().linear, 9.0);
        for eta in [1.0 - 1e-6, 1.0 + 1e-6] {
            assert!(close(mu_sigma_pp(eta, 1.0).unwrap().scale_coeff, two_four_thirds(), 1e-5));
        }
        assert!(mu_sigma_pp(0.0, 1.0).is_err());
        assert!(mu_sigma_pp(-1.0, 1.0).is_err());
    }

    #[test]
    fn mu_a_values() {
        assert!(close(mu_a(1.0, 1.0, 0.0).unwrap().center(), 5.75, 1e-14));
        assert!(close(mu_a(1.0, 2.0, 2.0).unwrap().center(), 7.75, 1e-14));
        assert!(mu_a(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn mu_a_matches_tilted_point_to_point() {
        let t = 1e6;
        for (a, u) in [(1.0, 0.0), (2.0, 0.0), (4.0, 0.0), (2.0, 1.5)] {
            let w: f64 = a + u / a;
            let spec = mu_a(t, a, u).unwrap();
            let pp = point_to_point(t + w * t23(t), t).unwrap();
            let third_term = (w * w / 4.0) * t.cbrt();
            assert!((pp.center() - spec.center()).abs() <= 0.1 * third_term, "a={a} u={u}");
            assert!(close(pp.scale() / spec.scale(), 1.0, 0.05));
        }
    }

    #[test]
    fn eplus_degenerations() {
        let (t, a, u) = (1000.0, 2.0, 1.0);
        let e = critical_points(t, a, u).unwrap();
        let zero = eplus(t, a, u, 0.0).unwrap();
        assert_eq!(zero.point, e.end);
        assert_eq!(zero.spec.center(), 0.0);
        assert_eq!(zero.c_eps, 1.0);
        let one = eplus(t, a, u, 1.0).unwrap();
        assert_eq!(one.point, e.left);
        assert!(eplus(t, a, u, 1.5).is_err());
        assert!(eplus(t, a, u, -0.1).is_err());
    }

    #[test]
    fn split_identity() {
        let (a, u, eps) = (2.0f64, 1.0f64, 0.3f64);
        let w = u / a + a;
        let r1 = w * (1.0 - eps);
        let r2 = -r1 + w;
        let lhs = r2 * r2 / (4.0 * eps) + r1 * r1 / (4.0 * (1.0 - eps));
        assert!(close(lhs, w * w / 4.0, 1e-12));
    }

    #[test]
    fn eplus_and_remainder_centers_add_up() {
        let (t, a, u, eps) = (1e6, 4.0, 0.5, 0.3);
        let e = eplus(t, a, u, eps).unwrap();
        let w = u / a + a;
        let head = point_to_point((1.0 - eps) * t + w * (1.0 - eps) * t23(t), (1.0 - eps) * t).unwrap();
        let total = mu_a(t, a, u).unwrap().center();
        assert!((head.center() + e.spec.center() - total).abs() < 0.1 * (w * w / 4.0) * t.cbrt());
    }

    #[test]
    fn shock_parameters() {
        let p = gue_shock_params(0.5).unwrap();
        assert_eq!((p.rho1, p.rho2), (0.25, 0.75));
        assert!(close(p.sigma1, 1.5f64.powf(2.0 / 3.0), 1e-15));
        let p0 = gue_shock_params(0.0).unwrap();
        assert!(close(p0.sigma1, 2f64.powf(-1.0 / 3.0), 1e-15));
        assert!(close(p0.sigma2, 2f64.powf(-1.0 / 3.0), 1e-15));
        assert!(gue_shock_params(1.0).is_err());
        let (c1, c2) = goe_shock_constants(0.4, 0.4).unwrap();
        assert_eq!(c1, c2);
        assert!(goe_shock_constants(1.0, 0.4).is_err());
    }

    #[test]
    fn tasep_constants_cancellation() {
        let c = tasep_critical_constants(1e6, 2.0, -4.0, 0.0).unwrap();
        assert_eq!(c.c1, 0.0);
        assert_eq!(c.t, 250_000);
        assert!(tasep_critical_constants(1e6, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn tasep_constants_match_high_precision_values() {
        // Reference values evaluated with 50-digit arithmetic.
        let c = tasep_critical_constants(1e6, 1.0, 0.0, 0.0).unwrap();
        assert_eq!((c.c1, c.c2, c.xi2), (-0.5, 0.0, 0.5));
        assert_eq!(c.t, 245_000);
        assert_eq!(c.m, 245_050);
        assert_eq!(c.hat_left, Point::new(-9999, 0));
        assert_eq!(c.hat_lower, Point::new(0, -9999));
        assert!(close(c.threshold, 999_997.313_353_349_5, 1e-6));
        assert_eq!(c.position_threshold(), 50);
    }

    #[test]
    fn particle_number_remainder_is_order_t_minus_third() {
        // The remainder is exactly u^2 / (4 beta^2) T^(-1/3).
        let (beta, u) = (0.05, 1.0);
        for big_t in [1e6, 8e6, 6.4e7] {
            let (lhs, rhs) = particle_number_pair(big_t, beta, u);
            let expected = u * u / (4.0 * beta * beta) / big_t.cbrt();
            assert!(close(lhs - rhs, expected, 1e-6 * big_t.cbrt()), "T={big_t}: {}", lhs - rhs);
        }
    }

    #[test]
    fn timelike_degenerations() {
        let (p, spec) = timelike_start(2.0, 0.0, 500.0).unwrap();
        assert_eq!(p, Point::new(0, 0));
        assert_eq!(spec.center(), 4000.0);
        let (p2, c) = timelike_intermediate(1.0, 4.0, 0.0, 500.0).unwrap();
        assert_eq!(p2, Point::new(500, 501));
        assert_eq!(c, 2000.0);
        assert!(timelike_intermediate(4.0, 4.0, 0.0, 500.0).is_err());
        assert!(timelike_start(0.0, 1.0, 500.0).is_err());
    }

    #[test]
    fn timelike_centers_are_additive() {
        let (t, tau, a, u) = (1e6, 1.0, 4.0, 1.0);
        let (p, whole) = timelike_start(a, u, t).unwrap();
        let (p2, head) = timelike_intermediate(tau, a, u, t).unwrap();
        let end = Point::new((a * t).floor() as i64, (a * t).floor() as i64);
        let head_pp = point_to_point((p2.x - p.x) as f64, (p2.y - p.y) as f64).unwrap();
        let tail = point_to_point((end.x - p2.x) as f64, (end.y - p2.y) as f64).unwrap();
        assert!((head_pp.center() - head).abs() < 0.1 * t.cbrt());
        assert!((head + tail.center() - whole.center()).abs() < 0.1 * t.cbrt());
    }

    #[test]
    fn segment_foot_at_origin_when_k_equals_a() {
        let r = forbidden_segment(SegmentKind::Plus, 3.0, 1000.0, 3.0, 0.0, 0.8, 2).unwrap();
        assert_eq!(r.from, (0.0, 0.0));
        let r = forbidden_segment(SegmentKind::Minus, 3.0, 1000.0, 3.0, 0.0, 0.8, 2).unwrap();
        assert_eq!(r.from, (0.0, 0.0));
        assert!(forbidden_segment(SegmentKind::Plus, 0.0, 1000.0, 3.0, 0.0, 0.8, 2).is_err());
    }

    #[test]
    fn segments_cross_near_predicted_row() {
        let (t, a, k) = (1e8, 4.0, 1.0);
        let (x, y) = crossing_point(k, t, a, 0.0, 0.5).unwrap();
        let target = t * (1.0 - k / a);
        let tol = 10.0 * t23(t);
        assert!((x - target).abs() < tol && (y - target).abs() < tol, "({x}, {y})");
    }

    #[test]
    fn restricted_problems_are_disjoint_when_eps_exceeds_ratio() {
        let (t, a) = (300.0, 4.0);
        let k = schedule_k(a);
        let eps = schedule_eps(a).unwrap();
        assert!(eps > k / a);
        assert!(restricted_disjoint(k, t, a, 0.0, eps, SEGMENT_THICKNESS).unwrap());
        // With the intermediate point beyond the crossing the fences overlap.
        assert!(!restricted_disjoint(k, t, a, 0.0, 0.05, SEGMENT_THICKNESS).unwrap());
    }

    #[test]
    fn schedules() {
        assert!(schedule_eps(1.0).is_err());
        for a in [2.0, 4.0, 8.0, 16.0, 100.0] {
            let e = schedule_eps(a).unwrap();
            assert!(e > schedule_k(a) / a && e < 1.0);
        }
        assert_eq!(schedule_eps(16.0).unwrap(), 0.5);
    }

    #[test]
    fn two_density_geometry() {
        let g = two_density_points(0.5, 0.5, 0.0, 0.0, 1e6, DEFAULT_NU).unwrap();
        assert_eq!(g.s_rho1, (0.0, -0.0));
        assert_eq!(g.s_rho2, (-0.0, 0.0));
        let big_t = 1e6;
        let (r1, r2) = (0.8, 0.2);
        let g = two_density_points(r1, r2, 0.0, 0.0, big_t, DEFAULT_NU).unwrap();
        let d = ((g.s_rho1.0 - g.s_rho2.0).powi(2) + (g.s_rho1.1 - g.s_rho2.1).powi(2)).sqrt();
        let ratio = d / ((r1 - r2) * big_t);
        assert!(ratio > 0.1 && ratio < 10.0, "{ratio}");
        let g0 = two_density_points(r1, r2, 0.3, 0.7, big_t, 0.0).unwrap();
        let ex = (1.0 - r1 - r2 + r1 * r2) * big_t - 0.4 * big_t.cbrt();
        let ey = r1 * r2 * big_t + 0.3 * big_t.cbrt();
        assert_eq!(g0.e_rho2, Point::new((ex - 0.64).floor() as i64, (ey - 0.04).floor() as i64));
        assert!(two_density_points(0.2, 0.8, 0.0, 0.0, big_t, DEFAULT_NU).is_err());
    }

    #[test]
    fn airy1_points() {
        let g = airy1_geometry(1000.0, 0.0, 1.0, 2).unwrap();
        assert_eq!(g.e1, g.e2);
        let g = airy1_geometry(1000.0, 2.0, 0.2, 2).unwrap();
        assert_eq!(g.e4, Point::new(g.e3.x + g.e1.x, g.e3.y + g.e1.y));
        assert_eq!(g.e2, Point::new(800, 1200));
        assert_eq!(g.f2[g.f2.len() / 2], Point::new(-200, 200));
        assert_eq!(g.f1.len(), 41);
    }

    #[test]
    fn airy21_points() {
        let g = airy21_geometry(1000.0, 2.0, -0.5, 0.2, 2).unwrap();
        assert_eq!(g.near, Point::new(1050, 950));
        assert_eq!(g.far, Point::new(750, 1250));
        assert_eq!(g.e7, Point::new(-250, 250));
        assert_eq!(g.f3[g.f3.len() / 2], g.e7);
    }
}
