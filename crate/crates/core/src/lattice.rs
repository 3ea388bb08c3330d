use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A site of Z^2. `x` is the column (horizontal coordinate), `y` the row.
///
/// Points are ordered row-major: first by `y`, then by `x`. This is the order
/// in which the dynamic programme visits cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// True when `other` can be reached from `self` by up-right steps.
    pub fn precedes(&self, other: &Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn offset(&self, dx: i64, dy: i64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

/// A reduced fraction `num / den` with `den > 0`. Densities of periodic
/// initial conditions are rational so that `floor(n / rho)` is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "String")]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Rational {
    pub fn new(num: i64, den: i64) -> crate::Result<Self> {
        if den == 0 {
            return Err(crate::Error::Parse("zero denominator".into()));
        }
        // Widened so that i64::MIN survives sign normalisation.
        let (n, d) = (num as i128, den as i128);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        let fit = |v: i128| i64::try_from(v).map_err(|_| crate::Error::Parse(format!("{num}/{den} is out of range")));
        Ok(Rational { num: fit(s * n / g)?, den: fit(s * d / g)? })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(n / self)` computed exactly. Requires `self > 0`.
    pub fn floor_div(&self, n: i64) -> i64 {
        (n as i128 * self.den as i128).div_euclid(self.num as i128) as i64
    }

    /// True when `0 < self < 1`.
    pub fn is_proper_density(&self) -> bool {
        self.num > 0 && self.num < self.den
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

/// Accepts `"p/q"`, a decimal literal such as `"0.75"`, or an integer.
impl std::str::FromStr for Rational {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let bad = || crate::Error::Parse(format!("not a rational number: `{s}`"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
            || frac_part.len() > 12
            || int_part.len() > 6
        {
            return Err(bad());
        }
        let den = 10i64.pow(frac_part.len() as u32);
        let ip: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let fp: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = ip.checked_mul(den).and_then(|v| v.checked_add(fp)).ok_or_else(bad)?;
        Rational::new(if neg { -num } else { num }, den)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Number(serde_json::Number),
}

impl TryFrom<RationalRepr> for Rational {
    type Error = crate::Error;

    fn try_from(r: RationalRepr) -> crate::Result<Self> {
        match r {
            RationalRepr::Text(s) => s.parse(),
            RationalRepr::Number(n) => n.to_string().parse(),
        }
    }
}
