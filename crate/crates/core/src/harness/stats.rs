//! Empirical distribution functions and the comparisons built on them.

use crate::{Error, Result};
use serde::Serialize;

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Statistics("empty sample".into()));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Statistics("sample contains NaN".into()));
    }
    Ok(())
}

/// One-dimensional empirical distribution function.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        check_samples(samples)?;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= s) as f64 / self.len() as f64
    }

    /// Fraction of samples `< s`.
    pub fn eval_below(&self, s: f64) -> f64 {
        self.sorted.partition_point(|&x| x < s) as f64 / self.len() as f64
    }

    /// Smallest sample `x` with `F(x) >= p`, for `p` in `(0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let rank = (p * n as f64).ceil().clamp(1.0, n as f64) as usize;
        self.sorted[rank - 1]
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let n = self.len() as f64;
        self.sorted.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0)
    }
}

/// Empirical distribution function of paired samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf2 {
    pairs: Vec<(f64, f64)>,
}

impl Ecdf2 {
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Statistics("empty sample".into()));
        }
        if pairs.iter().any(|(x, y)| x.is_nan() || y.is_nan()) {
            return Err(Error::Statistics("sample contains NaN".into()));
        }
        Ok(Ecdf2 { pairs: pairs.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Fraction of pairs with `x <= s1` and `y <= s2`.
    pub fn eval(&self, s1: f64, s2: f64) -> f64 {
        self.pairs.iter().filter(|(x, y)| *x <= s1 && *y <= s2).count() as f64 / self.len() as f64
    }

    pub fn marginals(&self) -> (Ecdf, Ecdf) {
        let xs: Vec<f64> = self.pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = self.pairs.iter().map(|p| p.1).collect();
        (Ecdf::new(&xs).expect("nonempty"), Ecdf::new(&ys).expect("nonempty"))
    }
}

/// `sup_x |F_n(x) - F(x)|` for a right-continuous `reference`.
///
/// Both sides of every jump of `F_n` are compared; the left limit of the
/// reference is taken at the next float below the sample.
pub fn ks_distance(ecdf: &Ecdf, reference: impl Fn(f64) -> f64) -> f64 {
    let n = ecdf.len() as f64;
    let xs = ecdf.sorted();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((at - reference(x)).abs()).max((below - reference(x.next_down())).abs());
        i = j;
    }
    d
}

/// `sup_x |F_1(x) - F_2(x)|`.
pub fn two_sample_ks(a: &Ecdf, b: &Ecdf) -> f64 {
    let (xs, ys) = (a.sorted(), b.sorted());
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() || j < ys.len() {
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic at level 1%.
pub fn two_sample_ks_critical_1pct(n: usize, m: usize) -> f64 {
    1.63 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// `sqrt(p (1 - p) / n)`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Largest difference between a joint distribution function and a product
/// over a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecouplingGap {
    /// `sup (joint - product)`.
    pub signed_sup: f64,
    /// `sup |joint - product|`.
    pub abs_sup: f64,
    /// Grid point where `signed_sup` is attained.
    pub at: (f64, f64),
    /// Binomial standard error of the joint value at `at`.
    pub se: f64,
}

/// Gap between `joint` and the product of its own empirical marginals.
pub fn decoupling_gap(joint: &Ecdf2, grid: &[(f64, f64)]) -> Result<DecouplingGap> {
    let (f1, f2) = joint.marginals();
    decoupling_gap_with(joint, grid, |s1, s2| f1.eval(s1) * f2.eval(s2))
}

/// Gap between `joint` and an arbitrary `product`.
pub fn decoupling_gap_with(
    joint: &Ecdf2,
    grid: &[(f64, f64)],
    product: impl Fn(f64, f64) -> f64,
) -> Result<DecouplingGap> {
    if grid.is_empty() {
        return Err(Error::Statistics("decoupling gap needs a nonempty grid".into()));
    }
    let mut best = DecouplingGap { signed_sup: f64::NEG_INFINITY, abs_sup: 0.0, at: grid[0], se: 0.0 };
    for &(s1, s2) in grid {
        let j = joint.eval(s1, s2);
        let g = j - product(s1, s2);
        best.abs_sup = best.abs_sup.max(g.abs());
        if g > best.signed_sup {
            best.signed_sup = g;
            best.at = (s1, s2);
            best.se = binomial_se(j, joint.len());
        }
    }
    Ok(best)
}

/// Standard error of the `p`-quantile from the spread of the order
/// statistics one binomial standard deviation either side of it.
pub fn quantile_se(ecdf: &Ecdf, p: f64) -> f64 {
    let n = ecdf.len() as f64;
    let sd = (p * (1.0 - p) / n).sqrt();
    let lo = ecdf.quantile((p - sd).max(1.0 / n));
    let hi = ecdf.quantile((p + sd).min(1.0));
    (hi - lo) / 2.0
}

/// Interquartile range and its standard error.
pub fn iqr(ecdf: &Ecdf) -> (f64, f64) {
    let spread = ecdf.quantile(0.75) - ecdf.quantile(0.25);
    let se = quantile_se(ecdf, 0.75).hypot(quantile_se(ecdf, 0.25));
    (spread, se)
}

/// Least-squares line `y = slope x + intercept`; `None` for fewer than two
/// distinct abscissae.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
