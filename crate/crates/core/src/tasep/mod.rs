//! Totally asymmetric simple exclusion on a finite window of labels.
//!
//! Particles are labelled right to left, so `x_{n+1} < x_n`. Two exact
//! samplers are provided: continuous-time dynamics with exponential clocks,
//! and the row-by-row last-passage coupling
//! `x_n(T) = max{m : L_{start -> (m, n)} <= T} - n`.
//!
//! A window `[first_label, last_label]` omits the particles to the right of
//! `first_label`. Both samplers track which labels could have felt that
//! omission and report them as contaminated.

use crate::lattice::{Point, Rational};
use crate::lpp::StartSet;
use crate::weights::{Seed, WeightField, WeightSource};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum InitKind {
    /// `x_n = -n` for `-gap <= n <= 0` and `-n - gap` for `n >= 1`, with
    /// `gap = floor(a T^(2/3))`.
    StepA { a: f64, gap: i64 },
    /// Same shape with `gap = floor(beta T)`.
    ShockBeta { beta: f64, gap: i64 },
    /// `x_n = -floor(n / density)` for all `n`.
    Flat { density: Rational },
    /// Flat with `rho1` for `n <= 0` and `rho2` for `n > 0`.
    TwoDensity { rho1: Rational, rho2: Rational },
}

/// Initial configuration restricted to a window of labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TasepInit {
    pub kind: InitKind,
    pub first_label: i64,
    pub last_label: i64,
}

impl TasepInit {
    pub fn step_a(a: f64, horizon: f64, first_label: i64, last_label: i64) -> Result<Self> {
        if !(a >= 0.0) {
            return Err(Error::domain(format!("a must be nonnegative, got {a}")));
        }
        let gap = (a * horizon.cbrt().powi(2)).floor() as i64;
        Self::checked(InitKind::StepA { a, gap }, first_label, last_label)
    }

    pub fn shock_beta(beta: f64, horizon: f64, first_label: i64, last_label: i64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("beta must lie in (0, 1), got {beta}")));
        }
        let gap = (beta * horizon).floor() as i64;
        Self::checked(InitKind::ShockBeta { beta, gap }, first_label, last_label)
    }

    pub fn flat(density: Rational, first_label: i64, last_label: i64) -> Result<Self> {
        if !density.is_proper_density() {
            return Err(Error::domain(format!("density must lie in (0, 1), got {density}")));
        }
        Self::checked(InitKind::Flat { density }, first_label, last_label)
    }

    pub fn two_density(rho1: Rational, rho2: Rational, first_label: i64, last_label: i64) -> Result<Self> {
        if !(rho1.is_proper_density() && rho2.is_proper_density() && rho1.to_f64() > rho2.to_f64()) {
            return Err(Error::domain(format!("need 1 > rho1 > rho2 > 0, got {rho1}, {rho2}")));
        }
        Self::checked(InitKind::TwoDensity { rho1, rho2 }, first_label, last_label)
    }

    fn checked(kind: InitKind, first_label: i64, last_label: i64) -> Result<Self> {
        let init = TasepInit { kind, first_label, last_label };
        if first_label > last_label {
            return Err(Error::domain(format!("empty label window [{first_label}, {last_label}]")));
        }
        if let Some(lo) = init.lowest_label() {
            if first_label < lo {
                return Err(Error::domain(format!("label {first_label} does not exist; labels start at {lo}")));
            }
        }
        Ok(init)
    }

    /// Smallest label of the full configuration, if bounded.
    pub fn lowest_label(&self) -> Option<i64> {
        match self.kind {
            InitKind::StepA { gap, .. } | InitKind::ShockBeta { gap, .. } => Some(-gap),
            InitKind::Flat { .. } | InitKind::TwoDensity { .. } => None,
        }
    }

    pub fn has_label(&self, n: i64) -> bool {
        self.lowest_label().is_none_or(|lo| n >= lo)
    }

    /// `x_n(0)` of the full configuration.
    pub fn position(&self, n: i64) -> Option<i64> {
        if !self.has_label(n) {
            return None;
        }
        Some(match &self.kind {
            InitKind::StepA { gap, .. } | InitKind::ShockBeta { gap, .. } => {
                if n <= 0 {
                    -n
                } else {
                    -n - gap
                }
            }
            InitKind::Flat { density } => -density.floor_div(n),
            InitKind::TwoDensity { rho1, rho2 } => {
                if n <= 0 {
                    -rho1.floor_div(n)
                } else {
                    -rho2.floor_div(n)
                }
            }
        })
    }

    /// Column `x_n(0) + n` of the start point in row `n`.
    pub fn start_column(&self, n: i64) -> Option<i64> {
        self.position(n).map(|x| x + n)
    }

    /// Start points of the labels in `[lo, hi]` (`lo = None`: all labels).
    fn start_set(&self, lo: Option<i64>, hi: i64) -> StartSet {
        let lo = match (lo, self.lowest_label()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        match &self.kind {
            InitKind::StepA { .. } | InitKind::ShockBeta { .. } => {
                let lo = lo.expect("bounded family");
                StartSet::finite((lo..=hi).map(|n| Point::new(self.start_column(n).unwrap(), n)))
            }
            InitKind::Flat { density } => StartSet::Staircase { density: *density, min_label: lo, max_label: Some(hi) },
            InitKind::TwoDensity { rho1, rho2 } => {
                let mut parts = Vec::new();
                if lo.is_none_or(|l| l <= 0) {
                    parts.push(StartSet::Staircase { density: *rho1, min_label: lo, max_label: Some(hi.min(0)) });
                }
                if hi >= 1 {
                    let l2 = lo.map_or(1, |l| l.max(1));
                    parts.push(StartSet::Staircase { density: *rho2, min_label: Some(l2), max_label: Some(hi) });
                }
                StartSet::union(parts)
            }
        }
    }

    /// Start set of the labels inside the window.
    pub fn window_start_set(&self) -> StartSet {
        self.start_set(Some(self.first_label), self.last_label)
    }

    /// Column of the nearest start point outside the window on the right,
    /// i.e. that of label `first_label - 1`.
    fn frontier(&self) -> Option<i64> {
        self.start_column(self.first_label - 1)
    }
}

/// Start set and end point whose last-passage time `L` satisfies
/// `P(x_n(T) >= m - n) = P(L <= T)`, for the full configuration.
pub fn tasep_to_lpp(init: &TasepInit, n: i64, m: i64) -> Result<(StartSet, Point)> {
    if !init.has_label(n) {
        return Err(Error::domain(format!("label {n} does not exist")));
    }
    Ok((init.start_set(None, n), Point::new(m, n)))
}

/// Particle positions at a fixed time over a window of labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TasepState {
    pub time: f64,
    pub first_label: i64,
    /// `positions[i]` is the position of label `first_label + i`.
    pub positions: Vec<i64>,
    /// Labels `first_label..=c` may differ from the untruncated system.
    pub contaminated_through: Option<i64>,
}

impl TasepState {
    pub fn position(&self, n: i64) -> Option<i64> {
        let i = n.checked_sub(self.first_label)?;
        usize::try_from(i).ok().and_then(|i| self.positions.get(i).copied())
    }

    pub fn last_label(&self) -> i64 {
        self.first_label + self.positions.len() as i64 - 1
    }

    /// Smallest label that is known to be exact.
    pub fn first_clean_label(&self) -> i64 {
        self.contaminated_through.map_or(self.first_label, |c| c + 1)
    }
}

fn contamination_error(label: i64) -> Error {
    Error::BufferExhausted(format!("label {label} may have felt the window boundary"))
}

/// Exclusion dynamics up to time `horizon` with rate-1 clocks.
///
/// Each step draws the waiting time `Exp(#movable)` and then a uniformly
/// chosen movable particle. Returns an error if a label at or above
/// `observed_from` becomes contaminated.
pub fn simulate_tasep(init: &TasepInit, horizon: f64, seed: &Seed, observed_from: Option<i64>) -> Result<TasepState> {
    let mut rng = seed.stream(0);
    let first = init.first_label;
    let count = (init.last_label - first + 1) as usize;
    let mut pos: Vec<i64> = (0..count).map(|i| init.position(first + i as i64).unwrap()).collect();
    const ABSENT: u32 = u32::MAX;
    let mut movable: Vec<u32> = Vec::with_capacity(count);
    let mut slot = vec![ABSENT; count];
    let blocked = |pos: &[i64], i: usize| i > 0 && pos[i - 1] == pos[i] + 1;
    for i in 0..count {
        if !blocked(&pos, i) {
            slot[i] = movable.len() as u32;
            movable.push(i as u32);
        }
    }
    // Next label that can be contaminated and the site that triggers it.
    let mut watch: Option<(usize, i64)> = init.position(first - 1).map(|x| (0, x));
    let mut contaminated_through = None;
    let mut time = 0.0;
    while !movable.is_empty() {
        let dt = rng.next_exp(movable.len() as f64);
        if time + dt > horizon {
            break;
        }
        time += dt;
        let i = movable[rng.next_below(movable.len())] as usize;
        let before = pos[i];
        pos[i] += 1;
        debug_assert!(i == 0 || pos[i] < pos[i - 1]);
        if let Some((w, threshold)) = watch {
            if w == i && pos[i] >= threshold {
                let label = first + i as i64;
                contaminated_through = Some(label);
                if observed_from.is_some_and(|o| label >= o) {
                    return Err(contamination_error(label));
                }
                watch = (i + 1 < count).then_some((i + 1, before));
            }
        }
        if blocked(&pos, i) {
            let s = slot[i] as usize;
            let last = *movable.last().unwrap();
            movable.swap_remove(s);
            if s < movable.len() {
                slot[last as usize] = s as u32;
            }
            slot[i] = ABSENT;
        }
        if i + 1 < count && slot[i + 1] == ABSENT {
            slot[i + 1] = movable.len() as u32;
            movable.push((i + 1) as u32);
        }
    }
    Ok(TasepState { time: horizon, first_label: first, positions: pos, contaminated_through })
}

/// Positions at time `horizon` through the last-passage coupling on the
/// weight field of `seed`, zero on the window's start points.
///
/// Row `n` of the sweep only needs the columns up to `max{m : L(m, n-1) <= T}`;
/// the first row is cut at a Poisson tail bound and an error is returned if
/// that bound is reached. Rows whose answer depends on start points outside
/// the window count as contaminated.
pub fn sample_via_lpp(init: &TasepInit, horizon: f64, seed: &Seed, observed_from: Option<i64>) -> Result<TasepState> {
    let field = WeightField::new(seed.clone()).with_zero_set(init.window_start_set());
    positions_from_lpp(init, horizon, &field, observed_from)
}

/// [`sample_via_lpp`] on a caller-supplied field. The field must vanish on
/// the window's start points.
pub fn positions_from_lpp<W: WeightSource + ?Sized>(
    init: &TasepInit,
    horizon: f64,
    field: &W,
    observed_from: Option<i64>,
) -> Result<TasepState> {
    let first = init.first_label;
    let frontier = init.frontier();
    let mut positions = Vec::with_capacity((init.last_label - first + 1) as usize);
    let mut contaminated_through = None;
    let mut prev: Vec<f64> = Vec::new();
    let mut prev_lo = 0i64;
    let mut lo = i64::MAX;
    let mut hi = 0i64;
    let mut weights = Vec::new();
    let mut cur = Vec::new();
    for n in first..=init.last_label {
        let start = init.start_column(n).expect("label in window");
        lo = lo.min(start);
        let capped = n == first;
        if capped {
            hi = start + (horizon + 10.0 * horizon.sqrt() + 20.0).ceil() as i64;
        }
        let width = (hi - lo + 1) as usize;
        weights.resize(width, 0.0);
        field.fill_row(n, lo, &mut weights);
        cur.clear();
        cur.resize(width, f64::NEG_INFINITY);
        let mut last_ok = lo - 1;
        let mut exceeded = false;
        let mut left = f64::NEG_INFINITY;
        for (i, &w) in weights.iter().enumerate() {
            let m = lo + i as i64;
            let below = m - prev_lo;
            let down = if n > first && below >= 0 && (below as usize) < prev.len() {
                prev[below as usize]
            } else {
                f64::NEG_INFINITY
            };
            let origin = if m == start { 0.0 } else { f64::NEG_INFINITY };
            let g = w + left.max(down).max(origin);
            cur[i] = g;
            left = g;
            if g > horizon {
                exceeded = true;
                cur.truncate(i + 1);
                break;
            }
            last_ok = m;
        }
        if capped && !exceeded {
            return Err(Error::BufferExhausted(format!("first row passed column {hi} before time {horizon}")));
        }
        if frontier.is_some_and(|f| last_ok + 1 >= f) {
            contaminated_through = Some(n);
            if observed_from.is_some_and(|o| n >= o) {
                return Err(contamination_error(n));
            }
        }
        positions.push(last_ok - n);
        std::mem::swap(&mut prev, &mut cur);
        prev_lo = lo;
        hi = last_ok;
    }
    Ok(TasepState { time: horizon, first_label: first, positions, contaminated_through })
}

/// Particle density per bin of `xi = site / T`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityProfile {
    pub horizon: f64,
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub values: Vec<f64>,
    /// Whether every site of the bin is accounted for by exact particles.
    pub valid: Vec<bool>,
}

/// Histogram of occupied sites over `xi in [xi_lo, xi_hi)`.
///
/// A bin is valid when it lies between the leftmost simulated particle
/// (if labels beyond the window exist) and the rightmost exact particle
/// (if particles right of the window exist).
pub fn empirical_density(
    init: &TasepInit,
    state: &TasepState,
    bin_width: f64,
    xi_range: (f64, f64),
) -> Result<DensityProfile> {
    if !(bin_width > 0.0) || !(xi_range.1 > xi_range.0) {
        return Err(Error::domain("need a positive bin width and a nonempty range"));
    }
    let horizon = state.time;
    let bins = ((xi_range.1 - xi_range.0) / bin_width).round() as usize;
    let edge = |j: usize| ((xi_range.0 + j as f64 * bin_width) * horizon).ceil() as i64;
    let lower_ok = if init.has_label(state.last_label() + 1) {
        state.positions.last().copied().unwrap_or(i64::MAX)
    } else {
        i64::MIN
    };
    let upper_ok = if init.has_label(state.first_label - 1) {
        state.position(state.first_clean_label()).unwrap_or(i64::MIN)
    } else {
        i64::MAX
    };
    let mut counts = vec![0u64; bins];
    for &x in &state.positions {
        let xi = x as f64 / horizon;
        if xi >= xi_range.0 && x >= edge(0) && x < edge(bins) {
            let mut j = ((xi - xi_range.0) / bin_width) as usize;
            j = j.min(bins - 1);
            while j > 0 && x < edge(j) {
                j -= 1;
            }
            while j + 1 < bins && x >= edge(j + 1) {
                j += 1;
            }
            counts[j] += 1;
        }
    }
    let mut centers = Vec::with_capacity(bins);
    let mut values = Vec::with_capacity(bins);
    let mut valid = Vec::with_capacity(bins);
    for (j, &c) in counts.iter().enumerate() {
        let (a, b) = (edge(j), edge(j + 1));
        let sites = (b - a).max(1) as f64;
        centers.push(xi_range.0 + (j as f64 + 0.5) * bin_width);
        values.push(c as f64 / sites);
        valid.push(a >= lower_ok && b - 1 <= upper_ok);
    }
    Ok(DensityProfile { horizon, bin_width, centers, values, valid })
}
