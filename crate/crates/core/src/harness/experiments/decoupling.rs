//! Joint laws of two passage times: sandwich bounds, FKG floors and
//! decoupling gaps as the two ends move apart.

use super::{
    compare_to_reference, config_error, finite, fkg_check, record_gap, replicate, trend_check, Params,
};
use crate::harness::config::{ExperimentConfig, ExperimentId};
use crate::harness::report::{Check, ExperimentReport, SandwichRow, SandwichTable};
use crate::harness::stats::{binomial_se, Ecdf, Ecdf2};
use crate::lattice::Point;
use crate::lpp::{sweep, Problem, StartSet};
use crate::refdist::{f_goe, f_gue, product_limit, sandwich_bounds, two_four_thirds, SandwichParams, Scale};
use crate::scalings::{
    airy1_geometry, airy21_geometry, critical_points, eplus, forbidden_segment, mu_a, schedule_eps, schedule_k,
    timelike_start, SegmentKind, SEGMENT_THICKNESS,
};
use crate::weights::WeightField;
use crate::Result;

/// Geometry and free parameters of the upper bound at one `a`.
pub(super) struct SandwichSetup {
    pub a: f64,
    pub u: f64,
    pub k: f64,
    pub epsilon: f64,
    pub deltas: Vec<f64>,
}

impl SandwichSetup {
    /// Defaults `k = sqrt(a)` and the epsilon schedule; `scalings` and
    /// `delta` override them. Without `delta` the bound is minimised over
    /// a grid of deltas, which is legitimate since it holds for each one.
    pub fn resolve(p: &Params, a: f64, u: f64) -> Result<Self> {
        let sc = p.cfg.scalings();
        let k = sc.k.unwrap_or_else(|| schedule_k(a));
        let epsilon = match sc.epsilon {
            Some(e) => e,
            None => schedule_eps(a)?,
        };
        let deltas = match p.cfg.delta {
            Some(d) => vec![d],
            None => (1..=80).map(|i| i as f64 * 0.05).collect(),
        };
        let setup = SandwichSetup { a, u, k, epsilon, deltas };
        for &delta in &setup.deltas {
            setup.params(delta, 0.0).validate().map_err(|e| config_error(format!("sandwich at a = {a}: {e}")))?;
        }
        Ok(setup)
    }

    fn params(&self, delta: f64, surrogate: f64) -> SandwichParams {
        SandwichParams { u: self.u, a: self.a, k: self.k, epsilon: self.epsilon, delta, surrogate }
    }

    /// Lower bound and the smallest upper bound over the delta grid.
    fn bounds(&self, s: f64, surrogate: f64, scale: Scale) -> Result<(f64, f64, f64)> {
        let mut lower = 0.0;
        let mut best = (f64::INFINITY, self.deltas[0]);
        for &delta in &self.deltas {
            let b = sandwich_bounds(s, &self.params(delta, surrogate), scale)?;
            lower = b.lower;
            if b.upper < best.0 {
                best = (b.upper, delta);
            }
        }
        Ok((lower, best.0, best.1))
    }
}

/// Sandwich table of `ecdf` plus both containment checks.
pub(super) fn sandwich_table(
    name: &str,
    setup: &SandwichSetup,
    surrogate: f64,
    grid: &[f64],
    ecdf: &Ecdf,
    scale: Scale,
) -> Result<SandwichTable> {
    let n = ecdf.len();
    let mut rows = Vec::with_capacity(grid.len());
    let mut deltas = Vec::with_capacity(grid.len());
    for &s in grid {
        let (lower, upper, delta) = setup.bounds(s, surrogate, scale)?;
        let empirical = ecdf.eval(s);
        rows.push(SandwichRow { s, empirical, lower, upper, se: binomial_se(empirical, n) });
        deltas.push(delta);
    }
    let single_delta = deltas.windows(2).all(|w| w[0] == w[1]);
    Ok(SandwichTable {
        name: name.to_string(),
        a: setup.a,
        k: setup.k,
        epsilon: setup.epsilon,
        delta: single_delta.then(|| deltas[0]),
        surrogate,
        rows,
    })
}

/// Counts grid points where the empirical law lies more than three
/// standard errors below `lower`, the standard error taken at `lower`.
pub(super) fn lower_floor_check(
    report: &mut ExperimentReport,
    name: &str,
    points: &[(f64, f64)],
    n: usize,
    lower: &dyn Fn(f64) -> f64,
) {
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for &(s, empirical) in points {
        let l = lower(s);
        let margin = empirical - l + 3.0 * binomial_se(l, n);
        worst = worst.min(margin);
        if margin < 0.0 {
            violations += 1;
        }
    }
    report.check(Check::at_most(
        format!("lower_bound/{name}"),
        violations as f64,
        0.0,
        format!("grid points below the product lower bound by more than 3 SE; smallest margin {worst}"),
    ));
}

fn upper_check(report: &mut ExperimentReport, table: &SandwichTable) {
    let above = table.rows.iter().filter(|r| r.empirical > r.upper).count();
    let worst = table.rows.iter().map(|r| r.upper - r.empirical).fold(f64::INFINITY, f64::min);
    report.check(Check::at_most(
        format!("upper_bound/{}", table.name),
        above as f64,
        0.0,
        format!("grid points above the upper bound; smallest margin {worst}"),
    ));
}

fn ecdf_points(ecdf: &Ecdf, grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter().map(|&s| (s, ecdf.eval(s))).collect()
}

fn thickness(p: &Params) -> u32 {
    p.cfg.scalings().thickness.unwrap_or(SEGMENT_THICKNESS)
}

pub(super) fn critical_shock_lpp(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let u = p.real("u", p.cfg.u, 0.0)?;
    let grid = p.grid("-5:3:17")?;
    let grid2 = p.grid2("-5:3:21")?;
    let a_values = p.a_values(&[1.0, 2.0, 4.0, 8.0])?;
    let th = thickness(p);
    let mut report = p.report(n_rep);
    let mut gaps = Vec::new();
    for a in a_values {
        let pts = critical_points(t, a, u)?;
        let spec = mu_a(t, a, u)?;
        let setup = if a > 1.0 { Some(SandwichSetup::resolve(p, a, u)?) } else { None };
        let left = StartSet::single(pts.left);
        let lower = StartSet::single(pts.lower);
        let mut problems = Vec::with_capacity(4);
        match &setup {
            Some(sw) => {
                let e_plus = eplus(t, a, u, sw.epsilon)?.point;
                let r_plus = forbidden_segment(SegmentKind::Plus, sw.k, t, a, u, sw.epsilon, th)?;
                let r_minus = forbidden_segment(SegmentKind::Minus, sw.k, t, a, u, sw.epsilon, th)?;
                problems.push(Problem::new(&left, &[pts.end, e_plus]));
                problems.push(Problem::new(&lower, &[pts.end]));
                problems.push(Problem::new(&left, &[e_plus]).avoiding(r_plus));
                problems.push(Problem::new(&lower, &[pts.end]).avoiding(r_minus));
            }
            None => {
                problems.push(Problem::new(&left, &[pts.end]));
                problems.push(Problem::new(&lower, &[pts.end]));
            }
        }
        let samples = replicate(n_rep, |r| {
            let field = WeightField::new(p.seed(&format!("a={a}"), r));
            let v = sweep(&field, &problems);
            finite(&v[0], "critical-shock-lpp")?;
            finite(&v[1], "critical-shock-lpp")?;
            let crossed = v.len() == 4 && (v[2][0] != v[0][1] || v[3][0] != v[1][0]);
            Ok((spec.rescale(v[0][0]), spec.rescale(v[1][0]), crossed))
        })?;

        let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.0, s.1)).collect();
        let maxima: Vec<f64> = samples.iter().map(|s| s.0.max(s.1)).collect();
        let name = format!("max_a{a}");
        let limit = |s: f64| product_limit(s, u, Scale::Lpp);
        compare_to_reference(&mut report, &name, &maxima, &grid, &limit)?;
        let joint = Ecdf2::new(&pairs)?;
        fkg_check(&mut report, &format!("a{a}"), &joint, &grid2);
        gaps.push(record_gap(&mut report, "critical_shock", a, &joint, &grid2)?);
        if let Some(sw) = setup {
            let crossed = samples.iter().filter(|s| s.2).count() as f64 / n_rep as f64;
            let surrogate = crossed + 3.0 * binomial_se(crossed, n_rep);
            report.note(format!("crossing_probability_a{a}"), crossed);
            let ecdf = Ecdf::new(&maxima)?;
            lower_floor_check(&mut report, &name, &ecdf_points(&ecdf, &grid), n_rep, &limit);
            let table = sandwich_table(&name, &sw, surrogate, &grid, &ecdf, Scale::Lpp)?;
            upper_check(&mut report, &table);
            report.sandwich.push(table);
        } else {
            report.caveat(format!("a = {a}: no admissible epsilon, sandwich skipped"));
        }
    }
    trend_check(&mut report, "critical_shock", &gaps);
    Ok(report)
}

pub(super) fn airy2_twopoint(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let u = p.real("u", p.cfg.u, 0.0)?;
    let a = p.positive("a", p.cfg.a, 2.0)?;
    let grid = p.grid("-5:3:17")?;
    let grid2 = p.grid2("-5:3:21")?;
    let t23 = t.cbrt().powi(2);
    let ends = [
        Point::new((t + (u / a + a) * t23).floor() as i64, t.floor() as i64),
        Point::new((t + u * t23 / a).floor() as i64, (t + a * t23).floor() as i64),
    ];
    let spec = mu_a(t, a, u)?;
    let problems = [Problem::new(&StartSet::single(Point::new(0, 0)), &ends)];
    let pairs = replicate(n_rep, |r| {
        let field = WeightField::new(p.seed("pair", r));
        let v = sweep(&field, &problems).swap_remove(0);
        finite(&v, "airy2-twopoint")?;
        Ok((spec.rescale(v[0]), spec.rescale(v[1])))
    })?;
    let mut report = p.report(n_rep);
    let first: Vec<f64> = pairs.iter().map(|q| q.0).collect();
    let second: Vec<f64> = pairs.iter().map(|q| q.1).collect();
    let maxima: Vec<f64> = pairs.iter().map(|q| q.0.max(q.1)).collect();
    let shift = u / two_four_thirds();
    compare_to_reference(&mut report, "first", &first, &grid, &f_gue)?;
    compare_to_reference(&mut report, "second", &second, &grid, &|s| f_gue(s - shift))?;
    compare_to_reference(&mut report, "max", &maxima, &grid, &|s| product_limit(s, u, Scale::Lpp))?;
    let joint = Ecdf2::new(&pairs)?;
    fkg_check(&mut report, "pair", &joint, &grid2);
    record_gap(&mut report, "pair", a, &joint, &grid2)?;
    Ok(report)
}

/// Shared loop of the three decoupling experiments: for every `a`, sample
/// the pair, record marginals, gap and FKG floor; then check the trend.
fn decoupling_sweep(
    p: &Params,
    report: &mut ExperimentReport,
    name: &str,
    a_values: &[f64],
    grid: &[f64],
    grid2: &[(f64, f64)],
    pair_at: &(dyn Fn(f64) -> Result<PairSetup> + Sync),
) -> Result<()> {
    let mut gaps = Vec::new();
    for &a in a_values {
        let setup = pair_at(a)?;
        let problems = [setup.problem.clone()];
        let pairs = replicate(report.replicas, |r| {
            let field = WeightField::new(p.seed(&format!("a={a}"), r));
            let v = sweep(&field, &problems).swap_remove(0);
            finite(&v, name)?;
            Ok(((setup.rescale.0)(v[0]), (setup.rescale.1)(v[1])))
        })?;
        let first: Vec<f64> = pairs.iter().map(|q| q.0).collect();
        let second: Vec<f64> = pairs.iter().map(|q| q.1).collect();
        for (label, samples) in [("first", &first), ("second", &second)] {
            let table = format!("{label}_a{a}");
            match &setup.reference {
                Some(f) => {
                    compare_to_reference(report, &table, samples, grid, f.as_ref())?;
                }
                None => report.tables.push(super::cdf_table(&table, &Ecdf::new(samples)?, grid, None)),
            }
        }
        let joint = Ecdf2::new(&pairs)?;
        fkg_check(report, &format!("a{a}"), &joint, grid2);
        gaps.push(record_gap(report, name, a, &joint, grid2)?);
    }
    trend_check(report, name, &gaps);
    Ok(())
}

type Rescale = Box<dyn Fn(f64) -> f64 + Sync + Send>;

/// One problem with two ends and the maps to rescaled values.
struct PairSetup {
    problem: Problem,
    rescale: (Rescale, Rescale),
    reference: Option<Box<dyn Fn(f64) -> f64 + Sync + Send>>,
}

fn goe_line(s: f64) -> f64 {
    f_goe(s / 2f64.powf(2.0 / 3.0))
}

pub(super) fn airy1_decoupling(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let a_values = p.a_values(&[1.0, 2.0, 4.0, 8.0])?;
    let grid = p.grid("-8:4:17")?;
    let grid2 = p.grid2("-8:4:21")?;
    let mut report = p.report(n_rep);
    let tf = t.floor();
    let pair_at = |a: f64| -> Result<PairSetup> {
        let g = airy1_geometry(t, a, 1.0, SEGMENT_THICKNESS)?;
        let centre = move |v: f64| (v - 4.0 * tf) / tf.cbrt();
        Ok(PairSetup {
            problem: Problem::new(&StartSet::anti_diagonal(), &[g.e1, g.e2]),
            rescale: (Box::new(centre), Box::new(centre)),
            reference: Some(Box::new(goe_line)),
        })
    };
    decoupling_sweep(p, &mut report, "airy1", &a_values, &grid, &grid2, &pair_at)?;
    Ok(report)
}

pub(super) fn airy21_decoupling(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let a_values = p.a_values(&[1.0, 2.0, 4.0, 8.0])?;
    let b = p.real("b", p.cfg.b, 0.0)?;
    let grid = p.grid("-8:4:17")?;
    let grid2 = p.grid2("-8:4:21")?;
    let mut report = p.report(n_rep);
    report.caveat("the marginals have no closed-form reference here; tables carry empirical values only");
    let pair_at = |a: f64| -> Result<PairSetup> {
        let g = airy21_geometry(t, a, b, 1.0, SEGMENT_THICKNESS)?;
        // Away from the half-line the mean drops like k^2 t^(1/3).
        let centre = move |k: f64| move |v: f64| (v - 4.0 * t) / t.cbrt() + k.min(0.0).powi(2);
        Ok(PairSetup {
            problem: Problem::new(&StartSet::anti_diagonal_half(), &[g.near, g.far]),
            rescale: (Box::new(centre(b)), Box::new(centre(b.abs() + a))),
            reference: None,
        })
    };
    decoupling_sweep(p, &mut report, "airy21", &a_values, &grid, &grid2, &pair_at)?;
    Ok(report)
}

pub(super) fn timelike_decoupling(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let a_values = p.a_values(&[1.0, 2.0, 4.0, 8.0])?;
    let tau = p.positive("tau", p.cfg.tau, 0.5)?;
    let grid = p.grid("-5:3:17")?;
    let grid2 = p.grid2("-5:3:21")?;
    for &a in &a_values {
        if !(a > tau) || tau * t / a < 1.0 {
            return Err(config_error(format!("need a > tau and tau t / a >= 1, got a = {a}, tau = {tau}")));
        }
    }
    let mut report = p.report(n_rep);
    report.caveat("both ends scale with t/a so that the far end stays at distance t; t/a runs along 125 * 2^j for the defaults");
    let pair_at = |a: f64| -> Result<PairSetup> {
        let scaled = t / a;
        let (_, near_spec) = timelike_start(tau, 0.0, scaled)?;
        let (_, far_spec) = timelike_start(a, 0.0, scaled)?;
        let near = (tau * scaled).floor() as i64;
        let far = (a * scaled).floor() as i64;
        Ok(PairSetup {
            problem: Problem::new(&StartSet::single(Point::new(0, 0)), &[Point::new(near, near), Point::new(far, far)]),
            rescale: (Box::new(move |v| near_spec.rescale(v)), Box::new(move |v| far_spec.rescale(v))),
            reference: Some(Box::new(f_gue)),
        })
    };
    decoupling_sweep(p, &mut report, "timelike", &a_values, &grid, &grid2, &pair_at)?;
    Ok(report)
}

const JOINT_EXPERIMENTS: &[ExperimentId] = &[
    ExperimentId::CriticalShockLpp,
    ExperimentId::Airy2Twopoint,
    ExperimentId::Airy1Decoupling,
    ExperimentId::Airy21Decoupling,
    ExperimentId::TimelikeDecoupling,
];

pub(super) fn fkg_floor(p: &Params) -> Result<ExperimentReport> {
    let targets = p.cfg.targets.clone().unwrap_or_else(|| {
        vec![ExperimentId::CriticalShockLpp, ExperimentId::Airy1Decoupling, ExperimentId::TimelikeDecoupling]
    });
    if targets.is_empty() {
        return Err(config_error("targets must not be empty"));
    }
    if let Some(bad) = targets.iter().find(|t| !JOINT_EXPERIMENTS.contains(t)) {
        return Err(config_error(format!("{bad} has no joint law to inspect")));
    }
    let a = p.positive("a", p.cfg.a, 2.0)?;
    let n_rep = p.replicas(2000)?;
    let mut report = p.report(n_rep);
    for &target in &targets {
        let mut sub = ExperimentConfig::new(target);
        sub.seed = p.cfg.seed;
        sub.replicas = Some(n_rep);
        sub.t = p.cfg.t;
        sub.a = Some(a);
        sub.s_grid = p.cfg.s_grid;
        sub.s2_grid = p.cfg.s2_grid;
        match target {
            ExperimentId::CriticalShockLpp => {
                sub.u = p.cfg.u;
                sub.scalings = p.cfg.scalings.clone();
            }
            ExperimentId::Airy2Twopoint => sub.u = p.cfg.u,
            ExperimentId::Airy21Decoupling => sub.b = p.cfg.b,
            ExperimentId::TimelikeDecoupling => sub.tau = p.cfg.tau,
            _ => {}
        }
        let inner = super::run(&sub)?;
        for check in inner.checks.into_iter().filter(|c| c.name.starts_with("fkg_floor/")) {
            let rest = check.name.trim_start_matches("fkg_floor/");
            report.check(Check { name: format!("fkg_floor/{target}/{rest}"), ..check });
        }
        for mut gap in inner.gaps {
            gap.name = format!("{target}/{}", gap.name);
            report.gaps.push(gap);
        }
    }
    Ok(report)
}
