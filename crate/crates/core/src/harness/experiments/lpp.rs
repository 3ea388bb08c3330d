//! Single-field passage-time experiments: path geometry, slow
//! decorrelation, crossing of forbidden segments, local shifts.

use super::{cdf_table, config_error, exceedance_curve, finite, fit_curve, monotone_excess, replicate, Params};
use crate::harness::report::{Check, ExceedanceRow, ExperimentReport};
use crate::harness::stats::{binomial_se, iqr, Ecdf};
use crate::lattice::Point;
use crate::lpp::{last_passage, local_shift_check, path_stats, sweep, Problem, StartSet};
use crate::scalings::{
    critical_points, eplus, forbidden_segment, restricted_disjoint, schedule_eps, SegmentKind, DEFAULT_NU,
    SEGMENT_THICKNESS,
};
use crate::weights::WeightField;
use crate::{Error, Result};

fn decay_checks(report: &mut ExperimentReport, curve: &crate::harness::report::ExceedanceCurve, fit_required: bool) {
    report.check(Check::at_most(
        format!("nonincreasing/{}", curve.name),
        monotone_excess(curve),
        0.0,
        "largest rise between consecutive k, less 2 SE",
    ));
    if fit_required {
        let slope = curve.slope.unwrap_or(f64::INFINITY);
        report.check(Check {
            name: format!("log_linear_slope/{}", curve.name),
            value: slope,
            threshold: 0.0,
            passed: slope < 0.0,
            detail: "slope of ln P against k must be negative; needs two positive rows".into(),
        });
    }
}

pub(super) fn transversal(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let ks = p.list("k_grid", &p.cfg.k_grid, &[0.5, 1.0, 1.5, 2.0])?;
    let origin = Point::new(0, 0);
    let end = Point::new(t.floor() as i64, t.floor() as i64);
    let start = StartSet::single(origin);
    let norm = t.cbrt().powi(2);
    let devs = replicate(n_rep, |r| {
        let field = WeightField::new(p.seed("path", r));
        let res = last_passage(&field, &start, end, None, true)?;
        let stats = path_stats(res.path.as_ref().expect("path requested"), origin, end, norm);
        Ok((stats.horizontal, stats.vertical))
    })?;
    let mut report = p.report(n_rep);
    let horizontal: Vec<f64> = devs.iter().map(|d| d.0).collect();
    let vertical: Vec<f64> = devs.iter().map(|d| d.1).collect();
    let both: Vec<f64> = devs.iter().map(|d| d.0.max(d.1)).collect();
    for (name, samples) in [("horizontal", &horizontal), ("vertical", &vertical), ("max", &both)] {
        let curve = exceedance_curve(name, samples, &ks);
        decay_checks(&mut report, &curve, true);
        report.exceedance.push(curve);
    }
    Ok(report)
}

pub(super) fn slow_decorrelation(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let a = p.positive("a", p.cfg.a, 4.0)?;
    let u = p.real("u", p.cfg.u, 0.0)?;
    let mut eps = p.list("eps_grid", &p.cfg.eps_grid, &[0.4, 0.2, 0.1])?;
    if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(config_error("eps_grid values must lie in (0, 1)"));
    }
    eps.sort_by(|x, y| y.total_cmp(x));
    eps.dedup();
    let nu = p.cfg.scalings().nu.unwrap_or(DEFAULT_NU);
    if !(nu > 0.0 && nu < 1.0) {
        return Err(config_error(format!("nu must lie in (0, 1), got {nu}")));
    }
    // The point t^nu rows before the end, as one more epsilon.
    let eps_nu = t.powf(nu - 1.0);
    let pts = critical_points(t, a, u)?;
    let mut plus = Vec::new();
    for &e in eps.iter().chain([eps_nu].iter()) {
        plus.push(eplus(t, a, u, e)?);
    }
    let mut ends = vec![pts.end];
    ends.extend(plus.iter().map(|e| e.point));
    let problems = [Problem::new(&StartSet::single(pts.left), &ends)];
    let t13 = t.cbrt();
    let stats = replicate(n_rep, |r| {
        let field = WeightField::new(p.seed("increment", r));
        let v = sweep(&field, &problems).swap_remove(0);
        finite(&v, "slow-decorrelation")?;
        Ok(plus.iter().enumerate().map(|(i, e)| (v[i + 1] + e.spec.center() - v[0]) / t13).collect::<Vec<f64>>())
    })?;
    let mut report = p.report(n_rep);
    let grid = p.grid("-5:3:17")?;
    let mut spreads = Vec::new();
    for (i, &e) in eps.iter().chain([eps_nu].iter()).enumerate() {
        let samples: Vec<f64> = stats.iter().map(|s| s[i]).collect();
        let ecdf = Ecdf::new(&samples)?;
        let (spread, se) = iqr(&ecdf);
        let tag = if i < eps.len() { format!("eps{e}") } else { format!("nu{nu}") };
        report.note(format!("iqr_{tag}"), spread);
        report.note(format!("iqr_se_{tag}"), se);
        report.note(format!("iqr_over_cbrt_eps_{tag}"), spread / e.cbrt());
        report.tables.push(cdf_table(&tag, &ecdf, &grid, None));
        if i < eps.len() {
            spreads.push((spread, se));
        }
    }
    let excess = spreads
        .windows(2)
        .map(|w| w[1].0 - w[0].0 - 2.0 * w[0].1.hypot(w[1].1))
        .fold(f64::NEG_INFINITY, f64::max);
    if spreads.len() >= 2 {
        report.check(Check::at_most(
            "iqr_shrinks_with_eps",
            excess,
            0.0,
            "largest growth of the interquartile range as epsilon decreases, less 2 SE",
        ));
    }
    Ok(report)
}

pub(super) fn crossing(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let t = p.time(1000.0)?;
    let a = p.positive("a", p.cfg.a, 4.0)?;
    let u = p.real("u", p.cfg.u, 0.0)?;
    let mut ks = p.list("k_grid", &p.cfg.k_grid, &[0.5, 1.0, 1.5, 2.0])?;
    ks.sort_by(f64::total_cmp);
    let sc = p.cfg.scalings();
    let epsilon = match sc.epsilon {
        Some(e) => e,
        None => schedule_eps(a)?,
    };
    let th = sc.thickness.unwrap_or(SEGMENT_THICKNESS);
    let pts = critical_points(t, a, u)?;
    let e_plus = eplus(t, a, u, epsilon)?.point;
    let left = StartSet::single(pts.left);
    let lower = StartSet::single(pts.lower);
    let mut problems = vec![Problem::new(&left, &[e_plus]), Problem::new(&lower, &[pts.end])];
    let mut disjoint = Vec::new();
    for &k in &ks {
        problems.push(Problem::new(&left, &[e_plus]).avoiding(forbidden_segment(SegmentKind::Plus, k, t, a, u, epsilon, th)?));
        problems.push(Problem::new(&lower, &[pts.end]).avoiding(forbidden_segment(SegmentKind::Minus, k, t, a, u, epsilon, th)?));
        disjoint.push(restricted_disjoint(k, t, a, u, epsilon, th)?);
    }
    let hits = replicate(n_rep, |r| {
        let field = WeightField::new(p.seed("restricted", r));
        let v = sweep(&field, &problems);
        finite(&v[0], "crossing")?;
        finite(&v[1], "crossing")?;
        Ok((0..ks.len()).map(|i| v[2 + 2 * i][0] != v[0][0] || v[3 + 2 * i][0] != v[1][0]).collect::<Vec<bool>>())
    })?;
    let mut report = p.report(n_rep);
    report.note("epsilon", epsilon);
    let rows = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let prob = hits.iter().filter(|h| h[i]).count() as f64 / n_rep as f64;
            ExceedanceRow { k, probability: prob, se: binomial_se(prob, n_rep) }
        })
        .collect();
    let curve = fit_curve("restricted_differs", rows);
    decay_checks(&mut report, &curve, false);
    report.exceedance.push(curve);
    let overlapping = disjoint.iter().filter(|d| !**d).count();
    report.check(Check::at_most(
        "restricted_regions_disjoint",
        overlapping as f64,
        0.0,
        "values of k whose two restricted path families share a site",
    ));
    Ok(report)
}

pub(super) fn localshift(p: &Params) -> Result<ExperimentReport> {
    let n_rep = p.replicas(2000)?;
    let k = p.time(1000.0)?.floor() as i64;
    let gamma = p.real("gamma", p.cfg.gamma, 1.0 / 3.0)?;
    let v = p.real("v", p.cfg.v, 1.0)?;
    if !(0.0..1.0).contains(&gamma) {
        return Err(config_error(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let samples = replicate(n_rep, |r| {
        let field = WeightField::new(p.seed("shift", r));
        local_shift_check(&field, k, gamma, v)
    })?;
    let ecdf = Ecdf::new(&samples).map_err(|e| Error::Statistics(e.to_string()))?;
    let mut report = p.report(n_rep);
    let mean = ecdf.mean();
    let se = (ecdf.variance() / n_rep as f64).sqrt();
    report.note("mean", mean);
    report.note("mean_se", se);
    report.note("sd", ecdf.variance().sqrt());
    report.tables.push(cdf_table("increment", &ecdf, &p.grid("-2:2:17")?, None));
    report.check(Check::at_most("mean_near_zero", mean.abs(), 0.1, "absolute mean of the rescaled increment"));
    Ok(report)
}
