//! The catalog: one function per experiment, plus the bookkeeping they share.

mod decoupling;
mod lpp;
mod tasep;

use super::config::{ExperimentConfig, ExperimentId, Sampler};
use super::driver;
use super::report::{CdfRow, CdfTable, Check, ExceedanceCurve, ExceedanceRow, ExperimentReport, GapRecord, KsRecord};
use super::stats::{binomial_se, decoupling_gap, ks_distance, linear_fit, Ecdf, Ecdf2};
use crate::weights::Seed;
use crate::{Error, Result};

pub(super) fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let p = Params::new(cfg)?;
    match cfg.experiment {
        ExperimentId::StepGue => tasep::step_gue(&p),
        ExperimentId::FlatGoe => tasep::flat_goe(&p),
        ExperimentId::ShockGue2 => tasep::shock_gue2(&p),
        ExperimentId::CriticalShockLpp => decoupling::critical_shock_lpp(&p),
        ExperimentId::CriticalShockTasep => tasep::critical_shock_tasep(&p),
        ExperimentId::ShockFlatGoe2 => tasep::shock_flat_goe2(&p),
        ExperimentId::Airy2Twopoint => decoupling::airy2_twopoint(&p),
        ExperimentId::Airy1Decoupling => decoupling::airy1_decoupling(&p),
        ExperimentId::Airy21Decoupling => decoupling::airy21_decoupling(&p),
        ExperimentId::TimelikeDecoupling => decoupling::timelike_decoupling(&p),
        ExperimentId::Transversal => lpp::transversal(&p),
        ExperimentId::SlowDecorrelation => lpp::slow_decorrelation(&p),
        ExperimentId::Crossing => lpp::crossing(&p),
        ExperimentId::TasepLppConsistency => tasep::consistency(&p),
        ExperimentId::DensityProfile => tasep::density_profile(&p),
        ExperimentId::FkgFloor => decoupling::fkg_floor(&p),
        ExperimentId::Localshift => lpp::localshift(&p),
    }
}

const COMMON_KEYS: &[&str] = &["experiment", "seed", "replicas", "t", "s_grid", "out"];

/// Keys each experiment reads besides the common ones.
fn own_keys(id: ExperimentId) -> &'static [&'static str] {
    use ExperimentId::*;
    match id {
        StepGue => &["u", "eta", "sampler"],
        FlatGoe => &["rho", "u", "sampler"],
        ShockGue2 => &["beta", "xi", "sampler"],
        CriticalShockLpp => &["a", "a_grid", "u", "s2_grid", "delta", "scalings"],
        CriticalShockTasep => &["a", "a_grid", "u", "sampler", "delta", "scalings"],
        ShockFlatGoe2 => &["rho1", "rho2", "xi", "sampler"],
        Airy2Twopoint => &["a", "u", "s2_grid"],
        Airy1Decoupling => &["a", "a_grid", "s2_grid"],
        Airy21Decoupling => &["a", "a_grid", "b", "s2_grid"],
        TimelikeDecoupling => &["a", "a_grid", "tau", "s2_grid"],
        Transversal => &["k_grid"],
        SlowDecorrelation => &["a", "u", "eps_grid", "scalings"],
        Crossing => &["a", "u", "k_grid", "scalings"],
        TasepLppConsistency => &["labels"],
        DensityProfile => &["bin_width", "rho1", "rho2", "sampler"],
        FkgFloor => &["a", "u", "tau", "b", "targets", "s2_grid", "scalings"],
        Localshift => &["gamma", "v"],
    }
}

/// Validated access to a configuration, with per-experiment defaults.
pub(super) struct Params<'a> {
    pub cfg: &'a ExperimentConfig,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl<'a> Params<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self> {
        let value = serde_json::to_value(cfg)?;
        let own = own_keys(cfg.experiment);
        if let Some(map) = value.as_object() {
            for key in map.keys() {
                if !COMMON_KEYS.contains(&key.as_str()) && !own.contains(&key.as_str()) {
                    return Err(config_error(format!("key `{key}` is not used by {}", cfg.experiment)));
                }
            }
        }
        Ok(Params { cfg })
    }

    pub fn replicas(&self, default: usize) -> Result<usize> {
        let n = self.cfg.replicas.unwrap_or(default);
        if !(2..=10_000_000).contains(&n) {
            return Err(config_error(format!("replicas must lie in 2..=10000000, got {n}")));
        }
        Ok(n)
    }

    /// The time parameter, at least 1.
    pub fn time(&self, default: f64) -> Result<f64> {
        let t = self.cfg.t.unwrap_or(default);
        if !(1.0..=1e7).contains(&t) {
            return Err(config_error(format!("t must lie in [1, 1e7], got {t}")));
        }
        Ok(t)
    }

    pub fn real(&self, name: &str, value: Option<f64>, default: f64) -> Result<f64> {
        let v = value.unwrap_or(default);
        if !v.is_finite() {
            return Err(config_error(format!("{name} must be finite, got {v}")));
        }
        Ok(v)
    }

    pub fn positive(&self, name: &str, value: Option<f64>, default: f64) -> Result<f64> {
        let v = self.real(name, value, default)?;
        if v <= 0.0 {
            return Err(config_error(format!("{name} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn list(&self, name: &str, value: &Option<Vec<f64>>, default: &[f64]) -> Result<Vec<f64>> {
        let v = value.clone().unwrap_or_else(|| default.to_vec());
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(config_error(format!("{name} must be a nonempty list of finite numbers")));
        }
        Ok(v)
    }

    /// `a_grid` if given, else the single `a`, else `default`. Sorted and
    /// required to be positive.
    pub fn a_values(&self, default: &[f64]) -> Result<Vec<f64>> {
        let mut v = match (&self.cfg.a_grid, self.cfg.a) {
            (Some(g), _) => self.list("a_grid", &Some(g.clone()), default)?,
            (None, Some(a)) => vec![a],
            (None, None) => default.to_vec(),
        };
        if v.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(config_error("values of a must be positive and finite"));
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }

    pub fn grid(&self, default: &str) -> Result<Vec<f64>> {
        Ok(match self.cfg.s_grid {
            Some(g) => g.points(),
            None => default.parse::<super::config::GridSpec>()?.points(),
        })
    }

    /// Product grid `s_grid x s2_grid`; the second axis defaults to the first.
    pub fn grid2(&self, default: &str) -> Result<Vec<(f64, f64)>> {
        let first = self.grid(default)?;
        let second = match self.cfg.s2_grid {
            Some(g) => g.points(),
            None => first.clone(),
        };
        Ok(first.iter().flat_map(|&s1| second.iter().map(move |&s2| (s1, s2))).collect())
    }

    pub fn sampler(&self) -> Sampler {
        self.cfg.sampler.unwrap_or(Sampler::Lpp)
    }

    /// Stream for one replica of one statistic.
    pub fn seed(&self, stat: &str, replica: u64) -> Seed {
        driver::seed(self.cfg.seed, &format!("{}/{stat}", self.cfg.experiment), replica)
    }

    pub fn report(&self, replicas: usize) -> ExperimentReport {
        ExperimentReport::new(self.cfg, replicas)
    }
}

pub(super) use driver::replicate;

/// Distribution-function table of `ecdf` on `grid`, with `reference` when known.
pub(super) fn cdf_table(name: &str, ecdf: &Ecdf, grid: &[f64], reference: Option<&dyn Fn(f64) -> f64>) -> CdfTable {
    let rows = grid
        .iter()
        .map(|&s| {
            let empirical = ecdf.eval(s);
            let r = reference.map(|f| f(s));
            CdfRow { s, s2: None, empirical, reference: r, gap: r.map(|r| empirical - r), se: binomial_se(empirical, ecdf.len()) }
        })
        .collect();
    CdfTable { name: name.to_string(), rows }
}

/// Adds the table and the KS distance of `samples` against `reference`;
/// returns the distance.
pub(super) fn compare_to_reference(
    report: &mut ExperimentReport,
    name: &str,
    samples: &[f64],
    grid: &[f64],
    reference: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let ecdf = Ecdf::new(samples)?;
    let d = ks_distance(&ecdf, reference);
    report.tables.push(cdf_table(name, &ecdf, grid, Some(reference)));
    report.ks.push(KsRecord { name: name.to_string(), distance: d, samples: ecdf.len() });
    Ok(d)
}

/// Joint table against the product of the empirical marginals.
pub(super) fn joint_table(name: &str, joint: &Ecdf2, grid: &[(f64, f64)]) -> CdfTable {
    let (f1, f2) = joint.marginals();
    let rows = grid
        .iter()
        .map(|&(s1, s2)| {
            let empirical = joint.eval(s1, s2);
            let product = f1.eval(s1) * f2.eval(s2);
            CdfRow {
                s: s1,
                s2: Some(s2),
                empirical,
                reference: Some(product),
                gap: Some(empirical - product),
                se: binomial_se(empirical, joint.len()),
            }
        })
        .collect();
    CdfTable { name: name.to_string(), rows }
}

/// Counts grid points where the joint law falls more than three standard
/// errors below the product of its marginals. The standard error is that
/// of a binomial proportion at the product value.
pub(super) fn fkg_check(report: &mut ExperimentReport, name: &str, joint: &Ecdf2, grid: &[(f64, f64)]) {
    let (f1, f2) = joint.marginals();
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for &(s1, s2) in grid {
        let product = f1.eval(s1) * f2.eval(s2);
        let slack = joint.eval(s1, s2) - product + 3.0 * binomial_se(product, joint.len());
        worst = worst.min(slack);
        if slack < 0.0 {
            violations += 1;
        }
    }
    report.check(Check::at_most(
        format!("fkg_floor/{name}"),
        violations as f64,
        0.0,
        format!("grid points with joint < product - 3 SE; smallest margin {worst}"),
    ));
}

/// Decoupling gap of `joint` against its empirical marginals, recorded
/// together with the joint table.
pub(super) fn record_gap(
    report: &mut ExperimentReport,
    name: &str,
    a: f64,
    joint: &Ecdf2,
    grid: &[(f64, f64)],
) -> Result<GapRecord> {
    let g = decoupling_gap(joint, grid)?;
    let rec = GapRecord { name: name.to_string(), a, signed_sup: g.signed_sup, abs_sup: g.abs_sup, at: g.at, se: g.se };
    report.gaps.push(rec.clone());
    report.tables.push(joint_table(&format!("{name}_a{a}"), joint, grid));
    Ok(rec)
}

/// The gap may grow from one `a` to the next by at most two combined
/// standard errors.
pub(super) fn trend_check(report: &mut ExperimentReport, name: &str, gaps: &[GapRecord]) {
    if gaps.len() < 2 {
        report.caveat(format!("{name}: a single value of a, no trend to check"));
        return;
    }
    let excess = gaps
        .windows(2)
        .map(|w| w[1].signed_sup - w[0].signed_sup - 2.0 * w[0].se.hypot(w[1].se))
        .fold(f64::NEG_INFINITY, f64::max);
    report.check(Check::at_most(
        format!("decoupling_trend/{name}"),
        excess,
        0.0,
        "largest increase of the signed gap between consecutive a, less 2 SE",
    ));
}

/// Exceedance curve `P(X >= k)` with a log-linear fit over the positive rows.
pub(super) fn exceedance_curve(name: &str, samples: &[f64], ks: &[f64]) -> ExceedanceCurve {
    let n = samples.len();
    let rows: Vec<ExceedanceRow> = ks
        .iter()
        .map(|&k| {
            let p = samples.iter().filter(|&&x| x >= k).count() as f64 / n as f64;
            ExceedanceRow { k, probability: p, se: binomial_se(p, n) }
        })
        .collect();
    fit_curve(name, rows)
}

pub(super) fn fit_curve(name: &str, rows: Vec<ExceedanceRow>) -> ExceedanceCurve {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.probability > 0.0).map(|r| (r.k, r.probability.ln())).unzip();
    let fit = linear_fit(&xs, &ys);
    ExceedanceCurve { name: name.to_string(), rows, slope: fit.map(|f| f.0), intercept: fit.map(|f| f.1) }
}

/// Largest rise of `probability` along the curve, less two combined SE.
pub(super) fn monotone_excess(curve: &ExceedanceCurve) -> f64 {
    curve
        .rows
        .windows(2)
        .map(|w| w[1].probability - w[0].probability - 2.0 * w[0].se.hypot(w[1].se))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Passage times from `sweep` are `-inf` when no path exists; that never
/// happens for the geometries of the catalog, so it is reported as an error.
pub(super) fn finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Statistics(format!("{what}: end point unreachable")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_outside_the_experiment_are_rejected() {
        let mut c = ExperimentConfig::new(ExperimentId::StepGue);
        c.beta = Some(0.5);
        assert!(matches!(Params::new(&c), Err(Error::Config(_))));
        c.beta = None;
        c.u = Some(1.0);
        assert!(Params::new(&c).is_ok());
    }

    #[test]
    fn a_values_are_sorted_and_positive() {
        let mut c = ExperimentConfig::new(ExperimentId::Airy1Decoupling);
        c.a_grid = Some(vec![4.0, 1.0, 2.0, 2.0]);
        assert_eq!(Params::new(&c).unwrap().a_values(&[8.0]).unwrap(), vec![1.0, 2.0, 4.0]);
        c.a_grid = Some(vec![0.0]);
        assert!(Params::new(&c).unwrap().a_values(&[1.0]).is_err());
    }

    #[test]
    fn exceedance_fit_skips_empty_rows() {
        let samples: Vec<f64> = (0..100).map(|i| i as f64 / 50.0).collect();
        let c = exceedance_curve("x", &samples, &[0.5, 1.0, 1.5, 2.5]);
        assert_eq!(c.rows[0].probability, 0.75);
        assert_eq!(c.rows[3].probability, 0.0);
        assert!(c.slope.unwrap() < 0.0);
        assert!(monotone_excess(&c) < 0.0);
    }
}
