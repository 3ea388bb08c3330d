//! Report types and their on-disk form.

use super::config::ExperimentConfig;
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// One grid point of a distribution-function table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfRow {
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    pub empirical: f64,
    pub reference: Option<f64>,
    /// `empirical - reference`.
    pub gap: Option<f64>,
    /// Binomial standard error of `empirical`.
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfTable {
    pub name: String,
    pub rows: Vec<CdfRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsRecord {
    pub name: String,
    pub distance: f64,
    pub samples: usize,
}

/// Decoupling gap of a joint law at one value of `a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRecord {
    pub name: String,
    pub a: f64,
    pub signed_sup: f64,
    pub abs_sup: f64,
    pub at: (f64, f64),
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceedanceRow {
    pub k: f64,
    pub probability: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceedanceCurve {
    pub name: String,
    pub rows: Vec<ExceedanceRow>,
    /// Least-squares slope of `ln P` against `k` over the positive rows.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichRow {
    pub s: f64,
    pub empirical: f64,
    pub lower: f64,
    pub upper: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichTable {
    pub name: String,
    pub a: f64,
    pub k: f64,
    pub epsilon: f64,
    /// The free parameter when one value serves the whole grid; otherwise
    /// the upper bound is minimised over a grid of values per row.
    pub delta: Option<f64>,
    pub surrogate: f64,
    pub rows: Vec<SandwichRow>,
}

/// A declared tolerance and whether it held.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Check {
        Check { name: name.into(), value, threshold, passed: value <= threshold, detail: detail.into() }
    }

    /// Passes when `value >= threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Check {
        Check { name: name.into(), value, threshold, passed: value >= threshold, detail: detail.into() }
    }
}

/// Everything one run produces. A pure function of the configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub description: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub replicas: usize,
    pub tables: Vec<CdfTable>,
    pub ks: Vec<KsRecord>,
    pub gaps: Vec<GapRecord>,
    pub exceedance: Vec<ExceedanceCurve>,
    pub sandwich: Vec<SandwichTable>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub caveats: Vec<String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, replicas: usize) -> Self {
        ExperimentReport {
            experiment: config.experiment.to_string(),
            description: config.experiment.about().to_string(),
            config: config.clone(),
            seed: config.seed,
            replicas,
            tables: Vec::new(),
            ks: Vec::new(),
            gaps: Vec::new(),
            exceedance: Vec::new(),
            sandwich: Vec::new(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            caveats: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, key: impl Into<String>, value: f64) {
        self.summary.insert(key.into(), value);
    }

    pub fn caveat(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.caveats.contains(&text) {
            self.caveats.push(text);
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Contents of `cdf_<name>.csv`.
pub fn cdf_csv(table: &CdfTable) -> String {
    let joint = table.rows.iter().any(|r| r.s2.is_some());
    let mut out = String::from(if joint { "s,s2,empirical,reference,gap,se\n" } else { "s,empirical,reference,gap,se\n" });
    for r in &table.rows {
        let _ = write!(out, "{}", r.s);
        if joint {
            let _ = write!(out, ",{}", cell(r.s2));
        }
        let _ = writeln!(out, ",{},{},{},{}", r.empirical, cell(r.reference), cell(r.gap), r.se);
    }
    out
}

/// Contents of `exceedance_<name>.csv`.
pub fn exceedance_csv(curve: &ExceedanceCurve) -> String {
    let mut out = String::from("k,probability,se\n");
    for r in &curve.rows {
        let _ = writeln!(out, "{},{},{}", r.k, r.probability, r.se);
    }
    out
}

/// Contents of `sandwich_<name>.csv`.
pub fn sandwich_csv(table: &SandwichTable) -> String {
    let mut out = String::from("s,empirical,lower,upper,se\n");
    for r in &table.rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.s, r.empirical, r.lower, r.upper, r.se);
    }
    out
}

fn file_safe(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' { c } else { '_' }).collect()
}

/// Writes `report.json` and the CSV tables into `dir`, returning the paths.
pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = vec![(dir.join("report.json"), report.to_json() + "\n")];
    for t in &report.tables {
        files.push((dir.join(format!("cdf_{}.csv", file_safe(&t.name))), cdf_csv(t)));
    }
    for c in &report.exceedance {
        files.push((dir.join(format!("exceedance_{}.csv", file_safe(&c.name))), exceedance_csv(c)));
    }
    for s in &report.sandwich {
        files.push((dir.join(format!("sandwich_{}.csv", file_safe(&s.name))), sandwich_csv(s)));
    }
    let mut written = Vec::with_capacity(files.len());
    for (path, text) in files {
        fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

/// Facts about one execution that vary between reruns and therefore stay
/// out of `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMeta {
    pub experiment: String,
    pub wall_clock_seconds: f64,
    pub threads: usize,
    pub version: String,
}

pub fn write_run_meta(meta: &RunMeta, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("run_meta.json");
    fs::write(&path, serde_json::to_string_pretty(meta)? + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExperimentId;

    #[test]
    fn csv_headers_and_blank_references() {
        let t = CdfTable {
            name: "x".into(),
            rows: vec![
                CdfRow { s: -1.0, s2: None, empirical: 0.25, reference: Some(0.5), gap: Some(-0.25), se: 0.1 },
                CdfRow { s: 0.5, s2: None, empirical: 1.0, reference: None, gap: None, se: 0.0 },
            ],
        };
        assert_eq!(cdf_csv(&t), "s,empirical,reference,gap,se\n-1,0.25,0.5,-0.25,0.1\n0.5,1,,,0\n");
        let j = CdfTable {
            name: "j".into(),
            rows: vec![CdfRow { s: 0.0, s2: Some(1.0), empirical: 0.5, reference: None, gap: None, se: 0.0 }],
        };
        assert!(cdf_csv(&j).starts_with("s,s2,empirical,reference,gap,se\n0,1,0.5,,,0\n"));
        let e = ExceedanceCurve {
            name: "z".into(),
            rows: vec![ExceedanceRow { k: 0.5, probability: 0.1, se: 0.01 }],
            slope: None,
            intercept: None,
        };
        assert_eq!(exceedance_csv(&e), "k,probability,se\n0.5,0.1,0.01\n");
    }

    #[test]
    fn outputs_land_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = ExperimentReport::new(&ExperimentConfig::new(ExperimentId::StepGue), 3);
        r.tables.push(CdfTable { name: "a/b".into(), rows: vec![] });
        r.check(Check::at_most("ks", 0.1, 0.05, ""));
        let r = r.finish();
        assert!(!r.passed);
        let files = write_outputs(&r, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        assert!(dir.path().join("cdf_a_b.csv").exists());
        let back: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
        assert_eq!(back["experiment"], "step-gue");
        assert_eq!(back["passed"], false);
    }
}
