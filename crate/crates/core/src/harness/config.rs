//! Experiment configuration: a flat JSON object with strict keys.

use crate::lattice::Rational;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Evenly spaced points `lo, ..., hi`, written `lo:hi:n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// Upper limit on grid sizes, to keep reports readable.
pub const MAX_GRID_POINTS: usize = 100_000;

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Parse("grid bounds must be finite".into()));
        }
        if n == 0 || n > MAX_GRID_POINTS {
            return Err(Error::Parse(format!("grid size must be in 1..={MAX_GRID_POINTS}, got {n}")));
        }
        if lo > hi || (n == 1 && lo != hi) {
            return Err(Error::Parse(format!("bad grid bounds {lo}:{hi} for {n} points")));
        }
        Ok(GridSpec { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + i as f64 * step }).collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("grid must look like `lo:hi:n`, got `{s}`"));
        let mut parts = s.split(':');
        let (Some(lo), Some(hi), Some(n), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        GridSpec::new(lo, hi, n)
    }
}

impl TryFrom<String> for GridSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

macro_rules! experiments {
    ($($variant:ident => $id:literal, $about:literal;)*) => {
        /// The experiment catalog.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub enum ExperimentId {
            $($variant,)*
        }

        impl ExperimentId {
            pub const ALL: &'static [ExperimentId] = &[$(ExperimentId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(ExperimentId::$variant => $id,)*
                }
            }

            /// One-line description of the law being checked.
            pub fn about(self) -> &'static str {
                match self {
                    $(ExperimentId::$variant => $about,)*
                }
            }
        }

        impl FromStr for ExperimentId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($id => Ok(ExperimentId::$variant),)*
                    other => Err(Error::UnknownExperiment(other.to_string())),
                }
            }
        }
    };
}

experiments! {
    StepGue => "step-gue",
        "step initial data: one particle and the point-to-point time against F_GUE";
    FlatGoe => "flat-goe",
        "flat initial data: one particle and the line-to-point time against F_GOE";
    ShockGue2 => "shock-gue2",
        "particle at a shock between two fans against a product of two F_GUE";
    CriticalShockLpp => "critical-shock-lpp",
        "two-source passage time at distance a t^(2/3): sandwich bounds and decoupling in a";
    CriticalShockTasep => "critical-shock-tasep",
        "step data with a gap of a T^(2/3): particle law against the same sandwich";
    ShockFlatGoe2 => "shock-flat-goe2",
        "shock between two flat densities against a product of two F_GOE";
    Airy2Twopoint => "airy2-twopoint",
        "two point-to-point times from one origin: joint law against marginal products";
    Airy1Decoupling => "airy1-decoupling",
        "line-to-point times to two ends a t^(2/3) apart: decoupling in a";
    Airy21Decoupling => "airy21-decoupling",
        "half-line-to-point times to two ends: decoupling in a";
    TimelikeDecoupling => "timelike-decoupling",
        "point-to-point times at two heights on one diagonal: decoupling in a";
    Transversal => "transversal",
        "exceedance of the maximizer's transversal deviation beyond k t^(2/3)";
    SlowDecorrelation => "slow-decorrelation",
        "spread of the passage-time increment over the last epsilon t rows";
    Crossing => "crossing",
        "probability that restricted and unrestricted passage times differ, against k";
    TasepLppConsistency => "tasep-lpp-consistency",
        "exclusion dynamics against the last-passage coupling, two-sample KS";
    DensityProfile => "density-profile",
        "hydrodynamic density for step data and a jump at a two-density shock";
    FkgFloor => "fkg-floor",
        "joint distribution functions never fall below the product of marginals";
    Localshift => "localshift",
        "passage time increment under a horizontal end shift of order K^gamma";
}

impl TryFrom<String> for ExperimentId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ExperimentId> for String {
    fn from(id: ExperimentId) -> String {
        id.as_str().to_string()
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How particle positions are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    /// Row sweep of the last-passage coupling.
    Lpp,
    /// Event-driven exclusion dynamics.
    Gillespie,
}

/// Overrides of the geometric constants.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingsConfig {
    /// Fraction of the path replaced by the intermediate point.
    #[serde(rename = "eplus.epsilon", default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Offset of the forbidden segments, in units of `t^(2/3)`.
    #[serde(rename = "forbidden.k", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "forbidden.thickness", default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<u32>,
    /// Exponent placing the slow-decorrelation point `T^nu` before the end.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
}

/// Everything an experiment needs besides the seed's experiment label.
/// Absent keys take per-experiment defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    /// Time parameter (`t` for passage times, `T` for particle systems).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<GridSpec>,
    /// Second axis of joint grids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2_grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho1: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<Sampler>,
    /// Experiments whose joint laws `fkg-floor` inspects.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<ExperimentId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalings: Option<ScalingsConfig>,
    /// Output directory; the command line may override it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentConfig {
    /// A configuration with every optional key absent.
    pub fn new(experiment: ExperimentId) -> Self {
        ExperimentConfig {
            experiment,
            seed: 0,
            replicas: None,
            t: None,
            a: None,
            a_grid: None,
            u: None,
            s_grid: None,
            s2_grid: None,
            beta: None,
            rho: None,
            rho1: None,
            rho2: None,
            xi: None,
            delta: None,
            tau: None,
            b: None,
            eta: None,
            gamma: None,
            v: None,
            k_grid: None,
            eps_grid: None,
            labels: None,
            bin_width: None,
            sampler: None,
            targets: None,
            scalings: None,
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn scalings(&self) -> ScalingsConfig {
        self.scalings.clone().unwrap_or_default()
    }
}
