//! Tracy-Widom distribution functions as Fredholm determinants.
//!
//! `F_GUE(s) = det(I - K_Ai)` and `F_GOE(s) = det(I - B)` on `L^2(s, inf)`,
//! with the Airy kernel `K_Ai` and `B(x, y) = Ai((x + y) / 2) / 2`. The
//! operators are discretised by Gauss-Legendre quadrature after the change of
//! variables `x = s + 10 (1 + t) / (1 - t)`, `t in (-1, 1)`.

use super::airy::airy_pair;
use super::quadrature::gauss_legendre;
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Supported range of the checked evaluators.
pub const TW_RANGE: (f64, f64) = (-10.0, 8.0);

/// Quadrature order used by [`tw_cdf`].
pub const DEFAULT_ORDER: usize = 64;

const MAP_SCALE: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Gue,
    Goe,
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gue" => Ok(Ensemble::Gue),
            "goe" => Ok(Ensemble::Goe),
            other => Err(Error::Parse(format!("unknown ensemble `{other}` (expected gue or goe)"))),
        }
    }
}

/// A Tracy-Widom distribution function at a fixed quadrature order.
#[derive(Clone, Debug)]
pub struct TracyWidom {
    ensemble: Ensemble,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TracyWidom {
    pub fn new(ensemble: Ensemble, order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        TracyWidom { ensemble, nodes, weights }
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Distribution function on [`TW_RANGE`].
    pub fn cdf(&self, s: f64) -> Result<f64> {
        let (lo, hi) = TW_RANGE;
        if !(lo..=hi).contains(&s) {
            return Err(Error::OutOfRange { value: s, lo, hi });
        }
        Ok(self.determinant(s))
    }

    /// Distribution function extended by 0 below and 1 above [`TW_RANGE`].
    /// The tails there are below 1e-6.
    pub fn cdf_clamped(&self, s: f64) -> f64 {
        let (lo, hi) = TW_RANGE;
        if s < lo {
            0.0
        } else if s > hi {
            1.0
        } else {
            self.determinant(s)
        }
    }

    fn determinant(&self, s: f64) -> f64 {
        let n = self.nodes.len();
        let mut xs = Vec::with_capacity(n);
        let mut sw = Vec::with_capacity(n);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let x = s + MAP_SCALE * (1.0 + t) / (1.0 - t);
            let jac = 2.0 * MAP_SCALE / ((1.0 - t) * (1.0 - t));
            xs.push(x);
            sw.push((w * jac).sqrt());
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        match self.ensemble {
            Ensemble::Gue => {
                let ai: Vec<(f64, f64)> = xs.iter().map(|&x| airy_pair(x)).collect();
                for i in 0..n {
                    for j in 0..n {
                        let k = if i == j {
                            let (a, ap) = ai[i];
                            ap * ap - xs[i] * a * a
                        } else {
                            let (ai_, api) = ai[i];
                            let (aj, apj) = ai[j];
                            (ai_ * apj - api * aj) / (xs[i] - xs[j])
                        };
                        m[(i, j)] = -sw[i] * k * sw[j];
                    }
                }
            }
            Ensemble::Goe => {
                for i in 0..n {
                    for j in i..n {
                        let k = 0.5 * airy_pair(0.5 * (xs[i] + xs[j])).0;
                        let v = -sw[i] * k * sw[j];
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
            }
        }
        for i in 0..n {
            m[(i, i)] += 1.0;
        }
        m.lu().determinant().clamp(0.0, 1.0)
    }
}

fn shared(ensemble: Ensemble) -> &'static TracyWidom {
    static GUE: OnceLock<TracyWidom> = OnceLock::new();
    static GOE: OnceLock<TracyWidom> = OnceLock::new();
    match ensemble {
        Ensemble::Gue => GUE.get_or_init(|| TracyWidom::new(Ensemble::Gue, DEFAULT_ORDER)),
        Ensemble::Goe => GOE.get_or_init(|| TracyWidom::new(Ensemble::Goe, DEFAULT_ORDER)),
    }
}

/// `F_GUE(s)` or `F_GOE(s)` at the default order, for `s` in [`TW_RANGE`].
pub fn tw_cdf(ensemble: Ensemble, s: f64) -> Result<f64> {
    shared(ensemble).cdf(s)
}

/// `F_GUE`, extended by 0 and 1 outside [`TW_RANGE`].
pub fn f_gue(s: f64) -> f64 {
    shared(Ensemble::Gue).cdf_clamped(s)
}

/// `F_GOE`, extended by 0 and 1 outside [`TW_RANGE`].
pub fn f_goe(s: f64) -> f64 {
    shared(Ensemble::Goe).cdf_clamped(s)
}
