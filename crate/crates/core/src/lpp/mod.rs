//! Last-passage values, maximising paths and restricted problems.

mod path;
mod region;
mod start;
mod sweep;

pub use path::{path_stats, Path, PathStats};
pub use region::ForbiddenRegion;
pub use start::StartSet;
pub use sweep::{sweep, Grid, Problem};

use crate::lattice::Point;
use crate::weights::WeightSource;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LppResult {
    pub value: f64,
    pub path: Option<Path>,
}

impl LppResult {
    /// Start point of the recorded maximiser.
    pub fn start_point(&self) -> Option<Point> {
        self.path.as_ref().map(|p| p.start())
    }
}

/// Maximal weight of an up-right path from `start` to `end`, optionally
/// avoiding `forbidden`, optionally returning a maximiser.
pub fn last_passage<W: WeightSource + ?Sized>(
    field: &W,
    start: &StartSet,
    end: Point,
    forbidden: Option<&ForbiddenRegion>,
    want_path: bool,
) -> Result<LppResult> {
    let mut problem = Problem::new(start, &[end]);
    if let Some(region) = forbidden {
        problem = problem.avoiding(region.clone());
    }
    if want_path {
        let grid = Grid::compute(field, &problem).ok_or(Error::NoAdmissiblePath(end))?;
        let value = grid.value(end);
        if !value.is_finite() {
            return Err(Error::NoAdmissiblePath(end));
        }
        let points = grid.backtrack(end).ok_or(Error::NoAdmissiblePath(end))?;
        let path = Path::new(points).expect("backtracking yields up-right steps");
        Ok(LppResult { value, path: Some(path) })
    } else {
        let value = sweep(field, std::slice::from_ref(&problem))[0][0];
        if !value.is_finite() {
            return Err(Error::NoAdmissiblePath(end));
        }
        Ok(LppResult { value, path: None })
    }
}

/// Last-passage values from one start set to several ends, in one sweep.
pub fn multi_endpoint_last_passage<W: WeightSource + ?Sized>(
    field: &W,
    start: &StartSet,
    ends: &[Point],
) -> Result<Vec<f64>> {
    let problem = Problem::new(start, ends);
    let values = sweep(field, std::slice::from_ref(&problem)).swap_remove(0);
    for (v, e) in values.iter().zip(ends) {
        if !v.is_finite() {
            return Err(Error::NoAdmissiblePath(*e));
        }
    }
    Ok(values)
}

/// `(L(0 -> (K + floor(K^gamma v), K)) - L(0 -> (K, K)) - 2 v K^gamma) / K^(1/3)`.
pub fn local_shift_check<W: WeightSource + ?Sized>(field: &W, k: i64, gamma: f64, v: f64) -> Result<f64> {
    if k <= 0 {
        return Err(Error::domain("local shift needs K > 0"));
    }
    let kf = k as f64;
    // powf can land just below an exact integer (1000^(1/3) = 9.999...).
    let raw = kf.powf(gamma) * v;
    let shift = if (raw - raw.round()).abs() <= 1e-9 * raw.abs().max(1.0) { raw.round() } else { raw.floor() } as i64;
    let ends = [Point::new(k + shift, k), Point::new(k, k)];
    let vals = multi_endpoint_last_passage(field, &StartSet::single(Point::new(0, 0)), &ends)?;
    Ok((vals[0] - vals[1] - 2.0 * v * kf.powf(gamma)) / kf.cbrt())
}
