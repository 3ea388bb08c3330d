use crate::lattice::Point;
use serde::Serialize;
use std::collections::BTreeMap;

/// An up-right lattice path, listed from its start point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    points: Vec<Point>,
}

impl Path {
    /// Returns `None` unless consecutive points differ by `(1,0)` or `(0,1)`.
    pub fn new(points: Vec<Point>) -> Option<Path> {
        if points.is_empty() {
            return None;
        }
        let ok = points.windows(2).all(|w| {
            let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
            (dx, dy) == (1, 0) || (dx, dy) == (0, 1)
        });
        ok.then_some(Path { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().expect("paths are non-empty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rightmost column visited in each row (the horizontal profile).
    pub fn rightmost_by_row(&self) -> BTreeMap<i64, i64> {
        let mut m = BTreeMap::new();
        for p in &self.points {
            let e = m.entry(p.y).or_insert(p.x);
            *e = (*e).max(p.x);
        }
        m
    }

    /// Topmost row visited in each column (the vertical profile).
    pub fn topmost_by_column(&self) -> BTreeMap<i64, i64> {
        let mut m = BTreeMap::new();
        for p in &self.points {
            let e = m.entry(p.x).or_insert(p.y);
            *e = (*e).max(p.y);
        }
        m
    }
}

/// Deviations of a path from the straight line through two lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathStats {
    /// Largest excess of the rightmost column in a row over the line's column
    /// at that row, divided by the normalisation.
    pub horizontal: f64,
    /// Largest excess of the topmost row in a column over the line's row at
    /// that column, divided by the normalisation.
    pub vertical: f64,
    /// Largest Euclidean distance from a path point to the line, divided by
    /// the normalisation.
    pub perpendicular: f64,
}

/// Measures how far `path` strays from the line through `a` and `b`.
/// Only rows in `[a.y, b.y]` and columns in `[a.x, b.x]` are compared.
/// `normalisation` is typically `t^(2/3)`.
pub fn path_stats(path: &Path, a: Point, b: Point, normalisation: f64) -> PathStats {
    let (dx, dy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
    let mut horizontal = f64::NEG_INFINITY;
    if dy != 0.0 {
        for (y, x) in path.rightmost_by_row() {
            if y < a.y || y > b.y {
                continue;
            }
            let line_x = a.x as f64 + (y - a.y) as f64 * dx / dy;
            horizontal = horizontal.max(x as f64 - line_x);
        }
    }
    let mut vertical = f64::NEG_INFINITY;
    if dx != 0.0 {
        for (x, y) in path.topmost_by_column() {
            if x < a.x || x > b.x {
                continue;
            }
            let line_y = a.y as f64 + (x - a.x) as f64 * dy / dx;
            vertical = vertical.max(y as f64 - line_y);
        }
    }
    let norm = (dx * dx + dy * dy).sqrt();
    let perpendicular = path
        .points()
        .iter()
        .map(|p| {
            let (px, py) = ((p.x - a.x) as f64, (p.y - a.y) as f64);
            if norm > 0.0 { (px * dy - py * dx).abs() / norm } else { (px * px + py * py).sqrt() }
        })
        .fold(0.0, f64::max);
    PathStats {
        horizontal: horizontal / normalisation,
        vertical: vertical / normalisation,
        perpendicular: perpendicular / normalisation,
    }
}
