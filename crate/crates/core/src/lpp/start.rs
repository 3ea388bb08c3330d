use crate::lattice::{Point, Rational};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Set of admissible path origins.
///
/// Infinite variants are never enumerated directly: [`StartSet::truncate`]
/// keeps exactly the points from which an up-right path can reach a given end
/// point, which is always a finite set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StartSet {
    SinglePoint(Point),
    /// Sorted row-major, without duplicates.
    FinitePoints(Vec<Point>),
    /// `{offset + (-k, k) : k in Z}`.
    AntiDiagonalLine { offset: Point },
    /// `{offset + (-k, k) : k >= 0}`.
    AntiDiagonalHalfLine { offset: Point },
    /// `{(n - floor(n / density), n)}` for labels `n` in the inclusive range
    /// `[min_label, max_label]`; a missing bound means unbounded.
    Staircase {
        density: Rational,
        min_label: Option<i64>,
        max_label: Option<i64>,
    },
    Union(Vec<StartSet>),
}

impl StartSet {
    pub fn single(p: Point) -> Self {
        StartSet::SinglePoint(p)
    }

    pub fn finite(points: impl IntoIterator<Item = Point>) -> Self {
        let set: BTreeSet<Point> = points.into_iter().collect();
        StartSet::FinitePoints(set.into_iter().collect())
    }

    pub fn anti_diagonal() -> Self {
        StartSet::AntiDiagonalLine { offset: Point::new(0, 0) }
    }

    pub fn anti_diagonal_half() -> Self {
        StartSet::AntiDiagonalHalfLine { offset: Point::new(0, 0) }
    }

    pub fn staircase(density: Rational, min_label: Option<i64>, max_label: Option<i64>) -> Result<Self> {
        if !density.is_proper_density() {
            return Err(Error::domain(format!("staircase density {density} not in (0,1)")));
        }
        Ok(StartSet::Staircase { density, min_label, max_label })
    }

    pub fn union(parts: Vec<StartSet>) -> Self {
        StartSet::Union(parts)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            StartSet::SinglePoint(_) | StartSet::FinitePoints(_) => true,
            StartSet::AntiDiagonalLine { .. } | StartSet::AntiDiagonalHalfLine { .. } => false,
            StartSet::Staircase { min_label, max_label, .. } => min_label.is_some() && max_label.is_some(),
            StartSet::Union(parts) => parts.iter().all(|p| p.is_finite()),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            StartSet::SinglePoint(q) => *q == p,
            StartSet::FinitePoints(v) => v.binary_search(&p).is_ok(),
            StartSet::AntiDiagonalLine { offset } => (p.x - offset.x) + (p.y - offset.y) == 0,
            StartSet::AntiDiagonalHalfLine { offset } => {
                (p.x - offset.x) + (p.y - offset.y) == 0 && p.y >= offset.y
            }
            StartSet::Staircase { density, min_label, max_label } => {
                in_range(p.y, *min_label, *max_label) && p.x == staircase_x(*density, p.y)
            }
            StartSet::Union(parts) => parts.iter().any(|s| s.contains(p)),
        }
    }

    /// Columns of the points lying in row `y`, ascending.
    pub fn row_points(&self, y: i64) -> Vec<i64> {
        let mut out = Vec::new();
        self.push_row_points(y, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn push_row_points(&self, y: i64, out: &mut Vec<i64>) {
        match self {
            StartSet::SinglePoint(q) => {
                if q.y == y {
                    out.push(q.x)
                }
            }
            StartSet::FinitePoints(v) => {
                let lo = v.partition_point(|p| p.y < y);
                let hi = v.partition_point(|p| p.y <= y);
                out.extend(v[lo..hi].iter().map(|p| p.x));
            }
            StartSet::AntiDiagonalLine { offset } => out.push(offset.x - (y - offset.y)),
            StartSet::AntiDiagonalHalfLine { offset } => {
                if y >= offset.y {
                    out.push(offset.x - (y - offset.y))
                }
            }
            StartSet::Staircase { density, min_label, max_label } => {
                if in_range(y, *min_label, *max_label) {
                    out.push(staircase_x(*density, y))
                }
            }
            StartSet::Union(parts) => parts.iter().for_each(|s| s.push_row_points(y, out)),
        }
    }

    /// Points of the set from which `end` is reachable by up-right steps,
    /// sorted row-major.
    pub fn truncate(&self, end: Point) -> Vec<Point> {
        self.truncate_many(std::slice::from_ref(&end))
    }

    /// Points from which at least one of `ends` is reachable.
    pub fn truncate_many(&self, ends: &[Point]) -> Vec<Point> {
        let mut acc = BTreeSet::new();
        for &e in ends {
            self.collect_truncated(e, &mut acc);
        }
        acc.into_iter().collect()
    }

    fn collect_truncated(&self, end: Point, acc: &mut BTreeSet<Point>) {
        match self {
            StartSet::SinglePoint(q) => {
                if q.precedes(&end) {
                    acc.insert(*q);
                }
            }
            StartSet::FinitePoints(v) => acc.extend(v.iter().filter(|q| q.precedes(&end))),
            StartSet::AntiDiagonalLine { offset } | StartSet::AntiDiagonalHalfLine { offset } => {
                // Points offset + (-k, k): need offset.x - k <= end.x and offset.y + k <= end.y.
                let half = matches!(self, StartSet::AntiDiagonalHalfLine { .. });
                let k_lo = offset.x - end.x;
                let k_lo = if half { k_lo.max(0) } else { k_lo };
                let k_hi = end.y - offset.y;
                for k in k_lo..=k_hi {
                    acc.insert(Point::new(offset.x - k, offset.y + k));
                }
            }
            StartSet::Staircase { density, min_label, max_label } => {
                let hi = match max_label {
                    Some(m) => (*m).min(end.y),
                    None => end.y,
                };
                // x(n) is nonincreasing in n, so the admissible labels form
                // the interval [n0, hi] with n0 the first label with x(n) <= end.x.
                let p = density.num() as i128;
                let q = density.den() as i128;
                let mut n0 = ((-(end.x as i128) * p).div_euclid(q - p)) as i64;
                while staircase_x(*density, n0) <= end.x {
                    n0 -= 1;
                }
                while staircase_x(*density, n0) > end.x {
                    n0 += 1;
                }
                let lo = match min_label {
                    Some(m) => n0.max(*m),
                    None => n0,
                };
                for n in lo..=hi {
                    acc.insert(Point::new(staircase_x(*density, n), n));
                }
            }
            StartSet::Union(parts) => parts.iter().for_each(|s| s.collect_truncated(end, acc)),
        }
    }
}

fn in_range(n: i64, lo: Option<i64>, hi: Option<i64>) -> bool {
    lo.is_none_or(|l| n >= l) && hi.is_none_or(|h| n <= h)
}

/// Column of label `n` on a staircase of the given density.
pub(crate) fn staircase_x(density: Rational, n: i64) -> i64 {
    n - density.floor_div(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_truncate(set: &StartSet, end: Point, radius: i64) -> Vec<Point> {
        let mut v = Vec::new();
        for y in -radius..=radius {
            for x in -radius..=radius {
                let p = Point::new(x, y);
                if set.contains(p) && p.precedes(&end) {
                    v.push(p);
                }
            }
        }
        v.sort();
        v
    }

    #[test]
    fn anti_diagonal_truncation() {
        let t = StartSet::anti_diagonal().truncate(Point::new(3, 2));
        let expect: Vec<Point> = (-3..=2).rev().map(|k| Point::new(-k, k)).collect::<BTreeSet<_>>().into_iter().collect();
        assert_eq!(t, expect);
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn truncation_matches_bounded_enumeration() {
        let half = Rational::new(1, 2).unwrap();
        let dense = Rational::new(4, 5).unwrap();
        let sparse = Rational::new(1, 5).unwrap();
        let sets = vec![
            StartSet::anti_diagonal(),
            StartSet::anti_diagonal_half(),
            StartSet::AntiDiagonalLine { offset: Point::new(2, -1) },
            StartSet::staircase(half, None, None).unwrap(),
            StartSet::staircase(dense, None, Some(0)).unwrap(),
            StartSet::union(vec![
                StartSet::staircase(dense, None, Some(0)).unwrap(),
                StartSet::staircase(sparse, Some(1), None).unwrap(),
            ]),
            StartSet::finite([Point::new(0, 0), Point::new(-3, 2), Point::new(5, 5)]),
        ];
        for set in &sets {
            for end in [Point::new(0, 0), Point::new(7, 3), Point::new(-2, 9), Point::new(4, -3)] {
                assert_eq!(set.truncate(end), brute_truncate(set, end, 80), "{set:?} {end}");
            }
        }
    }

    #[test]
    fn row_points_agree_with_contains() {
        let set = StartSet::union(vec![
            StartSet::staircase(Rational::new(2, 3).unwrap(), Some(-4), Some(6)).unwrap(),
            StartSet::anti_diagonal_half(),
            StartSet::single(Point::new(9, 1)),
        ]);
        for y in -10..10 {
            let cols = set.row_points(y);
            for x in -30..30 {
                assert_eq!(cols.contains(&x), set.contains(Point::new(x, y)), "({x},{y})");
            }
        }
    }
}
