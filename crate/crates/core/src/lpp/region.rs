use crate::lattice::Point;
use serde::{Deserialize, Serialize};

/// Slack on the distance test, so that sites lying exactly on a thin
/// segment are not lost to rounding in the projection.
const DISTANCE_SLACK: f64 = 1e-9;

/// Lattice sites within Euclidean distance `thickness` of a segment in R^2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenRegion {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub thickness: u32,
}

impl ForbiddenRegion {
    pub fn new(from: (f64, f64), to: (f64, f64), thickness: u32) -> Self {
        ForbiddenRegion { from, to, thickness }
    }

    pub fn between(a: Point, b: Point, thickness: u32) -> Self {
        Self::new((a.x as f64, a.y as f64), (b.x as f64, b.y as f64), thickness)
    }

    /// Euclidean distance from `(px, py)` to the segment.
    pub fn distance(&self, px: f64, py: f64) -> f64 {
        let (ax, ay) = self.from;
        let (dx, dy) = (self.to.0 - ax, self.to.1 - ay);
        let len2 = dx * dx + dy * dy;
        let lambda = if len2 > 0.0 {
            (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (cx, cy) = (ax + lambda * dx, ay + lambda * dy);
        ((px - cx).powi(2) + (py - cy).powi(2)).sqrt()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.distance(p.x as f64, p.y as f64) <= self.thickness as f64 + DISTANCE_SLACK
    }

    /// Inclusive column interval of forbidden sites in row `y`, if any.
    ///
    /// The distance along a row is convex, so the forbidden sites of a row
    /// are contiguous; the interval ends are located by bisection on the same
    /// predicate as [`ForbiddenRegion::contains`].
    pub fn row_span(&self, y: i64) -> Option<(i64, i64)> {
        let r = self.thickness as f64 + DISTANCE_SLACK;
        let yf = y as f64;
        let (ax, ay) = self.from;
        let (bx, by) = self.to;
        let (ylo, yhi) = (ay.min(by), ay.max(by));
        if yf < ylo - r || yf > yhi + r {
            return None;
        }
        // Column of the point of the segment closest to the row.
        let centre = if yf <= ylo {
            if ay <= by { ax } else { bx }
        } else if yf >= yhi {
            if ay >= by { ax } else { bx }
        } else {
            ax + (yf - ay) / (by - ay) * (bx - ax)
        };
        let inside = |x: i64| self.distance(x as f64, yf) <= r;
        let c = centre.round() as i64;
        let seed = [c - 1, c, c + 1].into_iter().find(|&x| inside(x))?;
        let reach = ((bx - ax).abs() + 2.0 * r + 4.0).ceil() as i64;
        // Largest x outside on the left, smallest x outside on the right.
        let mut lo_out = seed - reach;
        let mut lo_in = seed;
        while lo_in - lo_out > 1 {
            let mid = lo_out + (lo_in - lo_out) / 2;
            if inside(mid) { lo_in = mid } else { lo_out = mid }
        }
        let mut hi_in = seed;
        let mut hi_out = seed + reach;
        while hi_out - hi_in > 1 {
            let mid = hi_in + (hi_out - hi_in) / 2;
            if inside(mid) { hi_in = mid } else { hi_out = mid }
        }
        Some((lo_in, hi_in))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thickness_two_disk_around_point_segment() {
        let r = ForbiddenRegion::between(Point::new(0, 0), Point::new(0, 0), 2);
        let count = (-4..=4)
            .flat_map(|y| (-4..=4).map(move |x| Point::new(x, y)))
            .filter(|p| r.contains(*p))
            .count();
        // Lattice points with x^2 + y^2 <= 4.
        assert_eq!(count, 13);
    }

    #[test]
    fn sites_on_a_thin_horizontal_segment_are_inside() {
        let r = ForbiddenRegion::new((-3.983232595533983, -3.0), (-0.5631691289947481, -3.0), 0);
        for x in -3..=-1 {
            assert!(r.contains(Point::new(x, -3)), "x={x}");
        }
        assert_eq!(r.row_span(-3), Some((-3, -1)));
    }

    proptest! {
        #[test]
        fn row_span_matches_membership(
            ax in -20.0f64..20.0, ay in -20.0f64..20.0,
            bx in -20.0f64..20.0, by in -20.0f64..20.0,
            th in 0u32..4,
        ) {
            let region = ForbiddenRegion::new((ax, ay), (bx, by), th);
            for y in -30..30 {
                let span = region.row_span(y);
                for x in -50..50 {
                    let inside = region.contains(Point::new(x, y));
                    let in_span = span.is_some_and(|(lo, hi)| lo <= x && x <= hi);
                    prop_assert_eq!(inside, in_span, "({}, {}) span {:?}", x, y, span);
                }
            }
        }
    }
}
