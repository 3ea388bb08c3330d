//! Structural properties of passage times, weight fields and parsers.

use lpplab::harness::GridSpec;
use lpplab::lattice::Rational;
use lpplab::lpp::{last_passage, sweep, ForbiddenRegion, Problem, StartSet};
use lpplab::weights::{Seed, WeightField, WeightSource};
use lpplab::Point;
use proptest::prelude::*;

fn field(seed: u64) -> WeightField {
    WeightField::new(Seed::new(seed, "properties", 0))
}

fn value(f: &WeightField, start: &StartSet, end: Point) -> f64 {
    last_passage(f, start, end, None, false).map_or(f64::NEG_INFINITY, |r| r.value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn superadditive_through_any_intermediate_site(
        seed in 0u64..1000, mx in 0i64..15, my in 0i64..15, ex in 0i64..15, ey in 0i64..15,
    ) {
        let f = field(seed);
        let mid = Point::new(mx, my);
        let end = Point::new(mx + ex, my + ey);
        let origin = StartSet::single(Point::new(0, 0));
        let through = value(&f, &origin, mid) + value(&f, &StartSet::single(mid), end) - f.weight_at(mid);
        prop_assert!(value(&f, &origin, end) >= through - 1e-9);
    }

    #[test]
    fn larger_start_sets_give_larger_values(seed in 0u64..1000, ex in 0i64..20, ey in 0i64..20, k in 0i64..8) {
        let f = field(seed);
        let end = Point::new(ex, ey);
        let one = StartSet::single(Point::new(-k, k));
        let line = StartSet::anti_diagonal();
        let both = StartSet::union(vec![one.clone(), StartSet::single(Point::new(k, -k))]);
        let v1 = value(&f, &one, end);
        prop_assert!(value(&f, &both, end) >= v1);
        prop_assert!(value(&f, &line, end) >= value(&f, &both, end));
    }

    #[test]
    fn forbidding_sites_never_helps(
        seed in 0u64..1000, ex in 2i64..20, ey in 2i64..20,
        ax in -3.0f64..20.0, ay in -3.0f64..20.0, bx in -3.0f64..20.0, by in -3.0f64..20.0, th in 0u32..3,
    ) {
        let f = field(seed);
        let start = StartSet::single(Point::new(0, 0));
        let end = Point::new(ex, ey);
        let free = Problem::new(&start, &[end]);
        let blocked = free.clone().avoiding(ForbiddenRegion::new((ax, ay), (bx, by), th));
        let v = sweep(&f, &[free, blocked]);
        prop_assert!(v[1][0] <= v[0][0]);
    }

    #[test]
    fn row_fills_agree_with_single_sites(seed in 0u64..1000, y in -50i64..50, x0 in -50i64..50, len in 0usize..70) {
        let f = field(seed);
        let mut row = vec![0.0; len];
        f.fill_row(y, x0, &mut row);
        for (i, w) in row.iter().enumerate() {
            prop_assert_eq!(*w, f.weight_at(Point::new(x0 + i as i64, y)));
            prop_assert!(*w > 0.0 && w.is_finite());
        }
    }

    #[test]
    fn rationals_round_trip_through_text(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = Rational::new(num, den).unwrap();
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn grids_round_trip_and_hit_both_ends(lo in -50.0f64..50.0, width in 0.001f64..50.0, n in 2usize..500) {
        let text = format!("{lo}:{}:{n}", lo + width);
        let g: GridSpec = text.parse().unwrap();
        let pts = g.points();
        prop_assert_eq!(pts.len(), n);
        prop_assert_eq!(pts[0], lo);
        prop_assert!((pts[n - 1] - (lo + width)).abs() <= 1e-9 * (1.0 + lo.abs() + width));
        let again: GridSpec = g.to_string().parse().unwrap();
        prop_assert_eq!(again, g);
    }
}
