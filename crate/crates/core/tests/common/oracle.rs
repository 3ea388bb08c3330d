//! Exhaustive path enumeration on small instances, the reference for the
//! dynamic-programming passage times.

use lpplab::lattice::Rational;
use lpplab::lpp::{last_passage, sweep, ForbiddenRegion, Problem, StartSet};
use lpplab::weights::{Seed, StreamRng, WeightField, WeightSource};
use lpplab::{Error, Point};

const HULL: i64 = 7;
pub const INSTANCES: u64 = 100;
/// Radius of the membership scan used to find start points independently of
/// the truncation logic.
const SCAN: i64 = 40;

/// Best weight over all up-right paths from `from` to `end` that avoid every
/// region, summing weights in path order exactly as a left-to-right
/// accumulation would.
fn enumerate(field: &WeightField, from: Point, end: Point, avoid: &[ForbiddenRegion]) -> f64 {
    fn walk(field: &WeightField, p: Point, end: Point, acc: f64, avoid: &[ForbiddenRegion], best: &mut f64) {
        if avoid.iter().any(|r| r.contains(p)) {
            return;
        }
        let acc = acc + field.weight_at(p);
        if p == end {
            *best = best.max(acc);
            return;
        }
        if p.x < end.x {
            walk(field, p.offset(1, 0), end, acc, avoid, best);
        }
        if p.y < end.y {
            walk(field, p.offset(0, 1), end, acc, avoid, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(field, from, end, 0.0, avoid, &mut best);
    best
}

/// Members of `set` weakly below-left of `end`, found by scanning a large box.
fn members(set: &StartSet, end: Point) -> Vec<Point> {
    let mut out = Vec::new();
    for y in end.y - SCAN..=end.y {
        for x in end.x - SCAN..=end.x {
            let p = Point::new(x, y);
            if set.contains(p) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn fits_hull(points: &[Point], end: Point) -> bool {
    points.iter().all(|p| end.x - p.x < HULL && end.y - p.y < HULL)
}

fn oracle(field: &WeightField, starts: &[Point], end: Point, avoid: &[ForbiddenRegion]) -> f64 {
    starts.iter().map(|&s| enumerate(field, s, end, avoid)).fold(f64::NEG_INFINITY, f64::max)
}

fn small(rng: &mut StreamRng, lo: i64, hi: i64) -> i64 {
    lo + rng.next_below((hi - lo + 1) as usize) as i64
}

fn random_set(kind: usize, rng: &mut StreamRng, end: Point) -> StartSet {
    let near = |rng: &mut StreamRng| Point::new(small(rng, end.x - HULL + 1, end.x + 1), small(rng, end.y - HULL + 1, end.y + 1));
    match kind {
        0 => StartSet::single(near(rng)),
        1 => {
            let n = small(rng, 1, 5);
            StartSet::finite((0..n).map(|_| near(rng)))
        }
        2 => {
            let c = small(rng, end.x + end.y - HULL + 1, end.x + end.y);
            let k = small(rng, -3, 3);
            StartSet::AntiDiagonalLine { offset: Point::new(c - k, k) }
        }
        3 => {
            let c = small(rng, end.x + end.y - HULL + 1, end.x + end.y);
            let oy = small(rng, end.y - HULL + 1, end.y);
            StartSet::AntiDiagonalHalfLine { offset: Point::new(c - oy, oy) }
        }
        4 => {
            let density = [(1, 2), (1, 3), (2, 3), (3, 5)][rng.next_below(4)];
            let lo = small(rng, end.y - HULL + 1, end.y);
            let hi = if rng.next_below(2) == 0 { None } else { Some(small(rng, lo, end.y + 2)) };
            StartSet::staircase(Rational::new(density.0, density.1).unwrap(), Some(lo), hi).unwrap()
        }
        _ => StartSet::union(vec![random_set(0, rng, end), random_set(3, rng, end)]),
    }
}

/// Draws instances of one start-set kind until `INSTANCES` fit the hull and
/// hands each to `check`.
fn for_instances(
    kind: usize,
    tag: &str,
    mut check: impl FnMut(&WeightField, &StartSet, Point, &[Point], &mut StreamRng) -> Result<(), String>,
) -> Result<u64, String> {
    let mut rng = Seed::new(2024, format!("oracle/{tag}"), kind as u64).stream(0);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < INSTANCES {
        attempts += 1;
        if attempts >= 100 * INSTANCES {
            return Err(format!("instance generator for {tag} rarely fits the hull"));
        }
        let end = Point::new(small(&mut rng, -3, 6), small(&mut rng, -3, 6));
        let set = random_set(kind, &mut rng, end);
        let starts = members(&set, end);
        if !fits_hull(&starts, end) {
            continue;
        }
        let field = WeightField::new(Seed::new(7, format!("oracle/{tag}/field"), attempts));
        check(&field, &set, end, &starts, &mut rng)?;
        accepted += 1;
    }
    Ok(accepted)
}

pub const KINDS: [(usize, &str); 6] =
    [(0, "single"), (1, "finite"), (2, "line"), (3, "half-line"), (4, "staircase"), (5, "union")];

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(what()) }
}

/// Unrestricted values, maximisers and truncation for one start-set kind.
pub fn unrestricted(kind: usize, tag: &str) -> Result<u64, String> {
    for_instances(kind, tag, |field, set, end, starts, _| {
        ensure(set.truncate(end) == starts, || format!("{tag}: truncation differs from membership scan at {end:?}"))?;
        let expected = oracle(field, starts, end, &[]);
        match last_passage(field, set, end, None, true) {
            Ok(res) => {
                ensure(res.value == expected, || format!("{tag} end={end:?}: {} vs {expected}", res.value))?;
                let path = res.path.expect("path requested");
                let along: f64 = path.points().iter().map(|p| field.weight_at(*p)).sum();
                ensure(along == expected, || format!("{tag}: returned path is not a maximiser"))?;
                ensure(set.contains(path.start()), || format!("{tag}: path starts outside the set"))
            }
            Err(Error::NoAdmissiblePath(_)) => ensure(starts.is_empty(), || format!("{tag}: missed a path to {end:?}")),
            Err(e) => Err(format!("{tag}: unexpected error {e}")),
        }
    })
}

/// Values with one or two random forbidden segments for one start-set kind.
pub fn restricted(kind: usize, tag: &str) -> Result<u64, String> {
    for_instances(kind, tag, |field, set, end, starts, rng| {
        let mut regions = Vec::new();
        for _ in 0..small(rng, 1, 2) {
            let mut corner = || {
                (small(rng, end.x - HULL, end.x + 1) as f64 + 0.5 * rng.next_f64(), small(rng, end.y - HULL, end.y + 1) as f64)
            };
            let (from, to) = (corner(), corner());
            regions.push(ForbiddenRegion::new(from, to, rng.next_below(2) as u32));
        }
        let expected = oracle(field, starts, end, &regions);
        let mut problem = Problem::new(set, &[end]);
        for r in &regions {
            problem = problem.avoiding(r.clone());
        }
        let swept = sweep(field, &[problem])[0][0];
        ensure(swept == expected, || format!("{tag} end={end:?} regions={regions:?}: {swept} vs {expected}"))?;
        if regions.len() == 1 {
            match last_passage(field, set, end, Some(&regions[0]), true) {
                Ok(res) => {
                    ensure(res.value == expected, || format!("{tag}: restricted value {} vs {expected}", res.value))?;
                    let path = res.path.expect("path requested");
                    ensure(path.points().iter().all(|p| !regions[0].contains(*p)), || format!("{tag}: path enters the region"))?;
                }
                Err(Error::NoAdmissiblePath(_)) => {
                    ensure(expected == f64::NEG_INFINITY, || format!("{tag}: restricted path missed"))?
                }
                Err(e) => return Err(format!("{tag}: unexpected error {e}")),
            }
        }
        Ok(())
    })
}

/// Several end points in one sweep, each against its own enumeration.
pub fn multi_endpoint() -> Result<u64, String> {
    for_instances(1, "multi", |field, set, end, _, _| {
        let ends = [end, end.offset(-1, 0), end.offset(0, -2)];
        let values = sweep(field, &[Problem::new(set, &ends)]).swap_remove(0);
        for (e, v) in ends.iter().zip(values) {
            let expected = oracle(field, &members(set, *e), *e, &[]);
            ensure(v == expected, || format!("end={e:?}: {v} vs {expected}"))?;
        }
        Ok(())
    })
}
