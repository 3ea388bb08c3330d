use super::region::ForbiddenRegion;
use super::start::StartSet;
use crate::lattice::Point;
use crate::weights::WeightSource;

const UNREACHABLE: f64 = f64::NEG_INFINITY;

/// One last-passage problem: a finite start set, one or more end points and
/// optional forbidden regions.
#[derive(Clone, Debug)]
pub struct Problem {
    starts: Vec<Point>,
    ends: Vec<Point>,
    forbidden: Vec<ForbiddenRegion>,
}

impl Problem {
    /// Truncates `start` to the points that can reach at least one end.
    pub fn new(start: &StartSet, ends: &[Point]) -> Self {
        Problem { starts: start.truncate_many(ends), ends: ends.to_vec(), forbidden: Vec::new() }
    }

    pub fn from_points(starts: impl IntoIterator<Item = Point>, ends: &[Point]) -> Self {
        Self::new(&StartSet::finite(starts), ends)
    }

    pub fn avoiding(mut self, region: ForbiddenRegion) -> Self {
        self.forbidden.push(region);
        self
    }

    pub fn starts(&self) -> &[Point] {
        &self.starts
    }

    pub fn ends(&self) -> &[Point] {
        &self.ends
    }

    pub fn forbidden(&self) -> &[ForbiddenRegion] {
        &self.forbidden
    }

    /// Number of lattice cells the sweep touches for this problem.
    pub fn cell_count(&self) -> u64 {
        match Layout::of(self) {
            Some(l) => (0..l.rows()).map(|r| (l.hi[r] - l.lo[r] + 1).max(0) as u64).sum(),
            None => 0,
        }
    }
}

/// Row-by-row extent of the cells that matter for one problem: cell `(x, y)`
/// is relevant when some start lies weakly below-left of it and some end
/// weakly above-right.
struct Layout {
    y0: i64,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Layout {
    fn of(p: &Problem) -> Option<Layout> {
        let y0 = p.starts.first()?.y;
        let y1 = p.ends.iter().map(|e| e.y).max()?;
        if y1 < y0 {
            return None;
        }
        let rows = (y1 - y0 + 1) as usize;
        let mut lo = vec![i64::MAX; rows];
        for s in &p.starts {
            let r = (s.y - y0) as usize;
            lo[r] = lo[r].min(s.x);
        }
        for r in 1..rows {
            lo[r] = lo[r].min(lo[r - 1]);
        }
        let mut hi = vec![i64::MIN; rows];
        for e in &p.ends {
            if e.y >= y0 {
                let r = (e.y - y0) as usize;
                hi[r] = hi[r].max(e.x);
            }
        }
        for r in (0..rows - 1).rev() {
            hi[r] = hi[r].max(hi[r + 1]);
        }
        Some(Layout { y0, lo, hi })
    }

    fn rows(&self) -> usize {
        self.lo.len()
    }

    fn y1(&self) -> i64 {
        self.y0 + self.rows() as i64 - 1
    }

    /// Extent of row `y`; empty rows come back with `lo > hi`.
    fn extent(&self, y: i64) -> (i64, i64) {
        if y < self.y0 || y > self.y1() {
            return (1, 0);
        }
        let r = (y - self.y0) as usize;
        (self.lo[r], self.hi[r])
    }
}

/// Rolling state of one problem during a sweep.
struct Lane<'a> {
    problem: &'a Problem,
    layout: Option<Layout>,
    prev: Vec<f64>,
    prev_lo: i64,
    prev_hi: i64,
    cur: Vec<f64>,
    start_idx: usize,
    /// End indices sorted by row.
    end_order: Vec<usize>,
    end_idx: usize,
    out: Vec<f64>,
    starts_row: Vec<i64>,
    blocked: Vec<(i64, i64)>,
}

impl<'a> Lane<'a> {
    fn new(problem: &'a Problem) -> Self {
        let mut end_order: Vec<usize> = (0..problem.ends.len()).collect();
        end_order.sort_by_key(|&i| problem.ends[i]);
        Lane {
            problem,
            layout: Layout::of(problem),
            prev: Vec::new(),
            prev_lo: 1,
            prev_hi: 0,
            cur: Vec::new(),
            start_idx: 0,
            end_order,
            end_idx: 0,
            out: vec![UNREACHABLE; problem.ends.len()],
            starts_row: Vec::new(),
            blocked: Vec::new(),
        }
    }

    fn extent(&self, y: i64) -> (i64, i64) {
        self.layout.as_ref().map_or((1, 0), |l| l.extent(y))
    }

    /// Advances to row `y`, reading weights from `w` whose first entry is column `wlo`.
    fn step(&mut self, y: i64, w: &[f64], wlo: i64) {
        let (lo, hi) = self.extent(y);
        if lo > hi {
            self.prev_lo = 1;
            self.prev_hi = 0;
            return;
        }
        self.starts_row.clear();
        let starts = &self.problem.starts;
        while self.start_idx < starts.len() && starts[self.start_idx].y < y {
            self.start_idx += 1;
        }
        while self.start_idx < starts.len() && starts[self.start_idx].y == y {
            let x = starts[self.start_idx].x;
            if x >= lo && x <= hi {
                self.starts_row.push(x);
            }
            self.start_idx += 1;
        }
        self.blocked.clear();
        for region in &self.problem.forbidden {
            if let Some(span) = region.row_span(y) {
                self.blocked.push(span);
            }
        }
        self.blocked.sort_unstable();

        let width = (hi - lo + 1) as usize;
        self.cur.clear();
        self.cur.resize(width, UNREACHABLE);
        advance_row(
            RowInput {
                prev: &self.prev,
                prev_lo: self.prev_lo,
                prev_hi: self.prev_hi,
                lo,
                w: &w[(lo - wlo) as usize..(lo - wlo) as usize + width],
                starts: &self.starts_row,
                blocked: &self.blocked,
            },
            &mut self.cur,
        );
        std::mem::swap(&mut self.prev, &mut self.cur);
        self.prev_lo = lo;
        self.prev_hi = hi;

        let ends = &self.problem.ends;
        while self.end_idx < self.end_order.len() && ends[self.end_order[self.end_idx]].y < y {
            self.end_idx += 1;
        }
        while self.end_idx < self.end_order.len() && ends[self.end_order[self.end_idx]].y == y {
            let i = self.end_order[self.end_idx];
            let x = ends[i].x;
            if x >= lo && x <= hi {
                self.out[i] = self.prev[(x - lo) as usize];
            }
            self.end_idx += 1;
        }
    }
}

struct RowInput<'a> {
    prev: &'a [f64],
    prev_lo: i64,
    prev_hi: i64,
    lo: i64,
    w: &'a [f64],
    starts: &'a [i64],
    blocked: &'a [(i64, i64)],
}

/// One row of the recursion
/// `G(x, y) = w(x, y) + max(G(x-1, y), G(x, y-1), 0 if (x, y) is a start)`.
///
/// The row is cut at start columns, blocked spans and the ends of the row
/// below; between those events a tight loop applies the plain recursion.
#[inline]
fn advance_row(row: RowInput<'_>, cur: &mut [f64]) {
    let RowInput { prev, prev_lo, prev_hi, lo, w, starts, blocked } = row;
    let hi = lo + cur.len() as i64 - 1;
    let (d0, d1) = if prev_lo <= prev_hi { (lo.max(prev_lo), hi.min(prev_hi)) } else { (1, 0) };
    let mut left = UNREACHABLE;
    let mut si = 0;
    let mut bi = 0;
    let mut x = lo;
    while x <= hi {
        while bi < blocked.len() && blocked[bi].1 < x {
            bi += 1;
        }
        if bi < blocked.len() && blocked[bi].0 <= x {
            let stop = blocked[bi].1.min(hi);
            cur[(x - lo) as usize..=(stop - lo) as usize].fill(UNREACHABLE);
            left = UNREACHABLE;
            while si < starts.len() && starts[si] <= stop {
                si += 1;
            }
            x = stop + 1;
            continue;
        }
        if si < starts.len() && starts[si] == x {
            let down = if x >= d0 && x <= d1 { prev[(x - prev_lo) as usize] } else { UNREACHABLE };
            let best = left.max(down).max(0.0);
            left = best + w[(x - lo) as usize];
            cur[(x - lo) as usize] = left;
            si += 1;
            x += 1;
            continue;
        }
        let mut stop = hi;
        if si < starts.len() {
            stop = stop.min(starts[si] - 1);
        }
        if bi < blocked.len() {
            stop = stop.min(blocked[bi].0 - 1);
        }
        let with_down = x >= d0 && x <= d1;
        if with_down {
            stop = stop.min(d1);
        } else if x < d0 && d0 <= d1 {
            stop = stop.min(d0 - 1);
        }
        let a = (x - lo) as usize;
        let b = (stop - lo) as usize + 1;
        let out = &mut cur[a..b];
        let ws = &w[a..b];
        if with_down {
            let pa = (x - prev_lo) as usize;
            let downs = &prev[pa..pa + (b - a)];
            for ((slot, &wk), &dk) in out.iter_mut().zip(ws).zip(downs) {
                let best = if left >= dk { left } else { dk };
                left = best + wk;
                *slot = left;
            }
        } else {
            for (slot, &wk) in out.iter_mut().zip(ws) {
                left += wk;
                *slot = left;
            }
        }
        x = stop + 1;
    }
}

/// Runs all problems over one weight field in a single pass, generating each
/// row of weights once. Returns, per problem and per end point, the
/// last-passage value or `-inf` when no admissible path exists.
pub fn sweep<W: WeightSource + ?Sized>(field: &W, problems: &[Problem]) -> Vec<Vec<f64>> {
    let mut lanes: Vec<Lane> = problems.iter().map(Lane::new).collect();
    let bounds = lanes
        .iter()
        .filter_map(|l| l.layout.as_ref().map(|lay| (lay.y0, lay.y1())))
        .fold(None, |acc: Option<(i64, i64)>, (a, b)| match acc {
            None => Some((a, b)),
            Some((c, d)) => Some((c.min(a), d.max(b))),
        });
    let Some((y_start, y_end)) = bounds else {
        return lanes.into_iter().map(|l| l.out).collect();
    };
    let mut weights = Vec::new();
    for y in y_start..=y_end {
        let mut wlo = i64::MAX;
        let mut whi = i64::MIN;
        for lane in &lanes {
            let (lo, hi) = lane.extent(y);
            if lo <= hi {
                wlo = wlo.min(lo);
                whi = whi.max(hi);
            }
        }
        if wlo <= whi {
            weights.clear();
            weights.resize((whi - wlo + 1) as usize, 0.0);
            field.fill_row(y, wlo, &mut weights);
        }
        for lane in lanes.iter_mut() {
            lane.step(y, &weights, wlo);
        }
    }
    lanes.into_iter().map(|l| l.out).collect()
}

/// Full table of last-passage values for one problem, kept for backtracking.
pub struct Grid {
    layout: Layout,
    rows: Vec<Vec<f64>>,
    starts: Vec<Point>,
}

impl Grid {
    pub fn compute<W: WeightSource + ?Sized>(field: &W, problem: &Problem) -> Option<Grid> {
        let layout = Layout::of(problem)?;
        let mut lane = Lane::new(problem);
        let mut rows = Vec::with_capacity(layout.rows());
        let mut weights = Vec::new();
        for y in layout.y0..=layout.y1() {
            let (lo, hi) = layout.extent(y);
            if lo <= hi {
                weights.clear();
                weights.resize((hi - lo + 1) as usize, 0.0);
                field.fill_row(y, lo, &mut weights);
                lane.step(y, &weights, lo);
                rows.push(lane.prev.clone());
            } else {
                lane.step(y, &weights, lo);
                rows.push(Vec::new());
            }
        }
        Some(Grid { layout, rows, starts: problem.starts.clone() })
    }

    pub fn value(&self, p: Point) -> f64 {
        let (lo, hi) = self.layout.extent(p.y);
        if p.x < lo || p.x > hi {
            return UNREACHABLE;
        }
        self.rows[(p.y - self.layout.y0) as usize][(p.x - lo) as usize]
    }

    /// Maximising path ending at `end`, listed from its start point.
    ///
    /// Ties are broken towards the horizontal predecessor, then the vertical
    /// one; a path only stops at a start point when both predecessors are
    /// strictly worse.
    pub fn backtrack(&self, end: Point) -> Option<Vec<Point>> {
        let mut p = end;
        let v = self.value(p);
        if !v.is_finite() {
            return None;
        }
        let mut path = vec![p];
        loop {
            let left = self.value(p.offset(-1, 0));
            let down = self.value(p.offset(0, -1));
            let start = if self.starts.binary_search(&p).is_ok() { 0.0 } else { UNREACHABLE };
            let best = left.max(down).max(start);
            if !best.is_finite() {
                return None;
            }
            if left == best {
                p = p.offset(-1, 0);
            } else if down == best {
                p = p.offset(0, -1);
            } else {
                break;
            }
            path.push(p);
        }
        path.reverse();
        Some(path)
    }
}
