//! Reproducible exponential weight fields.
//!
//! Every site `(x, y)` of Z^2 owns a weight that is a pure function of
//! `(root seed, experiment label, replica, x, y)`. The bits come from the
//! Philox4x64-10 counter-based generator: the key holds the root seed and a
//! hash of the label, the counter holds the column block, the row, the replica
//! index and a domain tag. Four consecutive columns share one generator call.
//! Results therefore do not depend on traversal order or on how replicas are
//! distributed over threads.

use crate::lattice::Point;
use crate::lpp::StartSet;

const PHILOX_M0: u64 = 0xD2E7_470E_E14C_6C93;
const PHILOX_M1: u64 = 0xCA5A_8263_9512_1157;
const PHILOX_W0: u64 = 0x9E37_79B9_7F4A_7C15;
const PHILOX_W1: u64 = 0xBB67_AE85_84CA_A73B;

/// Domain tag for lattice weights.
const DOMAIN_LATTICE: u64 = 0;
/// Domain tag for sequential streams.
const DOMAIN_STREAM: u64 = 1;

#[inline(always)]
fn mulhilo(a: u64, b: u64) -> (u64, u64) {
    let p = (a as u128) * (b as u128);
    ((p >> 64) as u64, p as u64)
}

/// The Philox4x64 bijection with 10 rounds.
#[inline]
pub fn philox4x64(counter: [u64; 4], key: [u64; 2]) -> [u64; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, c[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, c[2]);
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
    }
    c
}

/// Four independent evaluations of [`philox4x64`] with interleaved rounds,
/// so that the multiply chains overlap in the pipeline.
#[inline]
pub fn philox4x64_x4(counters: [[u64; 4]; 4], key: [u64; 2]) -> [[u64; 4]; 4] {
    let mut c = counters;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        for ci in c.iter_mut() {
            let (hi0, lo0) = mulhilo(PHILOX_M0, ci[0]);
            let (hi1, lo1) = mulhilo(PHILOX_M1, ci[2]);
            *ci = [hi1 ^ ci[1] ^ k[0], lo1, hi0 ^ ci[3] ^ k[1], lo0];
        }
    }
    c
}

/// 64-bit FNV-1a hash, used to turn experiment labels into key words.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Uniform on `[0, 1)` with 53 random bits.
#[inline(always)]
pub fn unit_uniform(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exp(1) variate by inversion of a 53-bit uniform.
#[inline(always)]
pub fn unit_exponential(bits: u64) -> f64 {
    0.0 - ln_positive(1.0 - unit_uniform(bits))
}

/// Natural logarithm of a positive normal `x`, branch-free so that loops
/// over slices vectorise. Error below one ulp (fdlibm reduction and
/// minimax polynomial).
#[inline(always)]
pub fn ln_positive(x: f64) -> f64 {
    const LG1: f64 = 6.666666666666735130e-01;
    const LG2: f64 = 3.999999999940941908e-01;
    const LG3: f64 = 2.857142874366239149e-01;
    const LG4: f64 = 2.222219843214978396e-01;
    const LG5: f64 = 1.818357216161805012e-01;
    const LG6: f64 = 1.531383769920937332e-01;
    const LG7: f64 = 1.479819860511658591e-01;
    const LN2_HI: f64 = 6.93147180369123816490e-01;
    const LN2_LO: f64 = 1.90821492927058770002e-10;

    let bits = x.to_bits();
    // Scale the mantissa into [sqrt(2)/2, sqrt(2)) and track the exponent.
    let hx = ((bits >> 32) as u32).wrapping_add(0x3ff0_0000 - 0x3fe6_a09e);
    let k = ((hx >> 20) as i32) - 0x3ff;
    let hx = (hx & 0x000f_ffff) + 0x3fe6_a09e;
    let m = f64::from_bits(((hx as u64) << 32) | (bits & 0xffff_ffff));
    let f = m - 1.0;
    let hfsq = 0.5 * f * f;
    let s = f / (2.0 + f);
    let z = s * s;
    let w = z * z;
    let t1 = w * (LG2 + w * (LG4 + w * LG6));
    let t2 = z * (LG1 + w * (LG3 + w * (LG5 + w * LG7)));
    let r = t2 + t1;
    let dk = k as f64;
    s * (hfsq + r) + dk * LN2_LO - hfsq + f + dk * LN2_HI
}

/// Identifies one replica of one experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub root: u64,
    pub label: String,
    pub replica: u64,
}

impl Seed {
    pub fn new(root: u64, label: impl Into<String>, replica: u64) -> Self {
        Seed { root, label: label.into(), replica }
    }

    pub fn key(&self) -> [u64; 2] {
        [self.root, fnv1a64(self.label.as_bytes())]
    }

    /// Same experiment and root, different replica.
    pub fn with_replica(&self, replica: u64) -> Self {
        Seed { replica, ..self.clone() }
    }

    /// A sequential stream of variates independent of the lattice weights.
    pub fn stream(&self, stream_id: u64) -> StreamRng {
        StreamRng::new(self.key(), self.replica, stream_id)
    }
}

/// Anything that can produce the weight of every site of a row segment.
pub trait WeightSource: Sync {
    /// Writes the weights of `(x0, y), (x0 + 1, y), ...` into `out`.
    fn fill_row(&self, y: i64, x0: i64, out: &mut [f64]);

    fn weight_at(&self, p: Point) -> f64 {
        let mut buf = [0.0];
        self.fill_row(p.y, p.x, &mut buf);
        buf[0]
    }
}

/// I.i.d. Exp(1) weights on Z^2, optionally set to zero on a start set
/// (the convention used by the TASEP coupling).
#[derive(Clone, Debug)]
pub struct WeightField {
    seed: Seed,
    key: [u64; 2],
    zero_set: Option<StartSet>,
    domain: Option<(Point, Point)>,
}

impl WeightField {
    pub fn new(seed: Seed) -> Self {
        let key = seed.key();
        WeightField { seed, key, zero_set: None, domain: None }
    }

    pub fn with_zero_set(mut self, set: StartSet) -> Self {
        self.zero_set = Some(set);
        self
    }

    /// Records the bounding box the caller intends to query. Informational.
    pub fn with_domain_hint(mut self, lower: Point, upper: Point) -> Self {
        self.domain = Some((lower, upper));
        self
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn zero_set(&self) -> Option<&StartSet> {
        self.zero_set.as_ref()
    }

    pub fn domain_hint(&self) -> Option<(Point, Point)> {
        self.domain
    }

}

impl WeightSource for WeightField {
    fn fill_row(&self, y: i64, x0: i64, out: &mut [f64]) {
        let n = out.len() as i64;
        if n == 0 {
            return;
        }
        let end = x0 + n;
        let key = self.key;
        let replica = self.seed.replica;
        let block = |bx: i64| philox4x64([bx as u64, y as u64, replica, DOMAIN_LATTICE], key);
        // Leading partial block, then whole blocks, then the trailing part.
        let head = ((4 - x0.rem_euclid(4)) % 4).min(n) as usize;
        if head > 0 {
            let words = block(x0.div_euclid(4));
            let lane0 = x0.rem_euclid(4) as usize;
            for l in 0..head {
                out[l] = 1.0 - unit_uniform(words[lane0 + l]);
            }
        }
        let body_start = x0 + head as i64;
        let (_, rest) = out.split_at_mut(head);
        let mut wide = rest.chunks_exact_mut(16);
        let mut bx = body_start.div_euclid(4);
        for chunk in &mut wide {
            let ctr = |i: i64| [(bx + i) as u64, y as u64, replica, DOMAIN_LATTICE];
            let words = philox4x64_x4([ctr(0), ctr(1), ctr(2), ctr(3)], key);
            for (l, slot) in chunk.iter_mut().enumerate() {
                *slot = 1.0 - unit_uniform(words[l / 4][l % 4]);
            }
            bx += 4;
        }
        let mut chunks = wide.into_remainder().chunks_exact_mut(4);
        for chunk in &mut chunks {
            let words = block(bx);
            for l in 0..4 {
                chunk[l] = 1.0 - unit_uniform(words[l]);
            }
            bx += 1;
        }
        let tail = chunks.into_remainder();
        if !tail.is_empty() {
            let words = block(bx);
            for (l, slot) in tail.iter_mut().enumerate() {
                *slot = 1.0 - unit_uniform(words[l]);
            }
        }
        for v in out.iter_mut() {
            *v = 0.0 - ln_positive(*v);
        }
        if let Some(zs) = &self.zero_set {
            for col in zs.row_points(y) {
                if col >= x0 && col < end {
                    out[(col - x0) as usize] = 0.0;
                }
            }
        }
    }
}

/// Weights given by an arbitrary function of the site. Handy for fixed
/// hand-built instances.
pub struct FnWeights<F: Fn(Point) -> f64 + Sync>(pub F);

impl<F: Fn(Point) -> f64 + Sync> WeightSource for FnWeights<F> {
    fn fill_row(&self, y: i64, x0: i64, out: &mut [f64]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (self.0)(Point::new(x0 + i as i64, y));
        }
    }
}

/// A sequential generator built on the same bijection, for dynamics that
/// consume an a-priori unknown number of variates.
#[derive(Clone, Debug)]
pub struct StreamRng {
    key: [u64; 2],
    replica: u64,
    stream_id: u64,
    counter: u64,
    buf: [u64; 4],
    pos: usize,
}

impl StreamRng {
    pub fn new(key: [u64; 2], replica: u64, stream_id: u64) -> Self {
        StreamRng { key, replica, stream_id, counter: 0, buf: [0; 4], pos: 4 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        if self.pos == 4 {
            self.buf = philox4x64(
                [self.counter, self.stream_id, self.replica, DOMAIN_STREAM],
                self.key,
            );
            self.counter += 1;
            self.pos = 0;
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        v
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        unit_uniform(self.next_u64())
    }

    /// Exponential variate with the given rate.
    #[inline]
    pub fn next_exp(&mut self, rate: f64) -> f64 {
        unit_exponential(self.next_u64()) / rate
    }

    /// Uniform index in `0..n` (multiply-shift; bias below 2^-64 * n).
    #[inline]
    pub fn next_below(&mut self, n: usize) -> usize {
        (((self.next_u64() as u128) * (n as u128)) >> 64) as usize
    }
}
