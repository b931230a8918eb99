//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, stream, counter, lane)`, computed
//! with the Philox-2x64-10 block cipher. A particle never stores generator
//! state: stream `i` is particle `i`, the counter names the phase that needs
//! randomness (initial position, initial velocity, `r₁`/`r₂` of sweep `s`),
//! and the lane is the coordinate. Results are therefore independent of the
//! order in which particles are processed.

const PHILOX_M: u64 = 0xD2B7_4407_B1CE_6E93;
const PHILOX_W: u64 = 0x9E37_79B9_7F4A_7C15;
const ROUNDS: usize = 10;

/// Philox-2x64 with ten rounds.
pub fn philox2x64(counter: [u64; 2], key: u64) -> [u64; 2] {
    let mut ctr = counter;
    let mut key = key;
    for round in 0..ROUNDS {
        if round > 0 {
            key = key.wrapping_add(PHILOX_W);
        }
        let product = u128::from(PHILOX_M) * u128::from(ctr[0]);
        let hi = (product >> 64) as u64;
        let lo = product as u64;
        ctr = [hi ^ key ^ ctr[1], lo];
    }
    ctr
}

/// Map 53 random bits to `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One particle's substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stream {
    seed: u64,
    index: u64,
}

impl Stream {
    pub const fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Raw 64-bit draw. `lane` must fit in 32 bits.
    #[inline]
    pub fn bits(&self, counter: u64, lane: u64) -> u64 {
        debug_assert!(lane <= u64::from(u32::MAX));
        let word = (counter << 32) | (lane & 0xFFFF_FFFF);
        philox2x64([self.index, word], self.seed)[0]
    }

    /// Uniform draw in `[0, 1)`. `counter` must be below `2³²`.
    #[inline]
    pub fn uniform(&self, counter: u64, lane: u64) -> f64 {
        unit_f64(self.bits(counter, lane))
    }

    /// Uniform draw in `[lower, upper)`.
    #[inline]
    pub fn uniform_in(&self, counter: u64, lane: u64, lower: f64, upper: f64) -> f64 {
        lower + (upper - lower) * self.uniform(counter, lane)
    }
}

/// The family of per-particle substreams for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartStreams {
    seed: u64,
    count: usize,
    dim: usize,
}

impl StartStreams {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stream(&self, index: usize) -> Stream {
        Stream::new(self.seed, index as u64)
    }
}

/// `count` reproducible substreams for a `dim`-dimensional problem.
pub fn make_start_streams(seed: u64, count: usize, dim: usize) -> StartStreams {
    StartStreams { seed, count, dim }
}
