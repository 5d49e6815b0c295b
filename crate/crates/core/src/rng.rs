//! Seeded, stream-addressable randomness.
//!
//! A [`RandomSource`] is fully determined by `(master_seed, stream_id)`. The
//! harness gives run `i` the stream `i`, so the draws of a run never depend
//! on which worker executed it or in which order runs finished.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Threshold on `n * min(p, 1 - p)` below which binomial draws use inversion.
const INVERSION_THRESHOLD: f64 = 30.0;

#[derive(Clone, Debug)]
pub struct RandomSource {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform integer in `[0, bound)`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Exact `Bin(n, p)` sample. Inversion for small means, BTPE otherwise.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        if n == 0 || p <= 0.0 {
            return 0;
        }
        if p >= 1.0 {
            return n;
        }
        let flipped = p > 0.5;
        let q = if flipped { 1.0 - p } else { p };
        let k = if (n as f64) * q <= INVERSION_THRESHOLD {
            self.binomial_inversion(n, q)
        } else {
            Binomial::new(n, q)
                .expect("binomial parameters validated above")
                .sample(&mut self.rng)
        };
        if flipped {
            n - k
        } else {
            k
        }
    }

    // Sequential search through the pmf; requires p <= 1/2 and n*p small so
    // that (1-p)^n does not underflow.
    fn binomial_inversion(&mut self, n: u64, p: f64) -> u64 {
        let q = 1.0 - p;
        let s = p / q;
        let a = (n as f64 + 1.0) * s;
        let start = q.powf(n as f64);
        loop {
            let mut r = start;
            let mut u = self.unit();
            let mut x = 0u64;
            while u > r {
                u -= r;
                x += 1;
                if x > n {
                    break;
                }
                r *= a / x as f64 - s;
            }
            if x <= n {
                return x;
            }
        }
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
