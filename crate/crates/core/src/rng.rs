use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution, StandardNormal, Uniform};

/// A deterministic, splittable random stream.
///
/// Every source of randomness in the workspace flows through one of these.
/// A stream is identified by `(seed, stream_id)`: the same pair yields the
/// same draws on every platform and every run, and distinct stream ids give
/// statistically independent streams from the same seed, so parallel trials
/// can each own one without coordination.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { inner }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        Uniform::new(0.0f64, 1.0).unwrap().sample(&mut self.inner)
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Binomial(n, p) draw.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        Binomial::new(n, p)
            .expect("binomial parameters must satisfy 0 <= p <= 1")
            .sample(&mut self.inner)
    }

    /// Uniform choice of an index in `0..k`.
    pub fn choose(&mut self, k: usize) -> usize {
        assert!(k > 0, "cannot choose from an empty range");
        Uniform::new(0usize, k).unwrap().sample(&mut self.inner)
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        Uniform::new_inclusive(lo, hi)
            .unwrap()
            .sample(&mut self.inner)
    }

    /// In-place Fisher-Yates shuffle of indices `0..n`, returned as a permutation.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.choose(i + 1);
            perm.swap(i, j);
        }
        perm
    }

    /// A uniformly random size-`k` subset of `0..n`, in selection order.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        // Partial Fisher-Yates over an index pool.
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let j = i + self.choose(n - i);
            pool.swap(i, j);
            out.push(pool[i]);
        }
        out
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

/// Derives a child seed from a master seed and an index (splitmix64 mixing).
///
/// Used by the benchmark harness to give each sweep cell an independent,
/// reproducible seed recorded in the sidecar.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
