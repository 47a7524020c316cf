//! Deterministic labelled random streams.
//!
//! Every stream is keyed by `(seed, label)`: the ChaCha key is the SHA-256 of
//! the little-endian seed followed by the label bytes. Monte Carlo trials
//! derive their own stream from a label such as `"snr3/trial17/noise"`, so
//! results do not depend on evaluation order or worker count.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: String,
    inner: ChaCha12Rng,
}

/// Derives the stream for `(seed, label)`.
pub fn derive_stream(seed: u64, label: &str) -> RngStream {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    RngStream {
        seed,
        label: label.to_string(),
        inner: ChaCha12Rng::from_seed(key),
    }
}

impl RngStream {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// A new independent stream labelled `"<self label>/<suffix>"`.
    pub fn child(&self, suffix: &str) -> RngStream {
        derive_stream(self.seed, &format!("{}/{suffix}", self.label))
    }

    /// Circular complex Gaussian with `E|z|² = variance`.
    pub fn complex_gaussian(&mut self, variance: f64) -> Complex64 {
        let s = (variance / 2.0).sqrt();
        let re: f64 = self.inner.sample(StandardNormal);
        let im: f64 = self.inner.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    }

    pub fn bits(&mut self, count: usize) -> Vec<u8> {
        (0..count).map(|_| (self.inner.next_u32() & 1) as u8).collect()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
