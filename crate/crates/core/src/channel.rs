//! Channel impairments: AWGN, static FIR multipath and tapped-delay-line
//! Rayleigh fading.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::buffer::SampleBuffer;
use crate::error::{Error, Result};
use crate::rng::RngStream;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex tap gains at integer sample delays `0..G`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::dim("channel needs at least one tap"));
        }
        if taps.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::dim("channel taps must be finite"));
        }
        Ok(ChannelRealization { taps })
    }

    /// The single unit tap.
    pub fn ideal() -> Self {
        ChannelRealization {
            taps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    /// Tap count `G`.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }

    /// Scaled to unit total energy.
    pub fn normalized(&self) -> Self {
        let e = self.energy().sqrt();
        if e == 0.0 {
            return self.clone();
        }
        ChannelRealization {
            taps: self.taps.iter().map(|t| t / e).collect(),
        }
    }
}

/// Linear convolution; output length `len + G - 1`.
pub fn fir_convolve(signal: &[Complex64], ch: &ChannelRealization) -> SampleBuffer {
    if signal.is_empty() {
        return SampleBuffer::default();
    }
    let mut out = vec![ZERO; signal.len() + ch.len() - 1];
    for (d, &h) in ch.taps().iter().enumerate() {
        if h == ZERO {
            continue;
        }
        for (o, &s) in out[d..].iter_mut().zip(signal) {
            *o += h * s;
        }
    }
    SampleBuffer::from_vec(out)
}

/// Dense row-major square matrix. Used by the block-form channel model,
/// which is a teaching/oracle path for small sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// The lower-triangular Toeplitz matrix acting on the current block and the
/// upper-triangular one carrying the previous block's tail, so that
/// `y_i = current·s_i + previous·s_{i-1}`.
pub fn to_toeplitz(ch: &ChannelRealization, block_len: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    if ch.len() > block_len {
        return Err(Error::dim(format!(
            "channel has {} taps, longer than the block of {block_len}",
            ch.len()
        )));
    }
    let mut current = DenseMatrix::zeros(block_len);
    let mut previous = DenseMatrix::zeros(block_len);
    for r in 0..block_len {
        for (d, &h) in ch.taps().iter().enumerate() {
            if d <= r {
                current.data[r * block_len + (r - d)] = h;
            } else {
                // sample r - d of this block is sample block_len + r - d of the last one
                previous.data[r * block_len + (block_len + r - d)] = h;
            }
        }
    }
    Ok((current, previous))
}

/// Per-sample noise power `P_N` of circular complex Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub variance: f64,
}

impl NoiseModel {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(Error::dim(format!("noise variance {variance} must be >= 0")));
        }
        Ok(NoiseModel { variance })
    }

    /// Noise variance giving `snr_db` against unit signal power.
    pub fn from_snr_db(snr_db: f64) -> Self {
        NoiseModel {
            variance: 10f64.powf(-snr_db / 10.0),
        }
    }
}

/// Adds noise in place; real and imaginary parts each get `variance/2`.
pub fn add_awgn(signal: &mut [Complex64], noise: NoiseModel, rng: &mut RngStream) {
    if noise.variance == 0.0 {
        return;
    }
    for s in signal.iter_mut() {
        *s += rng.complex_gaussian(noise.variance);
    }
}

/// A tapped-delay-line power-delay profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingProfile {
    pub delays_ns: Vec<f64>,
    pub powers_db: Vec<f64>,
    pub sample_rate: f64,
}

/// How a fading realization is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TapNormalization {
    /// Every realization has exactly unit energy.
    #[default]
    PerRealization,
    /// Path powers are divided by the profile's total power, so the mean
    /// energy is one and each tap's mean power follows the profile.
    Ensemble,
}

impl FadingProfile {
    /// ITU-R vehicular-A: delays 0/310/710/1090/1730/2510 ns, powers
    /// 0/-1/-9/-10/-15/-20 dB.
    pub fn vehicular_a(sample_rate: f64) -> Self {
        FadingProfile {
            delays_ns: vec![0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0],
            powers_db: vec![0.0, -1.0, -9.0, -10.0, -15.0, -20.0],
            sample_rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delays_ns.is_empty() || self.delays_ns.len() != self.powers_db.len() {
            return Err(Error::dim("fading profile needs equal, non-empty delay and power lists"));
        }
        if self.delays_ns[0] != 0.0 {
            return Err(Error::dim("fading profile's first delay must be 0"));
        }
        if self.delays_ns.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::dim("fading profile delays must be nondecreasing"));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return Err(Error::dim("fading profile sample_rate must be positive"));
        }
        Ok(())
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path, e))?;
        let p: FadingProfile = serde_json::from_str(&text)?;
        p.validate()?;
        Ok(p)
    }

    /// Each path delay rounded to the nearest sample.
    pub fn tap_indices(&self) -> Vec<usize> {
        self.delays_ns
            .iter()
            .map(|d| (d * 1e-9 * self.sample_rate).round() as usize)
            .collect()
    }

    /// Linear path powers.
    pub fn path_powers(&self) -> Vec<f64> {
        self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect()
    }

    /// Draws one realization: independent Rayleigh gains per path, summed on
    /// coincident taps, then scaled per `norm`.
    pub fn realize(&self, rng: &mut RngStream, norm: TapNormalization) -> ChannelRealization {
        let idx = self.tap_indices();
        let powers = self.path_powers();
        let total: f64 = powers.iter().sum();
        let len = idx.iter().max().map_or(1, |m| m + 1);
        let mut taps = vec![ZERO; len];
        for (&i, &p) in idx.iter().zip(&powers) {
            taps[i] += rng.complex_gaussian(p);
        }
        let ch = ChannelRealization { taps };
        match norm {
            TapNormalization::PerRealization => ch.normalized(),
            TapNormalization::Ensemble => ChannelRealization {
                taps: ch.taps.iter().map(|t| t / total.sqrt()).collect(),
            },
        }
    }
}

/// One unit-energy realization of `profile`.
pub fn veha_realization(profile: &FadingProfile, rng: &mut RngStream) -> ChannelRealization {
    profile.realize(rng, TapNormalization::PerRealization)
}
