//! Welch power spectral density.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transforms::plan;

/// Averaged periodogram on a centred frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    /// Cycles per sample, ascending from `-1/2`.
    pub freqs: Vec<f64>,
    /// Power relative to the strongest bin.
    pub power_db: Vec<f64>,
    /// Linear density; `Σ linear / len` is the mean signal power.
    pub linear: Vec<f64>,
}

impl PsdEstimate {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Integral of the linear density over one period.
    pub fn mean_power(&self) -> f64 {
        self.linear.iter().sum::<f64>() / self.linear.len() as f64
    }

    pub fn peak(&self) -> f64 {
        self.linear.iter().cloned().fold(0.0, f64::max)
    }
}

/// Symmetric Hann window of `len` samples.
pub fn hann(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (len - 1) as f64).cos())
        .collect()
}

/// Hann-windowed segments of `segment` samples advancing by
/// `segment - overlap`; no detrending. `segment` must be a power of two.
pub fn psd_welch(signal: &[Complex64], segment: usize, overlap: usize) -> Result<PsdEstimate> {
    if segment == 0 || segment > signal.len() {
        return Err(Error::dim(format!(
            "segment of {segment} samples for a signal of {}",
            signal.len()
        )));
    }
    if overlap >= segment {
        return Err(Error::dim(format!("overlap {overlap} must be below segment {segment}")));
    }
    let fft = plan(segment)?;
    let win = hann(segment);
    let u: f64 = win.iter().map(|w| w * w).sum();
    let step = segment - overlap;
    let count = (signal.len() - segment) / step + 1;
    let mut acc = vec![0.0; segment];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment];
    for s in 0..count {
        let seg = &signal[s * step..s * step + segment];
        buf.iter_mut().zip(seg).zip(&win).for_each(|((b, x), w)| *b = x * w);
        fft.forward(&mut buf);
        acc.iter_mut().zip(&buf).for_each(|(a, b)| *a += b.norm_sqr());
    }
    // unitary transform: |X|² = |X_unitary|²·segment
    let scale = segment as f64 / (u * count as f64);
    let half = segment / 2;
    let linear: Vec<f64> = (0..segment).map(|i| acc[(i + half) % segment] * scale).collect();
    let freqs = (0..segment)
        .map(|i| (i as f64 - half as f64) / segment as f64)
        .collect();
    let peak = linear.iter().cloned().fold(0.0, f64::max);
    let power_db = linear
        .iter()
        .map(|p| 10.0 * (p / peak).log10())
        .collect();
    Ok(PsdEstimate {
        freqs,
        power_db,
        linear,
    })
}

/// Out-of-band comparison between two estimates on the same axis.
#[derive(Debug, Clone, PartialEq)]
pub struct StopbandGap {
    /// Mean over stopband bins of `reference_dB - candidate_dB`.
    pub mean_db: f64,
    pub min_db: f64,
    pub bins: usize,
}

/// Bins with `|f| > edge` where `edge` is in cycles per sample.
pub fn stopband_bins(psd: &PsdEstimate, edge: f64) -> Vec<usize> {
    (0..psd.len()).filter(|&i| psd.freqs[i].abs() > edge + 1e-12).collect()
}

/// Stopband edge for `active` centred subcarriers out of `m`, pushed `guard`
/// subcarrier spacings past the active band edge.
pub fn stopband_edge(m: usize, active: usize, guard: usize) -> f64 {
    (active / 2 + guard) as f64 / m as f64
}

/// How far `candidate` sits below `reference` in the stopband.
pub fn stopband_gap(reference: &PsdEstimate, candidate: &PsdEstimate, edge: f64) -> Result<StopbandGap> {
    if reference.freqs != candidate.freqs {
        return Err(Error::dim("PSD estimates are on different frequency grids"));
    }
    let bins = stopband_bins(reference, edge);
    if bins.is_empty() {
        return Err(Error::dim(format!("no bins beyond |f| = {edge}")));
    }
    let diffs: Vec<f64> = bins
        .iter()
        .map(|&i| reference.power_db[i] - candidate.power_db[i])
        .collect();
    Ok(StopbandGap {
        mean_db: diffs.iter().sum::<f64>() / diffs.len() as f64,
        min_db: diffs.iter().cloned().fold(f64::INFINITY, f64::min),
        bins: bins.len(),
    })
}
