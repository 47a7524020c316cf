//! Transmit windows: the OCBT per-symbol window and the W-OFDM edge tapers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// OCBT window of one symbol period (`f_p`, length `M`) and its `K`-fold
/// tiling over a block.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowProfile {
    per_symbol: Vec<f64>,
    tiled: Vec<f64>,
    mean: f64,
}

impl WindowProfile {
    /// Wraps an arbitrary per-symbol window (tiled once).
    pub fn from_per_symbol(per_symbol: Vec<f64>) -> Self {
        let mean = mean_of(&per_symbol);
        WindowProfile {
            tiled: per_symbol.clone(),
            per_symbol,
            mean,
        }
    }

    /// `f_p ≡ 1` of length `m`.
    pub fn rectangular(m: usize) -> Self {
        Self::from_per_symbol(vec![1.0; m])
    }

    pub fn per_symbol(&self) -> &[f64] {
        &self.per_symbol
    }

    pub fn tiled(&self) -> &[f64] {
        &self.tiled
    }

    /// `E[f_p] = (1/M) Σ f_p`.
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

fn mean_of(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Raised-cosine pulse `h(τ) = sinc(τ) cos(πβτ) / (1 - (2βτ)²)` with time
/// `τ` in units of the symbol period.
pub fn raised_cosine_pulse(tau: f64, beta: f64) -> f64 {
    let den = 1.0 - (2.0 * beta * tau).powi(2);
    if den.abs() < 1e-12 {
        // removable singularity at |τ| = 1/(2β)
        PI / 4.0 * sinc(1.0 / (2.0 * beta))
    } else {
        sinc(tau) * (PI * beta * tau).cos() / den
    }
}

/// OCBT window: an `L/2`-sample rising edge taken from the raised-cosine
/// pulse truncated to two symbols and sampled at `L/2` samples per symbol
/// (`τ_q = -1 + 2q/L`, `q < L/2`), `M - L` ones, and the mirrored edge.
pub fn build_ocbt_window(m: usize, taper_len: usize, beta: f64) -> Result<WindowProfile> {
    if taper_len % 2 != 0 || taper_len > m {
        return Err(Error::dim(format!(
            "window taper L = {taper_len} must be even and <= M = {m}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::dim(format!("roll-off beta = {beta} outside [0, 1]")));
    }
    let half = taper_len / 2;
    let rise: Vec<f64> = (0..half)
        .map(|q| raised_cosine_pulse(-1.0 + 2.0 * q as f64 / taper_len as f64, beta))
        .collect();
    let mut f = Vec::with_capacity(m);
    f.extend_from_slice(&rise);
    f.extend(std::iter::repeat_n(1.0, m - taper_len));
    f.extend(rise.iter().rev());
    Ok(WindowProfile::from_per_symbol(f))
}

/// Repeats `f_p` `K` times across the block.
pub fn tile_window(profile: &WindowProfile, k: usize) -> WindowProfile {
    let mut tiled = Vec::with_capacity(profile.per_symbol.len() * k);
    for _ in 0..k {
        tiled.extend_from_slice(&profile.per_symbol);
    }
    WindowProfile {
        per_symbol: profile.per_symbol.clone(),
        tiled,
        mean: profile.mean,
    }
}

pub fn window_mean(profile: &WindowProfile) -> f64 {
    profile.mean
}

/// Complementary raised-cosine tapers for the W-OFDM overlap region.
#[derive(Debug, Clone, PartialEq)]
pub struct WofdmWindow {
    pub rise: Vec<f64>,
    pub fall: Vec<f64>,
}

impl WofdmWindow {
    pub fn len(&self) -> usize {
        self.rise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rise.is_empty()
    }
}

/// `rise[q] = ½(1 - cos(π(q+½)/W))`, `fall = reverse(rise)`.
pub fn build_wofdm_window(w_len: usize) -> WofdmWindow {
    let rise: Vec<f64> = (0..w_len)
        .map(|q| 0.5 * (1.0 - (PI * (q as f64 + 0.5) / w_len as f64).cos()))
        .collect();
    let fall = rise.iter().rev().copied().collect();
    WofdmWindow { rise, fall }
}
