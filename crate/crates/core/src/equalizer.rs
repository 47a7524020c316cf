//! Single-tap frequency-domain equalization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::buffer::SampleBuffer;
use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::transforms::plan;

/// Below this magnitude a bin counts as a spectral null for ZF.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualizerKind {
    Zf,
    Mmse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualizerSpec {
    pub kind: EqualizerKind,
    /// `P_N / P_s` with unit signal power; ignored for ZF.
    pub noise_variance: f64,
}

impl EqualizerSpec {
    pub fn zf() -> Self {
        EqualizerSpec {
            kind: EqualizerKind::Zf,
            noise_variance: 0.0,
        }
    }

    pub fn mmse(noise_variance: f64) -> Self {
        EqualizerSpec {
            kind: EqualizerKind::Mmse,
            noise_variance,
        }
    }

    /// Per-bin coefficients for the frequency response `response`.
    pub fn coefficients(&self, response: &[Complex64]) -> Result<Vec<Complex64>> {
        if !(self.noise_variance >= 0.0) {
            return Err(Error::dim(format!(
                "equalizer noise variance {} must be >= 0",
                self.noise_variance
            )));
        }
        response
            .iter()
            .enumerate()
            .map(|(bin, &h)| match self.kind {
                EqualizerKind::Zf => {
                    if h.norm() < SINGULAR_THRESHOLD {
                        Err(Error::SingularChannel {
                            bin,
                            magnitude: h.norm(),
                        })
                    } else {
                        Ok(h.inv())
                    }
                }
                EqualizerKind::Mmse => {
                    let den = h.norm_sqr() + self.noise_variance;
                    if den == 0.0 {
                        Err(Error::SingularChannel { bin, magnitude: 0.0 })
                    } else {
                        Ok(h.conj() / den)
                    }
                }
            })
            .collect()
    }
}

/// `H_b = Σ_p h_p e^{-j2πbp/nbins}` (unnormalized DFT of the zero-padded taps).
pub fn freq_response(ch: &ChannelRealization, nbins: usize) -> Result<Vec<Complex64>> {
    if ch.len() > nbins {
        return Err(Error::dim(format!(
            "channel of {} taps exceeds {nbins} frequency bins",
            ch.len()
        )));
    }
    let p = plan(nbins)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); nbins];
    buf[..ch.len()].copy_from_slice(ch.taps());
    p.forward(&mut buf);
    let scale = (nbins as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}

/// Equalizes one block with the unitary transform pair of its own length.
pub fn equalize_block(
    y: &[Complex64],
    ch: &ChannelRealization,
    spec: &EqualizerSpec,
) -> Result<SampleBuffer> {
    let coeffs = spec.coefficients(&freq_response(ch, y.len())?)?;
    equalize_with(y, &coeffs)
}

/// Equalizes with precomputed per-bin coefficients.
pub fn equalize_with(y: &[Complex64], coeffs: &[Complex64]) -> Result<SampleBuffer> {
    if coeffs.len() != y.len() {
        return Err(Error::dim(format!(
            "{} equalizer bins for a block of {}",
            coeffs.len(),
            y.len()
        )));
    }
    let p = plan(y.len())?;
    let mut buf = y.to_vec();
    p.forward(&mut buf);
    buf.iter_mut().zip(coeffs).for_each(|(z, c)| *z *= c);
    p.inverse(&mut buf);
    Ok(SampleBuffer::from_vec(buf))
}
