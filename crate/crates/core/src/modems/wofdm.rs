//! Windowed OFDM baseline.
//!
//! Each symbol is cyclically extended by `CP_W` samples in front and `CS`
//! behind; the outer `W` samples on each side are tapered and overlap-added
//! with the neighbouring symbols. Symbols start every `M + CP_W + CS - W`
//! samples and the receiver takes the `M`-sample core at offset `CP_W`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::buffer::{SampleBuffer, SymbolGrid};
use crate::channel::ChannelRealization;
use crate::equalizer::{freq_response, EqualizerSpec};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::transforms::{plan, FftPlan};
use crate::windows::{build_wofdm_window, WofdmWindow};

#[derive(Debug, Clone)]
pub struct WofdmModem {
    subcarriers: usize,
    symbols: usize,
    cpw_len: usize,
    cs_len: usize,
    window: WofdmWindow,
    fft: Arc<FftPlan>,
}

impl WofdmModem {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let params = params.clone().validate()?;
        params.check_wofdm_lengths()?;
        Ok(WofdmModem {
            subcarriers: params.subcarriers,
            symbols: params.symbols_per_block,
            cpw_len: params.cpw_len(),
            cs_len: params.cs_len(),
            window: build_wofdm_window(params.w_len()),
            fft: plan(params.subcarriers)?,
        })
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn window(&self) -> &WofdmWindow {
        &self.window
    }

    fn extended_len(&self) -> usize {
        self.subcarriers + self.cpw_len + self.cs_len
    }

    /// Distance between consecutive symbol starts.
    pub fn stride(&self) -> usize {
        self.extended_len() - self.window.len()
    }

    /// `N·(M + CP_W + CS - W) + W`.
    pub fn frame_len(&self) -> usize {
        self.symbols * self.stride() + self.window.len()
    }

    pub fn modulate(&self, grid: &SymbolGrid) -> Result<SampleBuffer> {
        grid.check_shape(self.subcarriers, self.symbols)?;
        let m = self.subcarriers;
        let w = self.window.len();
        let ext = self.extended_len();
        let mut out = vec![Complex64::new(0.0, 0.0); self.frame_len()];
        let mut sym = vec![Complex64::new(0.0, 0.0); m];
        for n in 0..self.symbols {
            sym.copy_from_slice(grid.column(n));
            self.fft.inverse(&mut sym);
            let start = n * self.stride();
            for q in 0..ext {
                let mut v = sym[(q + m - self.cpw_len % m) % m];
                if q < w {
                    v *= self.window.rise[q];
                } else if q >= ext - w {
                    v *= self.window.fall[q - (ext - w)];
                }
                out[start + q] += v;
            }
        }
        Ok(SampleBuffer::from_vec(out))
    }

    /// Core of symbol `n` of a frame, transformed and equalized.
    pub fn demodulate_symbol(&self, rx: &[Complex64], n: usize, per_bin_eq: &[Complex64]) -> Result<Vec<Complex64>> {
        let start = n * self.stride() + self.cpw_len;
        if n >= self.symbols || rx.len() < start + self.subcarriers || per_bin_eq.len() != self.subcarriers {
            return Err(Error::dim(format!(
                "cannot take W-OFDM symbol {n} from {} samples with {} eq bins",
                rx.len(),
                per_bin_eq.len()
            )));
        }
        let mut core = rx[start..start + self.subcarriers].to_vec();
        self.fft.forward(&mut core);
        core.iter_mut().zip(per_bin_eq).for_each(|(z, e)| *z *= e);
        Ok(core)
    }

    pub fn demodulate(&self, rx: &[Complex64], per_bin_eq: &[Complex64]) -> Result<SymbolGrid> {
        let cols = (0..self.symbols)
            .map(|n| self.demodulate_symbol(rx, n, per_bin_eq))
            .collect::<Result<Vec<_>>>()?;
        SymbolGrid::from_columns(&cols)
    }

    pub fn receive(&self, rx: &[Complex64], ch: &ChannelRealization, eq: &EqualizerSpec) -> Result<SymbolGrid> {
        let coeffs = eq.coefficients(&freq_response(ch, self.subcarriers)?)?;
        self.demodulate(rx, &coeffs)
    }
}
