//! Cyclic-prefix OFDM baseline.

use std::sync::Arc;

use num_complex::Complex64;

use crate::buffer::{SampleBuffer, SymbolGrid};
use crate::channel::ChannelRealization;
use crate::equalizer::{freq_response, EqualizerSpec};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::transforms::{plan, FftPlan};

#[derive(Debug, Clone)]
pub struct CpOfdmModem {
    subcarriers: usize,
    symbols: usize,
    cp_len: usize,
    fft: Arc<FftPlan>,
}

impl CpOfdmModem {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let params = params.clone().validate()?;
        Ok(CpOfdmModem {
            subcarriers: params.subcarriers,
            symbols: params.symbols_per_block,
            cp_len: params.cp_len(),
            fft: plan(params.subcarriers)?,
        })
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn symbol_len(&self) -> usize {
        self.subcarriers + self.cp_len
    }

    pub fn frame_len(&self) -> usize {
        self.symbols * self.symbol_len()
    }

    /// Concatenated `[tail | IDFT]` symbols, `N·(M + CP)` samples.
    pub fn modulate(&self, grid: &SymbolGrid) -> Result<SampleBuffer> {
        grid.check_shape(self.subcarriers, self.symbols)?;
        let m = self.subcarriers;
        let mut out = Vec::with_capacity(self.frame_len());
        let mut sym = vec![Complex64::new(0.0, 0.0); m];
        for n in 0..self.symbols {
            sym.copy_from_slice(grid.column(n));
            self.fft.inverse(&mut sym);
            out.extend_from_slice(&sym[m - self.cp_len..]);
            out.extend_from_slice(&sym);
        }
        Ok(SampleBuffer::from_vec(out))
    }

    /// Drops the prefix, transforms, and applies the per-bin equalizer.
    pub fn demodulate(&self, rx_symbol: &[Complex64], per_bin_eq: &[Complex64]) -> Result<Vec<Complex64>> {
        if rx_symbol.len() != self.symbol_len() || per_bin_eq.len() != self.subcarriers {
            return Err(Error::dim(format!(
                "CP-OFDM symbol of {} samples / {} eq bins, expected {} / {}",
                rx_symbol.len(),
                per_bin_eq.len(),
                self.symbol_len(),
                self.subcarriers
            )));
        }
        let mut core = rx_symbol[self.cp_len..].to_vec();
        self.fft.forward(&mut core);
        core.iter_mut().zip(per_bin_eq).for_each(|(z, e)| *z *= e);
        Ok(core)
    }

    /// Demodulates a whole aligned frame received through `ch`.
    pub fn receive(&self, rx: &[Complex64], ch: &ChannelRealization, eq: &EqualizerSpec) -> Result<SymbolGrid> {
        if rx.len() < self.frame_len() {
            return Err(Error::dim(format!(
                "received {} samples, frame needs {}",
                rx.len(),
                self.frame_len()
            )));
        }
        let coeffs = eq.coefficients(&freq_response(ch, self.subcarriers)?)?;
        let cols = rx[..self.frame_len()]
            .chunks_exact(self.symbol_len())
            .map(|s| self.demodulate(s, &coeffs))
            .collect::<Result<Vec<_>>>()?;
        SymbolGrid::from_columns(&cols)
    }
}
