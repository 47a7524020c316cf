//! OCBT transmitter and receiver.
//!
//! Transmit: each of the `N` data columns goes through an `M`-point IDFT, is
//! windowed once by `f_p`, and its windowed sub-block is added to or
//! subtracted from each of the `K` block sub-blocks according to its Walsh
//! code, with `1/√N` normalization. Windowing before accumulation equals
//! windowing the summed block because the block window is `f_p` tiled.
//!
//! Receive: one `KM`-point frequency-domain equalization of the block, then
//! per symbol a matched-code sub-block sum scaled by `√N/K` and an `M`-point
//! DFT.

use std::sync::Arc;

use num_complex::Complex64;

use crate::buffer::{SampleBuffer, SymbolGrid};
use crate::channel::ChannelRealization;
use crate::codes::{despread_row, WalshCodeSet};
use crate::equalizer::{equalize_block, EqualizerSpec};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::transforms::{plan, FftPlan};
use crate::windows::{build_ocbt_window, tile_window, WindowProfile};

#[derive(Debug, Clone)]
pub struct OcbtModem {
    subcarriers: usize,
    symbols: usize,
    codes: WalshCodeSet,
    code_rows: Vec<usize>,
    window: WindowProfile,
    fft: Arc<FftPlan>,
}

impl OcbtModem {
    /// Modem with the raised-cosine window given by `L` and `beta`.
    pub fn new(params: &SystemParams) -> Result<Self> {
        let params = params.clone().validate()?;
        let window = build_ocbt_window(params.subcarriers, params.taper_len, params.beta)?;
        Self::with_window(&params, window)
    }

    /// Modem with an explicit per-symbol window of length `M`.
    pub fn with_window(params: &SystemParams, window: WindowProfile) -> Result<Self> {
        let params = params.clone().validate()?;
        let m = params.subcarriers;
        if window.per_symbol().len() != m {
            return Err(Error::dim(format!(
                "window has {} samples, expected M = {m}",
                window.per_symbol().len()
            )));
        }
        Ok(OcbtModem {
            subcarriers: m,
            symbols: params.symbols_per_block,
            codes: WalshCodeSet::new(params.spreading_factor)?,
            code_rows: (0..params.symbols_per_block).collect(),
            window: tile_window(&window, params.spreading_factor),
            fft: plan(m)?,
        })
    }

    /// Uses the given Walsh rows (one per symbol) instead of rows `0..N`.
    pub fn with_code_rows(mut self, rows: Vec<usize>) -> Result<Self> {
        if rows.len() != self.symbols {
            return Err(Error::dim(format!(
                "{} code rows given for N = {} symbols",
                rows.len(),
                self.symbols
            )));
        }
        let mut seen = vec![false; self.codes.order()];
        for &r in &rows {
            if r >= self.codes.order() {
                return Err(Error::Index {
                    index: r,
                    bound: self.codes.order(),
                });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::dim(format!("code row {r} used twice")));
            }
        }
        self.code_rows = rows;
        Ok(self)
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn spreading_factor(&self) -> usize {
        self.codes.order()
    }

    pub fn block_len(&self) -> usize {
        self.codes.order() * self.subcarriers
    }

    pub fn codes(&self) -> &WalshCodeSet {
        &self.codes
    }

    pub fn code_rows(&self) -> &[usize] {
        &self.code_rows
    }

    pub fn window(&self) -> &WindowProfile {
        &self.window
    }

    /// One `K·M`-sample block from an `M × N` grid. No prefix or suffix.
    pub fn modulate(&self, grid: &SymbolGrid) -> Result<SampleBuffer> {
        grid.check_shape(self.subcarriers, self.symbols)?;
        let m = self.subcarriers;
        let norm = 1.0 / (self.symbols as f64).sqrt();
        let f = self.window.per_symbol();
        let mut block = vec![Complex64::new(0.0, 0.0); self.block_len()];
        let mut sub = vec![Complex64::new(0.0, 0.0); m];
        for (n, &row) in self.code_rows.iter().enumerate() {
            sub.copy_from_slice(grid.column(n));
            self.fft.inverse(&mut sub);
            for (s, w) in sub.iter_mut().zip(f) {
                *s *= w * norm;
            }
            for (dst, &chip) in block.chunks_exact_mut(m).zip(self.codes.row(row)) {
                if chip > 0 {
                    dst.iter_mut().zip(&sub).for_each(|(d, s)| *d += s);
                } else {
                    dst.iter_mut().zip(&sub).for_each(|(d, s)| *d -= s);
                }
            }
        }
        Ok(SampleBuffer::from_vec(block))
    }

    /// Recovers data column `l` from an equalized block.
    pub fn demodulate(&self, eq_block: &[Complex64], l: usize) -> Result<Vec<Complex64>> {
        if l >= self.symbols {
            return Err(Error::Index {
                index: l,
                bound: self.symbols,
            });
        }
        if eq_block.len() != self.block_len() {
            return Err(Error::dim(format!(
                "block has {} samples, expected K·M = {}",
                eq_block.len(),
                self.block_len()
            )));
        }
        let mut sub = despread_row(eq_block, &self.codes, self.code_rows[l], self.symbols)?.into_vec();
        self.fft.forward(&mut sub);
        Ok(sub)
    }

    pub fn demodulate_all(&self, eq_block: &[Complex64]) -> Result<SymbolGrid> {
        let cols = (0..self.symbols)
            .map(|l| self.demodulate(eq_block, l))
            .collect::<Result<Vec<_>>>()?;
        SymbolGrid::from_columns(&cols)
    }

    /// Equalizes a received block and demodulates every symbol.
    pub fn receive(
        &self,
        rx_block: &[Complex64],
        ch: &ChannelRealization,
        eq: &EqualizerSpec,
    ) -> Result<SymbolGrid> {
        let y = equalize_block(rx_block, ch, eq)?;
        self.demodulate_all(&y)
    }
}
