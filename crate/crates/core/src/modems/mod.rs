//! QAM mapping and the three transmit/receive chains.

pub mod cpofdm;
pub mod ocbt;
pub mod qam;
pub mod wofdm;

pub use cpofdm::CpOfdmModem;
pub use ocbt::OcbtModem;
pub use qam::{qam_demap, qam_map, BitStream, Constellation};
pub use wofdm::WofdmModem;

use num_complex::Complex64;

use crate::buffer::{SampleBuffer, SymbolGrid};
use crate::channel::ChannelRealization;
use crate::equalizer::EqualizerSpec;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::system::System;

/// A configured transceiver for one system.
#[derive(Debug, Clone)]
pub enum ModulationScheme {
    Ocbt(OcbtModem),
    CpOfdm(CpOfdmModem),
    WOfdm(WofdmModem),
}

impl ModulationScheme {
    pub fn new(system: System, params: &SystemParams) -> Result<Self> {
        Ok(match system {
            System::Ocbt => ModulationScheme::Ocbt(OcbtModem::new(params)?),
            System::CpOfdm => ModulationScheme::CpOfdm(CpOfdmModem::new(params)?),
            System::WOfdm => ModulationScheme::WOfdm(WofdmModem::new(params)?),
            System::Fbmc => {
                return Err(Error::UnknownSystem(
                    "FBMC has no waveform implementation".to_string(),
                ))
            }
        })
    }

    pub fn system(&self) -> System {
        match self {
            ModulationScheme::Ocbt(_) => System::Ocbt,
            ModulationScheme::CpOfdm(_) => System::CpOfdm,
            ModulationScheme::WOfdm(_) => System::WOfdm,
        }
    }

    pub fn subcarriers(&self) -> usize {
        match self {
            ModulationScheme::Ocbt(m) => m.subcarriers(),
            ModulationScheme::CpOfdm(m) => m.subcarriers(),
            ModulationScheme::WOfdm(m) => m.subcarriers(),
        }
    }

    /// Data columns carried by one frame.
    pub fn symbols(&self) -> usize {
        match self {
            ModulationScheme::Ocbt(m) => m.symbols(),
            ModulationScheme::CpOfdm(m) => m.symbols(),
            ModulationScheme::WOfdm(m) => m.symbols(),
        }
    }

    /// Samples occupied by one frame, including any prefix/suffix tail.
    pub fn frame_len(&self) -> usize {
        match self {
            ModulationScheme::Ocbt(m) => m.block_len(),
            ModulationScheme::CpOfdm(m) => m.frame_len(),
            ModulationScheme::WOfdm(m) => m.frame_len(),
        }
    }

    /// Distance between the starts of consecutive frames in a stream.
    /// W-OFDM frames overlap by the roll-off length.
    pub fn frame_stride(&self) -> usize {
        match self {
            ModulationScheme::WOfdm(m) => m.frame_len() - m.window().len(),
            _ => self.frame_len(),
        }
    }

    pub fn modulate(&self, grid: &SymbolGrid) -> Result<SampleBuffer> {
        match self {
            ModulationScheme::Ocbt(m) => m.modulate(grid),
            ModulationScheme::CpOfdm(m) => m.modulate(grid),
            ModulationScheme::WOfdm(m) => m.modulate(grid),
        }
    }

    /// Demodulates a frame-aligned received window (`frame_len` samples).
    pub fn receive(&self, rx: &[Complex64], ch: &ChannelRealization, eq: &EqualizerSpec) -> Result<SymbolGrid> {
        match self {
            ModulationScheme::Ocbt(m) => m.receive(rx, ch, eq),
            ModulationScheme::CpOfdm(m) => m.receive(rx, ch, eq),
            ModulationScheme::WOfdm(m) => m.receive(rx, ch, eq),
        }
    }

    /// Concatenates frames into one transmitted stream.
    pub fn modulate_stream(&self, grids: &[SymbolGrid]) -> Result<SampleBuffer> {
        let stride = self.frame_stride();
        let len = if grids.is_empty() {
            0
        } else {
            stride * (grids.len() - 1) + self.frame_len()
        };
        let mut out = SampleBuffer::zeros(len);
        for (i, g) in grids.iter().enumerate() {
            let frame = self.modulate(g)?;
            out[i * stride..i * stride + frame.len()]
                .iter_mut()
                .zip(frame.iter())
                .for_each(|(o, v)| *o += v);
        }
        Ok(out)
    }
}
