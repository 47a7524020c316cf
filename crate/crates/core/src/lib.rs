//! Baseband simulation of orthogonal code-based block transmission (OCBT).
//!
//! OCBT overlaps `N` IDFT symbols inside one `K·M`-sample block by repeating
//! each symbol `K` times and sign-spreading the repetitions with Walsh codes,
//! then applies a per-symbol edge window to suppress out-of-band radiation.
//! The crate contains the full transmit/receive chain, CP-OFDM and W-OFDM
//! baselines, a multipath/fading channel, frequency-domain equalizers and the
//! metrics used to compare the systems (BER, PSD, time efficiency,
//! complexity, SINR decomposition).
//!
//! All lengths are in samples; the sample period is normalized to one.

pub mod buffer;
pub mod channel;
pub mod cli;
pub mod codes;
pub mod equalizer;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod modems;
pub mod params;
pub mod rng;
pub mod system;
pub mod transforms;
pub mod windows;

pub use buffer::{SampleBuffer, SymbolGrid};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::SystemParams;
pub use rng::{derive_stream, RngStream};
pub use system::System;
