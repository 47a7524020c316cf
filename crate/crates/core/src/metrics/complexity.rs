//! Complex multiplications per symbol.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::System;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub system: System,
    pub cm_per_symbol: u64,
}

impl ComplexityReport {
    /// Row label; plain OFDM is reported as `OFDM`.
    pub fn label(&self) -> &'static str {
        match self.system {
            System::CpOfdm => "OFDM",
            s => s.name(),
        }
    }
}

/// `(M/2)·log2 M` for the transform, plus per system: FBMC `(K+1)·M`,
/// W-OFDM `M + CP_W + CS`, OCBT `M` (the window); OFDM nothing.
pub fn complexity_cm(
    system: System,
    m: usize,
    k: usize,
    cp_len: usize,
    cpw_len: usize,
    cs_len: usize,
) -> Result<ComplexityReport> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::dim(format!("M = {m} must be a power of two >= 2")));
    }
    if k == 0 {
        return Err(Error::dim("K must be positive"));
    }
    if cp_len > m {
        return Err(Error::dim(format!("cp_len = {cp_len} exceeds M = {m}")));
    }
    let m64 = m as u64;
    let fft = m64 / 2 * m.trailing_zeros() as u64;
    let extra = match system {
        System::CpOfdm => 0,
        System::Fbmc => (k as u64 + 1) * m64,
        System::WOfdm => m64 + cpw_len as u64 + cs_len as u64,
        System::Ocbt => m64,
    };
    Ok(ComplexityReport {
        system,
        cm_per_symbol: fft + extra,
    })
}
