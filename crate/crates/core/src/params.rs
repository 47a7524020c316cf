//! Scalar system configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All scalar configuration of one simulated link.
///
/// The prefix/suffix lengths are optional: when absent they are derived from
/// `M` (`cp_len = M/4`) and from `cp_len` (`cpw_len = 3·cp_len/2`,
/// `cs_len = cpw_len/2`, `w_len = cpw_len/3`). Use the accessor methods to
/// read the effective values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    /// Subcarriers per symbol, also the sub-block length.
    #[serde(rename = "M")]
    pub subcarriers: usize,
    /// Spreading (repetition) factor and Walsh code length.
    #[serde(rename = "K")]
    pub spreading_factor: usize,
    /// Symbols overlapped in one OCBT block.
    #[serde(rename = "N")]
    pub symbols_per_block: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpw_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cs_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_len: Option<usize>,
    /// Total OCBT window transition length (both edges together).
    #[serde(rename = "L")]
    pub taper_len: usize,
    /// Raised-cosine roll-off of the OCBT taper.
    pub beta: f64,
    /// Bits per QAM symbol.
    pub mod_order: u32,
    /// Hz; only used to map physical path delays onto sample taps.
    pub sample_rate: f64,
    pub seed: u64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            subcarriers: 1024,
            spreading_factor: 4,
            symbols_per_block: 4,
            cp_len: None,
            cpw_len: None,
            cs_len: None,
            w_len: None,
            taper_len: 324,
            beta: 0.1,
            mod_order: 2,
            sample_rate: 30.72e6,
            seed: 0,
        }
    }
}

impl SystemParams {
    /// Spectrum preset: `M = 64`, `L = 20`, other values as the default.
    pub fn psd_preset() -> Self {
        SystemParams {
            subcarriers: 64,
            taper_len: 20,
            ..Default::default()
        }
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len.unwrap_or(self.subcarriers / 4)
    }

    pub fn cpw_len(&self) -> usize {
        self.cpw_len.unwrap_or(3 * self.cp_len() / 2)
    }

    pub fn cs_len(&self) -> usize {
        self.cs_len.unwrap_or(self.cpw_len() / 2)
    }

    pub fn w_len(&self) -> usize {
        self.w_len.unwrap_or(self.cpw_len() / 3)
    }

    /// Samples in one OCBT block, `K·M`.
    pub fn block_len(&self) -> usize {
        self.spreading_factor * self.subcarriers
    }

    pub fn bits_per_block(&self) -> usize {
        self.mod_order as usize * self.subcarriers * self.symbols_per_block
    }

    /// Checks every dimension constraint; returns the parameters unchanged.
    pub fn validate(self) -> Result<Self> {
        let m = self.subcarriers;
        let k = self.spreading_factor;
        let n = self.symbols_per_block;
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::dim(format!("M = {m} must be a power of two >= 2")));
        }
        if k < 1 || !k.is_power_of_two() {
            return Err(Error::dim(format!("K = {k} must be a power of two >= 1")));
        }
        if n < 1 || n > k {
            return Err(Error::dim(format!("N = {n} must satisfy 1 <= N <= K = {k}")));
        }
        if self.taper_len % 2 != 0 || self.taper_len > m {
            return Err(Error::dim(format!(
                "L = {} must be even and <= M = {m}",
                self.taper_len
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::dim(format!("beta = {} must lie in [0, 1]", self.beta)));
        }
        if self.mod_order == 0 || self.mod_order % 2 != 0 || self.mod_order > 16 {
            return Err(Error::dim(format!(
                "mod_order = {} must be an even bit count in 2..=16 (square QAM)",
                self.mod_order
            )));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::dim(format!(
                "sample_rate = {} must be positive",
                self.sample_rate
            )));
        }
        let cp = self.cp_len();
        if cp > m {
            return Err(Error::dim(format!("cp_len = {cp} must be <= M = {m}")));
        }
        Ok(self)
    }

    /// Checks the windowed-OFDM lengths: derivation from `cp_len` must be
    /// exact and the roll-off must fit in both extensions. Only systems that
    /// use these lengths call it.
    pub fn check_wofdm_lengths(&self) -> Result<()> {
        let cp = self.cp_len();
        let derived = self.cpw_len.is_none() || self.cs_len.is_none() || self.w_len.is_none();
        if derived && cp % 4 != 0 {
            return Err(Error::dim(format!(
                "cp_len = {cp} must be a multiple of 4 to derive cpw_len/cs_len/w_len"
            )));
        }
        let (cpw, cs, w) = (self.cpw_len(), self.cs_len(), self.w_len());
        if w > cpw || w > cs {
            return Err(Error::dim(format!(
                "w_len = {w} must not exceed cpw_len = {cpw} or cs_len = {cs}"
            )));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }
}

/// Free-function form of [`SystemParams::validate`].
pub fn validate_params(raw: SystemParams) -> Result<SystemParams> {
    raw.validate()
}
