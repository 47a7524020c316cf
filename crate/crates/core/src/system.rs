use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The multi-carrier systems this crate knows about.
///
/// FBMC is only present for its closed-form overhead and complexity terms;
/// there is no FBMC waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum System {
    Ocbt,
    CpOfdm,
    WOfdm,
    Fbmc,
}

impl System {
    pub const ALL: [System; 4] = [System::Ocbt, System::CpOfdm, System::Fbmc, System::WOfdm];

    pub fn name(self) -> &'static str {
        match self {
            System::Ocbt => "OCBT",
            System::CpOfdm => "CP-OFDM",
            System::WOfdm => "W-OFDM",
            System::Fbmc => "FBMC",
        }
    }

    /// True for systems with a waveform implementation.
    pub fn has_waveform(self) -> bool {
        !matches!(self, System::Fbmc)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "OCBT" => Ok(System::Ocbt),
            "CP-OFDM" | "CPOFDM" | "OFDM" => Ok(System::CpOfdm),
            "W-OFDM" | "WOFDM" => Ok(System::WOfdm),
            "FBMC" => Ok(System::Fbmc),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }
}

impl TryFrom<String> for System {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<System> for String {
    fn from(s: System) -> String {
        s.name().to_string()
    }
}
