//! Time efficiency `r_T = L_I / (L_I + L_T)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::System;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub system: System,
    #[serde(rename = "N")]
    pub symbols: usize,
    /// Information samples, `M·N`.
    pub l_i: u64,
    /// Tail samples.
    pub l_t: u64,
    #[serde(skip)]
    pub ratio: Ratio<u64>,
    pub r_t: f64,
}

/// Tail length and efficiency of `system` sending `n` symbols of `m` samples.
///
/// Tails: OCBT none; CP-OFDM `CP·N`; FBMC `M/2 + (K-1)·M`; W-OFDM
/// `(CP_W + CS - W)·N + W`.
#[allow(clippy::too_many_arguments)]
pub fn time_efficiency(
    system: System,
    m: usize,
    n: usize,
    k: usize,
    cp_len: usize,
    cpw_len: usize,
    cs_len: usize,
    w_len: usize,
) -> Result<EfficiencyReport> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::dim(format!("M = {m}, N = {n}, K = {k} must all be positive")));
    }
    let (m64, n64, k64) = (m as u64, n as u64, k as u64);
    let l_t = match system {
        System::Ocbt => 0,
        System::CpOfdm => cp_len as u64 * n64,
        System::Fbmc => {
            if m % 2 != 0 {
                return Err(Error::dim(format!("FBMC tail needs even M, got {m}")));
            }
            m64 / 2 + (k64 - 1) * m64
        }
        System::WOfdm => {
            if w_len > cpw_len + cs_len {
                return Err(Error::dim(format!(
                    "W = {w_len} exceeds CP_W + CS = {}",
                    cpw_len + cs_len
                )));
            }
            (cpw_len + cs_len - w_len) as u64 * n64 + w_len as u64
        }
    };
    let l_i = m64 * n64;
    let ratio = Ratio::new(l_i, l_i + l_t);
    Ok(EfficiencyReport {
        system,
        symbols: n,
        l_i,
        l_t,
        ratio,
        r_t: *ratio.numer() as f64 / *ratio.denom() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(system: System, n: usize) -> EfficiencyReport {
        time_efficiency(system, 1024, n, 4, 256, 384, 192, 128).unwrap()
    }

    #[test]
    fn ocbt_is_always_one() {
        for n in 1..=64 {
            let r = at(System::Ocbt, n);
            assert_eq!(r.ratio, Ratio::from_integer(1));
            assert_eq!(r.l_t, 0);
        }
    }

    #[test]
    fn cp_ofdm_is_four_fifths() {
        for n in [1, 7, 64] {
            assert_eq!(at(System::CpOfdm, n).ratio, Ratio::new(4, 5));
        }
        let gain = at(System::Ocbt, 3).ratio / at(System::CpOfdm, 3).ratio;
        assert_eq!(gain, Ratio::new(5, 4));
    }

    #[test]
    fn fbmc_single_symbol() {
        let r = at(System::Fbmc, 1);
        assert_eq!(r.l_t, 3584);
        assert_eq!(r.ratio, Ratio::new(1024, 4608));
        assert_eq!(at(System::Ocbt, 1).ratio / r.ratio, Ratio::new(9, 2));
    }

    #[test]
    fn fbmc_strictly_increasing() {
        let rs: Vec<_> = (1..=64).map(|n| at(System::Fbmc, n).ratio).collect();
        assert!(rs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn wofdm_single_symbol() {
        let r = at(System::WOfdm, 1);
        assert_eq!(r.l_t, 576);
        assert_eq!(r.ratio, Ratio::new(16, 25));
        assert_eq!(r.r_t, 0.64);
    }

    #[test]
    fn bad_dims() {
        assert!(time_efficiency(System::Ocbt, 0, 1, 4, 0, 0, 0, 0).is_err());
        assert!(time_efficiency(System::WOfdm, 64, 1, 4, 16, 2, 2, 8).is_err());
    }
}
