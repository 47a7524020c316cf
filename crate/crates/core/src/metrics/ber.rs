//! Bit error counting and the AWGN reference curve.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::modems::BitStream;

/// Number of positions where the two streams differ.
pub fn count_errors(tx: &BitStream, rx: &BitStream) -> Result<u64> {
    if tx.len() != rx.len() {
        return Err(Error::dim(format!(
            "bit streams differ in length: {} vs {}",
            tx.len(),
            rx.len()
        )));
    }
    Ok(tx.bits().iter().zip(rx.bits()).filter(|(a, b)| a != b).count() as u64)
}

/// Fraction of mismatched bits. An empty pair has BER 0.
pub fn ber(tx: &BitStream, rx: &BitStream) -> Result<f64> {
    let errors = count_errors(tx, rx)?;
    if tx.is_empty() {
        return Ok(0.0);
    }
    Ok(errors as f64 / tx.len() as f64)
}

/// Gaussian tail probability `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Uncoded Gray QPSK over AWGN: `Q(√(2·Eb/N0))`.
pub fn qpsk_awgn_ber(ebn0_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(ebn0_db / 10.0)).sqrt())
}

/// `Eb/N0` in dB from `Es/N0` in dB for `bits_per_symbol` bits.
pub fn ebn0_db(esn0_db: f64, bits_per_symbol: u32) -> f64 {
    esn0_db - 10.0 * (bits_per_symbol as f64).log10()
}

/// The `Eb/N0` (dB) at which the QPSK reference reaches `target`, by bisection.
pub fn qpsk_awgn_ebn0_for(target: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0f64, 30.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if qpsk_awgn_ber(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Linear interpolation of `x` where the curve `(x, log10 y)` crosses
/// `log10 target`. Points with `y == 0` are skipped.
pub fn crossing(xs: &[f64], ys: &[f64], target: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x, y.log10()))
        .collect();
    let t = target.log10();
    pts.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if (y0 - t) * (y1 - t) <= 0.0 && y0 != y1 {
            Some(x0 + (t - y0) * (x1 - x0) / (y1 - y0))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(v: Vec<u8>) -> BitStream {
        BitStream(v)
    }

    #[test]
    fn trivial_ratios() {
        let a: Vec<u8> = (0..1000).map(|i| (i * 7 % 3 == 0) as u8).collect();
        assert_eq!(ber(&bs(a.clone()), &bs(a.clone())).unwrap(), 0.0);
        let not: Vec<u8> = a.iter().map(|b| 1 - b).collect();
        assert_eq!(ber(&bs(a.clone()), &bs(not)).unwrap(), 1.0);
        let mut one = a.clone();
        one[500] ^= 1;
        assert_eq!(ber(&bs(a), &bs(one)).unwrap(), 0.001);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(ber(&bs(vec![0; 3]), &bs(vec![0; 4])), Err(Error::Dimension(_))));
    }

    #[test]
    fn reference_curve() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        // Q(3) = 1.3498980316e-3
        assert!((q_function(3.0) / 1.349_898_031_630_095e-3 - 1.0).abs() < 1e-9);
        let x = qpsk_awgn_ebn0_for(1e-3);
        assert!((qpsk_awgn_ber(x) - 1e-3).abs() < 1e-12);
        assert!((x - 6.7895).abs() < 1e-3, "{x}");
        assert!((ebn0_db(10.0, 2) - 6.9897).abs() < 1e-4);
    }

    #[test]
    fn log_crossing() {
        let xs = [0.0, 10.0];
        let ys = [1e-2, 1e-4];
        assert!((crossing(&xs, &ys, 1e-3).unwrap() - 5.0).abs() < 1e-12);
        assert!(crossing(&xs, &ys, 1e-5).is_none());
    }
}
