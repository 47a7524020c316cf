//! Gray-mapped square QAM with unit average power.
//!
//! The first half of each symbol's bits selects the in-phase level and the
//! second half the quadrature level; bit `0` maps to the positive side, so
//! QPSK is `00 → (+1+j)/√2`, `01 → (+1-j)/√2`, `11 → (-1-j)/√2`,
//! `10 → (-1+j)/√2`.

use num_complex::Complex64;

use crate::buffer::SymbolGrid;
use crate::error::{Error, Result};

/// A vector of bits stored one per byte (`0` or `1`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitStream(pub Vec<u8>);

impl BitStream {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for BitStream {
    fn from(v: Vec<u8>) -> Self {
        BitStream(v)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constellation {
    bits_per_axis: u32,
    levels: usize,
    scale: f64,
}

impl Constellation {
    pub fn new(mod_order: u32) -> Result<Self> {
        if mod_order == 0 || mod_order % 2 != 0 || mod_order > 16 {
            return Err(Error::dim(format!(
                "mod_order {mod_order} is not an even bit count in 2..=16"
            )));
        }
        let bits_per_axis = mod_order / 2;
        let levels = 1usize << bits_per_axis;
        let l = levels as f64;
        Ok(Constellation {
            bits_per_axis,
            levels,
            // E|s|² of the unscaled grid is 2(L²-1)/3
            scale: (3.0 / (2.0 * (l * l - 1.0))).sqrt(),
        })
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis as usize
    }

    fn axis_level(&self, bits: &[u8]) -> f64 {
        let gray = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        let mut idx = gray;
        let mut shift = gray >> 1;
        while shift != 0 {
            idx ^= shift;
            shift >>= 1;
        }
        (self.levels - 1) as f64 - 2.0 * idx as f64
    }

    fn axis_bits(&self, value: f64, out: &mut Vec<u8>) {
        let top = (self.levels - 1) as f64;
        let idx = ((top - value / self.scale) / 2.0).round().clamp(0.0, top) as usize;
        let gray = idx ^ (idx >> 1);
        for b in (0..self.bits_per_axis).rev() {
            out.push(((gray >> b) & 1) as u8);
        }
    }

    pub fn map(&self, bits: &[u8]) -> Complex64 {
        let h = self.bits_per_axis as usize;
        Complex64::new(self.axis_level(&bits[..h]), self.axis_level(&bits[h..2 * h])) * self.scale
    }

    /// Nearest-point hard decision.
    pub fn demap(&self, z: Complex64, out: &mut Vec<u8>) {
        self.axis_bits(z.re, out);
        self.axis_bits(z.im, out);
    }

    /// Every constellation point, in bit-label order.
    pub fn points(&self) -> Vec<Complex64> {
        let bps = self.bits_per_symbol();
        (0..1usize << bps)
            .map(|label| {
                let bits: Vec<u8> = (0..bps).rev().map(|b| ((label >> b) & 1) as u8).collect();
                self.map(&bits)
            })
            .collect()
    }
}

/// Maps a whole number of `M`-symbol columns onto a grid.
pub fn qam_map(bits: &BitStream, mod_order: u32, subcarriers: usize) -> Result<SymbolGrid> {
    let cons = Constellation::new(mod_order)?;
    let per_column = cons.bits_per_symbol() * subcarriers;
    if subcarriers == 0 || bits.len() % per_column != 0 {
        return Err(Error::Framing(format!(
            "{} bits do not fill whole columns of {subcarriers} x {mod_order}-bit symbols",
            bits.len()
        )));
    }
    let data = bits
        .bits()
        .chunks_exact(cons.bits_per_symbol())
        .map(|b| cons.map(b))
        .collect();
    SymbolGrid::from_column_major(subcarriers, bits.len() / per_column, data)
}

/// Hard-decision demapping of every grid entry, column by column.
pub fn qam_demap(grid: &SymbolGrid, mod_order: u32) -> Result<BitStream> {
    let cons = Constellation::new(mod_order)?;
    let mut out = Vec::with_capacity(grid.as_slice().len() * cons.bits_per_symbol());
    for &z in grid.as_slice() {
        cons.demap(z, &mut out);
    }
    Ok(BitStream(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qpsk_labels() {
        let k = Constellation::new(2).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!((k.map(&[0, 0]) - c(s, s)).norm() < 1e-15);
        assert!((k.map(&[0, 1]) - c(s, -s)).norm() < 1e-15);
        assert!((k.map(&[1, 1]) - c(-s, -s)).norm() < 1e-15);
        assert!((k.map(&[1, 0]) - c(-s, s)).norm() < 1e-15);
    }

    #[test]
    fn unit_average_power() {
        for order in [2, 4, 6, 8] {
            let pts = Constellation::new(order).unwrap().points();
            let p = pts.iter().map(|z| z.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((p - 1.0).abs() < 1e-12, "order {order}");
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let k = Constellation::new(4).unwrap();
        let pts = k.points();
        let dmin = 2.0 * (1.0f64 / 10.0).sqrt();
        for (a, pa) in pts.iter().enumerate() {
            for (b, pb) in pts.iter().enumerate() {
                if ((pa - pb).norm() - dmin).abs() < 1e-9 {
                    assert_eq!((a ^ b).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn noisy_point_decides_nearest() {
        let k = Constellation::new(2).unwrap();
        let mut out = Vec::new();
        k.demap(c(0.9, 1.1) * FRAC_1_SQRT_2, &mut out);
        assert_eq!(out, vec![0, 0]);
        // sign decisions at the axes
        for (z, bits) in [(c(1e-9, -1e-9), [0, 1]), (c(-1e-9, 1e-9), [1, 0]), (c(-3.0, -0.1), [1, 1])] {
            out.clear();
            k.demap(z, &mut out);
            assert_eq!(out, bits.to_vec());
        }
    }

    #[test]
    fn round_trip_random_bits() {
        let mut r = derive_stream(21, "qam");
        for order in [2, 4, 6] {
            let bits = BitStream(r.bits(order as usize * 16 * 3));
            let grid = qam_map(&bits, order, 16).unwrap();
            assert_eq!(grid.symbols(), 3);
            assert_eq!(qam_demap(&grid, order).unwrap(), bits);
        }
    }

    #[test]
    fn framing_error() {
        let bits = BitStream(vec![0; 10]);
        assert!(matches!(qam_map(&bits, 2, 4), Err(Error::Framing(_))));
        assert!(qam_map(&bits, 3, 4).is_err());
    }
}
