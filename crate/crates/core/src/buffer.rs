//! Complex sample and symbol containers.

use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A vector of complex baseband samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleBuffer(Vec<Complex64>);

impl SampleBuffer {
    pub fn zeros(len: usize) -> Self {
        SampleBuffer(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_vec(data: Vec<Complex64>) -> Self {
        SampleBuffer(data)
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn mean_power(&self) -> f64 {
        if self.0.is_empty() {
            0.0
        } else {
            self.energy() / self.0.len() as f64
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Deref for SampleBuffer {
    type Target = Vec<Complex64>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for SampleBuffer {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for SampleBuffer {
    fn from(v: Vec<Complex64>) -> Self {
        SampleBuffer(v)
    }
}

impl FromIterator<Complex64> for SampleBuffer {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        SampleBuffer(iter.into_iter().collect())
    }
}

/// `M × N` QAM symbols of one block. Column `n` is the data vector of
/// symbol `n`; storage is column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn zeros(subcarriers: usize, symbols: usize) -> Self {
        SymbolGrid {
            rows: subcarriers,
            cols: symbols,
            data: vec![Complex64::new(0.0, 0.0); subcarriers * symbols],
        }
    }

    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::dim("grid columns differ in length"));
        }
        Ok(SymbolGrid {
            rows,
            cols: columns.len(),
            data: columns.concat(),
        })
    }

    pub fn from_column_major(subcarriers: usize, symbols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != subcarriers * symbols {
            return Err(Error::dim(format!(
                "grid data has {} entries, expected {subcarriers}x{symbols}",
                data.len()
            )));
        }
        Ok(SymbolGrid {
            rows: subcarriers,
            cols: symbols,
            data,
        })
    }

    pub fn subcarriers(&self) -> usize {
        self.rows
    }

    pub fn symbols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, n: usize) -> &[Complex64] {
        &self.data[n * self.rows..(n + 1) * self.rows]
    }

    pub fn column_mut(&mut self, n: usize) -> &mut [Complex64] {
        &mut self.data[n * self.rows..(n + 1) * self.rows]
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.data[n * self.rows + m]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        self.data[n * self.rows + m] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_shape(&self, subcarriers: usize, symbols: usize) -> Result<()> {
        if self.rows != subcarriers || self.cols != symbols {
            return Err(Error::dim(format!(
                "grid is {}x{}, expected {subcarriers}x{symbols}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}
