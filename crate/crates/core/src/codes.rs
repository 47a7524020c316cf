//! Walsh codes and sub-block spreading.
//!
//! Spreading with row `n` multiplies the `k`-th `M`-sample sub-block by the
//! chip `c[n][k]`; it is applied as a sign flip per sub-block, never as a
//! dense diagonal matrix.

use num_complex::Complex64;

use crate::buffer::SampleBuffer;
use crate::error::{Error, Result};

/// The `K × K` Sylvester-ordered Hadamard matrix. Rows are Walsh codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshCodeSet {
    order: usize,
    chips: Vec<i8>,
}

impl WalshCodeSet {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || !order.is_power_of_two() {
            return Err(Error::dim(format!("code length K = {order} is not a power of two")));
        }
        // Sylvester: H[i][j] = (-1)^popcount(i & j)
        let chips = (0..order * order)
            .map(|idx| {
                let (i, j) = (idx / order, idx % order);
                if (i & j).count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Ok(WalshCodeSet { order, chips })
    }

    /// Code length `K` (also the number of rows).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, n: usize) -> &[i8] {
        &self.chips[n * self.order..(n + 1) * self.order]
    }

    pub fn chip(&self, n: usize, k: usize) -> i8 {
        self.chips[n * self.order + k]
    }

    pub fn inner_product(&self, n: usize, l: usize) -> i64 {
        self.row(n)
            .iter()
            .zip(self.row(l))
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum()
    }

    fn check_row(&self, n: usize) -> Result<()> {
        if n >= self.order {
            return Err(Error::Index {
                index: n,
                bound: self.order,
            });
        }
        Ok(())
    }
}

pub fn walsh_matrix(order: usize) -> Result<WalshCodeSet> {
    WalshCodeSet::new(order)
}

fn subblock_len(len: usize, k: usize) -> Result<usize> {
    if len % k != 0 || len == 0 {
        return Err(Error::dim(format!(
            "buffer of {len} samples does not split into K = {k} sub-blocks"
        )));
    }
    Ok(len / k)
}

/// Multiplies sub-block `k` of `symbol` by `c[n][k]` (row `n`, zero-based).
pub fn spread(symbol: &[Complex64], codes: &WalshCodeSet, n: usize) -> Result<SampleBuffer> {
    codes.check_row(n)?;
    let m = subblock_len(symbol.len(), codes.order())?;
    let out = symbol
        .chunks_exact(m)
        .zip(codes.row(n))
        .flat_map(|(sub, &c)| sub.iter().map(move |&v| v * c as f64))
        .collect();
    Ok(out)
}

/// `(√N/K) Σ_k c[l][k] · block_k`: matched-code sum of the sub-blocks.
///
/// `l` is zero-based and must be below `symbols` (the `N` of the block).
pub fn despread(
    block: &[Complex64],
    codes: &WalshCodeSet,
    l: usize,
    symbols: usize,
) -> Result<SampleBuffer> {
    if l >= symbols || symbols > codes.order() {
        return Err(Error::Index {
            index: l,
            bound: symbols.min(codes.order()),
        });
    }
    despread_row(block, codes, l, symbols)
}

/// Despreads with an arbitrary code row (for blocks using a row subset).
pub(crate) fn despread_row(
    block: &[Complex64],
    codes: &WalshCodeSet,
    row: usize,
    symbols: usize,
) -> Result<SampleBuffer> {
    codes.check_row(row)?;
    let k = codes.order();
    let m = subblock_len(block.len(), k)?;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (sub, &c) in block.chunks_exact(m).zip(codes.row(row)) {
        if c > 0 {
            out.iter_mut().zip(sub).for_each(|(o, v)| *o += v);
        } else {
            out.iter_mut().zip(sub).for_each(|(o, v)| *o -= v);
        }
    }
    let scale = (symbols as f64).sqrt() / k as f64;
    out.iter_mut().for_each(|o| *o *= scale);
    Ok(SampleBuffer::from_vec(out))
}
