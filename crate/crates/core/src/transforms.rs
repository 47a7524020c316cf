//! Unitary radix-2 DFT/IDFT and the sub-block repeat/fold operators.
//!
//! Both directions carry a `1/√size` factor, so `dft` is the unitary matrix
//! with entries `ω^{up}/√size`, `ω = e^{-j2π/size}`, and `idft` is its
//! Hermitian.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::buffer::SampleBuffer;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Precomputed twiddles and bit-reversal permutation for one size.
#[derive(Debug)]
pub struct FftPlan {
    size: usize,
    log2: u32,
    /// `e^{-j2πk/size}` for `k < size/2`.
    twiddles: Vec<Complex64>,
    scale: f64,
}

impl FftPlan {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || !size.is_power_of_two() {
            return Err(Error::dim(format!("transform size {size} is not a power of two")));
        }
        let twiddles = (0..size / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / size as f64))
            .collect();
        Ok(FftPlan {
            size,
            log2: size.trailing_zeros(),
            twiddles,
            scale: 1.0 / (size as f64).sqrt(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// In-place unitary transform. `data.len()` must equal the plan size.
    pub fn process(&self, data: &mut [Complex64], direction: Direction) {
        assert_eq!(data.len(), self.size, "buffer length does not match plan");
        let n = self.size;
        if n == 1 {
            return;
        }
        let shift = usize::BITS - self.log2;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = match direction {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        for z in data.iter_mut() {
            *z *= self.scale;
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.process(data, Direction::Forward)
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.process(data, Direction::Inverse)
    }
}

/// Shared plan for `size`, built on first use.
pub fn plan(size: usize) -> Result<Arc<FftPlan>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FftPlan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    if let Some(p) = guard.get(&size) {
        return Ok(Arc::clone(p));
    }
    let p = Arc::new(FftPlan::new(size)?);
    guard.insert(size, Arc::clone(&p));
    Ok(p)
}

fn transform(x: &[Complex64], size: usize, direction: Direction) -> Result<SampleBuffer> {
    if x.len() != size {
        return Err(Error::dim(format!(
            "input has {} samples, transform size is {size}",
            x.len()
        )));
    }
    let p = plan(size)?;
    let mut out = x.to_vec();
    p.process(&mut out, direction);
    Ok(SampleBuffer::from_vec(out))
}

/// Unitary forward DFT.
pub fn dft(x: &[Complex64], size: usize) -> Result<SampleBuffer> {
    transform(x, size, Direction::Forward)
}

/// Unitary inverse DFT.
pub fn idft(x: &[Complex64], size: usize) -> Result<SampleBuffer> {
    transform(x, size, Direction::Inverse)
}

/// `K` back-to-back copies of `sub`.
pub fn repeat_subblock(sub: &[Complex64], k: usize) -> SampleBuffer {
    let mut out = Vec::with_capacity(sub.len() * k);
    for _ in 0..k {
        out.extend_from_slice(sub);
    }
    SampleBuffer::from_vec(out)
}

/// Sum of the `K` sub-blocks of `block`.
pub fn fold_subblocks(block: &[Complex64], k: usize) -> Result<SampleBuffer> {
    if k == 0 || block.len() % k != 0 {
        return Err(Error::dim(format!(
            "block of {} samples does not split into {k} sub-blocks",
            block.len()
        )));
    }
    let m = block.len() / k;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for sub in block.chunks_exact(m) {
        for (o, s) in out.iter_mut().zip(sub) {
            *o += s;
        }
    }
    Ok(SampleBuffer::from_vec(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(n: usize, label: &str) -> Vec<Complex64> {
        let mut r = derive_stream(11, label);
        (0..n).map(|_| r.complex_gaussian(1.0)).collect()
    }

    /// Direct O(n²) unitary DFT.
    fn dense_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|u| {
                x.iter()
                    .enumerate()
                    .map(|(p, &v)| {
                        v * Complex64::from_polar(1.0, sign * 2.0 * PI * (u * p) as f64 / n as f64)
                    })
                    .sum::<Complex64>()
                    / (n as f64).sqrt()
            })
            .collect()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn impulse_and_dc() {
        let out = dft(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)], 4).unwrap();
        assert!(max_err(&out, &[c(0.5, 0.); 4]) < 1e-15);
        let out = dft(&[c(1., 0.); 4], 4).unwrap();
        assert!(max_err(&out, &[c(2., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]) < 1e-15);
    }

    #[test]
    fn two_point_inverse() {
        let out = idft(&[c(1., 0.), c(-1., 0.)], 2).unwrap();
        assert!(max_err(&out, &[c(0., 0.), c(2f64.sqrt(), 0.)]) < 1e-15);
        let z = idft(&[c(0., 0.); 8], 8).unwrap();
        assert!(z.iter().all(|v| *v == c(0., 0.)));
    }

    #[test]
    fn matches_dense_dft() {
        for size in [1, 2, 4, 8, 16, 64, 256] {
            let x = random(size, &format!("dense{size}"));
            assert!(max_err(&dft(&x, size).unwrap(), &dense_dft(&x, -1.0)) < 1e-12);
            assert!(max_err(&idft(&x, size).unwrap(), &dense_dft(&x, 1.0)) < 1e-12);
        }
    }

    #[test]
    fn round_trip_and_unitarity() {
        let mut size = 2;
        while size <= 4096 {
            let x = random(size, &format!("rt{size}"));
            let fx = dft(&x, size).unwrap();
            let energy_in: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            assert!((fx.energy() - energy_in).abs() < 1e-9 * energy_in);
            assert!(max_err(&idft(&fx, size).unwrap(), &x) < 1e-12, "size {size}");
            size *= 2;
        }
    }

    #[test]
    fn size_mismatch_and_non_power_of_two() {
        assert!(matches!(dft(&[c(1., 0.); 3], 4), Err(Error::Dimension(_))));
        assert!(matches!(dft(&[c(1., 0.); 6], 6), Err(Error::Dimension(_))));
    }

    #[test]
    fn repeat_and_fold() {
        let (a, b) = (c(1., 2.), c(-3., 0.5));
        assert_eq!(*repeat_subblock(&[a, b], 3), vec![a, b, a, b, a, b]);
        assert_eq!(*repeat_subblock(&[a, b], 1), vec![a, b]);
        let d = c(4., 4.);
        assert_eq!(*fold_subblocks(&[a, b, b, d], 2).unwrap(), vec![a + b, b + d]);
        assert!(fold_subblocks(&[c(0., 0.); 6], 2).unwrap().iter().all(|v| v.norm() == 0.0));
        assert!(fold_subblocks(&[a; 5], 2).is_err());

        let x = random(16, "rf");
        let r = repeat_subblock(&x, 4);
        let ex: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        assert!((r.energy() - 4.0 * ex).abs() < 1e-12);
        let f = fold_subblocks(&r, 4).unwrap();
        assert!(max_err(&f, &x.iter().map(|v| v * 4.0).collect::<Vec<_>>()) < 1e-14);
    }

    /// `W diag(f) W^H` built densely equals the closed form
    /// `(1/M) Σ_p f_p ω^{(u-v)p}` entry by entry.
    #[test]
    fn window_conjugation_closed_form() {
        for m in [4usize, 16, 64] {
            let f: Vec<f64> = (0..m).map(|p| 0.5 + 0.5 * ((p as f64) * 0.37).sin()).collect();
            for v in 0..m {
                let mut e = vec![c(0., 0.); m];
                e[v] = c(1., 0.);
                let mut col = idft(&e, m).unwrap().into_vec();
                for (z, w) in col.iter_mut().zip(&f) {
                    *z *= w;
                }
                let col = dft(&col, m).unwrap();
                for u in 0..m {
                    let closed: Complex64 = (0..m)
                        .map(|p| {
                            let d = (u as i64 - v as i64).rem_euclid(m as i64) as usize;
                            f[p] * Complex64::from_polar(1.0, -2.0 * PI * (d * p) as f64 / m as f64)
                        })
                        .sum::<Complex64>()
                        / m as f64;
                    assert!((col[u] - closed).norm() < 1e-12);
                }
            }
        }
    }
}
