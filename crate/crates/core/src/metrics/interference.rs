//! Interference and SINR of the OCBT receiver.
//!
//! The chain (modulate, channel, equalize, despread, transform) is linear, so
//! each output term is isolated by re-synthesis with every other input set to
//! zero: the current block alone gives the desired symbol plus inter-carrier
//! (and, over a dispersive channel, intra-block inter-symbol) leakage, the
//! previous block alone gives the inter-block term, and the noise alone gives
//! the noise term.

use num_complex::Complex64;

use crate::buffer::SymbolGrid;
use crate::channel::{add_awgn, fir_convolve, ChannelRealization, NoiseModel};
use crate::codes::despread_row;
use crate::equalizer::EqualizerSpec;
use crate::error::Result;
use crate::exec::Executor;
use crate::modems::{Constellation, OcbtModem};
use crate::rng::RngStream;
use crate::transforms::plan;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-subcarrier power terms, linear, with unit symbol power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceBreakdown {
    /// Chain gain from `a_{m,l}` to its own output.
    pub desired_gain: Complex64,
    pub desired_power: f64,
    pub ici_power: f64,
    pub ibi_power: f64,
    pub noise_power: f64,
    pub sinr_db: f64,
}

impl InterferenceBreakdown {
    fn new(desired_gain: Complex64, ici_power: f64, ibi_power: f64, noise_power: f64) -> Self {
        let desired_power = desired_gain.norm_sqr();
        InterferenceBreakdown {
            desired_gain,
            desired_power,
            ici_power,
            ibi_power,
            noise_power,
            sinr_db: sinr_db(desired_power, ici_power + ibi_power + noise_power),
        }
    }
}

fn sinr_db(signal: f64, impairment: f64) -> f64 {
    10.0 * (signal / impairment).log10()
}

/// Breakdowns for every `(m, l)` of a block, column-major like [`SymbolGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMap {
    subcarriers: usize,
    symbols: usize,
    cells: Vec<InterferenceBreakdown>,
}

impl InterferenceMap {
    pub fn get(&self, m: usize, l: usize) -> &InterferenceBreakdown {
        &self.cells[l * self.subcarriers + m]
    }

    pub fn cells(&self) -> &[InterferenceBreakdown] {
        &self.cells
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// Components averaged over all cells; the SINR is the ratio of the
    /// averaged powers.
    pub fn average(&self) -> InterferenceBreakdown {
        let n = self.cells.len() as f64;
        let avg = |f: fn(&InterferenceBreakdown) -> f64| self.cells.iter().map(f).sum::<f64>() / n;
        let desired = avg(|c| c.desired_power);
        let (ici, ibi, noise) = (avg(|c| c.ici_power), avg(|c| c.ibi_power), avg(|c| c.noise_power));
        InterferenceBreakdown {
            desired_gain: self.cells.iter().map(|c| c.desired_gain).sum::<Complex64>() / n,
            desired_power: desired,
            ici_power: ici,
            ibi_power: ibi,
            noise_power: noise,
            sinr_db: sinr_db(desired, ici + ibi + noise),
        }
    }
}

/// The current block as received after `prev` and `cur` pass through `ch`
/// back to back. Either input may be absent (all zeros).
fn through_channel(
    len: usize,
    prev: Option<&[Complex64]>,
    cur: Option<&[Complex64]>,
    ch: &ChannelRealization,
) -> Vec<Complex64> {
    let mut stream = vec![ZERO; 2 * len];
    if let Some(p) = prev {
        stream[..len].copy_from_slice(p);
    }
    if let Some(c) = cur {
        stream[len..].copy_from_slice(c);
    }
    fir_convolve(&stream, ch)[len..2 * len].to_vec()
}

fn random_grid(m: usize, n: usize, cons: &Constellation, rng: &mut RngStream) -> Result<SymbolGrid> {
    let bits = rng.bits(m * n * cons.bits_per_symbol());
    let data = bits.chunks_exact(cons.bits_per_symbol()).map(|b| cons.map(b)).collect();
    SymbolGrid::from_column_major(m, n, data)
}

/// Per-cell chain gains by impulse re-synthesis: `a_{m,l} = 1`, everything
/// else zero, ideal previous block, no noise.
pub fn desired_gains(modem: &OcbtModem, ch: &ChannelRealization, eq: &EqualizerSpec) -> Result<SymbolGrid> {
    let (m, n) = (modem.subcarriers(), modem.symbols());
    let mut gains = SymbolGrid::zeros(m, n);
    let mut grid = SymbolGrid::zeros(m, n);
    for l in 0..n {
        for u in 0..m {
            grid.set(u, l, Complex64::new(1.0, 0.0));
            let s = modem.modulate(&grid)?;
            let y = through_channel(modem.block_len(), None, Some(&s), ch);
            let out = modem.receive(&y, ch, eq)?;
            gains.set(u, l, out.get(u, l));
            grid.set(u, l, ZERO);
        }
    }
    Ok(gains)
}

/// Averages the interference terms over `draws` random QPSK blocks.
///
/// Each draw uses a fresh current block, previous block and noise vector
/// from `rng`; the channel is the same for both blocks.
pub fn interference_decomposition(
    modem: &OcbtModem,
    ch: &ChannelRealization,
    eq: &EqualizerSpec,
    noise: NoiseModel,
    draws: usize,
    rng: &mut RngStream,
) -> Result<InterferenceMap> {
    let (m, n) = (modem.subcarriers(), modem.symbols());
    let len = modem.block_len();
    let cons = Constellation::new(2)?;
    let gains = desired_gains(modem, ch, eq)?;
    let mut ici = vec![0.0; m * n];
    let mut ibi = vec![0.0; m * n];
    let mut nse = vec![0.0; m * n];
    for _ in 0..draws {
        let cur = random_grid(m, n, &cons, rng)?;
        let prev = random_grid(m, n, &cons, rng)?;
        let s_cur = modem.modulate(&cur)?;
        let s_prev = modem.modulate(&prev)?;

        let out = modem.receive(&through_channel(len, None, Some(&s_cur), ch), ch, eq)?;
        for (i, acc) in ici.iter_mut().enumerate() {
            *acc += (out.as_slice()[i] - gains.as_slice()[i] * cur.as_slice()[i]).norm_sqr();
        }
        let out = modem.receive(&through_channel(len, Some(&s_prev), None, ch), ch, eq)?;
        ibi.iter_mut().zip(out.as_slice()).for_each(|(a, v)| *a += v.norm_sqr());

        let mut eta = vec![ZERO; len];
        add_awgn(&mut eta, noise, rng);
        let out = modem.receive(&eta, ch, eq)?;
        nse.iter_mut().zip(out.as_slice()).for_each(|(a, v)| *a += v.norm_sqr());
    }
    let d = draws.max(1) as f64;
    let cells = (0..m * n)
        .map(|i| InterferenceBreakdown::new(gains.as_slice()[i], ici[i] / d, ibi[i] / d, nse[i] / d))
        .collect();
    Ok(InterferenceMap {
        subcarriers: m,
        symbols: n,
        cells,
    })
}

/// Exact expected interference terms for i.i.d. unit-power symbols and
/// white noise, from the chain's impulse responses: every current-block
/// symbol, every previous-block symbol and every noise sample is driven
/// alone and its output power is accumulated into each cell.
pub fn interference_expectation(
    modem: &OcbtModem,
    ch: &ChannelRealization,
    eq: &EqualizerSpec,
    noise: NoiseModel,
    exec: &Executor,
) -> Result<InterferenceMap> {
    let (m, n) = (modem.subcarriers(), modem.symbols());
    let cells = m * n;
    let len = modem.block_len();
    // impulse index: 0..cells current block, cells..2·cells previous block,
    // then one per noise sample
    let respond = |i: usize| -> Result<Vec<Complex64>> {
        let out = if i < 2 * cells {
            let mut grid = SymbolGrid::zeros(m, n);
            let c = i % cells;
            grid.set(c % m, c / m, Complex64::new(1.0, 0.0));
            let s = modem.modulate(&grid)?;
            let y = if i < cells {
                through_channel(len, None, Some(&s), ch)
            } else {
                through_channel(len, Some(&s), None, ch)
            };
            modem.receive(&y, ch, eq)?
        } else {
            let mut y = vec![ZERO; len];
            y[i - 2 * cells] = Complex64::new(1.0, 0.0);
            modem.receive(&y, ch, eq)?
        };
        Ok(out.as_slice().to_vec())
    };
    let responses = exec.map(2 * cells + len, respond);
    let mut gains = vec![ZERO; cells];
    let mut ici = vec![0.0; cells];
    let mut ibi = vec![0.0; cells];
    let mut nse = vec![0.0; cells];
    for (i, r) in responses.into_iter().enumerate() {
        let r = r?;
        for (c, v) in r.iter().enumerate() {
            let p = v.norm_sqr();
            if i < cells {
                if c == i {
                    gains[c] = *v;
                } else {
                    ici[c] += p;
                }
            } else if i < 2 * cells {
                ibi[c] += p;
            } else {
                nse[c] += p * noise.variance;
            }
        }
    }
    let cells = (0..cells)
        .map(|i| InterferenceBreakdown::new(gains[i], ici[i], ibi[i], nse[i]))
        .collect();
    Ok(InterferenceMap {
        subcarriers: m,
        symbols: n,
        cells,
    })
}

/// SINR measured from the full chain: current block, previous block and
/// noise together; the error is the output minus `gain · a` with the gains
/// from `map`. Powers are pooled over all cells and draws.
pub fn measured_sinr_db(
    modem: &OcbtModem,
    ch: &ChannelRealization,
    eq: &EqualizerSpec,
    noise: NoiseModel,
    map: &InterferenceMap,
    draws: usize,
    rng: &mut RngStream,
) -> Result<f64> {
    let (m, n) = (modem.subcarriers(), modem.symbols());
    let len = modem.block_len();
    let cons = Constellation::new(2)?;
    let (mut sig, mut err) = (0.0, 0.0);
    for _ in 0..draws {
        let cur = random_grid(m, n, &cons, rng)?;
        let prev = random_grid(m, n, &cons, rng)?;
        let mut y = through_channel(len, Some(&modem.modulate(&prev)?), Some(&modem.modulate(&cur)?), ch);
        add_awgn(&mut y, noise, rng);
        let out = modem.receive(&y, ch, eq)?;
        for (i, (&o, &a)) in out.as_slice().iter().zip(cur.as_slice()).enumerate() {
            let g = map.cells[i].desired_gain;
            sig += (g * a).norm_sqr();
            err += (o - g * a).norm_sqr();
        }
    }
    Ok(sinr_db(sig, err))
}

/// `‖(√N/K)·Rᵀ·C_l·leak‖²` and `(N/K²)·‖leak‖²` for the modem's code row `l`.
pub fn ibi_bound_check(modem: &OcbtModem, leak: &[Complex64], l: usize) -> Result<(f64, f64)> {
    if l >= modem.symbols() {
        return Err(crate::error::Error::Index {
            index: l,
            bound: modem.symbols(),
        });
    }
    let (n, k) = (modem.symbols() as f64, modem.spreading_factor() as f64);
    let out = despread_row(leak, modem.codes(), modem.code_rows()[l], modem.symbols())?;
    let measured = out.energy();
    let bound = n / (k * k) * leak.iter().map(|v| v.norm_sqr()).sum::<f64>();
    Ok((measured, bound))
}

/// Worst-case despread leak power, `(N/K)·‖leak‖²`, reached when every
/// sub-block of the leak matches the code's signs.
pub fn ibi_worst_case_bound(modem: &OcbtModem, leak: &[Complex64]) -> f64 {
    let (n, k) = (modem.symbols() as f64, modem.spreading_factor() as f64);
    n / k * leak.iter().map(|v| v.norm_sqr()).sum::<f64>()
}

/// `|W_d|²` with `W_d = (1/M) Σ_p f_p e^{-j2πdp/M}`: the power leaked from a
/// subcarrier to the one `d` bins away by the per-symbol window.
pub fn window_leakage(window: &[f64]) -> Result<Vec<f64>> {
    let m = window.len();
    let mut buf: Vec<Complex64> = window.iter().map(|&f| Complex64::new(f, 0.0)).collect();
    plan(m)?.forward(&mut buf);
    let scale = 1.0 / (m as f64).sqrt();
    Ok(buf.iter().map(|z| (z * scale).norm_sqr()).collect())
}

/// Inter-carrier power on an ideal channel, `Σ_{d≠0} |W_d|²`, equal for
/// every subcarrier with unit symbol power.
pub fn ici_closed_form(window: &[f64]) -> Result<f64> {
    Ok(window_leakage(window)?.iter().skip(1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use crate::rng::derive_stream;
    use crate::windows::WindowProfile;

    fn params(m: usize, k: usize, n: usize, l: usize) -> SystemParams {
        SystemParams {
            subcarriers: m,
            spreading_factor: k,
            symbols_per_block: n,
            taper_len: l,
            cp_len: Some(0),
            ..Default::default()
        }
    }

    #[test]
    fn rectangular_ideal_has_only_noise() {
        let modem = OcbtModem::with_window(&params(16, 4, 2, 0), WindowProfile::rectangular(16)).unwrap();
        let noise = NoiseModel::from_snr_db(10.0);
        let mut r = derive_stream(1, "rect");
        let map = interference_decomposition(&modem, &ChannelRealization::ideal(), &EqualizerSpec::zf(), noise, 200, &mut r)
            .unwrap();
        let avg = map.average();
        for c in map.cells() {
            assert!((c.desired_gain - 1.0).norm() < 1e-12);
            assert!(c.ici_power < 1e-25 && c.ibi_power == 0.0);
        }
        // noise after despreading: (N/K)·P_N
        assert!((avg.noise_power / (0.5 * 0.1) - 1.0).abs() < 0.05, "{}", avg.noise_power);
        assert!((avg.sinr_db - 10.0 * (1.0f64 / 0.05).log10()).abs() < 0.25);
    }

    #[test]
    fn windowed_gain_and_ici_match_closed_form() {
        let p = params(64, 4, 4, 20);
        let modem = OcbtModem::new(&p).unwrap();
        let mean = modem.window().mean();
        let gains = desired_gains(&modem, &ChannelRealization::ideal(), &EqualizerSpec::zf()).unwrap();
        for g in gains.as_slice() {
            assert!((g - mean).norm() < 1e-10);
        }
        let mut r = derive_stream(2, "ici");
        let noise = NoiseModel::new(0.0).unwrap();
        let map = interference_decomposition(&modem, &ChannelRealization::ideal(), &EqualizerSpec::zf(), noise, 400, &mut r)
            .unwrap();
        let expect = ici_closed_form(modem.window().per_symbol()).unwrap();
        let avg = map.average();
        assert!((avg.ici_power / expect - 1.0).abs() < 0.02, "{} vs {expect}", avg.ici_power);
    }

    /// Dense oracle: `(1/M) Σ_p f_p ω^{(m-m')p}` summed directly.
    #[test]
    fn leakage_against_direct_sum() {
        let modem = OcbtModem::new(&params(32, 2, 2, 12)).unwrap();
        let f = modem.window().per_symbol();
        let leak = window_leakage(f).unwrap();
        for d in 0..32 {
            let w: Complex64 = f
                .iter()
                .enumerate()
                .map(|(p, &v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (d * p) as f64 / 32.0))
                .sum::<Complex64>()
                / 32.0;
            assert!((w.norm_sqr() - leak[d]).abs() < 1e-12);
        }
        assert!((leak[0] - modem.window().mean().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn expectation_matches_closed_form_and_monte_carlo() {
        let modem = OcbtModem::new(&params(32, 4, 2, 12)).unwrap();
        let noise = NoiseModel::from_snr_db(15.0);
        let ideal = ChannelRealization::ideal();
        let exact = interference_expectation(&modem, &ideal, &EqualizerSpec::zf(), noise, &Executor::sequential()).unwrap();
        let ici = ici_closed_form(modem.window().per_symbol()).unwrap();
        for c in exact.cells() {
            assert!((c.ici_power - ici).abs() < 1e-12);
            assert!((c.noise_power - 0.5 * noise.variance).abs() < 1e-14);
            assert_eq!(c.ibi_power, 0.0);
        }
        let taps = vec![Complex64::new(0.9, 0.1), Complex64::new(0.3, -0.2), ZERO, Complex64::new(0.1, 0.2)];
        let ch = ChannelRealization::new(taps).unwrap();
        let eq = EqualizerSpec::mmse(noise.variance);
        let exact = interference_expectation(&modem, &ch, &eq, noise, &Executor::with_threads(2)).unwrap().average();
        let mc = interference_decomposition(&modem, &ch, &eq, noise, 400, &mut derive_stream(7, "mc"))
            .unwrap()
            .average();
        for (a, b) in [(exact.ici_power, mc.ici_power), (exact.ibi_power, mc.ibi_power), (exact.noise_power, mc.noise_power)] {
            assert!((a / b - 1.0).abs() < 0.1, "{a} vs {b}");
        }
    }

    #[test]
    fn ibi_terms_on_a_dispersive_channel() {
        let modem = OcbtModem::new(&params(32, 4, 4, 8)).unwrap();
        let taps = vec![Complex64::new(0.9, 0.0), ZERO, Complex64::new(0.3, 0.2), Complex64::new(0.0, -0.2)];
        let ch = ChannelRealization::new(taps).unwrap();
        let eq = EqualizerSpec::mmse(1e-3);
        let noise = NoiseModel::new(1e-3).unwrap();
        let mut r = derive_stream(3, "disp");
        let map = interference_decomposition(&modem, &ch, &eq, noise, 100, &mut r).unwrap();
        let avg = map.average();
        assert!(avg.ibi_power > 0.0 && avg.ici_power > 0.0 && avg.noise_power > 0.0);
        let measured = measured_sinr_db(&modem, &ch, &eq, noise, &map, 100, &mut r).unwrap();
        assert!((measured - avg.sinr_db).abs() < 0.3, "{measured} vs {}", avg.sinr_db);
    }

    #[test]
    fn ibi_check_trivial_cases() {
        let mut r = derive_stream(4, "leak");
        let one = OcbtModem::new(&params(8, 1, 1, 0)).unwrap();
        let leak: Vec<Complex64> = (0..8).map(|_| r.complex_gaussian(1.0)).collect();
        let (meas, bound) = ibi_bound_check(&one, &leak, 0).unwrap();
        assert!((meas - bound).abs() < 1e-12);

        let four = OcbtModem::new(&params(8, 4, 4, 0)).unwrap();
        let sub: Vec<Complex64> = (0..8).map(|_| r.complex_gaussian(1.0)).collect();
        let flat: Vec<Complex64> = sub.iter().cycle().take(32).cloned().collect();
        // row 1 alternates + - + -
        let (meas, _) = ibi_bound_check(&four, &flat, 1).unwrap();
        assert!(meas < 1e-28);
        assert!(ibi_bound_check(&four, &flat, 4).is_err());
    }

    #[test]
    fn worst_case_bound_always_holds_and_is_reached() {
        let mut r = derive_stream(5, "worst");
        for k in [1usize, 2, 4, 8] {
            for n in 1..=k {
                let modem = OcbtModem::new(&params(8, k, n, 0)).unwrap();
                for l in 0..n {
                    let leak: Vec<Complex64> = (0..8 * k).map(|_| r.complex_gaussian(1.0)).collect();
                    let (meas, _) = ibi_bound_check(&modem, &leak, l).unwrap();
                    assert!(meas <= ibi_worst_case_bound(&modem, &leak) * (1.0 + 1e-12));
                }
                let sub: Vec<Complex64> = (0..8).map(|_| r.complex_gaussian(1.0)).collect();
                let row = modem.codes().row(modem.code_rows()[0]);
                let aligned: Vec<Complex64> = (0..8 * k).map(|p| sub[p % 8] * row[p / 8] as f64).collect();
                let (meas, _) = ibi_bound_check(&modem, &aligned, 0).unwrap();
                let worst = ibi_worst_case_bound(&modem, &aligned);
                assert!((meas - worst).abs() < 1e-10 * worst);
            }
        }
    }

    /// The `N/K²` figure is the mean reduction for leaks with independent
    /// random sub-blocks, not a per-vector bound: for `K > 1` about half the
    /// vectors exceed it.
    #[test]
    fn quarter_bound_holds_on_average_only() {
        let modem = OcbtModem::new(&params(8, 4, 4, 0)).unwrap();
        let mut r = derive_stream(6, "avg");
        let (mut meas_sum, mut bound_sum, mut above) = (0.0, 0.0, 0);
        for _ in 0..2000 {
            let leak: Vec<Complex64> = (0..32).map(|_| r.complex_gaussian(1.0)).collect();
            let (meas, bound) = ibi_bound_check(&modem, &leak, 2).unwrap();
            meas_sum += meas;
            bound_sum += bound;
            above += (meas > bound + 1e-12) as usize;
        }
        assert!((meas_sum / bound_sum - 1.0).abs() < 0.05);
        assert!(above > 500 && above < 1500, "{above}");
    }
}
