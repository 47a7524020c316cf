//! Monte Carlo and synthesis runners behind the CLI.
//!
//! Every trial draws from streams labelled by SNR index and trial index, so
//! the outcome depends only on the seed. Trials run in fixed-size batches and
//! the stopping rule is checked between batches, which keeps the number of
//! trials independent of the worker count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::buffer::SymbolGrid;
use crate::channel::{add_awgn, fir_convolve, ChannelRealization, FadingProfile, NoiseModel, TapNormalization};
use crate::equalizer::{EqualizerKind, EqualizerSpec};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::metrics::ber::count_errors;
use crate::metrics::interference::{interference_decomposition, measured_sinr_db};
use crate::metrics::psd::{psd_welch, PsdEstimate};
use crate::modems::{qam_demap, qam_map, BitStream, ModulationScheme, OcbtModem};
use crate::params::SystemParams;
use crate::rng::derive_stream;
use crate::system::System;
use crate::windows::build_ocbt_window;

/// Propagation model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelSpec {
    /// Ideal channel, noise only.
    Awgn,
    /// Rayleigh vehicular-A at the configured sample rate.
    Veha,
    /// A fixed tapped delay line.
    Fir { taps: Vec<Complex64> },
    /// Rayleigh fading with a custom power-delay profile.
    Profile(FadingProfile),
}

/// When a fading channel is redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FadingMode {
    /// A fresh realization for every transmitted block.
    #[default]
    Block,
    /// One realization for the whole run.
    Static,
}

impl ChannelSpec {
    fn profile(&self, sample_rate: f64) -> Option<FadingProfile> {
        match self {
            ChannelSpec::Veha => Some(FadingProfile::vehicular_a(sample_rate)),
            ChannelSpec::Profile(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Fir { taps } => ChannelRealization::new(taps.clone()).map(|_| ()),
            ChannelSpec::Profile(p) => p.validate(),
            _ => Ok(()),
        }
        .map_err(|e| Error::config("channel", e.to_string()))
    }

    /// The realization used by a trial labelled `label`.
    fn realize(
        &self,
        sample_rate: f64,
        seed: u64,
        label: &str,
        mode: FadingMode,
        norm: TapNormalization,
    ) -> Result<ChannelRealization> {
        match self {
            ChannelSpec::Awgn => Ok(ChannelRealization::ideal()),
            ChannelSpec::Fir { taps } => ChannelRealization::new(taps.clone()),
            _ => {
                let profile = self.profile(sample_rate).expect("fading spec");
                let label = match mode {
                    FadingMode::Block => format!("{label}/channel"),
                    FadingMode::Static => "channel".to_string(),
                };
                Ok(profile.realize(&mut derive_stream(seed, &label), norm))
            }
        }
    }
}

/// BER sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BerConfig {
    pub params: SystemParams,
    pub systems: Vec<System>,
    /// `Es/N0` per point, dB, with unit-power symbols.
    pub snr_grid_db: Vec<f64>,
    pub channel: ChannelSpec,
    pub equalizer: EqualizerKind,
    pub fading: FadingMode,
    pub tap_normalization: TapNormalization,
    /// Stop a point once this many bit errors are counted...
    pub min_errors: u64,
    /// ...or this many bits are simulated.
    pub max_bits: u64,
    pub batch_trials: usize,
}

impl BerConfig {
    pub fn new(params: SystemParams, systems: Vec<System>, snr_grid_db: Vec<f64>, channel: ChannelSpec) -> Self {
        BerConfig {
            params,
            systems,
            snr_grid_db,
            channel,
            equalizer: EqualizerKind::Mmse,
            fading: FadingMode::Block,
            tap_normalization: TapNormalization::PerRealization,
            min_errors: 200,
            max_bits: 10_000_000,
            batch_trials: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(&self.params)?;
        check_systems(&self.systems, &self.params)?;
        if self.snr_grid_db.is_empty() || self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::config("snr_grid_db", "needs at least one finite SNR value"));
        }
        if self.min_errors == 0 && self.max_bits == 0 {
            return Err(Error::config("max_bits", "either min_errors or max_bits must be positive"));
        }
        if self.max_bits == 0 {
            return Err(Error::config("max_bits", "must be positive"));
        }
        if self.batch_trials == 0 {
            return Err(Error::config("batch_trials", "must be positive"));
        }
        self.channel.validate()
    }
}

fn check_params(params: &SystemParams) -> Result<()> {
    params
        .clone()
        .validate()
        .map(|_| ())
        .map_err(|e| Error::config("params", e.to_string()))
}

fn check_systems(systems: &[System], params: &SystemParams) -> Result<()> {
    if systems.is_empty() {
        return Err(Error::config("systems", "no systems listed"));
    }
    for s in systems {
        if !s.has_waveform() {
            return Err(Error::config("systems", format!("{s} has no waveform to simulate")));
        }
        if *s == System::WOfdm {
            params
                .check_wofdm_lengths()
                .map_err(|e| Error::config("params", e.to_string()))?;
        }
    }
    Ok(())
}

/// One row of a BER table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub system: System,
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
}

/// Transmits one frame after a preceding frame through `ch` and counts the
/// bit errors of the second frame.
fn run_trial(
    cfg: &BerConfig,
    scheme: &ModulationScheme,
    snr_idx: usize,
    trial: usize,
) -> Result<(u64, u64)> {
    let p = &cfg.params;
    let label = format!("ber/snr{snr_idx}/trial{trial}");
    let ch = cfg
        .channel
        .realize(p.sample_rate, p.seed, &label, cfg.fading, cfg.tap_normalization)?;
    let noise = NoiseModel::from_snr_db(cfg.snr_grid_db[snr_idx]);
    let sys = scheme.system().name();
    let mut data = derive_stream(p.seed, &format!("{label}/{sys}/data"));
    let bits_per_frame = p.mod_order as usize * scheme.subcarriers() * scheme.symbols();
    let prev_bits = BitStream(data.bits(bits_per_frame));
    let cur_bits = BitStream(data.bits(bits_per_frame));
    let grids = [
        qam_map(&prev_bits, p.mod_order, scheme.subcarriers())?,
        qam_map(&cur_bits, p.mod_order, scheme.subcarriers())?,
    ];
    let stream = scheme.modulate_stream(&grids)?;
    let y = fir_convolve(&stream, &ch);
    let start = scheme.frame_stride();
    let mut rx = y[start..start + scheme.frame_len()].to_vec();
    add_awgn(&mut rx, noise, &mut derive_stream(p.seed, &format!("{label}/{sys}/noise")));
    let eq = match cfg.equalizer {
        EqualizerKind::Zf => EqualizerSpec::zf(),
        EqualizerKind::Mmse => EqualizerSpec::mmse(noise.variance),
    };
    let out = scheme.receive(&rx, &ch, &eq)?;
    let errors = count_errors(&cur_bits, &qam_demap(&out, p.mod_order)?)?;
    Ok((errors, cur_bits.len() as u64))
}

/// Sweeps every system over the SNR grid.
pub fn run_ber_experiment(cfg: &BerConfig, exec: &Executor) -> Result<Vec<BerPoint>> {
    cfg.validate()?;
    let mut table = Vec::new();
    for &system in &cfg.systems {
        let scheme = ModulationScheme::new(system, &cfg.params)?;
        for (j, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
            let (mut errors, mut bits) = (0u64, 0u64);
            let mut next = 0usize;
            while errors < cfg.min_errors.max(1) && bits < cfg.max_bits {
                let first = next;
                let batch = exec.map(cfg.batch_trials, |i| run_trial(cfg, &scheme, j, first + i));
                for r in batch {
                    let (e, b) = r?;
                    errors += e;
                    bits += b;
                }
                next += cfg.batch_trials;
            }
            table.push(BerPoint {
                system,
                snr_db,
                bits,
                errors,
                ber: errors as f64 / bits as f64,
            });
        }
    }
    Ok(table)
}

/// Spectrum settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdConfig {
    pub params: SystemParams,
    pub systems: Vec<System>,
    /// Centred active subcarriers; the rest are left empty.
    pub active: usize,
    /// Samples to synthesize per system (whole frames, rounded up).
    pub samples: usize,
    pub segment: usize,
    pub overlap: usize,
}

impl PsdConfig {
    /// `M/2` active subcarriers, 2¹⁷ samples, 512-sample segments with half
    /// overlap.
    pub fn new(params: SystemParams, systems: Vec<System>) -> Self {
        PsdConfig {
            active: params.subcarriers / 2,
            params,
            systems,
            samples: 1 << 17,
            segment: 512,
            overlap: 256,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(&self.params)?;
        check_systems(&self.systems, &self.params)?;
        if self.active == 0 || self.active > self.params.subcarriers {
            return Err(Error::config("active", format!("must lie in 1..={}", self.params.subcarriers)));
        }
        if self.segment == 0 || !self.segment.is_power_of_two() || self.segment > self.samples {
            return Err(Error::config("segment", "must be a power of two no longer than samples"));
        }
        if self.overlap >= self.segment {
            return Err(Error::config("overlap", "must be shorter than segment"));
        }
        Ok(())
    }
}

/// Subcarrier indices `-active/2 .. active/2` mapped onto `0..m`.
pub fn active_bins(m: usize, active: usize) -> Vec<usize> {
    let lo = active / 2;
    (0..active).map(|i| (i + m - lo) % m).collect()
}

/// Welch PSD of a long random transmission per system.
pub fn run_psd_experiment(cfg: &PsdConfig, exec: &Executor) -> Result<Vec<(System, PsdEstimate)>> {
    cfg.validate()?;
    let p = &cfg.params;
    let bins = active_bins(p.subcarriers, cfg.active);
    let mut out = Vec::new();
    for &system in &cfg.systems {
        let scheme = ModulationScheme::new(system, p)?;
        let stride = scheme.frame_stride();
        let frames = cfg.samples.saturating_sub(scheme.frame_len()).div_ceil(stride) + 1;
        let grids = exec.map(frames, |f| {
            let mut r = derive_stream(p.seed, &format!("psd/{}/frame{f}", system.name()));
            let bits = BitStream(r.bits(p.mod_order as usize * cfg.active * scheme.symbols()));
            let dense = qam_map(&bits, p.mod_order, cfg.active)?;
            let mut grid = SymbolGrid::zeros(p.subcarriers, scheme.symbols());
            for n in 0..scheme.symbols() {
                for (i, &b) in bins.iter().enumerate() {
                    grid.set(b, n, dense.get(i, n));
                }
            }
            Ok(grid)
        });
        let grids = grids.into_iter().collect::<Result<Vec<_>>>()?;
        let signal = scheme.modulate_stream(&grids)?;
        out.push((system, psd_welch(&signal, cfg.segment, cfg.overlap)?));
    }
    Ok(out)
}

/// One row of the SINR analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SinrRow {
    pub system: System,
    pub snr_db: f64,
    pub desired: f64,
    pub ici: f64,
    pub ibi: f64,
    pub noise: f64,
    pub sinr_pred_db: f64,
    pub sinr_meas_db: f64,
}

/// Interference analysis settings.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub params: SystemParams,
    pub snr_grid_db: Vec<f64>,
    pub channel: ChannelSpec,
    pub equalizer: EqualizerKind,
    pub tap_normalization: TapNormalization,
    /// Random blocks averaged per SNR point, for each of the decomposition
    /// and the direct measurement.
    pub draws: usize,
}

impl AnalyzeConfig {
    pub fn validate(&self) -> Result<()> {
        check_params(&self.params)?;
        if self.snr_grid_db.is_empty() || self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::config("snr_grid_db", "needs at least one finite SNR value"));
        }
        if self.draws == 0 {
            return Err(Error::config("draws", "must be positive"));
        }
        self.channel.validate()
    }
}

/// Predicted and measured OCBT SINR per SNR point. A fading channel is drawn
/// once and held for the whole analysis.
pub fn run_sinr_analysis(cfg: &AnalyzeConfig, exec: &Executor) -> Result<Vec<SinrRow>> {
    cfg.validate()?;
    let p = &cfg.params;
    let modem = OcbtModem::new(p)?;
    let ch = cfg
        .channel
        .realize(p.sample_rate, p.seed, "analyze", FadingMode::Static, cfg.tap_normalization)?;
    let rows = exec.map(cfg.snr_grid_db.len(), |j| {
        let snr_db = cfg.snr_grid_db[j];
        let noise = NoiseModel::from_snr_db(snr_db);
        let eq = match cfg.equalizer {
            EqualizerKind::Zf => EqualizerSpec::zf(),
            EqualizerKind::Mmse => EqualizerSpec::mmse(noise.variance),
        };
        let mut r = derive_stream(p.seed, &format!("analyze/snr{j}/decompose"));
        let map = interference_decomposition(&modem, &ch, &eq, noise, cfg.draws, &mut r)?;
        let mut r = derive_stream(p.seed, &format!("analyze/snr{j}/measure"));
        let meas = measured_sinr_db(&modem, &ch, &eq, noise, &map, cfg.draws, &mut r)?;
        let avg = map.average();
        Ok(SinrRow {
            system: System::Ocbt,
            snr_db,
            desired: avg.desired_power,
            ici: avg.ici_power,
            ibi: avg.ibi_power,
            noise: avg.noise_power,
            sinr_pred_db: avg.sinr_db,
            sinr_meas_db: meas,
        })
    });
    rows.into_iter().collect()
}

/// One sample of the OCBT per-symbol window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowRow {
    pub index: usize,
    pub value: f64,
}

pub fn window_table(params: &SystemParams) -> Result<Vec<WindowRow>> {
    check_params(params)?;
    let w = build_ocbt_window(params.subcarriers, params.taper_len, params.beta)?;
    Ok(w
        .per_symbol()
        .iter()
        .enumerate()
        .map(|(index, &value)| WindowRow { index, value })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemParams {
        SystemParams {
            subcarriers: 64,
            taper_len: 20,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_rectangular_ocbt_is_error_free() {
        let mut p = small();
        p.taper_len = 0;
        let mut cfg = BerConfig::new(p, vec![System::Ocbt], vec![300.0], ChannelSpec::Awgn);
        cfg.max_bits = 100_000;
        let t = run_ber_experiment(&cfg, &Executor::sequential()).unwrap();
        assert_eq!(t[0].errors, 0);
        assert!(t[0].bits >= 100_000);
    }

    #[test]
    fn stop_rule_and_determinism() {
        // 3.84 MHz keeps the vehicular-A spread at 11 taps
        let p = SystemParams {
            sample_rate: 3.84e6,
            ..small()
        };
        let mut cfg = BerConfig::new(
            p,
            vec![System::Ocbt, System::CpOfdm, System::WOfdm],
            vec![0.0, 6.0],
            ChannelSpec::Veha,
        );
        cfg.max_bits = 200_000;
        let a = run_ber_experiment(&cfg, &Executor::sequential()).unwrap();
        let b = run_ber_experiment(&cfg, &Executor::with_threads(3)).unwrap();
        assert_eq!(a, b);
        let per_trial = 2 * 64 * 4;
        for row in &a {
            assert!(row.errors >= 200 || row.bits >= 200_000);
            assert_eq!(row.bits % (per_trial * 32), 0);
            assert!(row.ber > 0.0 && row.ber < 0.5);
        }
    }

    #[test]
    fn config_errors_name_the_field() {
        let mut cfg = BerConfig::new(small(), vec![], vec![0.0], ChannelSpec::Awgn);
        let field = |c: &BerConfig| match c.validate() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field(&cfg), "systems");
        cfg.systems = vec![System::Fbmc];
        assert_eq!(field(&cfg), "systems");
        cfg.systems = vec![System::Ocbt];
        cfg.snr_grid_db.clear();
        assert_eq!(field(&cfg), "snr_grid_db");
        cfg.snr_grid_db = vec![1.0];
        cfg.params.spreading_factor = 3;
        assert_eq!(field(&cfg), "params");
        cfg.params.spreading_factor = 4;
        cfg.channel = ChannelSpec::Fir { taps: vec![] };
        assert_eq!(field(&cfg), "channel");
    }

    #[test]
    fn active_bins_are_centred() {
        let b = active_bins(64, 32);
        assert_eq!(b.len(), 32);
        assert_eq!(b[0], 48);
        assert_eq!(b[16], 0);
        assert_eq!(b[31], 15);
    }

    #[test]
    fn psd_runs_and_is_deterministic() {
        let mut cfg = PsdConfig::new(small(), vec![System::Ocbt, System::CpOfdm]);
        cfg.samples = 1 << 13;
        let a = run_psd_experiment(&cfg, &Executor::sequential()).unwrap();
        let b = run_psd_experiment(&cfg, &Executor::with_threads(2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].1.len(), 512);
    }

    #[test]
    fn window_rows() {
        let rows = window_table(&SystemParams::default()).unwrap();
        assert_eq!(rows.len(), 1024);
        assert_eq!(rows[500].value, 1.0);
    }

    #[test]
    fn json_channel_forms() {
        let c: ChannelSpec = serde_json::from_str(r#""veha""#).unwrap();
        assert_eq!(c, ChannelSpec::Veha);
        let c: ChannelSpec = serde_json::from_str(r#"{"fir": {"taps": [[1.0, 0.0], [0.0, 0.5]]}}"#).unwrap();
        assert_eq!(
            c,
            ChannelSpec::Fir {
                taps: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]
            }
        );
    }
}
