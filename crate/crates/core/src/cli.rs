//! Command-line experiment runner.
//!
//! `ocbt <ber|psd|timeeff|complexity|window|analyze> [--config FILE]
//! [--seed N] [--out DIR] [--threads N]` reads an optional JSON
//! [`ExperimentConfig`], runs the experiment and writes one CSV into the
//! output directory. Exit status: 0 on success, 2 for a bad command line or
//! configuration, 1 when the run itself fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::channel::TapNormalization;
use crate::equalizer::EqualizerKind;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::metrics::complexity::complexity_cm;
use crate::metrics::efficiency::time_efficiency;
use crate::metrics::experiment::{
    run_ber_experiment, run_psd_experiment, run_sinr_analysis, window_table, AnalyzeConfig, BerConfig, ChannelSpec,
    FadingMode, PsdConfig,
};
use crate::metrics::psd::{stopband_bins, stopband_edge};
use crate::params::SystemParams;
use crate::system::System;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Ber,
    Psd,
    Timeeff,
    Complexity,
    Window,
    Analyze,
}

impl ExperimentKind {
    fn name(self) -> &'static str {
        match self {
            ExperimentKind::Ber => "ber",
            ExperimentKind::Psd => "psd",
            ExperimentKind::Timeeff => "timeeff",
            ExperimentKind::Complexity => "complexity",
            ExperimentKind::Window => "window",
            ExperimentKind::Analyze => "analyze",
        }
    }

    /// File written into the output directory.
    pub fn csv_name(self) -> &'static str {
        match self {
            ExperimentKind::Ber => "ber.csv",
            ExperimentKind::Psd => "psd.csv",
            ExperimentKind::Timeeff => "timeeff.csv",
            ExperimentKind::Complexity => "complexity.csv",
            ExperimentKind::Window => "window.csv",
            ExperimentKind::Analyze => "sinr.csv",
        }
    }
}

/// PSD estimator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsdSettings {
    /// Active subcarriers; `M/2` when absent.
    pub active: Option<usize>,
    pub samples: usize,
    pub segment: usize,
    pub overlap: usize,
}

impl Default for PsdSettings {
    fn default() -> Self {
        PsdSettings {
            active: None,
            samples: 1 << 17,
            segment: 512,
            overlap: 256,
        }
    }
}

/// JSON experiment description. Every field is optional; absent fields take
/// the defaults of the chosen experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Link parameters; the PSD experiment defaults to `M = 64`, `L = 20`.
    pub params: Option<SystemParams>,
    pub systems: Option<Vec<System>>,
    /// Must match the subcommand when given.
    pub experiment: Option<ExperimentKind>,
    pub snr_grid_db: Option<Vec<f64>>,
    pub channel: Option<ChannelSpec>,
    pub equalizer: Option<EqualizerKind>,
    pub output_dir: Option<PathBuf>,
    pub fading: FadingMode,
    pub tap_normalization: TapNormalization,
    pub min_errors: Option<u64>,
    pub max_bits: Option<u64>,
    pub batch_trials: Option<usize>,
    pub psd: PsdSettings,
    /// Largest symbol count in the time-efficiency table.
    pub n_max: Option<usize>,
    /// Random blocks per point in the interference analysis.
    pub draws: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
        serde_json::from_str(&text).map_err(|e| Error::config("config", e.to_string()))
    }

    fn params_for(&self, kind: ExperimentKind) -> SystemParams {
        self.params.clone().unwrap_or_else(|| match kind {
            ExperimentKind::Psd => SystemParams::psd_preset(),
            _ => SystemParams::default(),
        })
    }

    fn systems_for(&self, kind: ExperimentKind) -> Vec<System> {
        self.systems.clone().unwrap_or_else(|| match kind {
            ExperimentKind::Ber | ExperimentKind::Psd => vec![System::Ocbt, System::CpOfdm, System::WOfdm],
            ExperimentKind::Timeeff | ExperimentKind::Complexity => {
                vec![System::Ocbt, System::CpOfdm, System::Fbmc, System::WOfdm]
            }
            ExperimentKind::Window | ExperimentKind::Analyze => vec![System::Ocbt],
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "ocbt", version, about = "OCBT / CP-OFDM / W-OFDM baseband experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bit error rate against SNR.
    Ber(CommonArgs),
    /// Welch power spectral density.
    Psd(CommonArgs),
    /// Time efficiency against the number of symbols.
    Timeeff(CommonArgs),
    /// Complex multiplications per symbol.
    Complexity(CommonArgs),
    /// The OCBT per-symbol window.
    Window(CommonArgs),
    /// OCBT interference decomposition and SINR.
    Analyze(CommonArgs),
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every CPU, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Command {
    fn split(self) -> (ExperimentKind, CommonArgs) {
        match self {
            Command::Ber(a) => (ExperimentKind::Ber, a),
            Command::Psd(a) => (ExperimentKind::Psd, a),
            Command::Timeeff(a) => (ExperimentKind::Timeeff, a),
            Command::Complexity(a) => (ExperimentKind::Complexity, a),
            Command::Window(a) => (ExperimentKind::Window, a),
            Command::Analyze(a) => (ExperimentKind::Analyze, a),
        }
    }
}

/// A fully resolved, validated experiment.
enum Plan {
    Ber(BerConfig),
    Psd(PsdConfig),
    Timeeff { params: SystemParams, systems: Vec<System>, n_max: usize },
    Complexity { params: SystemParams, systems: Vec<System> },
    Window(SystemParams),
    Analyze(AnalyzeConfig),
}

fn resolve(kind: ExperimentKind, cfg: &ExperimentConfig, seed: Option<u64>) -> Result<Plan> {
    if let Some(k) = cfg.experiment {
        if k != kind {
            return Err(Error::config(
                "experiment",
                format!("config is for `{}` but `{}` was requested", k.name(), kind.name()),
            ));
        }
    }
    let mut params = cfg.params_for(kind);
    if let Some(s) = seed {
        params.seed = s;
    }
    let params = params.validate().map_err(|e| Error::config("params", e.to_string()))?;
    let systems = cfg.systems_for(kind);
    let plan = match kind {
        ExperimentKind::Ber => {
            let grid = cfg
                .snr_grid_db
                .clone()
                .unwrap_or_else(|| (0..=6).map(|i| 5.0 * i as f64).collect());
            let mut c = BerConfig::new(params, systems, grid, cfg.channel.clone().unwrap_or(ChannelSpec::Veha));
            c.equalizer = cfg.equalizer.unwrap_or(EqualizerKind::Mmse);
            c.fading = cfg.fading;
            c.tap_normalization = cfg.tap_normalization;
            c.min_errors = cfg.min_errors.unwrap_or(c.min_errors);
            c.max_bits = cfg.max_bits.unwrap_or(c.max_bits);
            c.batch_trials = cfg.batch_trials.unwrap_or(c.batch_trials);
            c.validate()?;
            Plan::Ber(c)
        }
        ExperimentKind::Psd => {
            let mut c = PsdConfig::new(params, systems);
            c.active = cfg.psd.active.unwrap_or(c.active);
            c.samples = cfg.psd.samples;
            c.segment = cfg.psd.segment;
            c.overlap = cfg.psd.overlap;
            c.validate()?;
            Plan::Psd(c)
        }
        ExperimentKind::Timeeff => {
            let n_max = cfg.n_max.unwrap_or(64);
            if n_max == 0 {
                return Err(Error::config("n_max", "must be positive"));
            }
            if systems.contains(&System::WOfdm) {
                params
                    .check_wofdm_lengths()
                    .map_err(|e| Error::config("params", e.to_string()))?;
            }
            Plan::Timeeff { params, systems, n_max }
        }
        ExperimentKind::Complexity => Plan::Complexity { params, systems },
        ExperimentKind::Window => Plan::Window(params),
        ExperimentKind::Analyze => {
            if systems != [System::Ocbt] {
                return Err(Error::config("systems", "the interference analysis covers OCBT only"));
            }
            let c = AnalyzeConfig {
                params,
                snr_grid_db: cfg.snr_grid_db.clone().unwrap_or_else(|| vec![10.0, 20.0, 30.0]),
                channel: cfg.channel.clone().unwrap_or(ChannelSpec::Awgn),
                equalizer: cfg.equalizer.unwrap_or(EqualizerKind::Zf),
                tap_normalization: cfg.tap_normalization,
                draws: cfg.draws.unwrap_or(32),
            };
            c.validate()?;
            Plan::Analyze(c)
        }
    };
    Ok(plan)
}

#[derive(Serialize)]
struct PsdRow {
    system: System,
    freq: f64,
    power_db: f64,
}

#[derive(Serialize)]
struct TimeeffRow {
    system: System,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "r_T")]
    r_t: f64,
}

#[derive(Serialize)]
struct ComplexityRow {
    system: &'static str,
    cm: u64,
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

/// Runs a resolved plan and writes its CSV to `path`.
fn execute(plan: Plan, exec: &Executor, path: &Path) -> Result<()> {
    match plan {
        Plan::Ber(c) => {
            let rows = run_ber_experiment(&c, exec)?;
            write_csv(path, &rows)?;
            for s in &c.systems {
                let pts: Vec<String> = rows
                    .iter()
                    .filter(|r| r.system == *s)
                    .map(|r| format!("{}dB:{:.3e}", r.snr_db, r.ber))
                    .collect();
                println!("{s}: BER {}", pts.join(" "));
            }
        }
        Plan::Psd(c) => {
            let est = run_psd_experiment(&c, exec)?;
            let rows: Vec<PsdRow> = est
                .iter()
                .flat_map(|(s, p)| {
                    p.freqs.iter().zip(&p.power_db).map(move |(&freq, &power_db)| PsdRow {
                        system: *s,
                        freq,
                        power_db,
                    })
                })
                .collect();
            write_csv(path, &rows)?;
            let m = c.params.subcarriers;
            let edge = stopband_edge(m, c.active, m / 8);
            for (s, p) in &est {
                let bins = stopband_bins(p, edge);
                let mean = bins.iter().map(|&i| p.power_db[i]).sum::<f64>() / bins.len().max(1) as f64;
                println!("{s}: mean stopband PSD (|f| > {edge}) {mean:.1} dB");
            }
        }
        Plan::Timeeff { params, systems, n_max } => {
            let mut rows = Vec::new();
            for &s in &systems {
                for n in 1..=n_max {
                    let r = time_efficiency(
                        s,
                        params.subcarriers,
                        n,
                        params.spreading_factor,
                        params.cp_len(),
                        params.cpw_len(),
                        params.cs_len(),
                        params.w_len(),
                    )?;
                    rows.push(TimeeffRow { system: s, n, r_t: r.r_t });
                }
                let first = &rows[rows.len() - n_max];
                println!("{s}: r_T(N=1) = {}, r_T(N={n_max}) = {}", first.r_t, rows[rows.len() - 1].r_t);
            }
            write_csv(path, &rows)?;
        }
        Plan::Complexity { params, systems } => {
            let rows = systems
                .iter()
                .map(|&s| {
                    let r = complexity_cm(
                        s,
                        params.subcarriers,
                        params.spreading_factor,
                        params.cp_len(),
                        params.cpw_len(),
                        params.cs_len(),
                    )?;
                    println!("{}: {} CM per symbol", r.label(), r.cm_per_symbol);
                    Ok(ComplexityRow {
                        system: r.label(),
                        cm: r.cm_per_symbol,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            write_csv(path, &rows)?;
        }
        Plan::Window(params) => {
            let rows = window_table(&params)?;
            let taper = rows.iter().take_while(|r| r.value < 1.0).count();
            write_csv(path, &rows)?;
            println!("OCBT: window of {} samples, {taper}-sample edges", rows.len());
        }
        Plan::Analyze(c) => {
            let rows = run_sinr_analysis(&c, exec)?;
            write_csv(path, &rows)?;
            for r in &rows {
                println!(
                    "OCBT: {} dB SNR, SINR predicted {:.2} dB, measured {:.2} dB",
                    r.snr_db, r.sinr_pred_db, r.sinr_meas_db
                );
            }
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the experiment and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (kind, args) = cli.command.split();
    let cfg = match &args.config {
        Some(path) => match ExperimentConfig::from_json_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => ExperimentConfig::default(),
    };
    let plan = match resolve(kind, &cfg, args.seed) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = fs::create_dir_all(&dir) {
        eprintln!("error: {}", Error::io(&dir, e));
        return 1;
    }
    let exec = Executor::with_threads(args.threads);
    match execute(plan, &exec, &dir.join(kind.csv_name())) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
