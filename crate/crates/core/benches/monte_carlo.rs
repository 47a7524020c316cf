use criterion::{criterion_group, criterion_main, Criterion};

use ocbt::exec::Executor;
use ocbt::metrics::experiment::{run_ber_experiment, BerConfig, ChannelSpec};
use ocbt::{System, SystemParams};

fn config() -> BerConfig {
    let params = SystemParams {
        subcarriers: 256,
        taper_len: 80,
        sample_rate: 7.68e6,
        ..Default::default()
    };
    let mut cfg = BerConfig::new(params, vec![System::Ocbt, System::CpOfdm], vec![10.0], ChannelSpec::Veha);
    // fixed work per iteration: the error target is never reached first
    cfg.min_errors = u64::MAX;
    cfg.max_bits = 256 * 2 * 4 * 128;
    cfg
}

fn ber_sweep(c: &mut Criterion) {
    let cfg = config();
    let mut group = c.benchmark_group("ber_sweep");
    group.sample_size(10);
    let seq = Executor::sequential();
    group.bench_function("sequential", |b| b.iter(|| run_ber_experiment(&cfg, &seq).unwrap()));
    let par = Executor::with_threads(0);
    group.bench_function("parallel", |b| b.iter(|| run_ber_experiment(&cfg, &par).unwrap()));
    group.finish();
}

criterion_group!(benches, ber_sweep);
criterion_main!(benches);
