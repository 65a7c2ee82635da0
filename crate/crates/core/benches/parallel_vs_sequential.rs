use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use oirs_core::irs::irs_channel_gain_with;
use oirs_core::metrics::monte_carlo_ber_snr_with;
use oirs_core::nrr::nrr_received_power_with;
use oirs_core::sweep::{run_sweep_with, SweepRange, SweepSpec, SweepVariable};
use oirs_core::{Exec, Scenario, Scheme};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn irs_gain(c: &mut Criterion) {
    let mut g = c.benchmark_group("irs_gain");
    for n_m in [5usize, 20, 50] {
        let s = Scenario::default().with_n_m(n_m);
        let (cfg, lg, oc, q) = (s.irs_config(), s.link_geometry().unwrap(), s.optics(), s.quadrature());
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n_m), &n_m, |b, _| {
                b.iter(|| irs_channel_gain_with(black_box(&cfg), &lg, &oc, &q, exec).unwrap().gain)
            });
        }
    }
    g.finish();
}

fn nrr_power(c: &mut Criterion) {
    let mut g = c.benchmark_group("nrr_power");
    let s = Scenario::default();
    let (lg, nc, oc) = (s.link_geometry().unwrap(), s.nrr_config(), s.optics());
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| nrr_received_power_with(black_box(&lg), &nc, &oc, exec).unwrap()));
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo_1e6_bits");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| monte_carlo_ber_snr_with(black_box(9.55), 1_000_000, 7, exec).unwrap().ber));
    }
    g.finish();
}

fn distance_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("irs_distance_sweep");
    g.sample_size(10);
    let spec = SweepSpec {
        scheme: Scheme::Irs,
        variable: SweepVariable::DSr,
        range: SweepRange::new(20.0, 500.0, 20.0),
        fixed: Scenario::default(),
    };
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| run_sweep_with(black_box(&spec), exec).unwrap().len()));
    }
    g.finish();
}

criterion_group!(benches, irs_gain, nrr_power, monte_carlo, distance_sweep);
criterion_main!(benches);
