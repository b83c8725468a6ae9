use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nodal_kstab::exactnum::{int, rat};
use nodal_kstab::par::Execution;
use nodal_kstab::scan::{scan_with, ScanConfig};

const MODES: [(&str, Execution); 2] = [("serial", Execution::Serial), ("parallel", Execution::Parallel)];

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_scan");
    let config = ScanConfig::exact(rat(1, 4), int(12), rat(1, 400));
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_with(&config, exec).unwrap())
        });
    }
    g.finish();
}

fn sample(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_scan_m2");
    g.sample_size(10);
    let mut config = ScanConfig::sample(int(1), int(4), rat(1, 4), 2);
    // a non-default cap gives each run its own cold localization cache
    config.cap = 256;
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_with(&config, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exact, sample);
criterion_main!(benches);
