use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use layercast::protocols::{deterministic_schedule_with, DeterministicOptions, ExpectationMode};
use layercast::scenario::{generate_office_layer, OfficeGridSpec};
use layercast::sim::{sweep, ProtocolSpec, SweepInstance, SweepOptions};
use layercast::{characterize, Exec};

const EXECUTORS: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn office_instances(max_offices: usize) -> Vec<SweepInstance> {
    (2..=max_offices)
        .map(|k| {
            let spec = OfficeGridSpec::with_offices(k);
            let mut si = SweepInstance::new(format!("office-n{}", spec.n()), generate_office_layer(&spec).unwrap());
            si.sinr_defaults = spec.sinr_defaults();
            si
        })
        .collect()
}

fn bench_sweep(c: &mut Criterion) {
    let instances = office_instances(14);
    let protocols = [ProtocolSpec::randomized(), ProtocolSpec::Decay, ProtocolSpec::Sinr { density: None, dilution: None }];
    let seeds: Vec<u64> = (1..=30).collect();
    let mut group = c.benchmark_group("office_sweep");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        let opts = SweepOptions { exec, ..SweepOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| sweep(black_box(&instances), &protocols, &seeds, opts).unwrap())
        });
    }
    group.finish();
}

fn bench_deterministic(c: &mut Criterion) {
    let inst = generate_office_layer(&OfficeGridSpec::with_offices(4)).unwrap();
    let ch = characterize(&inst, None).unwrap();
    let mut group = c.benchmark_group("deterministic_exact_n12");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        let opts = DeterministicOptions { mode: ExpectationMode::Exact, exec };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| deterministic_schedule_with(black_box(&inst), &ch, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_deterministic);
criterion_main!(benches);
