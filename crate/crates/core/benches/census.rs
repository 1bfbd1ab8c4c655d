use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use grpdet::census::{census_run_with, CensusConfig, RunOptions};
use grpdet::detengine::{direct_determinant, factored_determinant};
use grpdet::{make_group, GroupRingElement};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CURSORS: u64 = 8192;

fn census_workers(c: &mut Criterion) {
    let g = make_group(5, 2, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let mut group = c.benchmark_group("census_ga5");
    group.throughput(Throughput::Elements(CURSORS));
    group.sample_size(10);
    for workers in [1, threads] {
        let label = if workers == 1 { "sequential".to_string() } else { format!("parallel_{workers}") };
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                let mut cfg = CensusConfig::new(g.clone(), 1, 20, dir.path().join(format!("w{workers}.jsonl")));
                cfg.limit = Some(CURSORS);
                cfg.workers = workers;
                let opts = RunOptions { restart: true, ..Default::default() };
                census_run_with(&cfg, &opts, |_| {}).unwrap()
            })
        });
    }
    group.finish();
}

fn determinant_paths(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("determinant");
    for (p, r, n) in [(5, 2, 4), (7, 3, 6), (13, 4, 6)] {
        let g = make_group(p, r, n).unwrap();
        let e = GroupRingElement::from_flat(&g, (0..g.order()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect());
        let size = g.order();
        group.bench_with_input(BenchmarkId::new("factored", size), &e, |b, e| b.iter(|| factored_determinant(e, &g).unwrap()));
        group.bench_with_input(BenchmarkId::new("direct", size), &e, |b, e| b.iter(|| direct_determinant(e, &g)));
    }
    group.finish();
}

criterion_group!(benches, census_workers, determinant_paths);
criterion_main!(benches);
