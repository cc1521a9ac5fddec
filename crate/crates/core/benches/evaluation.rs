use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qpgreen::helm2d::prepare2d_with;
use qpgreen::helm3d::prepare3d_with;
use qpgreen::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn prepare(c: &mut Criterion) {
    let mut group = c.benchmark_group("prepare");
    group.sample_size(10);
    let p2 = Params2D::new(10f64.sqrt(), 0.3, 128);
    let cache = compute_f12cache(p2.c_tilde, p2.eps, p2.fft_res, p2.n_modes).unwrap();
    let p3 = Params3D::new(5.0, 0.1, 0.2, 32);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("helm2d_n128", name), |b| {
            b.iter(|| prepare2d_with(&p2, &cache, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("helm3d_n32", name), |b| {
            b.iter(|| prepare3d_with(&p3, FhatMethod::Radial, exec).unwrap())
        });
    }
    group.finish();
}

fn evaluate(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_many");
    let p = Params2D::new(10f64.sqrt(), 0.3, 64);
    let cache = compute_f12cache(p.c_tilde, p.eps, p.fft_res, p.n_modes).unwrap();
    let table = prepare2d(&p, &cache).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<[f64; 2]> = (0..10_000).map(|_| [rng.gen_range(-PI..PI), rng.gen_range(-0.55..0.55)]).collect();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("helm2d_10k", name), |b| b.iter(|| table.eval_many(&pts, exec)));
    }
    group.finish();
}

criterion_group!(benches, prepare, evaluate);
criterion_main!(benches);
