use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_traits::One;

use sslab_core::classic::{meet_in_middle, meet_in_middle_with};
use sslab_core::combinatorics::{check_udcp_with, count_b_sigma_all_with, udcp_from_instance};
use sslab_core::gen;
use sslab_core::oracle::brute_solve_with;
use sslab_core::{Exec, Instance, RandomSource};

const SEED: u64 = 54487;
const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

/// A random instance whose target exceeds the total, so every solver does its full work.
fn no_instance(n: usize, d: f64) -> Instance {
    let mut rng = RandomSource::new(SEED ^ n as u64);
    let inst = gen::gen_random_density(n, d, &mut rng).unwrap();
    inst.with_target(inst.total() + num_bigint::BigUint::one())
}

fn brute(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_solve");
    group.sample_size(10);
    for n in [18, 22] {
        let inst = no_instance(n, 1.0);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, i| {
                b.iter(|| brute_solve_with(black_box(i), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn mim(c: &mut Criterion) {
    let mut group = c.benchmark_group("meet_in_middle");
    for n in [24, 32] {
        let inst = no_instance(n, 0.5);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, i| {
                b.iter(|| meet_in_middle_with(black_box(i), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn ternary(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_b_sigma_all");
    group.sample_size(10);
    for n in [12, 14] {
        let inst = no_instance(n, 2.0);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, i| {
                b.iter(|| count_b_sigma_all_with(black_box(i), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn udcp(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_udcp");
    for n in [12, 16] {
        let pair = udcp_from_instance(&gen::gen_all_equal(n, 1, 0).unwrap(), 24).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &pair, |b, p| {
                b.iter(|| check_udcp_with(black_box(p), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch_mim_sweep");
    let mut rng = RandomSource::new(SEED);
    let batch: Vec<Instance> = (0..64)
        .map(|_| gen::gen_planted(20, 20, &mut rng).unwrap().0)
        .collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(black_box(&batch), |i| meet_in_middle(i).unwrap().found()))
        });
    }
    group.finish();
}

criterion_group!(benches, brute, mim, ternary, udcp, batch);
criterion_main!(benches);
