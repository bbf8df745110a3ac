//! Build cost of each construction as the knot count grows.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flatspot::bump::{build_bumps, BumpParams};
use flatspot::quartic1d::{build_quartic_c2, choose_c0, CurvatureStrategy};
use flatspot::quartic2d::{build_tensor_c0, random_free_blocks, FreeBlocks};
use flatspot::superpose::{build_superposition, default_angles, Fill, TensorFamily};
use flatspot::trig1d::build_trig;
use flatspot::trig2d::build_trig_tensor;
use flatspot_bench::{curve_spec, grid_2d, knots_1d, scatter_spec};

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct/1d");
    for n in [16usize, 64, 256] {
        let knots = knots_1d(n, 11);
        let spec = curve_spec(&knots);

        group.bench_with_input(BenchmarkId::new("bump", n), &spec, |b, spec| {
            b.iter(|| build_bumps(black_box(spec), &BumpParams::default()).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("quartic-c2", n), &knots, |b, k| {
            b.iter(|| {
                let c0 = choose_c0(k, CurvatureStrategy::AllMinima);
                build_quartic_c2(black_box(k), c0).unwrap()
            });
        });
        group.bench_with_input(BenchmarkId::new("trig", n), &knots, |b, k| {
            b.iter(|| build_trig(black_box(k)).unwrap());
        });
    }
    group.finish();
}

fn surfaces(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct/2d");
    for side in [8usize, 16, 32] {
        let grid = grid_2d(side, 13);
        let cells = (side - 1) * (side - 1);
        group.bench_with_input(BenchmarkId::new("quartic2d", side), &grid, |b, g| {
            let free = random_free_blocks(cells, 17);
            b.iter(|| build_tensor_c0(black_box(g), 1.5, -0.5, &free).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("quartic2d-zero", side), &grid, |b, g| {
            b.iter(|| build_tensor_c0(black_box(g), 1.5, -0.5, &FreeBlocks::Zero).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("trig2d", side), &grid, |b, g| {
            b.iter(|| build_trig_tensor(black_box(g)).unwrap());
        });
    }
    group.finish();
}

fn rotated_frames(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct/superpose");
    let spec = scatter_spec(8, 19);
    for m in [1usize, 2, 3] {
        let angles = default_angles(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &angles, |b, angles| {
            b.iter(|| {
                build_superposition(
                    black_box(&spec),
                    TensorFamily::Trig,
                    angles,
                    &Fill::NearestValue,
                )
                .unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, curves, surfaces, rotated_frames);
criterion_main!(benches);
