//! Scanner cost: lattice sweep plus refinement, by resolution and dimension.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flatspot::bump::{build_bumps, BumpParams};
use flatspot::trig1d::build_trig;
use flatspot::trig2d::build_trig_tensor;
use flatspot::{scan_stationary, PointSet, ScanConfig};
use flatspot_bench::{curve_spec, grid_2d, knots_1d};

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan/1d");
    let knots = knots_1d(12, 41);
    let spec = curve_spec(&knots);
    let trig = build_trig(&knots).unwrap();
    let bump = build_bumps(&spec, &BumpParams::default()).unwrap();
    for res in [1024usize, 4096] {
        let cfg = ScanConfig { resolution: res, ..ScanConfig::default() };
        group.bench_with_input(BenchmarkId::new("trig", res), &cfg, |b, cfg| {
            b.iter(|| scan_stationary(black_box(&trig), &spec.points, None, cfg).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("bump", res), &cfg, |b, cfg| {
            b.iter(|| scan_stationary(black_box(&bump), &spec.points, None, cfg).unwrap());
        });
    }
    group.finish();
}

fn surfaces(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan/2d");
    group.sample_size(20);
    let grid = grid_2d(6, 43);
    let surface = build_trig_tensor(&grid).unwrap();
    let vertices: Vec<[f64; 2]> = grid
        .x
        .iter()
        .flat_map(|&gx| grid.y.iter().map(move |&gy| [gx, gy]))
        .collect();
    let prescribed = PointSet::D2(vertices);
    for res in [64usize, 128, 256] {
        let cfg = ScanConfig { resolution: res, ..ScanConfig::default() };
        group.bench_with_input(BenchmarkId::new("trig2d", res), &cfg, |b, cfg| {
            b.iter(|| scan_stationary(black_box(&surface), &prescribed, None, cfg).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, curves, surfaces);
criterion_main!(benches);
