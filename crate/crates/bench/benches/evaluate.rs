//! Point evaluation throughput: value and gradient over a fixed batch.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};

use flatspot::bump::{build_bumps, BumpParams};
use flatspot::quartic1d::{build_quartic_c2, choose_c0, CurvatureStrategy};
use flatspot::quartic2d::{build_tensor_c0, random_free_blocks};
use flatspot::superpose::{build_superposition, default_angles, Fill, TensorFamily};
use flatspot::trig1d::build_trig;
use flatspot::trig2d::build_trig_tensor;
use flatspot::SurfaceModel;
use flatspot_bench::{curve_spec, grid_2d, knots_1d, scatter_spec};

const BATCH: usize = 1024;

/// Deterministic probe batch strictly inside the model's region.
fn probes(model: &dyn SurfaceModel) -> Vec<Vec<f64>> {
    let region = model.region();
    (0..BATCH)
        .map(|i| {
            // Low-discrepancy-ish fill; exact distribution is irrelevant here.
            let t = (i as f64 + 0.5) / BATCH as f64;
            let u = ((i as f64) * 0.754_877_666 + 0.31).fract();
            match region {
                flatspot::Region::Interval { lo, hi } => vec![lo + t * (hi - lo)],
                flatspot::Region::Rect { x, y } => vec![
                    x[0] + t * (x[1] - x[0]),
                    y[0] + u * (y[1] - y[0]),
                ],
            }
        })
        .collect()
}

fn bench_model(group: &mut criterion::BenchmarkGroup<'_, criterion::measurement::WallTime>, name: &str, model: &dyn SurfaceModel) {
    let pts = probes(model);
    group.throughput(Throughput::Elements(BATCH as u64));
    group.bench_function(format!("{name}/value"), |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for p in &pts {
                acc += model.value(black_box(p)).unwrap();
            }
            acc
        });
    });
    group.bench_function(format!("{name}/gradient"), |b| {
        let mut g = vec![0.0; model.dim()];
        b.iter(|| {
            let mut acc = 0.0;
            for p in &pts {
                model.gradient(black_box(p), &mut g).unwrap();
                acc += g[0];
            }
            acc
        });
    });
}

fn evaluate(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate");

    let knots = knots_1d(64, 23);
    let bump = build_bumps(&curve_spec(&knots), &BumpParams::default()).unwrap();
    bench_model(&mut group, "bump-64", &bump);

    let c0 = choose_c0(&knots, CurvatureStrategy::MeanCurvatureZero);
    let quartic = build_quartic_c2(&knots, c0).unwrap();
    bench_model(&mut group, "quartic-c2-64", &quartic);

    let trig = build_trig(&knots).unwrap();
    bench_model(&mut group, "trig-64", &trig);

    let grid = grid_2d(16, 29);
    let free = random_free_blocks(15 * 15, 31);
    let tensor = build_tensor_c0(&grid, 1.0, -1.0, &free).unwrap();
    bench_model(&mut group, "quartic2d-16x16", &tensor);

    let trig2 = build_trig_tensor(&grid).unwrap();
    bench_model(&mut group, "trig2d-16x16", &trig2);

    let sup = build_superposition(
        &scatter_spec(6, 37),
        TensorFamily::Trig,
        &default_angles(3),
        &Fill::NearestValue,
    )
    .unwrap();
    bench_model(&mut group, "superpose-m3", &sup);

    group.finish();
}

criterion_group!(benches, evaluate);
criterion_main!(benches);
