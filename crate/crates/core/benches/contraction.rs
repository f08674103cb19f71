use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wellrounded::complex::soule::Cube;
use wellrounded::contraction::geom::Pt;
use wellrounded::contraction::{trace_h3, TraceContext};
use wellrounded::par::{par_map, seq_map};
use wellrounded::rational::rat;
use wellrounded::suites::sample_point;

fn batch(ctx: &TraceContext) -> Vec<(Cube, Pt)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    ctx.record
        .tops_with(|d| d <= 2)
        .iter()
        .flat_map(|c| {
            let cube = Cube::from_cell(c).expect("cube");
            (0..4).map(|_| (cube.clone(), sample_point(&mut rng))).collect::<Vec<_>>()
        })
        .collect()
}

fn traces(c: &mut Criterion) {
    let ctx = TraceContext::new(2, rat(1, 8)).expect("fixpoint");
    let jobs = batch(&ctx);
    let mut g = c.benchmark_group(format!("trace {} points", jobs.len()));
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| par_map(&jobs, |(cube, x)| trace_h3(&ctx, cube, x).map(|t| t.pieces.len())))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| seq_map(&jobs, |(cube, x)| trace_h3(&ctx, cube, x).map(|t| t.pieces.len())))
    });
    g.finish();
}

criterion_group!(benches, traces);
criterion_main!(benches);
