//! Violation scans, parallel route against the sequential fallback, on a
//! clean pipeline coloring and on a noisy partial one.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rf_core::coloring::{find_violations, find_violations_seq, ColorId, Edge, EdgeColoring};
use rf_core::pipeline::{run_pipeline, PipelineConfig};

/// Partial coloring with a vertex-sized palette: dense enough to make the
/// scan look at real repetition patterns, sparse enough that violations
/// stay rare and the result vector does not dominate the timing.
fn noisy_coloring(n: u32) -> EdgeColoring {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state >> 33
    };
    let mut col = EdgeColoring::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if next() % 10 < 6 {
                col.assign(Edge::new(u, v), ColorId((next() % u64::from(n)) as u32)).unwrap();
            }
        }
    }
    col
}

fn violation_scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("violation_scan");
    for n in [28u32, 34] {
        let clean = run_pipeline(&PipelineConfig::new(n, 0)).unwrap().coloring;
        let noisy = noisy_coloring(n);
        for (label, coloring) in [("clean", &clean), ("noisy", &noisy)] {
            group.bench_with_input(
                BenchmarkId::new(format!("parallel_{label}"), n),
                coloring,
                |b, col| b.iter(|| black_box(find_violations(col, 5, 8, None))),
            );
            group.bench_with_input(
                BenchmarkId::new(format!("sequential_{label}"), n),
                coloring,
                |b, col| b.iter(|| black_box(find_violations_seq(col, 5, 8))),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, violation_scans);
criterion_main!(benches);
