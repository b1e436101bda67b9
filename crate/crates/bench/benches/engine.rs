use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equilog::linalg::Arithmetic;
use equilog::presentations::{build_ring, QuotientEngine, RingId};
use equilog::symcore::character_table;
use equilog_bench::all_irreducibles;

fn characters(c: &mut Criterion) {
    let mut group = c.benchmark_group("graded_character");
    group.sample_size(10);
    for (ring, n) in [(RingId::A, 5), (RingId::D, 5), (RingId::M, 5), (RingId::B, 6)] {
        for arith in [Arithmetic::Rational, Arithmetic::Multimodular] {
            let id = BenchmarkId::new(format!("{ring}_{n}"), format!("{arith:?}"));
            group.bench_with_input(id, &(ring, n), |b, &(ring, n)| {
                b.iter(|| {
                    let mut engine = QuotientEngine::new(build_ring(ring, n, None).unwrap(), arith).unwrap();
                    engine.graded_character(n).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("total_dimension");
    group.sample_size(10);
    for n in [5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut engine =
                    QuotientEngine::new(build_ring(RingId::D, n, None).unwrap(), Arithmetic::Multimodular).unwrap();
                engine.total_dimension(n).unwrap()
            })
        });
    }
    group.finish();
}

fn kronecker(c: &mut Criterion) {
    let mut group = c.benchmark_group("kronecker");
    for n in [6, 8, 10] {
        character_table(n);
        let v = all_irreducibles(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &v, |b, v| b.iter(|| v.kronecker(v).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, characters, elimination, kronecker);
criterion_main!(benches);
