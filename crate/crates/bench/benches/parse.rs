use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use idlp::{oracle_recognize, parse, AgendaOrder, Bounds, ParseOptions};
use idlp_bench::cases;

fn chart_parser(c: &mut Criterion) {
    let mut group = c.benchmark_group("parse");
    let lifo = ParseOptions {
        agenda: AgendaOrder::Lifo,
        ..ParseOptions::default()
    };
    for case in cases() {
        for s in &case.sentences {
            let id = format!("{}/{}", case.name, s.join("-"));
            group.bench_with_input(BenchmarkId::new("fifo", &id), s, |b, s| {
                b.iter(|| parse(&case.grammar, s, &ParseOptions::default()).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("lifo", &id), s, |b, s| {
                b.iter(|| parse(&case.grammar, s, &lifo).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    for case in cases() {
        for s in &case.sentences {
            let id = format!("{}/{}", case.name, s.join("-"));
            group.bench_with_input(BenchmarkId::from_parameter(id), s, |b, s| {
                b.iter(|| oracle_recognize(&case.grammar, s, &Bounds::default()).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, chart_parser, oracle);
criterion_main!(benches);
