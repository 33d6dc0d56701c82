use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilharm::exec::Exec;
use nilharm::flexibility::{value_sets_in, Budget, Cone};
use nilharm::liespec::LieAlgebraSpec;

fn value_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("value_sets");
    group.sample_size(10);
    let budget = Budget::new(2, 3, 500);
    for structure in ["(0,0,12,13,23,14-25)", "(0,0,0,12,14,15+23+24)", "(0,0,0,0,0,12)"] {
        let cone = Cone::new(&LieAlgebraSpec::parse(structure).unwrap()).unwrap();
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, structure), &cone, |b, cone| {
                b.iter(|| value_sets_in(cone, budget, 0, exec));
            });
        }
    }
    group.finish();
}

criterion_group!(benches, value_sets);
criterion_main!(benches);
