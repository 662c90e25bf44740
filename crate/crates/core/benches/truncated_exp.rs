use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use piexp::corpus::random_soluble;
use piexp::par::Strategy;
use piexp::{series, Params, DEFAULT_MARGIN};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn recurrence(c: &mut Criterion) {
    let mut group = c.benchmark_group("truncated_exp");
    group.sample_size(10);
    for dd in [8usize, 16, 32, 64] {
        let params = Params::new(2, dd, DEFAULT_MARGIN).unwrap();
        let poly = random_soluble(&mut ChaCha8Rng::seed_from_u64(dd as u64), &params).unwrap();
        let x = poly.to_input(&params).unwrap();
        let ptilde = series::tilde_transform(&x, &params).unwrap();
        let prepared = series::prepare(&ptilde, &params, series::PrepareMode::Minimal).unwrap();
        let l = series::derivative(&prepared.poly, &params).unwrap();
        for (name, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, dd), &l, |b, l| {
                b.iter(|| series::truncated_exp(l, &params, strategy).unwrap())
            });
        }
    }
    group.finish();
}

fn components(c: &mut Criterion) {
    let params = Params::new(3, 40, DEFAULT_MARGIN).unwrap();
    let poly = random_soluble(&mut ChaCha8Rng::seed_from_u64(40), &params).unwrap();
    let x = poly.to_input(&params).unwrap();
    let mut group = c.benchmark_group("analyze");
    group.sample_size(10);
    for (name, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
        group.bench_function(name, |b| {
            b.iter(|| piexp::invariants::analyze(&x, &params, strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, recurrence, components);
criterion_main!(benches);
