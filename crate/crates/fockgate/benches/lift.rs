//! Compare the two basis-lifting algorithms, and the rayon pool against a
//! single-thread pool. For the truly sequential code path (no rayon at all)
//! run `cargo bench --no-default-features`; the benchmark IDs stay the same
//! so criterion can diff the baselines.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fockgate::elements::TransferMatrix;
use fockgate::fock::FockBasis;
use fockgate::lift::{lift, lift_permanent};

fn bench_lift(c: &mut Criterion) {
    let mut group = c.benchmark_group("lift");
    for &(modes, cutoff) in &[(3usize, 3u32), (4, 4), (5, 4), (6, 4)] {
        let mut rng = ChaCha8Rng::seed_from_u64(2718);
        let transfer = TransferMatrix::random_unitary(modes, &mut rng);
        let basis = Arc::new(FockBasis::new(modes, cutoff).unwrap());
        let id = format!("M{modes}_N{cutoff}_dim{}", basis.len());

        group.bench_with_input(
            BenchmarkId::new("multinomial", &id),
            &(&transfer, &basis),
            |b, (t, basis)| b.iter(|| lift(black_box(t), basis).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("permanent", &id),
            &(&transfer, &basis),
            |b, (t, basis)| b.iter(|| lift_permanent(black_box(t), basis).unwrap()),
        );

        // Same code path pinned to one thread, for an in-run scaling contrast.
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            group.bench_with_input(
                BenchmarkId::new("multinomial-1thread", &id),
                &(&transfer, &basis),
                |b, (t, basis)| b.iter(|| pool.install(|| lift(black_box(t), basis).unwrap())),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_lift);
criterion_main!(benches);
