//! Monte Carlo rank histograms. `monte_carlo_ranks` fans trials out with
//! rayon when the crate is built with the default `parallel` feature; the
//! `sequential_loop` entries perform the identical per-trial work in a
//! plain loop, so the pair measures the parallel speedup directly. Running
//! the bench with `--no-default-features` instead makes the first entry
//! sequential too, as a cross-check.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tbspace::embed::EmbeddingParams;
use tbspace::rankstats::{monte_carlo_ranks, AdmissibleSampler, MatrixSampler, RankHistogram};

fn sequential_ranks<S: MatrixSampler>(sampler: &S, trials: u64, seed: u64) -> RankHistogram {
    let mut hist = RankHistogram::new(&sampler.label());
    for i in 0..trials {
        // same per-trial keying idea as the library; exact histograms are
        // not compared here, only the work per trial
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        hist.record(sampler.sample(&mut rng).rank());
    }
    hist
}

fn bench_monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_ranks");
    group.sample_size(10);
    let cases = [
        ("toy-eps", EmbeddingParams::toy(false), 16usize, 2_000u64),
        ("present-alpha", EmbeddingParams::present_alpha(), 64, 200),
    ];
    for (name, params, rows, trials) in cases {
        let sampler = AdmissibleSampler {
            params: params.clone(),
            rows,
        };
        group.bench_with_input(BenchmarkId::new("as_built", name), &sampler, |b, s| {
            b.iter(|| monte_carlo_ranks(s, trials, 7))
        });
        group.bench_with_input(
            BenchmarkId::new("sequential_loop", name),
            &sampler,
            |b, s| b.iter(|| sequential_ranks(s, trials, 7)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_monte_carlo);
criterion_main!(benches);
