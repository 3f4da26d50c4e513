use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use curate_bench::{clean_corpus, text_bytes};
use curate_core::dedup::{count_distinct_shingles, run_dedup, BloomFilter, DedupConfig, ShingleConfig};

fn bloom(c: &mut Criterion) {
    let n = 1_000_000u64;
    let mut g = c.benchmark_group("bloom");
    g.throughput(Throughput::Elements(n));
    g.sample_size(10);
    g.bench_function("insert", |b| {
        b.iter_batched(
            || BloomFilter::new(1e-3, n).unwrap(),
            |f| {
                for i in 0..n {
                    f.insert(&i.to_le_bytes());
                }
                f
            },
            BatchSize::LargeInput,
        )
    });
    let filled = BloomFilter::new(1e-3, n).unwrap();
    for i in 0..n {
        filled.insert(&i.to_le_bytes());
    }
    g.bench_function("contains", |b| {
        b.iter(|| (n / 2..n + n / 2).filter(|i| filled.contains(&i.to_le_bytes())).count())
    });
    g.finish();
}

fn paragraphs(c: &mut Criterion) {
    let docs = clean_corpus(4_000_000);
    let shingles = count_distinct_shingles(&docs, &ShingleConfig::default());
    let mut g = c.benchmark_group("dedup");
    g.throughput(Throughput::Bytes(text_bytes(&docs)));
    g.sample_size(10);
    g.bench_function("count_shingles", |b| {
        b.iter(|| count_distinct_shingles(&docs, &ShingleConfig::default()))
    });
    for deterministic in [true, false] {
        let cfg = DedupConfig {
            expected_ngrams: Some(shingles),
            deterministic,
            ..Default::default()
        };
        let name = if deterministic {
            "run_sequential"
        } else {
            "run_parallel"
        };
        g.bench_function(name, |b| {
            b.iter_batched(
                || docs.clone(),
                |mut ds| run_dedup(&mut ds, &cfg).unwrap().stats.paragraphs_flagged,
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, bloom, paragraphs);
criterion_main!(benches);
