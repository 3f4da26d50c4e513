use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use curate_bench::{clean_corpus, text_bytes, web_corpus};
use curate_core::decontam::{screen_text, ReferenceSet};
use curate_core::qualitygate::{LabeledExample, NgramScorerModel, TrainConfig};
use curate_core::synth::{SynthConfig, SynthCorpus};
use curate_core::{Pipeline, PipelineConfig, Preset};

fn presets(c: &mut Criterion) {
    let docs = web_corpus(4_000_000);
    let mut g = c.benchmark_group("pipeline");
    g.throughput(Throughput::Bytes(text_bytes(&docs)));
    g.sample_size(10);
    for preset in Preset::ALL {
        let mut cfg = PipelineConfig::for_preset(preset);
        cfg.deterministic = true;
        let pipeline = Pipeline::from_config(cfg).unwrap();
        g.bench_function(preset.name(), |b| {
            b.iter_batched(
                || docs.clone(),
                |ds| pipeline.run_documents(ds).unwrap().0.retained_docs,
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

fn decontam(c: &mut Criterion) {
    let docs = web_corpus(4_000_000);
    let mut refs = SynthCorpus::new(SynthConfig::clean(99));
    let mut refset = ReferenceSet::new(8);
    for i in 0..10_000 {
        refset.add("bench", &i.to_string(), &refs.paragraph());
    }
    let mut g = c.benchmark_group("decontam");
    g.throughput(Throughput::Bytes(text_bytes(&docs)));
    g.sample_size(10);
    g.bench_function("screen", |b| {
        b.iter(|| {
            docs.iter()
                .filter(|d| screen_text(&d.text, &refset, 1).is_contaminated())
                .count()
        })
    });
    g.finish();
}

fn scorer(c: &mut Criterion) {
    let train: Vec<LabeledExample> = clean_corpus(1_000_000)
        .into_iter()
        .zip(web_corpus(1_000_000))
        .flat_map(|(a, b)| {
            [
                LabeledExample {
                    id: a.id,
                    text: a.text,
                    label: true,
                },
                LabeledExample {
                    id: format!("w{}", b.id),
                    text: b.text,
                    label: false,
                },
            ]
        })
        .collect();
    let mut g = c.benchmark_group("scorer");
    g.sample_size(10);
    let cfg = TrainConfig {
        epochs: 1,
        ..Default::default()
    };
    g.throughput(Throughput::Bytes(train.iter().map(|e| e.text.len() as u64).sum()));
    g.bench_function("train_epoch", |b| {
        b.iter(|| NgramScorerModel::train(&train, &cfg).unwrap())
    });
    let model = NgramScorerModel::train(&train, &TrainConfig::default()).unwrap();
    let docs = web_corpus(4_000_000);
    g.throughput(Throughput::Bytes(text_bytes(&docs)));
    g.bench_function("score", |b| {
        b.iter(|| docs.iter().map(|d| model.score_text(&d.text)).sum::<f64>())
    });
    g.finish();
}

criterion_group!(benches, presets, decontam, scorer);
criterion_main!(benches);
