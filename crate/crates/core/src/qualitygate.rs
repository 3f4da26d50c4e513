//! Dual-bin classifier gate.
//!
//! A document is accepted when either bin's score reaches its threshold.
//! Scorers are pluggable; [`NgramScorerModel`] is a self-contained hashed
//! unigram+bigram logistic model so the gate runs without external model
//! files. BETR scoring (max cosine similarity to benchmark examples) and its
//! training-set construction live here as well.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use xxhash_rust::xxh3::{xxh3_64, xxh3_64_with_seed};

use crate::corpus::{count_words, split_words, Document, Verdict};
use crate::error::{CurateError, Result};

pub const STAGE_GATE: &str = "quality_gate";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinThresholds {
    pub tau_dclm: f64,
    pub tau_betr: f64,
}

impl Default for BinThresholds {
    fn default() -> Self {
        BinThresholds {
            tau_dclm: 0.025119,
            tau_betr: 0.76,
        }
    }
}

impl BinThresholds {
    pub fn new(tau_dclm: f64, tau_betr: f64) -> Self {
        BinThresholds { tau_dclm, tau_betr }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("tau_dclm", self.tau_dclm), ("tau_betr", self.tau_betr)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(CurateError::Config(format!("{name} must lie in [0, 1], got {t}")));
            }
        }
        Ok(())
    }
}

/// Maps a document to a positive-class probability in [0, 1].
pub trait QualityScorer: Send + Sync {
    fn score(&self, doc: &Document) -> Result<f64>;
}

impl<F> QualityScorer for F
where
    F: Fn(&Document) -> f64 + Send + Sync,
{
    fn score(&self, doc: &Document) -> Result<f64> {
        Ok(self(doc))
    }
}

/// Reads a precomputed score from a numeric field of the input record.
#[derive(Debug, Clone)]
pub struct FieldScorer {
    pub key: String,
}

impl QualityScorer for FieldScorer {
    fn score(&self, doc: &Document) -> Result<f64> {
        doc.field(&self.key)
            .and_then(Value::as_f64)
            .ok_or_else(|| CurateError::Scorer(format!("document {} has no numeric `{}`", doc.id, self.key)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bin {
    #[serde(rename = "DCLM")]
    Dclm,
    #[serde(rename = "BETR")]
    Betr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateDecision {
    pub s_dclm: f64,
    pub s_betr: f64,
    pub accepted: bool,
    pub bins: Vec<Bin>,
}

impl GateDecision {
    pub fn from_scores(s_dclm: f64, s_betr: f64, th: &BinThresholds) -> Self {
        let mut bins = Vec::with_capacity(2);
        if s_dclm >= th.tau_dclm {
            bins.push(Bin::Dclm);
        }
        if s_betr >= th.tau_betr {
            bins.push(Bin::Betr);
        }
        GateDecision {
            s_dclm,
            s_betr,
            accepted: !bins.is_empty(),
            bins,
        }
    }

    pub fn sidecar_json(&self, id: &str) -> Value {
        json!({
            "id": id,
            "s_dclm": self.s_dclm,
            "s_betr": self.s_betr,
            "accepted": self.accepted,
            "bins": self.bins,
        })
    }
}

fn checked(score: Result<f64>, which: &str) -> Result<f64> {
    let s = score?;
    if !(0.0..=1.0).contains(&s) {
        return Err(CurateError::Scorer(format!("{which} score {s} outside [0, 1]")));
    }
    Ok(s)
}

/// Scores both bins (always both) and applies the OR rule.
pub fn gate(
    doc: &Document,
    dclm: &dyn QualityScorer,
    betr: &dyn QualityScorer,
    th: &BinThresholds,
) -> Result<GateDecision> {
    let s_dclm = checked(dclm.score(doc), "DCLM")?;
    let s_betr = checked(betr.score(doc), "BETR")?;
    Ok(GateDecision::from_scores(s_dclm, s_betr, th))
}

pub fn gate_verdict(decision: &Result<GateDecision>) -> Verdict {
    match decision {
        Ok(d) if d.accepted => Verdict::Keep,
        Ok(_) => Verdict::reject(STAGE_GATE, "BelowThresholds"),
        Err(_) => Verdict::reject(STAGE_GATE, "ScorerError"),
    }
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(CurateError::Vector(format!(
            "dimension mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(CurateError::Vector("zero vector".into()));
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetrScore {
    pub id: String,
    pub max_cosine: f64,
}

/// Max cosine of each document against every benchmark example.
pub fn betr_score_corpus(docs: &[(String, Vec<f64>)], examples: &[Vec<f64>]) -> Result<Vec<BetrScore>> {
    docs.par_iter()
        .map(|(id, e)| {
            let mut best = f64::NEG_INFINITY;
            for x in examples {
                best = best.max(cosine(e, x)?);
            }
            Ok(BetrScore {
                id: id.clone(),
                max_cosine: best,
            })
        })
        .collect()
}

pub trait EmbeddingProvider: Send + Sync {
    fn embed(&self, text: &str) -> Result<Vec<f64>>;
}

/// Stand-in embedder: L2-normalized hashed bag of lowercase words.
#[derive(Debug, Clone, Copy)]
pub struct HashedBowEmbedder {
    pub dim: usize,
}

impl Default for HashedBowEmbedder {
    fn default() -> Self {
        HashedBowEmbedder { dim: 1024 }
    }
}

impl EmbeddingProvider for HashedBowEmbedder {
    fn embed(&self, text: &str) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.dim];
        for w in split_words(text) {
            let w = w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
            if !w.is_empty() {
                v[(xxh3_64(w.as_bytes()) % self.dim as u64) as usize] += 1.0;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(v)
    }
}

/// BETR bin scorer from raw embeddings: the max cosine against benchmark
/// examples, floored at 0. Documents without content score 0.
pub struct EmbeddingScorer<E> {
    pub provider: E,
    pub examples: Vec<Vec<f64>>,
}

impl<E: EmbeddingProvider> EmbeddingScorer<E> {
    pub fn new(provider: E, example_texts: &[String]) -> Result<Self> {
        let examples = example_texts
            .iter()
            .map(|t| provider.embed(t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|v| v.iter().any(|x| *x != 0.0))
            .collect();
        Ok(EmbeddingScorer { provider, examples })
    }
}

impl<E: EmbeddingProvider> QualityScorer for EmbeddingScorer<E> {
    fn score(&self, doc: &Document) -> Result<f64> {
        let e = self.provider.embed(&doc.text)?;
        if e.iter().all(|x| *x == 0.0) {
            return Ok(0.0);
        }
        let mut best: f64 = 0.0;
        for x in &self.examples {
            best = best.max(cosine(&e, x)?);
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub id: String,
    pub text: String,
    pub label: bool,
}

/// Positives are the top 10% of documents by score (ties by id ascending),
/// truncated to half the target; negatives are a seeded uniform sample of
/// the rest. When the corpus is too small everything available is used.
pub fn build_betr_training_set(
    scores: &[BetrScore],
    corpus: &[Document],
    target_size: usize,
    seed: u64,
) -> Result<Vec<LabeledExample>> {
    if !target_size.is_multiple_of(2) {
        return Err(CurateError::Config(format!(
            "target_size must be even, got {target_size}"
        )));
    }
    if scores.len() != corpus.len() {
        return Err(CurateError::Config(format!(
            "{} scores for {} documents",
            scores.len(),
            corpus.len()
        )));
    }
    if target_size == 0 {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .max_cosine
            .total_cmp(&scores[a].max_cosine)
            .then_with(|| scores[a].id.cmp(&scores[b].id))
    });
    let top = corpus.len().div_ceil(10);
    let half = target_size / 2;
    let (top_idx, rest_idx) = order.split_at(top);
    let n_pos = half.min(top_idx.len());
    let mut rest = rest_idx.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rest.shuffle(&mut rng);
    let n_neg = half.min(rest.len());
    if n_pos < half || n_neg < half {
        log::warn!(
            "corpus of {} documents too small for {target_size} examples; using {n_pos} positives and {n_neg} negatives",
            corpus.len()
        );
    }
    let pick = |i: usize, label: bool| LabeledExample {
        id: corpus[i].id.clone(),
        text: corpus[i].text.clone(),
        label,
    };
    let mut out: Vec<LabeledExample> = top_idx[..n_pos].iter().map(|&i| pick(i, true)).collect();
    out.extend(rest[..n_neg].iter().map(|&i| pick(i, false)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub min_count: usize,
    pub bigrams: bool,
    pub seed: u64,
    pub buckets: u32,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 5,
            min_count: 1,
            bigrams: true,
            seed: 42,
            buckets: 1 << 21,
        }
    }
}

const MODEL_MAGIC: &[u8; 8] = b"CURNGRAM";
const MODEL_VERSION: u32 = 1;

/// Logistic regression over raw hashed unigram and bigram counts.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramScorerModel {
    pub buckets: u32,
    pub seed: u64,
    pub bigrams: bool,
    pub bias: f32,
    pub weights: Vec<f32>,
}

type Features = Vec<(u32, f64)>;

impl NgramScorerModel {
    fn featurize(text: &str, buckets: u32, seed: u64, bigrams: bool) -> Features {
        let lower = text.to_lowercase();
        let words: Vec<&str> = split_words(&lower).collect();
        let mut counts: FxHashMap<u32, f64> = FxHashMap::default();
        let mut buf = Vec::new();
        for (i, w) in words.iter().enumerate() {
            *counts
                .entry((xxh3_64_with_seed(w.as_bytes(), seed) % buckets as u64) as u32)
                .or_default() += 1.0;
            if bigrams && i + 1 < words.len() {
                buf.clear();
                buf.extend_from_slice(w.as_bytes());
                buf.push(0x1f);
                buf.extend_from_slice(words[i + 1].as_bytes());
                *counts
                    .entry((xxh3_64_with_seed(&buf, seed) % buckets as u64) as u32)
                    .or_default() += 1.0;
            }
        }
        let mut feats: Features = counts.into_iter().collect();
        feats.sort_unstable_by_key(|(i, _)| *i);
        feats
    }

    fn response(&self, feats: &Features) -> f64 {
        self.bias as f64
            + feats
                .iter()
                .map(|(i, x)| self.weights[*i as usize] as f64 * x)
                .sum::<f64>()
    }

    pub fn score_text(&self, text: &str) -> f64 {
        sigmoid(self.response(&Self::featurize(text, self.buckets, self.seed, self.bigrams)))
    }

    pub fn train(examples: &[LabeledExample], cfg: &TrainConfig) -> Result<Self> {
        if cfg.buckets == 0 {
            return Err(CurateError::Training("bucket count must be positive".into()));
        }
        let pos = examples.iter().filter(|e| e.label).count();
        if pos == 0 || pos == examples.len() {
            return Err(CurateError::Training("training data must contain both classes".into()));
        }
        let mut data: Vec<(Features, f64)> = examples
            .iter()
            .map(|e| {
                let f = Self::featurize(&e.text, cfg.buckets, cfg.seed, cfg.bigrams);
                (f, if e.label { 1.0 } else { 0.0 })
            })
            .collect();
        if cfg.min_count > 1 {
            let mut freq: FxHashMap<u32, usize> = FxHashMap::default();
            for (f, _) in &data {
                for (i, _) in f {
                    *freq.entry(*i).or_default() += 1;
                }
            }
            for (f, _) in &mut data {
                f.retain(|(i, _)| freq[i] >= cfg.min_count);
            }
        }
        let mut model = NgramScorerModel {
            buckets: cfg.buckets,
            seed: cfg.seed,
            bigrams: cfg.bigrams,
            bias: 0.0,
            weights: vec![0.0; cfg.buckets as usize],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut order: Vec<usize> = (0..data.len()).collect();
        for _ in 0..cfg.epochs {
            order.shuffle(&mut rng);
            for &j in &order {
                let (f, y) = &data[j];
                let g = cfg.learning_rate * (y - sigmoid(model.response(f)));
                model.bias += g as f32;
                for (i, x) in f {
                    model.weights[*i as usize] += (g * x) as f32;
                }
            }
        }
        Ok(model)
    }

    /// Header (magic, version, buckets, seed, flags, bias) followed by the
    /// non-zero weights as (index, value) pairs.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MODEL_MAGIC)?;
        w.write_all(&MODEL_VERSION.to_le_bytes())?;
        w.write_all(&self.buckets.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&[self.bigrams as u8])?;
        w.write_all(&self.bias.to_le_bytes())?;
        let nz: Vec<(u32, f32)> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != 0.0)
            .map(|(i, x)| (i as u32, *x))
            .collect();
        w.write_all(&(nz.len() as u64).to_le_bytes())?;
        for (i, x) in nz {
            w.write_all(&i.to_le_bytes())?;
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_to(&mut v).expect("writing to a Vec cannot fail");
        v
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let bad = |m: &str| CurateError::Model(m.to_string());
        let mut buf = Vec::new();
        r.read_to_end(&mut buf).map_err(|e| CurateError::Model(e.to_string()))?;
        let mut cur = &buf[..];
        let mut take = |n: usize| -> Result<&[u8]> {
            if cur.len() < n {
                return Err(bad("truncated model file"));
            }
            let (a, b) = cur.split_at(n);
            cur = b;
            Ok(a)
        };
        if take(8)? != MODEL_MAGIC {
            return Err(bad("not a scorer model file"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != MODEL_VERSION {
            return Err(bad(&format!("unsupported model version {version}")));
        }
        let buckets = u32::from_le_bytes(take(4)?.try_into().unwrap());
        let seed = u64::from_le_bytes(take(8)?.try_into().unwrap());
        let bigrams = take(1)?[0] != 0;
        let bias = f32::from_le_bytes(take(4)?.try_into().unwrap());
        let nnz = u64::from_le_bytes(take(8)?.try_into().unwrap());
        if buckets == 0 || nnz > buckets as u64 {
            return Err(bad("corrupt model header"));
        }
        let mut weights = vec![0.0f32; buckets as usize];
        for _ in 0..nnz {
            let i = u32::from_le_bytes(take(4)?.try_into().unwrap());
            let x = f32::from_le_bytes(take(4)?.try_into().unwrap());
            *weights
                .get_mut(i as usize)
                .ok_or_else(|| bad("weight index out of range"))? = x;
        }
        if !cur.is_empty() {
            return Err(bad("trailing bytes after model"));
        }
        Ok(NgramScorerModel {
            buckets,
            seed,
            bigrams,
            bias,
            weights,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| CurateError::resource(path, e))?;
        Self::read_from(std::io::BufReader::new(f))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| CurateError::resource(path, e))
    }
}

impl QualityScorer for NgramScorerModel {
    fn score(&self, doc: &Document) -> Result<f64> {
        Ok(self.score_text(&doc.text))
    }
}

pub fn train_ngram_scorer(examples: &[LabeledExample], cfg: &TrainConfig) -> Result<NgramScorerModel> {
    NgramScorerModel::train(examples, cfg)
}

pub fn score_with_model(model: &NgramScorerModel, doc: &Document) -> f64 {
    model.score_text(&doc.text)
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One row of a threshold sweep: retention at a threshold pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau_dclm: f64,
    pub tau_betr: f64,
    pub docs_total: u64,
    pub docs_accepted: u64,
    pub tokens_total: u64,
    pub tokens_accepted: u64,
    pub retention_pct: f64,
}

/// Scored document for sweeps: both bin scores and a token count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc {
    pub s_dclm: f64,
    pub s_betr: f64,
    pub tokens: u64,
}

impl ScoredDoc {
    pub fn new(doc: &Document, decision: &GateDecision) -> Self {
        ScoredDoc {
            s_dclm: decision.s_dclm,
            s_betr: decision.s_betr,
            tokens: count_words(&doc.text) as u64,
        }
    }
}

/// Evaluates every threshold pair in one pass over the scores.
pub fn sweep(scored: &[ScoredDoc], pairs: &[BinThresholds]) -> Vec<SweepRow> {
    let zero = || vec![(0u64, 0u64); pairs.len()];
    let acc = scored
        .par_iter()
        .fold(zero, |mut acc, d| {
            for (slot, th) in acc.iter_mut().zip(pairs) {
                if d.s_dclm >= th.tau_dclm || d.s_betr >= th.tau_betr {
                    slot.0 += 1;
                    slot.1 += d.tokens;
                }
            }
            acc
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.0 += y.0;
                x.1 += y.1;
            }
            a
        });
    let tokens_total: u64 = scored.iter().map(|d| d.tokens).sum();
    pairs
        .iter()
        .zip(acc)
        .map(|(th, (docs, tokens))| SweepRow {
            tau_dclm: th.tau_dclm,
            tau_betr: th.tau_betr,
            docs_total: scored.len() as u64,
            docs_accepted: docs,
            tokens_total,
            tokens_accepted: tokens,
            retention_pct: if tokens_total == 0 {
                0.0
            } else {
                100.0 * tokens as f64 / tokens_total as f64
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateConfig {
    pub tau_dclm: f64,
    pub tau_betr: f64,
    pub scorer_dclm_path: Option<PathBuf>,
    pub scorer_betr_path: Option<PathBuf>,
    /// Record field holding a precomputed score, used when no model path
    /// is given for the bin.
    pub dclm_score_field: Option<String>,
    pub betr_score_field: Option<String>,
    pub sweep_pairs: Vec<[f64; 2]>,
    pub scores_sidecar: bool,
}

impl Default for GateConfig {
    fn default() -> Self {
        let th = BinThresholds::default();
        GateConfig {
            tau_dclm: th.tau_dclm,
            tau_betr: th.tau_betr,
            scorer_dclm_path: None,
            scorer_betr_path: None,
            dclm_score_field: None,
            betr_score_field: None,
            sweep_pairs: Vec::new(),
            scores_sidecar: false,
        }
    }
}

impl GateConfig {
    pub fn thresholds(&self) -> BinThresholds {
        BinThresholds::new(self.tau_dclm, self.tau_betr)
    }

    pub fn sweep_thresholds(&self) -> Vec<BinThresholds> {
        self.sweep_pairs
            .iter()
            .map(|[a, b]| BinThresholds::new(*a, *b))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.thresholds().validate()?;
        self.sweep_thresholds().iter().try_for_each(BinThresholds::validate)
    }
}

pub type BoxedScorer = Box<dyn QualityScorer>;

/// Loads both bin scorers. Missing model files are appended to `missing`;
/// a bin with neither a model nor a score field is a configuration error.
pub fn load_scorers(cfg: &GateConfig, missing: &mut Vec<String>) -> Result<Option<(BoxedScorer, BoxedScorer)>> {
    let mut one = |path: &Option<PathBuf>, field: &Option<String>, bin: &str| -> Result<Option<BoxedScorer>> {
        match (path, field) {
            (Some(p), _) => {
                if !p.exists() {
                    missing.push(p.display().to_string());
                    return Ok(None);
                }
                Ok(Some(Box::new(NgramScorerModel::load(p)?)))
            }
            (None, Some(key)) => Ok(Some(Box::new(FieldScorer { key: key.clone() }))),
            (None, None) => Err(CurateError::Config(format!(
                "quality gate enabled but no scorer configured for the {bin} bin"
            ))),
        }
    };
    let d = one(&cfg.scorer_dclm_path, &cfg.dclm_score_field, "DCLM")?;
    let b = one(&cfg.scorer_betr_path, &cfg.betr_score_field, "BETR")?;
    Ok(d.zip(b))
}
