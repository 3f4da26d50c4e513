//! Bloom-filter fuzzy deduplication over paragraph shingles.
//!
//! One filter is shared by the whole input. A paragraph whose shingles are
//! mostly present already is excised; only novel paragraphs of surviving
//! documents are inserted, so removed content never enters the seen-set.
//! When enough of a document's paragraphs are duplicates the whole document
//! is dropped instead.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_128;

use crate::corpus::{count_words, split_words, Document, Verdict};
use crate::error::{CurateError, Result};

pub const STAGE_DEDUP: &str = "dedup";

/// Optimal bit count and hash count for false-positive rate `p` at `n`
/// expected elements.
pub fn size_filter(p: f64, n: u64) -> Result<(u64, u32)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(CurateError::BloomParams(format!("fp rate must lie in (0, 1), got {p}")));
    }
    if n == 0 {
        return Err(CurateError::BloomParams(
            "expected element count must be at least 1".into(),
        ));
    }
    let ln2 = std::f64::consts::LN_2;
    let m = (-(n as f64) * p.ln() / (ln2 * ln2)).ceil();
    if !m.is_finite() || m > u64::MAX as f64 / 2.0 {
        return Err(CurateError::BloomParams(format!(
            "filter of {m} bits is not representable"
        )));
    }
    let k = ((-p.ln() / ln2).round() as u32).max(1);
    Ok((m as u64, k))
}

pub fn bits_to_bytes(m: u64) -> u64 {
    m.div_ceil(64) * 8
}

/// Bit array with `k` indexes per element derived by double hashing a
/// 128-bit digest. Safe for concurrent inserts and probes.
#[derive(Debug)]
pub struct BloomFilter {
    words: Vec<AtomicU64>,
    m: u64,
    k: u32,
    fp_rate: f64,
    expected: u64,
    inserted: AtomicU64,
    set_bits: AtomicU64,
}

/// Digest halves used for double hashing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShingleHash {
    h1: u64,
    h2: u64,
}

impl ShingleHash {
    pub fn of(bytes: &[u8]) -> Self {
        let h = xxh3_128(bytes);
        ShingleHash {
            h1: h as u64,
            h2: ((h >> 64) as u64) | 1,
        }
    }
}

impl BloomFilter {
    pub fn new(p: f64, n: u64) -> Result<Self> {
        Self::with_cap(p, n, None)
    }

    /// Sizes the filter, refusing when the bit array would exceed `cap`
    /// bytes.
    pub fn with_cap(p: f64, n: u64, cap: Option<u64>) -> Result<Self> {
        let (m, k) = size_filter(p, n)?;
        let needed = bits_to_bytes(m);
        if let Some(cap) = cap {
            if needed > cap {
                return Err(CurateError::MemoryCap { needed, cap });
            }
        }
        let words = (0..m.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        log::debug!("bloom filter: m={m} bits, k={k}, {needed} bytes");
        Ok(BloomFilter {
            words,
            m,
            k,
            fp_rate: p,
            expected: n,
            inserted: AtomicU64::new(0),
            set_bits: AtomicU64::new(0),
        })
    }

    pub fn m_bits(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn fp_rate(&self) -> f64 {
        self.fp_rate
    }

    pub fn expected(&self) -> u64 {
        self.expected
    }

    /// Number of insert calls made.
    pub fn inserted(&self) -> u64 {
        self.inserted.load(Ordering::Relaxed)
    }

    pub fn set_bits(&self) -> u64 {
        self.set_bits.load(Ordering::Relaxed)
    }

    pub fn sparsity(&self) -> f64 {
        self.set_bits() as f64 / self.m as f64
    }

    pub fn size_bytes(&self) -> u64 {
        bits_to_bytes(self.m)
    }

    /// Sparsity predicted after `n` distinct insertions.
    pub fn expected_sparsity(&self, n: u64) -> f64 {
        1.0 - (-(self.k as f64) * n as f64 / self.m as f64).exp()
    }

    fn indexes(&self, h: ShingleHash) -> impl Iterator<Item = u64> + '_ {
        (0..self.k as u64).map(move |i| h.h1.wrapping_add(i.wrapping_mul(h.h2)) % self.m)
    }

    pub fn contains_hash(&self, h: ShingleHash) -> bool {
        self.indexes(h).all(|bit| {
            let w = self.words[(bit / 64) as usize].load(Ordering::Relaxed);
            w & (1u64 << (bit % 64)) != 0
        })
    }

    pub fn insert_hash(&self, h: ShingleHash) {
        self.inserted.fetch_add(1, Ordering::Relaxed);
        for bit in self.indexes(h) {
            let mask = 1u64 << (bit % 64);
            let prev = self.words[(bit / 64) as usize].fetch_or(mask, Ordering::Relaxed);
            if prev & mask == 0 {
                self.set_bits.fetch_add(1, Ordering::Relaxed);
            }
        }
    }

    pub fn contains(&self, item: &[u8]) -> bool {
        self.contains_hash(ShingleHash::of(item))
    }

    pub fn insert(&self, item: &[u8]) {
        self.insert_hash(ShingleHash::of(item))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DedupMode {
    /// Paragraph excision with document-level fallback.
    #[default]
    #[serde(rename = "oldboth")]
    OldBoth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShingleConfig {
    pub ngram_size: usize,
    pub paragraph_separator: String,
    pub dup_shingle_threshold: f64,
    pub doc_fallback_para_threshold: f64,
    pub mode: DedupMode,
}

impl Default for ShingleConfig {
    fn default() -> Self {
        ShingleConfig {
            ngram_size: 13,
            paragraph_separator: "\n".into(),
            dup_shingle_threshold: 0.80,
            doc_fallback_para_threshold: 0.80,
            mode: DedupMode::OldBoth,
        }
    }
}

impl ShingleConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t <= 1.0;
        if self.ngram_size == 0 {
            return Err(CurateError::Config("ngram_size must be at least 1".into()));
        }
        if !ok(self.dup_shingle_threshold) || !ok(self.doc_fallback_para_threshold) {
            return Err(CurateError::Config("dedup thresholds must lie in (0, 1]".into()));
        }
        if self.paragraph_separator.is_empty() {
            return Err(CurateError::Config("paragraph_separator must not be empty".into()));
        }
        Ok(())
    }
}

/// Word-level shingles of the normalized paragraph (lowercased, whitespace
/// collapsed). A paragraph shorter than the window is one shingle.
pub fn shingle(paragraph: &str, cfg: &ShingleConfig) -> Vec<String> {
    let lower = paragraph.to_lowercase();
    let words: Vec<&str> = split_words(&lower).collect();
    if words.is_empty() {
        return Vec::new();
    }
    if words.len() <= cfg.ngram_size {
        return vec![words.join(" ")];
    }
    words.windows(cfg.ngram_size).map(|w| w.join(" ")).collect()
}

fn shingle_hashes(paragraph: &str, cfg: &ShingleConfig, buf: &mut String) -> Vec<ShingleHash> {
    let lower = paragraph.to_lowercase();
    let words: Vec<&str> = split_words(&lower).collect();
    if words.is_empty() {
        return Vec::new();
    }
    let n = cfg.ngram_size.min(words.len());
    words
        .windows(n)
        .map(|w| {
            buf.clear();
            for (i, word) in w.iter().enumerate() {
                if i > 0 {
                    buf.push(' ');
                }
                buf.push_str(word);
            }
            ShingleHash::of(buf.as_bytes())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DedupOutcome {
    Kept { paragraphs_flagged: usize },
    DroppedDocument { paragraphs_flagged: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocDedupCounts {
    pub paragraphs: u64,
    pub paragraphs_flagged: u64,
    pub shingles_inserted: u64,
}

/// Deduplicates one document against the filter, excising duplicate
/// paragraphs in place. Blank paragraphs are kept and not evaluated.
pub fn dedup_document(doc: &mut Document, filter: &BloomFilter, cfg: &ShingleConfig) -> (DedupOutcome, DocDedupCounts) {
    let sep = cfg.paragraph_separator.as_str();
    let mut buf = String::new();
    let mut pending: FxHashSet<ShingleHash> = FxHashSet::default();
    let mut novel: Vec<ShingleHash> = Vec::new();
    let mut keep_mask = Vec::new();
    let mut counts = DocDedupCounts::default();
    for para in doc.text.split(sep) {
        let hashes = shingle_hashes(para, cfg, &mut buf);
        if hashes.is_empty() {
            keep_mask.push(true);
            continue;
        }
        counts.paragraphs += 1;
        let present = hashes
            .iter()
            .filter(|h| pending.contains(h) || filter.contains_hash(**h))
            .count();
        let duplicate = present as f64 / hashes.len() as f64 > cfg.dup_shingle_threshold;
        if duplicate {
            counts.paragraphs_flagged += 1;
        } else {
            for h in hashes {
                if pending.insert(h) {
                    novel.push(h);
                }
            }
        }
        keep_mask.push(!duplicate);
    }
    let flagged = counts.paragraphs_flagged as usize;
    if counts.paragraphs > 0
        && counts.paragraphs_flagged as f64 / counts.paragraphs as f64 >= cfg.doc_fallback_para_threshold
    {
        return (
            DedupOutcome::DroppedDocument {
                paragraphs_flagged: flagged,
            },
            counts,
        );
    }
    for h in &novel {
        filter.insert_hash(*h);
    }
    counts.shingles_inserted = novel.len() as u64;
    if flagged > 0 {
        let kept: Vec<&str> = doc
            .text
            .split(sep)
            .zip(&keep_mask)
            .filter_map(|(p, &k)| k.then_some(p))
            .collect();
        doc.text = kept.join(sep);
    }
    (
        DedupOutcome::Kept {
            paragraphs_flagged: flagged,
        },
        counts,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DedupConfig {
    pub fp_rate: f64,
    /// Expected distinct shingles; when unset the input is counted exactly
    /// before the filter is sized.
    pub expected_ngrams: Option<u64>,
    pub memory_cap_bytes: Option<u64>,
    pub deterministic: bool,
    #[serde(flatten)]
    pub shingle: ShingleConfig,
}

impl Default for DedupConfig {
    fn default() -> Self {
        DedupConfig {
            fp_rate: 1e-3,
            expected_ngrams: None,
            memory_cap_bytes: Some(8 << 30),
            deterministic: true,
            shingle: ShingleConfig::default(),
        }
    }
}

impl DedupConfig {
    pub fn validate(&self) -> Result<()> {
        self.shingle.validate()?;
        size_filter(self.fp_rate, self.expected_ngrams.unwrap_or(1))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DedupStats {
    pub m_bits: u64,
    pub k: u32,
    pub fp_rate: f64,
    pub expected_ngrams: u64,
    pub filter_bytes: u64,
    pub inserted: u64,
    pub set_bits: u64,
    pub sparsity: f64,
    pub documents_in: u64,
    pub documents_out: u64,
    pub documents_dropped: u64,
    pub documents_pruned: u64,
    pub paragraphs_in: u64,
    pub paragraphs_flagged: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    pub words_in: u64,
    pub words_out: u64,
}

impl DedupStats {
    pub fn byte_retention(&self) -> f64 {
        ratio(self.bytes_out, self.bytes_in)
    }

    pub fn word_retention(&self) -> f64 {
        ratio(self.words_out, self.words_in)
    }

    pub fn doc_retention(&self) -> f64 {
        ratio(self.documents_out, self.documents_in)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

/// Exact running count of distinct shingles, for sizing a filter from a
/// stream of documents.
#[derive(Debug, Default)]
pub struct ShingleCounter {
    seen: FxHashSet<ShingleHash>,
    buf: String,
}

impl ShingleCounter {
    pub fn add(&mut self, text: &str, cfg: &ShingleConfig) {
        for p in text.split(cfg.paragraph_separator.as_str()) {
            let hashes = shingle_hashes(p, cfg, &mut self.buf);
            self.seen.extend(hashes);
        }
    }

    pub fn count(&self) -> u64 {
        self.seen.len() as u64
    }
}

/// Exact count of distinct shingles in a corpus.
pub fn count_distinct_shingles(docs: &[Document], cfg: &ShingleConfig) -> u64 {
    let mut c = ShingleCounter::default();
    for d in docs {
        c.add(&d.text, cfg);
    }
    c.count()
}

pub struct DedupRun {
    pub verdicts: Vec<Verdict>,
    pub stats: DedupStats,
    pub filter: BloomFilter,
}

/// Runs deduplication over `docs` in place with one shared filter. In
/// deterministic mode documents are processed in input order; otherwise
/// concurrently, and which copy of a duplicate survives may vary.
pub fn run_dedup(docs: &mut [Document], cfg: &DedupConfig) -> Result<DedupRun> {
    cfg.validate()?;
    let n = match cfg.expected_ngrams {
        Some(n) => n,
        None => count_distinct_shingles(docs, &cfg.shingle).max(1),
    };
    let filter = BloomFilter::with_cap(cfg.fp_rate, n, cfg.memory_cap_bytes)?;
    let (verdicts, pre) = dedup_with_filter(docs, &filter, &cfg.shingle, cfg.deterministic);
    let stats = collect_stats(docs, &verdicts, &pre, &filter);
    Ok(DedupRun {
        verdicts,
        stats,
        filter,
    })
}

type Processed = (Vec<Verdict>, Vec<(usize, usize, DocDedupCounts)>);

/// Returns each document's verdict and its (bytes_in, words_in, counts).
pub fn dedup_with_filter(
    docs: &mut [Document],
    filter: &BloomFilter,
    cfg: &ShingleConfig,
    deterministic: bool,
) -> Processed {
    let one = |d: &mut Document| {
        let (bytes, words) = (d.text.len(), count_words(&d.text));
        let (outcome, counts) = dedup_document(d, filter, cfg);
        let verdict = match outcome {
            DedupOutcome::DroppedDocument { .. } => Verdict::reject(STAGE_DEDUP, "DuplicateDocument"),
            DedupOutcome::Kept { paragraphs_flagged: 0 } => Verdict::Keep,
            DedupOutcome::Kept { .. } => Verdict::Modified {
                stage: STAGE_DEDUP,
                words_removed: words - count_words(&d.text),
            },
        };
        (verdict, (bytes, words, counts))
    };
    let results: Vec<_> = if deterministic {
        docs.iter_mut().map(one).collect()
    } else {
        docs.par_iter_mut().map(one).collect()
    };
    results.into_iter().unzip()
}

fn collect_stats(
    docs: &[Document],
    verdicts: &[Verdict],
    pre: &[(usize, usize, DocDedupCounts)],
    filter: &BloomFilter,
) -> DedupStats {
    let mut s = DedupStats {
        m_bits: filter.m_bits(),
        k: filter.k(),
        fp_rate: filter.fp_rate(),
        expected_ngrams: filter.expected(),
        filter_bytes: filter.size_bytes(),
        inserted: filter.inserted(),
        set_bits: filter.set_bits(),
        sparsity: filter.sparsity(),
        ..Default::default()
    };
    for ((d, v), (bytes, words, c)) in docs.iter().zip(verdicts).zip(pre) {
        s.documents_in += 1;
        s.bytes_in += *bytes as u64;
        s.words_in += *words as u64;
        s.paragraphs_in += c.paragraphs;
        s.paragraphs_flagged += c.paragraphs_flagged;
        if v.is_reject() {
            s.documents_dropped += 1;
        } else {
            s.documents_out += 1;
            s.bytes_out += d.text.len() as u64;
            s.words_out += count_words(&d.text) as u64;
            if c.paragraphs_flagged > 0 {
                s.documents_pruned += 1;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing_formula() {
        let (m, k) = size_filter(1e-3, 100_000_000_000).unwrap();
        assert!((m as f64 / 1.4378e12 - 1.0).abs() < 1e-3, "{m}");
        assert_eq!(k, 10);
        assert_eq!(size_filter(0.5, 1).unwrap(), (2, 1));
        assert_eq!(size_filter(1e-13, 30_000_000_000).unwrap().1, 43);
        assert!(size_filter(0.0, 10).is_err());
        assert!(size_filter(1.0, 10).is_err());
    }

    #[test]
    fn shingle_counts() {
        let cfg = ShingleConfig::default();
        let words = |n: usize| (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ");
        assert_eq!(shingle(&words(15), &cfg).len(), 3);
        assert_eq!(shingle(&words(5), &cfg), vec![words(5)]);
        assert_eq!(shingle(&words(13), &cfg).len(), 1);
        assert!(shingle("   ", &cfg).is_empty());
        assert_eq!(shingle("A  b\tC", &cfg), vec!["a b c".to_string()]);
    }

    #[test]
    fn memory_cap_refuses() {
        let err = BloomFilter::with_cap(1e-3, 100_000_000_000, Some(1 << 30)).unwrap_err();
        assert!(matches!(err, CurateError::MemoryCap { .. }));
    }

    #[test]
    fn repeated_paragraph_removed_without_insertion() {
        let cfg = ShingleConfig::default();
        let f = BloomFilter::new(1e-6, 10_000).unwrap();
        let para = "the quick brown fox jumps over the lazy dog near the quiet river bank today";
        let mut a = Document::new(
            "a",
            "",
            format!("{para}\nan unrelated opening line about something else entirely"),
        );
        let (o, c) = dedup_document(&mut a, &f, &cfg);
        assert_eq!(o, DedupOutcome::Kept { paragraphs_flagged: 0 });
        let after_first = f.inserted();
        assert_eq!(after_first, c.shingles_inserted);

        let mut b = Document::new(
            "b",
            "",
            format!("fresh text one\nfresh text two\n{para}\nfresh text three\nfresh text four"),
        );
        let (o, c) = dedup_document(&mut b, &f, &cfg);
        assert_eq!(o, DedupOutcome::Kept { paragraphs_flagged: 1 });
        assert_eq!(
            b.text,
            "fresh text one\nfresh text two\nfresh text three\nfresh text four"
        );
        assert_eq!(f.inserted() - after_first, 4);
        assert_eq!(c.shingles_inserted, 4);
    }

    #[test]
    fn document_fallback() {
        let cfg = ShingleConfig::default();
        let f = BloomFilter::new(1e-6, 10_000).unwrap();
        let paras: Vec<String> = (0..10)
            .map(|i| format!("paragraph number {i} of the shared page"))
            .collect();
        let mut first = Document::new("a", "", paras[..9].join("\n"));
        dedup_document(&mut first, &f, &cfg);
        let before = f.inserted();
        let mut second = Document::new("b", "", paras.join("\n"));
        let (o, _) = dedup_document(&mut second, &f, &cfg);
        assert_eq!(o, DedupOutcome::DroppedDocument { paragraphs_flagged: 9 });
        assert_eq!(f.inserted(), before);
    }

    #[test]
    fn within_document_repeat() {
        let cfg = ShingleConfig::default();
        let f = BloomFilter::new(1e-6, 1_000).unwrap();
        let mut d = Document::new("a", "", "alpha beta\ngamma delta\nalpha beta\nepsilon zeta\neta theta");
        let (o, _) = dedup_document(&mut d, &f, &cfg);
        assert_eq!(o, DedupOutcome::Kept { paragraphs_flagged: 1 });
        assert_eq!(d.text, "alpha beta\ngamma delta\nepsilon zeta\neta theta");
    }

    #[test]
    fn run_stats_telescoping() {
        let mut docs: Vec<Document> = (0..20)
            .map(|i| {
                Document::new(
                    format!("{i}"),
                    "",
                    format!("line {} common\nunique {i} text here", i % 3),
                )
            })
            .collect();
        let run = run_dedup(&mut docs, &DedupConfig::default()).unwrap();
        let s = &run.stats;
        assert_eq!(s.documents_in, s.documents_out + s.documents_dropped);
        assert_eq!(s.paragraphs_flagged, 17);
        assert!(s.bytes_out < s.bytes_in);
        assert_eq!(
            run.verdicts.iter().filter(|v| v.is_reject()).count() as u64,
            s.documents_dropped
        );
    }
}
