//! Benchmark decontamination by word n-gram overlap.
//!
//! Reference and document text are normalized the same way (lowercase,
//! punctuation stripped, whitespace collapsed) and split into word n-grams.
//! A document sharing at least `min_matches` distinct n-grams with the
//! reference set is contaminated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use xxhash_rust::xxh3::xxh3_128;

use crate::corpus::{open_input, split_words, Document, Verdict};
use crate::error::{CurateError, Result};

pub const STAGE_DECONTAM: &str = "decontamination";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecontamConfig {
    pub reference_path: Option<PathBuf>,
    pub ngram_size: usize,
    pub min_matches: usize,
}

impl Default for DecontamConfig {
    fn default() -> Self {
        DecontamConfig {
            reference_path: None,
            ngram_size: 8,
            min_matches: 1,
        }
    }
}

impl DecontamConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ngram_size == 0 || self.min_matches == 0 {
            return Err(CurateError::Config(
                "decontamination ngram_size and min_matches must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Lowercases, drops punctuation and symbols, and splits on whitespace.
pub fn normalize_words(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect();
    split_words(&cleaned).map(str::to_string).collect()
}

fn gram_key(words: &[String]) -> u128 {
    xxh3_128(words.join(" ").as_bytes())
}

/// Word n-grams of the normalized text; a text shorter than `n` yields
/// itself as a single gram.
pub fn ngrams(text: &str, n: usize) -> Vec<String> {
    let words = normalize_words(text);
    if words.is_empty() {
        return Vec::new();
    }
    words.windows(n.min(words.len())).map(|w| w.join(" ")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstanceRef {
    pub benchmark: String,
    pub instance_id: String,
}

#[derive(Debug, Clone, Default)]
pub struct ReferenceSet {
    n: usize,
    grams: FxHashMap<u128, Vec<u32>>,
    instances: Vec<InstanceRef>,
    benchmarks: BTreeSet<String>,
    /// Lengths of instances shorter than `n`, indexed whole.
    short_lengths: BTreeSet<usize>,
}

impl ReferenceSet {
    pub fn new(n: usize) -> Self {
        ReferenceSet {
            n,
            ..Default::default()
        }
    }

    pub fn ngram_size(&self) -> usize {
        self.n
    }

    pub fn benchmarks(&self) -> impl Iterator<Item = &str> {
        self.benchmarks.iter().map(String::as_str)
    }

    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    pub fn gram_count(&self) -> usize {
        self.grams.len()
    }

    pub fn add(&mut self, benchmark: &str, instance_id: &str, text: &str) {
        self.benchmarks.insert(benchmark.to_string());
        let idx = self.instances.len() as u32;
        self.instances.push(InstanceRef {
            benchmark: benchmark.to_string(),
            instance_id: instance_id.to_string(),
        });
        let words = normalize_words(text);
        if words.is_empty() {
            return;
        }
        let n = self.n.min(words.len());
        if n < self.n {
            self.short_lengths.insert(n);
        }
        for w in words.windows(n) {
            let ids = self.grams.entry(gram_key(w)).or_default();
            if ids.last() != Some(&idx) {
                ids.push(idx);
            }
        }
    }

    /// Reads `{benchmark, instance_id, text}` JSONL.
    pub fn extend_from_jsonl<R: BufRead>(&mut self, reader: R, source: &str) -> Result<usize> {
        let mut added = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| CurateError::Io {
                last_good_line: i as u64,
                source: e,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(&line)?;
            let field = |k: &str| match v.get(k) {
                Some(Value::String(s)) => Some(s.clone()),
                Some(Value::Number(n)) => Some(n.to_string()),
                _ => None,
            };
            let (Some(b), Some(id), Some(t)) = (field("benchmark"), field("instance_id"), field("text")) else {
                return Err(CurateError::Config(format!(
                    "{source}:{}: reference records need benchmark, instance_id and text",
                    i + 1
                )));
            };
            self.add(&b, &id, &t);
            added += 1;
        }
        if added == 0 {
            log::warn!("benchmark reference file {source} is empty");
        }
        Ok(added)
    }

    pub fn load(path: &Path, n: usize) -> Result<Self> {
        let mut set = ReferenceSet::new(n);
        let reader = open_input(path)?;
        set.extend_from_jsonl(reader, &path.display().to_string())?;
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScreenOutcome {
    Clean,
    Contaminated {
        matched_ngrams: usize,
        instances: Vec<InstanceRef>,
    },
}

impl ScreenOutcome {
    pub fn is_contaminated(&self) -> bool {
        matches!(self, ScreenOutcome::Contaminated { .. })
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_contaminated() {
            Verdict::reject(STAGE_DECONTAM, "BenchmarkOverlap")
        } else {
            Verdict::Keep
        }
    }
}

pub fn screen(doc: &Document, refset: &ReferenceSet, min_matches: usize) -> ScreenOutcome {
    screen_text(&doc.text, refset, min_matches)
}

pub fn screen_text(text: &str, refset: &ReferenceSet, min_matches: usize) -> ScreenOutcome {
    if refset.grams.is_empty() {
        return ScreenOutcome::Clean;
    }
    let words = normalize_words(text);
    let mut matched: FxHashSet<u128> = FxHashSet::default();
    let mut hits: BTreeSet<u32> = BTreeSet::new();
    let lengths = std::iter::once(refset.n).chain(refset.short_lengths.iter().copied());
    for n in lengths {
        if words.len() < n {
            continue;
        }
        for w in words.windows(n) {
            let key = gram_key(w);
            if let Some(ids) = refset.grams.get(&key) {
                matched.insert(key);
                hits.extend(ids.iter().copied());
            }
        }
    }
    if matched.len() >= min_matches.max(1) {
        ScreenOutcome::Contaminated {
            matched_ngrams: matched.len(),
            instances: hits.into_iter().map(|i| refset.instances[i as usize].clone()).collect(),
        }
    } else {
        ScreenOutcome::Clean
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub benchmark: String,
    pub unique_contaminated_documents: u64,
    pub contaminated_evaluation_instances: u64,
}

/// Per-benchmark contamination counts. The total document count is the
/// number of distinct contaminated documents, so a document hitting two
/// benchmarks counts once in the total and once in each row. The total
/// instance count is the column sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContaminationReport {
    pub rows: Vec<ReportRow>,
    pub total_documents: u64,
    pub total_instances: u64,
}

impl ContaminationReport {
    /// Builds the report from `(doc_id, outcome)` pairs. Every benchmark of
    /// the reference set gets a row, in name order.
    pub fn from_outcomes<'a, I>(refset: &ReferenceSet, outcomes: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a ScreenOutcome)>,
    {
        let mut docs: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        let mut insts: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for b in refset.benchmarks() {
            docs.insert(b, BTreeSet::new());
            insts.insert(b, BTreeSet::new());
        }
        let mut all_docs: BTreeSet<&str> = BTreeSet::new();
        for (id, o) in outcomes {
            if let ScreenOutcome::Contaminated { instances, .. } = o {
                all_docs.insert(id);
                for inst in instances {
                    docs.entry(&inst.benchmark).or_default().insert(id);
                    insts.entry(&inst.benchmark).or_default().insert(&inst.instance_id);
                }
            }
        }
        let rows: Vec<ReportRow> = docs
            .into_iter()
            .map(|(b, d)| ReportRow {
                benchmark: b.to_string(),
                unique_contaminated_documents: d.len() as u64,
                contaminated_evaluation_instances: insts.get(b).map_or(0, |s| s.len() as u64),
            })
            .collect();
        let total_instances = rows.iter().map(|r| r.contaminated_evaluation_instances).sum();
        ContaminationReport {
            rows,
            total_documents: all_docs.len() as u64,
            total_instances,
        }
    }

    pub fn render_table(&self) -> String {
        let h = (
            "Benchmark",
            "Unique Contaminated Documents",
            "Contaminated Evaluation Instances",
        );
        let w0 = self
            .rows
            .iter()
            .map(|r| r.benchmark.len())
            .max()
            .unwrap_or(0)
            .max(h.0.len());
        let (w1, w2) = (h.1.len(), h.2.len());
        let mut s = String::new();
        let _ = writeln!(s, "{:<w0$}  {:>w1$}  {:>w2$}", h.0, h.1, h.2);
        let _ = writeln!(s, "{}", "-".repeat(w0 + w1 + w2 + 4));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<w0$}  {:>w1$}  {:>w2$}",
                r.benchmark, r.unique_contaminated_documents, r.contaminated_evaluation_instances
            );
        }
        let _ = writeln!(s, "{}", "-".repeat(w0 + w1 + w2 + 4));
        let _ = writeln!(
            s,
            "{:<w0$}  {:>w1$}  {:>w2$}",
            "Total", self.total_documents, self.total_instances
        );
        s
    }
}
