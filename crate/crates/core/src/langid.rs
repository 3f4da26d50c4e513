//! English routing. Documents below the threshold go to a separate
//! multilingual partition rather than being dropped.

use serde::{Deserialize, Serialize};

use crate::corpus::{split_words, Document};
use crate::docquality::is_english_stop_word;
use crate::error::{CurateError, Result};

pub const STAGE_LANGID: &str = "language_id";

#[derive(Debug, Clone, PartialEq)]
pub struct LanguagePrediction {
    pub label: String,
    pub confidence: f64,
    /// English-class probability when the model exposes it.
    pub english: Option<f64>,
}

impl LanguagePrediction {
    /// English confidence, falling back to the top-1 label: a non-English
    /// top label means zero English confidence.
    pub fn english_confidence(&self) -> f64 {
        let p = self
            .english
            .unwrap_or(if self.label == "en" { self.confidence } else { 0.0 });
        p.clamp(0.0, 1.0)
    }
}

pub trait LanguageScorer: Send + Sync {
    fn predict(&self, text: &str) -> Result<LanguagePrediction>;
}

/// Any `Fn(&str) -> f64` works as a scorer returning the English probability.
impl<F> LanguageScorer for F
where
    F: Fn(&str) -> f64 + Send + Sync,
{
    fn predict(&self, text: &str) -> Result<LanguagePrediction> {
        let p = self(text);
        Ok(LanguagePrediction {
            label: if p >= 0.5 { "en".into() } else { "und".into() },
            confidence: p.max(1.0 - p),
            english: Some(p),
        })
    }
}

/// Stand-in scorer for runs without an external language model: English
/// confidence grows with the share of English function words and shrinks
/// with the share of non-ASCII letters.
#[derive(Debug, Clone, Copy)]
pub struct StopwordLanguageScorer {
    /// Function-word share at which confidence saturates.
    pub saturation: f64,
}

impl Default for StopwordLanguageScorer {
    fn default() -> Self {
        StopwordLanguageScorer { saturation: 0.25 }
    }
}

impl LanguageScorer for StopwordLanguageScorer {
    fn predict(&self, text: &str) -> Result<LanguagePrediction> {
        let mut words = 0usize;
        let mut stop = 0usize;
        for w in split_words(text) {
            words += 1;
            if is_english_stop_word(w) {
                stop += 1;
            }
        }
        let (mut letters, mut ascii) = (0usize, 0usize);
        if text.is_ascii() {
            letters = text.bytes().filter(u8::is_ascii_alphabetic).count();
            ascii = letters;
        } else {
            for c in text.chars().filter(|c| c.is_alphabetic()) {
                letters += 1;
                if c.is_ascii() {
                    ascii += 1;
                }
            }
        }
        let p = if words == 0 || letters == 0 {
            0.0
        } else {
            let share = stop as f64 / words as f64;
            (share / self.saturation).min(1.0) * (ascii as f64 / letters as f64)
        };
        Ok(LanguagePrediction {
            label: if p >= 0.5 { "en".into() } else { "und".into() },
            confidence: p.max(1.0 - p),
            english: Some(p),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LidStrategy {
    #[default]
    #[serde(rename = "whole_doc")]
    WholeDocument,
    #[serde(rename = "weighted_line")]
    WeightedLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LidConfig {
    #[serde(rename = "lid_strategy")]
    pub strategy: LidStrategy,
    #[serde(rename = "lid_threshold")]
    pub threshold: f64,
}

impl Default for LidConfig {
    fn default() -> Self {
        LidConfig {
            strategy: LidStrategy::WholeDocument,
            threshold: 0.65,
        }
    }
}

impl LidConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(CurateError::Config(format!(
                "lid_threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    English,
    Multilingual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoutingDecision {
    pub partition: Partition,
    pub score: f64,
}

/// English confidence of the full text with newlines removed.
pub fn score_whole_document(doc: &Document, scorer: &dyn LanguageScorer) -> f64 {
    let flat = doc.text.replace('\n', " ");
    if flat.trim().is_empty() {
        return 0.0;
    }
    match scorer.predict(&flat) {
        Ok(p) => p.english_confidence(),
        Err(e) => {
            log::warn!("language scorer failed on {}: {e}", doc.id);
            0.0
        }
    }
}

/// Byte-length-weighted mean of per-line English confidences. Empty lines
/// carry no weight; a document with no bytes scores 0.
pub fn score_weighted_lines(doc: &Document, scorer: &dyn LanguageScorer) -> f64 {
    let mut num = 0.0;
    let mut den = 0usize;
    for line in doc.lines() {
        if line.is_empty() {
            continue;
        }
        let p = match scorer.predict(line) {
            Ok(p) => p.english_confidence(),
            Err(e) => {
                log::warn!("language scorer failed on a line of {}: {e}", doc.id);
                0.0
            }
        };
        num += line.len() as f64 * p;
        den += line.len();
    }
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

pub fn route(doc: &Document, config: &LidConfig, scorer: &dyn LanguageScorer) -> RoutingDecision {
    let score = match config.strategy {
        LidStrategy::WholeDocument => score_whole_document(doc, scorer),
        LidStrategy::WeightedLine => score_weighted_lines(doc, scorer),
    };
    route_score(score, config.threshold)
}

pub fn route_score(score: f64, threshold: f64) -> RoutingDecision {
    let partition = if score >= threshold {
        Partition::English
    } else {
        Partition::Multilingual
    };
    RoutingDecision { partition, score }
}

/// Scorer that always fails; used to exercise the error path.
#[derive(Debug, Clone, Copy, Default)]
pub struct FailingScorer;

impl LanguageScorer for FailingScorer {
    fn predict(&self, _text: &str) -> Result<LanguagePrediction> {
        Err(CurateError::Scorer("model unavailable".into()))
    }
}
