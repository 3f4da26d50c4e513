//! Seeded generator of web-like synthetic documents for tests and
//! benchmarks.
//!
//! Prose is drawn from English function words mixed with pseudo-words built
//! from syllables, so thirteen-word windows essentially never repeat by
//! chance. A configurable share of documents carries boilerplate lines,
//! inline URLs, foreign-script text, repetition or too few words.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;

const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "that", "is", "was", "it", "for", "on", "with", "as", "be", "at", "by",
    "this", "have", "from", "or", "had", "not", "but", "what", "all", "were", "when", "we", "there", "can", "an",
    "which", "their", "if", "do", "will", "each", "about", "how", "up", "out", "them", "then", "she", "many", "some",
    "so", "these", "would", "other", "into", "has", "more", "her", "two", "like", "him", "see", "time",
];

const SYLLABLES: &[&str] = &[
    "ka", "lo", "mer", "tin", "sa", "ve", "ro", "den", "pla", "str", "on", "ic", "al", "ter", "bri", "gan", "mo",
    "ful", "ness", "ly", "ex", "pro", "con", "vi", "sta", "ble", "tion", "ra", "ne", "ur", "ba", "cor", "dis", "el",
    "fi", "gre", "hu", "im", "jo", "lu",
];

const BOILERPLATE: &[&str] = &[
    "Home > News > World",
    "Read more",
    "Follow us on Twitter",
    "12K likes",
    "We use cookies to improve your experience. By continuing you consent to our cookie policy.",
    "Posted 2024-03-15 10:42",
    "Share this article",
    "Username:",
    "SUBSCRIBE TODAY",
    "var x = 1;",
];

const FOREIGN: &[&str] = &[
    "Жизнь",
    "прекрасна",
    "когда",
    "солнце",
    "светит",
    "над",
    "городом",
    "λόγος",
    "θάλασσα",
    "ουρανός",
    "日本語",
    "の",
    "文章",
    "です",
    "München",
    "Straße",
    "über",
    "größer",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub boilerplate_rate: f64,
    pub url_rate: f64,
    pub foreign_rate: f64,
    pub short_rate: f64,
    pub repetitive_rate: f64,
    /// Chance that a paragraph is copied from a shared pool instead of
    /// freshly generated.
    pub shared_paragraph_rate: f64,
    pub paragraphs: (usize, usize),
    /// Sentences per paragraph.
    pub sentences: (usize, usize),
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            boilerplate_rate: 0.3,
            url_rate: 0.2,
            foreign_rate: 0.05,
            short_rate: 0.05,
            repetitive_rate: 0.03,
            shared_paragraph_rate: 0.02,
            paragraphs: (3, 8),
            sentences: (2, 5),
        }
    }
}

impl SynthConfig {
    /// Clean prose only, every paragraph freshly generated.
    pub fn clean(seed: u64) -> Self {
        SynthConfig {
            seed,
            boilerplate_rate: 0.0,
            url_rate: 0.0,
            foreign_rate: 0.0,
            short_rate: 0.0,
            repetitive_rate: 0.0,
            shared_paragraph_rate: 0.0,
            paragraphs: (3, 8),
            sentences: (2, 5),
        }
    }
}

pub struct SynthCorpus {
    cfg: SynthConfig,
    rng: ChaCha8Rng,
    vocab: Vec<String>,
    shared: Vec<String>,
    next_id: u64,
}

impl SynthCorpus {
    pub fn new(cfg: SynthConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut vocab: Vec<String> = (0..20_000)
            .map(|_| {
                let n = rng.random_range(2..=4);
                (0..n)
                    .map(|_| SYLLABLES[rng.random_range(0..SYLLABLES.len())])
                    .collect()
            })
            .collect();
        vocab.sort();
        vocab.dedup();
        let mut me = SynthCorpus {
            cfg,
            rng,
            vocab,
            shared: Vec::new(),
            next_id: 0,
        };
        me.shared = (0..64).map(|_| me.paragraph()).collect();
        me
    }

    fn word(&mut self) -> &str {
        if self.rng.random_bool(0.45) {
            FUNCTION_WORDS[self.rng.random_range(0..FUNCTION_WORDS.len())]
        } else {
            let i = self.rng.random_range(0..self.vocab.len());
            &self.vocab[i]
        }
    }

    pub fn sentence(&mut self) -> String {
        let n = self.rng.random_range(8..=18);
        let mut s = String::new();
        for i in 0..n {
            if i > 0 {
                s.push(' ');
            }
            let w = self.word().to_string();
            if i == 0 {
                let mut c = w.chars();
                if let Some(f) = c.next() {
                    s.extend(f.to_uppercase());
                    s.push_str(c.as_str());
                }
            } else {
                s.push_str(&w);
            }
            if i + 1 < n && self.rng.random_bool(0.06) {
                s.push(',');
            }
        }
        s.push('.');
        s
    }

    pub fn paragraph(&mut self) -> String {
        let n = self.rng.random_range(self.cfg.sentences.0..=self.cfg.sentences.1);
        (0..n).map(|_| self.sentence()).collect::<Vec<_>>().join(" ")
    }

    fn url(&mut self) -> String {
        let host = self.vocab[self.rng.random_range(0..self.vocab.len())].clone();
        let slug = self.vocab[self.rng.random_range(0..self.vocab.len())].clone();
        format!(
            "https://www.{host}.com/articles/{slug}-{}",
            self.rng.random_range(0..100_000)
        )
    }

    pub fn document(&mut self) -> Document {
        let id = format!("doc-{:08}", self.next_id);
        self.next_id += 1;
        let url = self.url();
        let c = self.cfg;
        let roll: f64 = self.rng.random();
        let text = if roll < c.short_rate {
            self.sentence()
        } else if roll < c.short_rate + c.foreign_rate {
            let n = self.rng.random_range(60..200);
            (0..n)
                .map(|_| FOREIGN[self.rng.random_range(0..FOREIGN.len())])
                .collect::<Vec<_>>()
                .join(" ")
        } else if roll < c.short_rate + c.foreign_rate + c.repetitive_rate {
            let line = self.sentence();
            vec![line; self.rng.random_range(6..20)].join("\n")
        } else {
            let n = self.rng.random_range(c.paragraphs.0..=c.paragraphs.1);
            let mut paras: Vec<String> = Vec::with_capacity(n + 2);
            for _ in 0..n {
                let p = if self.rng.random_bool(c.shared_paragraph_rate) {
                    self.shared[self.rng.random_range(0..self.shared.len())].clone()
                } else {
                    self.paragraph()
                };
                paras.push(p);
            }
            if self.rng.random_bool(c.url_rate) {
                let i = self.rng.random_range(0..paras.len());
                let u = self.url();
                paras[i].push_str(&format!(" See {u} for details."));
            }
            if self.rng.random_bool(c.boilerplate_rate) {
                let b = BOILERPLATE[self.rng.random_range(0..BOILERPLATE.len())];
                if self.rng.random_bool(0.5) {
                    paras.insert(0, b.to_string());
                } else {
                    paras.push(b.to_string());
                }
            }
            let sep = if self.rng.random_bool(0.5) { "\n" } else { "\n\n" };
            paras.join(sep)
        };
        Document::new(id, url, text)
    }

    pub fn documents(&mut self, n: usize) -> Vec<Document> {
        (0..n).map(|_| self.document()).collect()
    }

    /// Generates documents until their text totals at least `bytes`.
    pub fn documents_of_size(&mut self, bytes: usize) -> Vec<Document> {
        let mut out = Vec::new();
        let mut total = 0;
        while total < bytes {
            let d = self.document();
            total += d.text.len();
            out.push(d);
        }
        out
    }
}

/// Serializes documents as JSONL with `id`, `url` and `text`.
pub fn to_jsonl(docs: &[Document]) -> String {
    let mut s = String::new();
    for d in docs {
        s.push_str(&serde_json::to_string(&d.to_kept_json()).expect("serializable"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_reproducible() {
        let a = SynthCorpus::new(SynthConfig::default()).documents(50);
        let b = SynthCorpus::new(SynthConfig::default()).documents(50);
        assert_eq!(a, b);
        let c = SynthCorpus::new(SynthConfig {
            seed: 7,
            ..Default::default()
        })
        .documents(50);
        assert_ne!(a, c);
    }
}
