//! Shared inputs for the benchmarks.

use curate_core::synth::{SynthConfig, SynthCorpus};
use curate_core::Document;

/// Seeded web-like documents totalling at least `bytes` of text.
pub fn web_corpus(bytes: usize) -> Vec<Document> {
    SynthCorpus::new(SynthConfig::default()).documents_of_size(bytes)
}

/// Clean prose only, every paragraph distinct.
pub fn clean_corpus(bytes: usize) -> Vec<Document> {
    SynthCorpus::new(SynthConfig::clean(7)).documents_of_size(bytes)
}

pub fn text_bytes(docs: &[Document]) -> u64 {
    docs.iter().map(|d| d.text.len() as u64).sum()
}
