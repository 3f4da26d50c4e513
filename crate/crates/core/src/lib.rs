//! Corpus curation for web-scale pretraining data.
//!
//! Documents arrive as pre-parsed JSONL and flow through URL filtering,
//! language routing, document-level quality gates, line-level cleaning,
//! Bloom-filter deduplication and a dual-bin classifier gate. Benchmark
//! decontamination runs ahead of everything else at corpus scope.
//!
//! Every stage is usable on its own; [`pipeline`] wires them together
//! under the four stage-activation presets and keeps per-stage accounting.

pub mod corpus;
pub mod decontam;
pub mod dedup;
pub mod docquality;
pub mod error;
pub mod langid;
pub mod lineclean;
pub mod pipeline;
pub mod qualitygate;
pub mod synth;
pub mod urlstage;

pub use corpus::{count_words, split_words, Document, Verdict, WhitespaceCounter, WordCounter};
pub use error::{CurateError, Result};
pub use pipeline::{Pipeline, PipelineConfig, Preset, RunStats, StageStats};
