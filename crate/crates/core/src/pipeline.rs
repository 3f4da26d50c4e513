//! Stage orchestration, presets and per-stage removal statistics.
//!
//! Documents flow through decontamination, the URL stages, language routing,
//! the document gates, line cleaning and the word-removal gate, then
//! deduplication and the classifier gate. Which stages run is decided by the
//! preset plus per-stage overrides. Rejection at any stage is final.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::{count_words, open_input, read_jsonl, write_json_line, Document, Record, Verdict};
use crate::decontam::{screen, ContaminationReport, DecontamConfig, ReferenceSet, ScreenOutcome, STAGE_DECONTAM};
use crate::dedup::{dedup_document, BloomFilter, DedupConfig, DedupOutcome, DedupStats, STAGE_DEDUP};
use crate::docquality::{
    badwords_document_filter, custom_quality, gopher_quality, gopher_repetition, nemo, DocQualityConfig,
    DocQualityResources, BADWORDS_CRITERIA, CUSTOM_CRITERIA, GOPHER_CRITERIA, NEMO_CRITERIA, REPETITION_CRITERIA,
    STAGE_BADWORDS, STAGE_CUSTOM_QUALITY, STAGE_GOPHER_QUALITY, STAGE_GOPHER_REPETITION, STAGE_NEMO,
};
use crate::error::{CurateError, Result};
use crate::langid::{route, LanguageScorer, LidConfig, Partition, StopwordLanguageScorer, STAGE_LANGID};
use crate::lineclean::{
    clean_lines, word_removal_gate, ClassToggles, LineClass, LineCleaner, LineHeuristicConfig, WordRemovalGate,
    STAGE_LINE_CLEAN, STAGE_WORD_REMOVAL,
};
use crate::qualitygate::{gate, gate_verdict, load_scorers, BoxedScorer, GateConfig, GateDecision, STAGE_GATE};
use crate::urlstage::{
    check_blocklist, check_hard_substrings, check_soft_substrings, check_strict_substrings,
    normalize_document_newlines, strip_inline_urls, UrlFilters, UrlStageConfig, STAGE_BLOCKLIST, STAGE_HARD,
    STAGE_NEWLINES, STAGE_SOFT, STAGE_STRICT, STAGE_URL_TOKENS,
};

pub const STATS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "url-lid")]
    UrlLid,
    #[serde(rename = "doc-filter")]
    DocFilter,
    #[serde(rename = "line-clean")]
    LineClean,
    #[default]
    #[serde(rename = "flux")]
    Flux,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::UrlLid, Preset::DocFilter, Preset::LineClean, Preset::Flux];

    pub fn name(self) -> &'static str {
        match self {
            Preset::UrlLid => "url-lid",
            Preset::DocFilter => "doc-filter",
            Preset::LineClean => "line-clean",
            Preset::Flux => "flux",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Stage composition of the preset. Decontamination, dedup and the
    /// classifier gate are not part of any preset and are enabled through
    /// configuration.
    pub fn stages(self) -> ActiveStages {
        let doc = self != Preset::UrlLid;
        let line = matches!(self, Preset::LineClean | Preset::Flux);
        ActiveStages {
            decontamination: false,
            url_blocklist: true,
            url_substring: true,
            url_token_removal: true,
            newline_normalization: true,
            language_id: true,
            gopher_quality: doc,
            nemo: doc,
            gopher_repetition: doc,
            badwords: matches!(self, Preset::DocFilter | Preset::LineClean),
            custom_quality: line,
            line_clean: line,
            line_clean_extended: self == Preset::Flux,
            word_removal_ratio: line,
            dedup: false,
            quality_gate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveStages {
    pub decontamination: bool,
    pub url_blocklist: bool,
    pub url_substring: bool,
    pub url_token_removal: bool,
    pub newline_normalization: bool,
    pub language_id: bool,
    pub gopher_quality: bool,
    pub nemo: bool,
    pub gopher_repetition: bool,
    pub badwords: bool,
    pub custom_quality: bool,
    pub line_clean: bool,
    /// Adds the six extended line classes to the five core ones.
    pub line_clean_extended: bool,
    pub word_removal_ratio: bool,
    pub dedup: bool,
    pub quality_gate: bool,
}

/// Per-stage overrides of the preset composition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageOverrides {
    pub decontamination: Option<bool>,
    pub url_blocklist: Option<bool>,
    pub url_substring: Option<bool>,
    pub url_token_removal: Option<bool>,
    pub newline_normalization: Option<bool>,
    pub language_id: Option<bool>,
    pub gopher_quality: Option<bool>,
    pub nemo: Option<bool>,
    pub gopher_repetition: Option<bool>,
    pub badwords: Option<bool>,
    pub custom_quality: Option<bool>,
    pub line_clean: Option<bool>,
    pub line_clean_extended: Option<bool>,
    pub word_removal_ratio: Option<bool>,
    pub dedup: Option<bool>,
    pub quality_gate: Option<bool>,
}

impl StageOverrides {
    pub fn apply(&self, mut s: ActiveStages) -> ActiveStages {
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { s.$f = v; } )* };
        }
        over!(
            decontamination,
            url_blocklist,
            url_substring,
            url_token_removal,
            newline_normalization,
            language_id,
            gopher_quality,
            nemo,
            gopher_repetition,
            badwords,
            custom_quality,
            line_clean,
            line_clean_extended,
            word_removal_ratio,
            dedup,
            quality_gate
        );
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub preset: Preset,
    pub stages: StageOverrides,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub deterministic: bool,
    pub batch_size: usize,
    pub inputs: Vec<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub url: UrlStageConfig,
    pub lid: LidConfig,
    pub quality: DocQualityConfig,
    pub lines: LineHeuristicConfig,
    pub dedup: DedupConfig,
    pub gate: GateConfig,
    pub decontam: DecontamConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            preset: Preset::Flux,
            stages: StageOverrides::default(),
            workers: 0,
            deterministic: true,
            batch_size: 2048,
            inputs: Vec::new(),
            output_dir: None,
            url: UrlStageConfig::default(),
            lid: LidConfig::default(),
            quality: DocQualityConfig::default(),
            lines: LineHeuristicConfig::default(),
            dedup: DedupConfig::default(),
            gate: GateConfig::default(),
            decontam: DecontamConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn for_preset(preset: Preset) -> Self {
        PipelineConfig {
            preset,
            ..Default::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CurateError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CurateError::resource(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Makes relative resource paths relative to the config file's folder.
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        let u = &mut self.url;
        for p in [
            &mut u.blocklist_path,
            &mut u.strict_terms_path,
            &mut u.hard_terms_path,
            &mut u.soft_terms_path,
            &mut u.tld_list_path,
            &mut u.public_suffix_path,
        ] {
            fix(p);
        }
        let q = &mut self.quality;
        for p in [
            &mut q.gopher_stop_words_path,
            &mut q.stop_words_path,
            &mut q.badwords_path,
        ] {
            fix(p);
        }
        let l = &mut self.lines;
        for p in [
            &mut l.marker_phrases_path,
            &mut l.cookie_phrases_path,
            &mut l.social_cta_path,
            &mut l.form_labels_path,
        ] {
            fix(p);
        }
        fix(&mut self.gate.scorer_dclm_path);
        fix(&mut self.gate.scorer_betr_path);
        fix(&mut self.decontam.reference_path);
    }

    pub fn active_stages(&self) -> ActiveStages {
        let mut s = self.preset.stages();
        s.decontamination = self.decontam.reference_path.is_some();
        self.stages.apply(s)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.active_stages();
        self.lid.validate()?;
        self.quality.validate()?;
        self.lines.validate()?;
        self.decontam.validate()?;
        if self.batch_size == 0 {
            return Err(CurateError::Config("batch_size must be positive".into()));
        }
        if s.decontamination && self.decontam.reference_path.is_none() {
            return Err(CurateError::Config(
                "decontamination enabled without decontam.reference_path".into(),
            ));
        }
        if s.dedup {
            self.dedup.validate()?;
            if self.dedup.expected_ngrams.is_none() {
                return Err(CurateError::Config(
                    "pipeline dedup needs dedup.expected_ngrams to size the filter".into(),
                ));
            }
        }
        if s.quality_gate {
            self.gate.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageKind {
    Filter,
    Modifier,
    Group,
}

/// Statistics rows in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageId {
    Decontamination,
    Blocklist,
    StrictSubstring,
    HardSubstring,
    SoftSubstring,
    UrlTokenRemoval,
    NewlineNormalization,
    LanguageId,
    GopherQuality,
    Nemo,
    GopherRepetition,
    Badwords,
    CustomQuality,
    LineLevelQuality,
    WordRemovalRatio,
    Dedup,
    QualityGate,
}

impl StageId {
    pub const ALL: [StageId; 17] = [
        StageId::Decontamination,
        StageId::Blocklist,
        StageId::StrictSubstring,
        StageId::HardSubstring,
        StageId::SoftSubstring,
        StageId::UrlTokenRemoval,
        StageId::NewlineNormalization,
        StageId::LanguageId,
        StageId::GopherQuality,
        StageId::Nemo,
        StageId::GopherRepetition,
        StageId::Badwords,
        StageId::CustomQuality,
        StageId::LineLevelQuality,
        StageId::WordRemovalRatio,
        StageId::Dedup,
        StageId::QualityGate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StageId::Decontamination => STAGE_DECONTAM,
            StageId::Blocklist => STAGE_BLOCKLIST,
            StageId::StrictSubstring => STAGE_STRICT,
            StageId::HardSubstring => STAGE_HARD,
            StageId::SoftSubstring => STAGE_SOFT,
            StageId::UrlTokenRemoval => STAGE_URL_TOKENS,
            StageId::NewlineNormalization => STAGE_NEWLINES,
            StageId::LanguageId => STAGE_LANGID,
            StageId::GopherQuality => STAGE_GOPHER_QUALITY,
            StageId::Nemo => STAGE_NEMO,
            StageId::GopherRepetition => STAGE_GOPHER_REPETITION,
            StageId::Badwords => STAGE_BADWORDS,
            StageId::CustomQuality => STAGE_CUSTOM_QUALITY,
            StageId::LineLevelQuality => STAGE_LINE_CLEAN,
            StageId::WordRemovalRatio => STAGE_WORD_REMOVAL,
            StageId::Dedup => STAGE_DEDUP,
            StageId::QualityGate => STAGE_GATE,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StageId::Decontamination => "Decontamination",
            StageId::Blocklist => "UT1 Domain Blocklist",
            StageId::StrictSubstring => "URL Strict Substring",
            StageId::HardSubstring => "URL Hard Substring",
            StageId::SoftSubstring => "URL Soft Substring",
            StageId::UrlTokenRemoval => "URL Token Removal",
            StageId::NewlineNormalization => "Newline Normalization",
            StageId::LanguageId => "Language Identification",
            StageId::GopherQuality => "Gopher Quality Filter",
            StageId::Nemo => "Nemo Filter",
            StageId::GopherRepetition => "Gopher Repetition",
            StageId::Badwords => "Badwords Filter",
            StageId::CustomQuality => "Custom Quality Filter",
            StageId::LineLevelQuality => "Line Level Quality",
            StageId::WordRemovalRatio => "Word Removal Ratio",
            StageId::Dedup => "Bloom Filter Dedup",
            StageId::QualityGate => "Quality Gate",
        }
    }

    pub fn kind(self) -> StageKind {
        match self {
            StageId::UrlTokenRemoval | StageId::NewlineNormalization | StageId::LineLevelQuality => StageKind::Modifier,
            StageId::GopherQuality
            | StageId::Nemo
            | StageId::GopherRepetition
            | StageId::CustomQuality
            | StageId::Dedup
            | StageId::QualityGate => StageKind::Group,
            _ => StageKind::Filter,
        }
    }

    fn criteria(self, classes: &ClassToggles) -> Vec<&'static str> {
        match self {
            StageId::Decontamination => vec!["BenchmarkOverlap"],
            StageId::Blocklist => vec!["BlocklistedDomain"],
            StageId::StrictSubstring => vec!["StrictSubstring"],
            StageId::HardSubstring => vec!["HardSubstring"],
            StageId::SoftSubstring => vec!["SoftSubstring"],
            StageId::UrlTokenRemoval => vec!["UrlToken"],
            StageId::NewlineNormalization => vec!["ExcessNewlines"],
            StageId::LanguageId => vec!["NonEnglish"],
            StageId::GopherQuality => GOPHER_CRITERIA.to_vec(),
            StageId::Nemo => NEMO_CRITERIA.to_vec(),
            StageId::GopherRepetition => REPETITION_CRITERIA.to_vec(),
            StageId::Badwords => BADWORDS_CRITERIA.to_vec(),
            StageId::CustomQuality => CUSTOM_CRITERIA.to_vec(),
            StageId::LineLevelQuality => {
                let mut v: Vec<&'static str> = classes.enabled().map(LineClass::name).collect();
                v.push("EmptyAfterClean");
                v
            }
            StageId::WordRemovalRatio => vec!["WordRemovalRatio"],
            StageId::Dedup => vec!["DuplicateParagraph", "DuplicateDocument"],
            StageId::QualityGate => vec!["BelowThresholds", "ScorerError"],
        }
    }

    fn is_active(self, s: &ActiveStages) -> bool {
        match self {
            StageId::Decontamination => s.decontamination,
            StageId::Blocklist => s.url_blocklist,
            StageId::StrictSubstring | StageId::HardSubstring | StageId::SoftSubstring => s.url_substring,
            StageId::UrlTokenRemoval => s.url_token_removal,
            StageId::NewlineNormalization => s.newline_normalization,
            StageId::LanguageId => s.language_id,
            StageId::GopherQuality => s.gopher_quality,
            StageId::Nemo => s.nemo,
            StageId::GopherRepetition => s.gopher_repetition,
            StageId::Badwords => s.badwords,
            StageId::CustomQuality => s.custom_quality,
            StageId::LineLevelQuality => s.line_clean,
            StageId::WordRemovalRatio => s.word_removal_ratio,
            StageId::Dedup => s.dedup,
            StageId::QualityGate => s.quality_gate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionStats {
    pub criterion: String,
    pub docs_removed: u64,
    pub tokens_removed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage: String,
    pub label: String,
    pub kind: StageKind,
    pub docs_removed: u64,
    pub tokens_removed: u64,
    pub criteria: Vec<CriterionStats>,
}

impl StageStats {
    fn seeded(id: StageId, classes: &ClassToggles) -> Self {
        StageStats {
            stage: id.name().into(),
            label: id.label().into(),
            kind: id.kind(),
            docs_removed: 0,
            tokens_removed: 0,
            criteria: id
                .criteria(classes)
                .into_iter()
                .map(|c| CriterionStats {
                    criterion: c.into(),
                    docs_removed: 0,
                    tokens_removed: 0,
                })
                .collect(),
        }
    }

    pub fn criterion(&self, name: &str) -> Option<&CriterionStats> {
        self.criteria.iter().find(|c| c.criterion == name)
    }
}

/// Field-wise sum of two rows with the same schema.
pub fn merge_stats(a: &StageStats, b: &StageStats) -> Result<StageStats> {
    let same = a.stage == b.stage
        && a.kind == b.kind
        && a.criteria.len() == b.criteria.len()
        && a.criteria
            .iter()
            .zip(&b.criteria)
            .all(|(x, y)| x.criterion == y.criterion);
    if !same {
        return Err(CurateError::StatsSchema(format!(
            "cannot merge {} with {}",
            a.stage, b.stage
        )));
    }
    Ok(StageStats {
        stage: a.stage.clone(),
        label: a.label.clone(),
        kind: a.kind,
        docs_removed: a.docs_removed + b.docs_removed,
        tokens_removed: a.tokens_removed + b.tokens_removed,
        criteria: a
            .criteria
            .iter()
            .zip(&b.criteria)
            .map(|(x, y)| CriterionStats {
                criterion: x.criterion.clone(),
                docs_removed: x.docs_removed + y.docs_removed,
                tokens_removed: x.tokens_removed + y.tokens_removed,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub schema_version: u32,
    pub preset: String,
    pub parse_failures: u64,
    pub initial_docs: u64,
    pub initial_tokens: u64,
    pub stages: Vec<StageStats>,
    pub multilingual_docs: u64,
    pub multilingual_tokens: u64,
    pub retained_docs: u64,
    pub retained_tokens: u64,
    pub retention_pct: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup: Option<DedupStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contamination: Option<ContaminationReport>,
}

impl RunStats {
    pub fn empty(preset: Preset, active: &ActiveStages, classes: &ClassToggles) -> Self {
        RunStats {
            schema_version: STATS_SCHEMA_VERSION,
            preset: preset.name().into(),
            parse_failures: 0,
            initial_docs: 0,
            initial_tokens: 0,
            stages: StageId::ALL
                .into_iter()
                .filter(|id| id.is_active(active))
                .map(|id| StageStats::seeded(id, classes))
                .collect(),
            multilingual_docs: 0,
            multilingual_tokens: 0,
            retained_docs: 0,
            retained_tokens: 0,
            retention_pct: 0.0,
            dedup: None,
            contamination: None,
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageStats> {
        self.stages.iter().find(|s| s.stage == name)
    }

    pub fn has_stage(&self, name: &str) -> bool {
        self.stage(name).is_some()
    }

    pub fn removed_tokens(&self) -> u64 {
        self.stages.iter().map(|s| s.tokens_removed).sum()
    }

    pub fn removed_docs(&self) -> u64 {
        self.stages.iter().map(|s| s.docs_removed).sum()
    }

    /// Initial tokens equal retained tokens plus every row's removals.
    pub fn telescopes(&self) -> bool {
        self.initial_tokens == self.retained_tokens + self.removed_tokens()
            && self.initial_docs == self.retained_docs + self.removed_docs()
    }

    /// Sums counters of two runs with identical stage schemas. Dedup and
    /// contamination summaries are not merged.
    pub fn merge(&self, other: &RunStats) -> Result<RunStats> {
        if self.stages.len() != other.stages.len() {
            return Err(CurateError::StatsSchema("different stage sets".into()));
        }
        let stages = self
            .stages
            .iter()
            .zip(&other.stages)
            .map(|(a, b)| merge_stats(a, b))
            .collect::<Result<Vec<_>>>()?;
        let mut out = RunStats {
            schema_version: self.schema_version,
            preset: self.preset.clone(),
            parse_failures: self.parse_failures + other.parse_failures,
            initial_docs: self.initial_docs + other.initial_docs,
            initial_tokens: self.initial_tokens + other.initial_tokens,
            stages,
            multilingual_docs: self.multilingual_docs + other.multilingual_docs,
            multilingual_tokens: self.multilingual_tokens + other.multilingual_tokens,
            retained_docs: self.retained_docs + other.retained_docs,
            retained_tokens: self.retained_tokens + other.retained_tokens,
            retention_pct: 0.0,
            dedup: None,
            contamination: None,
        };
        out.finish();
        Ok(out)
    }

    fn finish(&mut self) {
        self.retention_pct = pct(self.retained_tokens, self.initial_tokens);
    }

    fn record(&mut self, e: &Event) {
        let row = &mut self.stages[e.row as usize];
        row.docs_removed += e.docs;
        row.tokens_removed += e.tokens;
        let c = &mut row.criteria[e.sub as usize];
        c.docs_removed += e.docs;
        c.tokens_removed += e.tokens;
    }
}

fn pct(a: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * a as f64 / total as f64
    }
}

fn fmt_count(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn fmt_pct(a: u64, total: u64) -> String {
    let p = pct(a, total);
    if a > 0 && p < 0.005 {
        "<0.01%".into()
    } else {
        format!("{p:.2}%")
    }
}

/// Text table with one row per stage, indented sub-criterion rows for
/// groups and modifiers (non-zero ones only), and the retained total.
pub fn render_stats_table(stats: &RunStats) -> String {
    let total = stats.initial_tokens;
    let mut rows: Vec<[String; 5]> = vec![[
        "Initial Input".into(),
        "---".into(),
        "---".into(),
        fmt_count(total),
        if total == 0 { "0.00%".into() } else { "100.00%".into() },
    ]];
    for s in &stats.stages {
        let (label, kind) = match s.kind {
            StageKind::Group => (format!("**{}**", s.label), "Group"),
            StageKind::Modifier => (s.label.clone(), "Modifier"),
            StageKind::Filter => (s.label.clone(), "Filter"),
        };
        let docs = if s.kind == StageKind::Modifier && s.docs_removed == 0 {
            "--- (modifier)".into()
        } else {
            fmt_count(s.docs_removed)
        };
        rows.push([
            label,
            kind.into(),
            docs,
            fmt_count(s.tokens_removed),
            fmt_pct(s.tokens_removed, total),
        ]);
        let show_subs = s.kind == StageKind::Group || (s.kind == StageKind::Modifier && s.criteria.len() > 1);
        if show_subs {
            for c in s.criteria.iter().filter(|c| c.docs_removed > 0 || c.tokens_removed > 0) {
                let docs = if s.kind == StageKind::Modifier && c.docs_removed == 0 {
                    "---".into()
                } else {
                    fmt_count(c.docs_removed)
                };
                rows.push([
                    format!("  {}", c.criterion),
                    "Sub-filter".into(),
                    docs,
                    fmt_count(c.tokens_removed),
                    fmt_pct(c.tokens_removed, total),
                ]);
            }
        }
    }
    let final_label = if stats.stages.iter().any(|s| s.stage == STAGE_DEDUP) {
        "Final Retained Corpus"
    } else {
        "Final Retained Corpus (pre-dedup)"
    };
    rows.push([
        final_label.into(),
        "Output".into(),
        fmt_count(stats.retained_docs),
        fmt_count(stats.retained_tokens),
        format!("{:.2}%", stats.retention_pct),
    ]);
    let head = ["Filter Stage", "Type", "Docs Removed", "Tokens Removed", "% Total"];
    let mut w = head.map(str::len);
    for r in &rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: [&str; 5]| {
        format!(
            "{:<w0$}  {:<w1$}  {:>w2$}  {:>w3$}  {:>w4$}\n",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            cells[4],
            w0 = w[0],
            w1 = w[1],
            w2 = w[2],
            w3 = w[3],
            w4 = w[4]
        )
    };
    let rule = "-".repeat(w.iter().sum::<usize>() + 8) + "\n";
    let mut out = String::new();
    out.push_str(&line(head));
    out.push_str(&rule);
    for (i, r) in rows.iter().enumerate() {
        if i == rows.len() - 1 {
            out.push_str(&rule);
        }
        out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
    }
    if stats.parse_failures > 0 {
        let _ = writeln!(out, "({} unparseable records skipped)", fmt_count(stats.parse_failures));
    }
    out
}

/// One stats increment: row and criterion index, documents and tokens.
#[derive(Debug, Clone, Copy)]
struct Event {
    row: u16,
    sub: u16,
    docs: u64,
    tokens: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fate {
    Kept,
    Rejected {
        stage: &'static str,
        criterion: &'static str,
    },
    Multilingual {
        score: f64,
    },
}

struct Slot {
    doc: Document,
    fate: Fate,
    initial_tokens: u64,
    /// Current word count of `doc.text`, kept in step with every edit.
    words: u64,
    events: Vec<Event>,
    contamination: Option<ScreenOutcome>,
    gate: Option<GateDecision>,
}

/// Receives the outputs of a run in input order.
pub trait RecordSink {
    fn kept(&mut self, doc: &Document, gate: Option<&GateDecision>) -> Result<()>;
    fn rejected(&mut self, doc: &Document, stage: &str, criterion: &str) -> Result<()>;
    fn multilingual(&mut self, doc: &Document, score: f64) -> Result<()>;
    fn parse_failure(&mut self, _line: u64, _reason: &str) -> Result<()> {
        Ok(())
    }
    fn gate_scores(&mut self, _id: &str, _decision: &GateDecision) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct MemorySink {
    pub kept: Vec<Document>,
    pub rejected: Vec<(Document, String, String)>,
    pub multilingual: Vec<(Document, f64)>,
    pub parse_failures: Vec<(u64, String)>,
}

impl RecordSink for MemorySink {
    fn kept(&mut self, doc: &Document, _gate: Option<&GateDecision>) -> Result<()> {
        self.kept.push(doc.clone());
        Ok(())
    }

    fn rejected(&mut self, doc: &Document, stage: &str, criterion: &str) -> Result<()> {
        self.rejected.push((doc.clone(), stage.into(), criterion.into()));
        Ok(())
    }

    fn multilingual(&mut self, doc: &Document, score: f64) -> Result<()> {
        self.multilingual.push((doc.clone(), score));
        Ok(())
    }

    fn parse_failure(&mut self, line: u64, reason: &str) -> Result<()> {
        self.parse_failures.push((line, reason.into()));
        Ok(())
    }
}

pub const KEPT_FILE: &str = "kept.jsonl";
pub const REJECTED_FILE: &str = "rejected.jsonl";
pub const MULTILINGUAL_FILE: &str = "multilingual.jsonl";
pub const STATS_JSON_FILE: &str = "stats.json";
pub const STATS_TEXT_FILE: &str = "stats.txt";
pub const SCORES_FILE: &str = "scores.jsonl";
pub const CONTAMINATION_JSON_FILE: &str = "contamination.json";
pub const CONTAMINATION_TEXT_FILE: &str = "contamination.txt";

/// Writes the three JSONL streams (and optionally gate scores) to a folder.
pub struct FileSink {
    kept: BufWriter<File>,
    rejected: BufWriter<File>,
    multilingual: BufWriter<File>,
    scores: Option<BufWriter<File>>,
    written: u64,
}

impl FileSink {
    pub fn create(dir: &Path, with_scores: bool) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CurateError::resource(dir, e))?;
        let open = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            File::create(&p)
                .map(|f| BufWriter::with_capacity(1 << 20, f))
                .map_err(|e| CurateError::resource(p, e))
        };
        Ok(FileSink {
            kept: open(KEPT_FILE)?,
            rejected: open(REJECTED_FILE)?,
            multilingual: open(MULTILINGUAL_FILE)?,
            scores: if with_scores { Some(open(SCORES_FILE)?) } else { None },
            written: 0,
        })
    }

    fn put(w: &mut BufWriter<File>, v: &Value, written: &mut u64) -> Result<()> {
        write_json_line(w, v).map_err(|source| CurateError::Io {
            last_good_line: *written,
            source,
        })?;
        *written += 1;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        for w in [&mut self.kept, &mut self.rejected, &mut self.multilingual] {
            w.flush().map_err(|source| CurateError::Io {
                last_good_line: self.written,
                source,
            })?;
        }
        if let Some(s) = &mut self.scores {
            s.flush().map_err(|source| CurateError::Io {
                last_good_line: self.written,
                source,
            })?;
        }
        Ok(())
    }
}

impl RecordSink for FileSink {
    fn kept(&mut self, doc: &Document, _gate: Option<&GateDecision>) -> Result<()> {
        Self::put(&mut self.kept, &doc.to_kept_json(), &mut self.written)
    }

    fn rejected(&mut self, doc: &Document, stage: &str, criterion: &str) -> Result<()> {
        Self::put(
            &mut self.rejected,
            &doc.to_rejected_json(stage, criterion),
            &mut self.written,
        )
    }

    fn multilingual(&mut self, doc: &Document, score: f64) -> Result<()> {
        let v = doc.to_annotated_json([("lid_score".to_string(), json!(score))]);
        Self::put(&mut self.multilingual, &v, &mut self.written)
    }

    fn parse_failure(&mut self, line: u64, reason: &str) -> Result<()> {
        let v = json!({
            "line": line,
            "error": reason,
            "rejected_by": {"stage": "document_parsing", "criterion": "ParseError"},
        });
        Self::put(&mut self.rejected, &v, &mut self.written)
    }

    fn gate_scores(&mut self, id: &str, decision: &GateDecision) -> Result<()> {
        if let Some(s) = &mut self.scores {
            Self::put(s, &decision.sidecar_json(id), &mut self.written)?;
        }
        Ok(())
    }
}

/// A configured pipeline with every resource loaded.
pub struct Pipeline {
    cfg: PipelineConfig,
    active: ActiveStages,
    classes: ClassToggles,
    rows: [Option<u16>; 17],
    url: UrlFilters,
    lid: Box<dyn LanguageScorer>,
    quality: DocQualityResources,
    cleaner: LineCleaner,
    removal_gate: WordRemovalGate,
    refset: Option<ReferenceSet>,
    gate_scorers: Option<(BoxedScorer, BoxedScorer)>,
}

impl std::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pipeline")
            .field("preset", &self.cfg.preset)
            .field("active", &self.active)
            .finish_non_exhaustive()
    }
}

impl Pipeline {
    pub fn from_config(cfg: PipelineConfig) -> Result<Self> {
        Self::with_scorers(cfg, None, None)
    }

    /// Builds the pipeline, optionally injecting the language scorer and
    /// the two gate scorers. Every missing resource file is reported in
    /// one error.
    pub fn with_scorers(
        cfg: PipelineConfig,
        lid: Option<Box<dyn LanguageScorer>>,
        gate_scorers: Option<(BoxedScorer, BoxedScorer)>,
    ) -> Result<Self> {
        cfg.validate()?;
        let active = cfg.active_stages();
        let mut missing = Vec::new();
        let url = UrlFilters::load(&cfg.url, &mut missing);
        let quality = DocQualityResources::load(&cfg.quality, &mut missing);
        let classes = if active.line_clean_extended {
            cfg.lines.classes
        } else {
            ClassToggles::from_fn(|c| c.is_core() && cfg.lines.classes.is_enabled(c))
        };
        let cleaner = LineCleaner::load(cfg.lines.clone(), &mut missing)?.with_classes(classes);
        let refset = match (&cfg.decontam.reference_path, active.decontamination) {
            (Some(p), true) => {
                if p.exists() {
                    Some(ReferenceSet::load(p, cfg.decontam.ngram_size)?)
                } else {
                    missing.push(p.display().to_string());
                    None
                }
            }
            _ => None,
        };
        let gate_scorers = match (gate_scorers, active.quality_gate) {
            (Some(s), _) => Some(s),
            (None, true) => load_scorers(&cfg.gate, &mut missing)?,
            (None, false) => None,
        };
        if !missing.is_empty() {
            return Err(CurateError::MissingResources(missing));
        }
        let mut rows = [None; 17];
        let mut next = 0u16;
        for (i, id) in StageId::ALL.iter().enumerate() {
            if id.is_active(&active) {
                rows[i] = Some(next);
                next += 1;
            }
        }
        Ok(Pipeline {
            removal_gate: WordRemovalGate {
                max_ratio: cfg.lines.word_removal_max_ratio,
            },
            lid: lid.unwrap_or_else(|| Box::new(StopwordLanguageScorer::default())),
            cfg,
            active,
            classes,
            rows,
            url,
            quality,
            cleaner,
            refset,
            gate_scorers,
        })
    }

    pub fn active_stages(&self) -> ActiveStages {
        self.active
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn empty_stats(&self) -> RunStats {
        RunStats::empty(self.cfg.preset, &self.active, &self.classes)
    }

    fn event(&self, id: StageId, criterion: &str, docs: u64, tokens: u64) -> Event {
        let row = self.rows[id as usize].expect("event for an inactive stage");
        let sub = id
            .criteria(&self.classes)
            .iter()
            .position(|c| *c == criterion)
            .unwrap_or_else(|| panic!("unknown criterion {criterion} for {}", id.name())) as u16;
        Event { row, sub, docs, tokens }
    }

    fn reject(&self, slot: &mut Slot, id: StageId, v: Verdict) -> bool {
        if let Verdict::Reject { stage, criterion } = v {
            slot.events.push(self.event(id, criterion, 1, slot.words));
            slot.fate = Fate::Rejected { stage, criterion };
            true
        } else {
            false
        }
    }

    /// Stages up to and including the word-removal gate.
    fn filter_document(&self, slot: &mut Slot) {
        let a = &self.active;
        if let Some(refset) = self.refset.as_ref().filter(|_| a.decontamination) {
            let outcome = screen(&slot.doc, refset, self.cfg.decontam.min_matches);
            let v = outcome.verdict();
            if outcome.is_contaminated() {
                slot.contamination = Some(outcome);
            }
            if self.reject(slot, StageId::Decontamination, v) {
                return;
            }
        }
        if a.url_blocklist {
            let v = check_blocklist(&slot.doc.url, &self.url.blocklist);
            if self.reject(slot, StageId::Blocklist, v) {
                return;
            }
        }
        if a.url_substring {
            let v = check_strict_substrings(&slot.doc.url, &self.url.strict);
            if self.reject(slot, StageId::StrictSubstring, v) {
                return;
            }
            let v = check_hard_substrings(&slot.doc.url, &self.url.hard);
            if self.reject(slot, StageId::HardSubstring, v) {
                return;
            }
            let v = check_soft_substrings(&slot.doc.url, &self.url.soft);
            if self.reject(slot, StageId::SoftSubstring, v) {
                return;
            }
        }
        if a.url_token_removal {
            // A URL inside a token can leave a remnant word, so recount.
            if strip_inline_urls(&mut slot.doc, &self.url.matcher) > 0 {
                let after = count_words(&slot.doc.text) as u64;
                let delta = slot.words - after;
                slot.words = after;
                slot.events
                    .push(self.event(StageId::UrlTokenRemoval, "UrlToken", 0, delta));
            }
        }
        if a.newline_normalization {
            let delta = normalize_document_newlines(&mut slot.doc) as u64;
            if delta > 0 {
                slot.words -= delta;
                slot.events
                    .push(self.event(StageId::NewlineNormalization, "ExcessNewlines", 0, delta));
            }
        }
        if a.language_id {
            let r = route(&slot.doc, &self.cfg.lid, self.lid.as_ref());
            if r.partition == Partition::Multilingual {
                slot.events
                    .push(self.event(StageId::LanguageId, "NonEnglish", 1, slot.words));
                slot.fate = Fate::Multilingual { score: r.score };
                return;
            }
        }
        let q = &self.cfg.quality;
        if a.gopher_quality {
            let v = gopher_quality(&slot.doc, &q.gopher, &self.quality.gopher_stop_words);
            if self.reject(slot, StageId::GopherQuality, v) {
                return;
            }
        }
        if a.nemo {
            let v = nemo(&slot.doc, &q.nemo, &self.url.matcher);
            if self.reject(slot, StageId::Nemo, v) {
                return;
            }
        }
        if a.gopher_repetition {
            let v = gopher_repetition(&slot.doc, &q.repetition);
            if self.reject(slot, StageId::GopherRepetition, v) {
                return;
            }
        }
        if a.badwords {
            let v = badwords_document_filter(&slot.doc, &self.quality.badwords);
            if self.reject(slot, StageId::Badwords, v) {
                return;
            }
        }
        if a.custom_quality {
            let v = custom_quality(&slot.doc, &q.custom, &self.quality.stop_words);
            if self.reject(slot, StageId::CustomQuality, v) {
                return;
            }
        }
        let w_pre = slot.words as usize;
        if a.line_clean {
            let out = clean_lines(&mut slot.doc, &self.cleaner);
            slot.words -= out.words_removed as u64;
            for (class, words) in out.words_by_class() {
                slot.events
                    .push(self.event(StageId::LineLevelQuality, class.name(), 0, words as u64));
            }
            if let Verdict::Reject { stage, criterion } = out.verdict {
                slot.events
                    .push(self.event(StageId::LineLevelQuality, criterion, 1, slot.words));
                slot.fate = Fate::Rejected { stage, criterion };
                return;
            }
        }
        if a.word_removal_ratio {
            let v = word_removal_gate(w_pre, slot.words as usize, &self.removal_gate);
            self.reject(slot, StageId::WordRemovalRatio, v);
        }
    }

    fn dedup_slot(&self, slot: &mut Slot, filter: &BloomFilter, acc: &mut DedupStats) {
        let before_words = slot.words;
        let before_bytes = slot.doc.text.len() as u64;
        let (outcome, counts) = dedup_document(&mut slot.doc, filter, &self.cfg.dedup.shingle);
        acc.documents_in += 1;
        acc.bytes_in += before_bytes;
        acc.words_in += before_words;
        acc.paragraphs_in += counts.paragraphs;
        acc.paragraphs_flagged += counts.paragraphs_flagged;
        match outcome {
            DedupOutcome::DroppedDocument { .. } => {
                acc.documents_dropped += 1;
                slot.events
                    .push(self.event(StageId::Dedup, "DuplicateDocument", 1, before_words));
                slot.fate = Fate::Rejected {
                    stage: STAGE_DEDUP,
                    criterion: "DuplicateDocument",
                };
            }
            DedupOutcome::Kept { paragraphs_flagged } => {
                if paragraphs_flagged > 0 {
                    slot.words = count_words(&slot.doc.text) as u64;
                }
                let after = slot.words;
                acc.documents_out += 1;
                acc.bytes_out += slot.doc.text.len() as u64;
                acc.words_out += after;
                if paragraphs_flagged > 0 {
                    acc.documents_pruned += 1;
                    if before_words > after {
                        slot.events
                            .push(self.event(StageId::Dedup, "DuplicateParagraph", 0, before_words - after));
                    }
                }
            }
        }
    }

    fn gate_slot(&self, slot: &mut Slot) {
        let (d, b) = self.gate_scorers.as_ref().expect("gate scorers loaded");
        let th = self.cfg.gate.thresholds();
        let decision = gate(&slot.doc, d.as_ref(), b.as_ref(), &th);
        let v = gate_verdict(&decision);
        if let Err(e) = &decision {
            log::warn!("quality gate failed on {}: {e}", slot.doc.id);
        }
        slot.gate = decision.ok();
        self.reject(slot, StageId::QualityGate, v);
    }

    /// Runs the pipeline over a stream of parsed records, handing outputs to
    /// `sink` in input order.
    pub fn run_records<I, S>(&self, records: I, sink: &mut S) -> Result<RunStats>
    where
        I: IntoIterator<Item = Result<Record>>,
        S: RecordSink,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.workers)
            .build()
            .map_err(|e| CurateError::Config(format!("worker pool: {e}")))?;
        let filter = if self.active.dedup {
            let n = self.cfg.dedup.expected_ngrams.unwrap_or(1);
            Some(BloomFilter::with_cap(
                self.cfg.dedup.fp_rate,
                n,
                self.cfg.dedup.memory_cap_bytes,
            )?)
        } else {
            None
        };
        let mut dedup_acc = DedupStats::default();
        let mut stats = self.empty_stats();
        let mut outcomes: Vec<(String, ScreenOutcome)> = Vec::new();
        let started = Instant::now();
        let mut bytes_in = 0u64;

        let mut iter = records.into_iter();
        loop {
            let mut batch: Vec<Slot> = Vec::with_capacity(self.cfg.batch_size);
            let mut failures: Vec<(u64, String)> = Vec::new();
            for rec in iter.by_ref() {
                match rec? {
                    Record::Doc(doc) => {
                        bytes_in += doc.text.len() as u64;
                        let words = count_words(&doc.text) as u64;
                        batch.push(Slot {
                            initial_tokens: words,
                            words,
                            doc,
                            fate: Fate::Kept,
                            events: Vec::new(),
                            contamination: None,
                            gate: None,
                        });
                        if batch.len() == self.cfg.batch_size {
                            break;
                        }
                    }
                    Record::ParseFailure { line, reason } => failures.push((line, reason)),
                }
            }
            for (line, reason) in &failures {
                log::warn!("skipping unparseable record at line {line}: {reason}");
                stats.parse_failures += 1;
                sink.parse_failure(*line, reason)?;
            }
            if batch.is_empty() {
                if failures.is_empty() {
                    break;
                }
                continue;
            }
            pool.install(|| batch.par_iter_mut().for_each(|s| self.filter_document(s)));
            if let Some(f) = &filter {
                if self.cfg.dedup.deterministic || self.cfg.deterministic {
                    for s in batch.iter_mut().filter(|s| s.fate == Fate::Kept) {
                        self.dedup_slot(s, f, &mut dedup_acc);
                    }
                } else {
                    let accs: Vec<DedupStats> = pool.install(|| {
                        batch
                            .par_iter_mut()
                            .filter(|s| s.fate == Fate::Kept)
                            .map(|s| {
                                let mut a = DedupStats::default();
                                self.dedup_slot(s, f, &mut a);
                                a
                            })
                            .collect()
                    });
                    for a in accs {
                        add_dedup_counts(&mut dedup_acc, &a);
                    }
                }
            }
            if self.active.quality_gate {
                pool.install(|| {
                    batch
                        .par_iter_mut()
                        .filter(|s| s.fate == Fate::Kept)
                        .for_each(|s| self.gate_slot(s))
                });
            }
            for s in &batch {
                stats.initial_docs += 1;
                stats.initial_tokens += s.initial_tokens;
                for e in &s.events {
                    stats.record(e);
                }
                if let Some(o) = &s.contamination {
                    outcomes.push((s.doc.id.clone(), o.clone()));
                }
                if let Some(g) = &s.gate {
                    sink.gate_scores(&s.doc.id, g)?;
                }
                match &s.fate {
                    Fate::Kept => {
                        stats.retained_docs += 1;
                        stats.retained_tokens += s.words;
                        sink.kept(&s.doc, s.gate.as_ref())?;
                    }
                    Fate::Rejected { stage, criterion } => sink.rejected(&s.doc, stage, criterion)?,
                    Fate::Multilingual { score } => {
                        stats.multilingual_docs += 1;
                        stats.multilingual_tokens += s.words;
                        sink.multilingual(&s.doc, *score)?;
                    }
                }
            }
        }
        stats.finish();
        if let Some(f) = &filter {
            dedup_acc.m_bits = f.m_bits();
            dedup_acc.k = f.k();
            dedup_acc.fp_rate = f.fp_rate();
            dedup_acc.expected_ngrams = f.expected();
            dedup_acc.filter_bytes = f.size_bytes();
            dedup_acc.inserted = f.inserted();
            dedup_acc.set_bits = f.set_bits();
            dedup_acc.sparsity = f.sparsity();
            stats.dedup = Some(dedup_acc);
        }
        if let Some(r) = &self.refset {
            stats.contamination = Some(ContaminationReport::from_outcomes(
                r,
                outcomes.iter().map(|(id, o)| (id.as_str(), o)),
            ));
        }
        let secs = started.elapsed().as_secs_f64().max(1e-9);
        log::info!(
            "processed {} documents ({:.1} MB) in {:.2}s: {:.0} docs/s, {:.1} MB/s; retained {:.2}% of tokens",
            stats.initial_docs,
            bytes_in as f64 / 1e6,
            secs,
            stats.initial_docs as f64 / secs,
            bytes_in as f64 / 1e6 / secs,
            stats.retention_pct
        );
        debug_assert!(stats.telescopes());
        Ok(stats)
    }

    /// In-memory convenience wrapper around [`Pipeline::run_records`].
    pub fn run_documents(&self, docs: Vec<Document>) -> Result<(RunStats, MemorySink)> {
        let mut sink = MemorySink::default();
        let stats = self.run_records(docs.into_iter().map(|d| Ok(Record::Doc(d))), &mut sink)?;
        Ok((stats, sink))
    }

    /// Reads every input file in order and writes kept, rejected,
    /// multilingual and stats outputs to `output_dir`.
    pub fn run_files(&self, inputs: &[PathBuf], output_dir: &Path) -> Result<RunStats> {
        let mut sink = FileSink::create(output_dir, self.active.quality_gate && self.cfg.gate.scores_sidecar)?;
        let mut readers = Vec::with_capacity(inputs.len());
        for p in inputs {
            readers.push(open_input(p)?);
        }
        let records = readers.into_iter().flat_map(read_jsonl);
        let stats = self.run_records(records, &mut sink)?;
        sink.flush()?;
        write_stats(&stats, output_dir)?;
        Ok(stats)
    }
}

fn add_dedup_counts(acc: &mut DedupStats, a: &DedupStats) {
    acc.documents_in += a.documents_in;
    acc.documents_out += a.documents_out;
    acc.documents_dropped += a.documents_dropped;
    acc.documents_pruned += a.documents_pruned;
    acc.paragraphs_in += a.paragraphs_in;
    acc.paragraphs_flagged += a.paragraphs_flagged;
    acc.bytes_in += a.bytes_in;
    acc.bytes_out += a.bytes_out;
    acc.words_in += a.words_in;
    acc.words_out += a.words_out;
}

/// Writes `stats.json` and `stats.txt`, plus the contamination report when
/// present.
pub fn write_stats(stats: &RunStats, dir: &Path) -> Result<()> {
    let write = |name: &str, body: &str| {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(|e| CurateError::resource(p, e))
    };
    write(STATS_JSON_FILE, &(serde_json::to_string_pretty(stats)? + "\n"))?;
    write(STATS_TEXT_FILE, &render_stats_table(stats))?;
    if let Some(c) = &stats.contamination {
        write(CONTAMINATION_JSON_FILE, &(serde_json::to_string_pretty(c)? + "\n"))?;
        write(CONTAMINATION_TEXT_FILE, &c.render_table())?;
    }
    Ok(())
}

/// Builds the pipeline from `cfg` and runs it over the configured inputs.
pub fn run(cfg: &PipelineConfig) -> Result<RunStats> {
    let out = cfg
        .output_dir
        .clone()
        .ok_or_else(|| CurateError::Config("output_dir is required".into()))?;
    if cfg.inputs.is_empty() {
        return Err(CurateError::Config("no input files given".into()));
    }
    let p = Pipeline::from_config(cfg.clone())?;
    p.run_files(&cfg.inputs, &out)
}
