//! Line-level excision of boilerplate and the word-removal integrity gate.
//!
//! Lines are classified independently: a line matching any enabled class is
//! deleted whole and attributed to the first matching class in
//! [`LineClass::ALL`] order. Blank lines are kept as separators and are never
//! classified. A document left with no non-blank line is rejected.

use std::cell::OnceCell;
use std::path::PathBuf;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{count_words, Document, Verdict};
use crate::error::{CurateError, Result};
use crate::urlstage::load_list;

pub const STAGE_LINE_CLEAN: &str = "line_level_quality";
pub const STAGE_WORD_REMOVAL: &str = "word_removal_ratio";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineClass {
    LineLength,
    UppercaseRatio,
    NumericRatio,
    CounterLine,
    SubstringModifier,
    CodeArtifact,
    Navigation,
    CookieBanner,
    SocialCTA,
    FormElement,
    Timestamp,
}

impl LineClass {
    pub const ALL: [LineClass; 11] = [
        LineClass::LineLength,
        LineClass::UppercaseRatio,
        LineClass::NumericRatio,
        LineClass::CounterLine,
        LineClass::SubstringModifier,
        LineClass::CodeArtifact,
        LineClass::Navigation,
        LineClass::CookieBanner,
        LineClass::SocialCTA,
        LineClass::FormElement,
        LineClass::Timestamp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LineClass::LineLength => "LineLength",
            LineClass::UppercaseRatio => "UppercaseRatio",
            LineClass::NumericRatio => "NumericRatio",
            LineClass::CounterLine => "CounterLine",
            LineClass::SubstringModifier => "SubstringModifier",
            LineClass::CodeArtifact => "CodeArtifact",
            LineClass::Navigation => "Navigation",
            LineClass::CookieBanner => "CookieBanner",
            LineClass::SocialCTA => "SocialCTA",
            LineClass::FormElement => "FormElement",
            LineClass::Timestamp => "Timestamp",
        }
    }

    /// The five classes of the basic line cleaner; the other six are the
    /// extended set.
    pub fn is_core(self) -> bool {
        matches!(
            self,
            LineClass::LineLength
                | LineClass::UppercaseRatio
                | LineClass::NumericRatio
                | LineClass::CounterLine
                | LineClass::SubstringModifier
        )
    }
}

/// Per-class enable flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassToggles {
    pub line_length: bool,
    pub uppercase_ratio: bool,
    pub numeric_ratio: bool,
    pub counter_line: bool,
    pub substring_modifier: bool,
    pub code_artifact: bool,
    pub navigation: bool,
    pub cookie_banner: bool,
    pub social_cta: bool,
    pub form_element: bool,
    pub timestamp: bool,
}

impl Default for ClassToggles {
    fn default() -> Self {
        Self::all()
    }
}

impl ClassToggles {
    pub fn all() -> Self {
        Self::from_fn(|_| true)
    }

    pub fn core_only() -> Self {
        Self::from_fn(LineClass::is_core)
    }

    pub fn none() -> Self {
        Self::from_fn(|_| false)
    }

    pub fn from_fn(f: impl Fn(LineClass) -> bool) -> Self {
        ClassToggles {
            line_length: f(LineClass::LineLength),
            uppercase_ratio: f(LineClass::UppercaseRatio),
            numeric_ratio: f(LineClass::NumericRatio),
            counter_line: f(LineClass::CounterLine),
            substring_modifier: f(LineClass::SubstringModifier),
            code_artifact: f(LineClass::CodeArtifact),
            navigation: f(LineClass::Navigation),
            cookie_banner: f(LineClass::CookieBanner),
            social_cta: f(LineClass::SocialCTA),
            form_element: f(LineClass::FormElement),
            timestamp: f(LineClass::Timestamp),
        }
    }

    pub fn is_enabled(&self, class: LineClass) -> bool {
        match class {
            LineClass::LineLength => self.line_length,
            LineClass::UppercaseRatio => self.uppercase_ratio,
            LineClass::NumericRatio => self.numeric_ratio,
            LineClass::CounterLine => self.counter_line,
            LineClass::SubstringModifier => self.substring_modifier,
            LineClass::CodeArtifact => self.code_artifact,
            LineClass::Navigation => self.navigation,
            LineClass::CookieBanner => self.cookie_banner,
            LineClass::SocialCTA => self.social_cta,
            LineClass::FormElement => self.form_element,
            LineClass::Timestamp => self.timestamp,
        }
    }

    pub fn enabled(&self) -> impl Iterator<Item = LineClass> + '_ {
        LineClass::ALL.into_iter().filter(|c| self.is_enabled(*c))
    }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineHeuristicConfig {
    pub classes: ClassToggles,
    pub min_words_per_line: usize,
    pub max_uppercase_ratio: f64,
    pub max_numeric_ratio: f64,
    pub engagement_terms: Vec<String>,
    pub marker_phrases: Vec<String>,
    pub marker_max_words: usize,
    pub code_prefixes: Vec<String>,
    pub breadcrumb_separators: Vec<String>,
    pub breadcrumb_min_segments: usize,
    pub breadcrumb_max_words: usize,
    pub breadcrumb_max_segment_words: usize,
    pub cookie_phrases: Vec<String>,
    pub cookie_min_matches: usize,
    pub social_cta_prefixes: Vec<String>,
    pub form_labels: Vec<String>,
    pub marker_phrases_path: Option<PathBuf>,
    pub cookie_phrases_path: Option<PathBuf>,
    pub social_cta_path: Option<PathBuf>,
    pub form_labels_path: Option<PathBuf>,
    pub word_removal_max_ratio: f64,
}

impl Default for LineHeuristicConfig {
    fn default() -> Self {
        LineHeuristicConfig {
            classes: ClassToggles::all(),
            min_words_per_line: 2,
            max_uppercase_ratio: 0.50,
            max_numeric_ratio: 0.999999,
            engagement_terms: strings(&[
                "likes",
                "shares",
                "comments",
                "retweets",
                "reposts",
                "quotes",
                "bookmarks",
                "upvotes",
                "downvotes",
                "downloads",
                "views",
                "followers",
            ]),
            marker_phrases: strings(&[
                "items in cart",
                "read more",
                "sign-in",
                "sign in",
                "log in",
                "add to cart",
                "skip to content",
                "click here",
                "all rights reserved",
                "back to top",
            ]),
            marker_max_words: 10,
            code_prefixes: strings(&[
                "function(",
                "function",
                "var",
                "let",
                "const",
                "$.",
                "$(",
                "@media",
                "=>",
            ]),
            breadcrumb_separators: strings(&[">", "»", "/", "|"]),
            breadcrumb_min_segments: 2,
            breadcrumb_max_words: 10,
            breadcrumb_max_segment_words: 4,
            cookie_phrases: strings(&["cookie", "gdpr", "consent"]),
            cookie_min_matches: 2,
            social_cta_prefixes: strings(&["follow us", "subscribe now", "share this", "like us on", "join us on"]),
            form_labels: strings(&[
                "username",
                "password",
                "email address",
                "email",
                "submit",
                "register",
                "remember me",
                "forgot password?",
                "confirm password",
            ]),
            marker_phrases_path: None,
            cookie_phrases_path: None,
            social_cta_path: None,
            form_labels_path: None,
            word_removal_max_ratio: 0.05,
        }
    }
}

impl LineHeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.word_removal_max_ratio > 0.0 && self.word_removal_max_ratio < 1.0) {
            return Err(CurateError::Config(format!(
                "word_removal_max_ratio must lie in (0, 1), got {}",
                self.word_removal_max_ratio
            )));
        }
        if self.cookie_min_matches == 0 || self.breadcrumb_min_segments < 2 {
            return Err(CurateError::Config("line heuristic minimums must be positive".into()));
        }
        Ok(())
    }
}

/// Compiled line classifier.
#[derive(Debug, Clone)]
pub struct LineCleaner {
    cfg: LineHeuristicConfig,
    counter: Regex,
    timestamp: Regex,
    markers: Vec<String>,
    cookies: Vec<String>,
    ctas: Vec<String>,
    forms: Vec<String>,
}

impl Default for LineCleaner {
    fn default() -> Self {
        Self::new(LineHeuristicConfig::default()).expect("default line cleaner")
    }
}

fn lower_all(v: &[String]) -> Vec<String> {
    v.iter()
        .map(|s| s.trim().to_lowercase())
        .filter(|s| !s.is_empty())
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
struct CharStats {
    upper: usize,
    lower: usize,
    numeric: usize,
    non_ws: usize,
}

/// A trimmed line with features shared across classes, computed once.
struct LineView<'a> {
    trimmed: &'a str,
    words: usize,
    starts_numeric: bool,
    lower: OnceCell<String>,
    stats: OnceCell<CharStats>,
}

impl<'a> LineView<'a> {
    fn new(line: &'a str) -> Self {
        let trimmed = line.trim();
        LineView {
            trimmed,
            words: count_words(trimmed),
            starts_numeric: trimmed.chars().next().is_some_and(char::is_numeric),
            lower: OnceCell::new(),
            stats: OnceCell::new(),
        }
    }

    fn stats(&self) -> CharStats {
        *self.stats.get_or_init(|| {
            let mut s = CharStats::default();
            for c in self.trimmed.chars() {
                if c.is_whitespace() {
                    continue;
                }
                s.non_ws += 1;
                if c.is_uppercase() {
                    s.upper += 1;
                } else if c.is_lowercase() {
                    s.lower += 1;
                }
                if c.is_numeric() {
                    s.numeric += 1;
                }
            }
            s
        })
    }

    fn lower(&self) -> &str {
        self.lower.get_or_init(|| self.trimmed.to_lowercase())
    }
}

impl LineCleaner {
    pub fn new(cfg: LineHeuristicConfig) -> Result<Self> {
        cfg.validate()?;
        let terms = cfg
            .engagement_terms
            .iter()
            .map(|t| regex::escape(&t.to_lowercase()))
            .collect::<Vec<_>>()
            .join("|");
        let counter = Regex::new(&format!(
            r"(?i)^(?:[0-9][0-9,.]*\s*[kmb]?\s+(?:{terms})\b[\s·•|,.:;-]*)+$"
        ))
        .map_err(|e| CurateError::Config(e.to_string()))?;
        let time = r"\d{1,2}:\d{2}(?::\d{2})?\s*(?:[AaPp]\.?[Mm]\.?)?";
        let timestamp = Regex::new(&format!(
            r"^(?:(?:\d{{1,2}}/\d{{1,2}}/\d{{4}}|\d{{4}}-\d{{2}}-\d{{2}})(?:[ T,]+{time})?|{time})$"
        ))
        .map_err(|e| CurateError::Config(e.to_string()))?;
        Ok(LineCleaner {
            markers: lower_all(&cfg.marker_phrases),
            cookies: lower_all(&cfg.cookie_phrases),
            ctas: lower_all(&cfg.social_cta_prefixes),
            forms: lower_all(&cfg.form_labels),
            cfg,
            counter,
            timestamp,
        })
    }

    /// Loads phrase lists from their configured paths, replacing the inline
    /// defaults. Unreadable paths are appended to `missing`.
    pub fn load(mut cfg: LineHeuristicConfig, missing: &mut Vec<String>) -> Result<Self> {
        let mut read = |p: &Option<PathBuf>, into: &mut Vec<String>| {
            if let Some(p) = p {
                match load_list(p) {
                    Ok(v) => *into = v,
                    Err(_) => missing.push(p.display().to_string()),
                }
            }
        };
        let (mp, cp, sp, fp) = (
            cfg.marker_phrases_path.clone(),
            cfg.cookie_phrases_path.clone(),
            cfg.social_cta_path.clone(),
            cfg.form_labels_path.clone(),
        );
        read(&mp, &mut cfg.marker_phrases);
        read(&cp, &mut cfg.cookie_phrases);
        read(&sp, &mut cfg.social_cta_prefixes);
        read(&fp, &mut cfg.form_labels);
        Self::new(cfg)
    }

    pub fn config(&self) -> &LineHeuristicConfig {
        &self.cfg
    }

    pub fn with_classes(mut self, classes: ClassToggles) -> Self {
        self.cfg.classes = classes;
        self
    }

    pub fn matches(&self, class: LineClass, line: &str) -> bool {
        self.matches_view(class, &LineView::new(line))
    }

    fn matches_view(&self, class: LineClass, v: &LineView) -> bool {
        let trimmed = v.trimmed;
        match class {
            LineClass::LineLength => v.words < self.cfg.min_words_per_line,
            LineClass::UppercaseRatio => {
                let s = v.stats();
                s.upper + s.lower > 0 && s.upper as f64 / (s.upper + s.lower) as f64 > self.cfg.max_uppercase_ratio
            }
            LineClass::NumericRatio => {
                let s = v.stats();
                s.non_ws > 0 && s.numeric as f64 / s.non_ws as f64 > self.cfg.max_numeric_ratio
            }
            LineClass::CounterLine => v.starts_numeric && self.counter.is_match(trimmed),
            LineClass::SubstringModifier => {
                v.words <= self.cfg.marker_max_words && {
                    let lower = v.lower();
                    self.markers.iter().any(|m| lower.contains(m.as_str()))
                }
            }
            LineClass::CodeArtifact => self.is_code(trimmed),
            LineClass::Navigation => self.is_breadcrumb(trimmed),
            LineClass::CookieBanner => {
                let lower = v.lower();
                self.cookies.iter().filter(|p| lower.contains(p.as_str())).count() >= self.cfg.cookie_min_matches
            }
            LineClass::SocialCTA => {
                let lower = v.lower();
                self.ctas.iter().any(|p| {
                    lower.starts_with(p.as_str())
                        && lower[p.len()..].chars().next().is_none_or(|c| !c.is_alphanumeric())
                })
            }
            LineClass::FormElement => {
                let label = v.lower().trim_end_matches([':', '*', ' ']);
                self.forms.iter().any(|f| f == label)
            }
            LineClass::Timestamp => v.starts_numeric && self.timestamp.is_match(trimmed),
        }
    }

    /// Keyword prefixes (`var`, `let`, `const`, `function`) must end at a word
    /// boundary and the line must carry code punctuation; symbolic prefixes
    /// match on their own.
    fn is_code(&self, line: &str) -> bool {
        self.cfg.code_prefixes.iter().any(|p| {
            let Some(rest) = line.strip_prefix(p.as_str()) else {
                return false;
            };
            if p.chars().all(|c| c.is_ascii_alphabetic()) {
                rest.starts_with([' ', '\t', '('])
                    && rest
                        .trim_start()
                        .starts_with(|c: char| c.is_alphabetic() || c == '_' || c == '$' || c == '(')
                    && line.contains(['=', ';', '{', '}', '('])
            } else {
                true
            }
        })
    }

    /// Standalone separator tokens split the line into at least the minimum
    /// number of short, non-empty segments.
    fn is_breadcrumb(&self, line: &str) -> bool {
        let mut segments: Vec<usize> = vec![0];
        let mut words = 0;
        let mut separators = 0;
        for tok in line.split_whitespace() {
            if self.cfg.breadcrumb_separators.iter().any(|s| s == tok) {
                separators += 1;
                segments.push(0);
            } else {
                words += 1;
                if words > self.cfg.breadcrumb_max_words {
                    return false;
                }
                *segments.last_mut().unwrap() += 1;
            }
        }
        if separators == 0 || words > self.cfg.breadcrumb_max_words {
            return false;
        }
        let nonempty: Vec<usize> = segments.into_iter().filter(|&w| w > 0).collect();
        nonempty.len() >= self.cfg.breadcrumb_min_segments
            && nonempty.iter().all(|&w| w <= self.cfg.breadcrumb_max_segment_words)
    }

    /// First enabled class matching a non-blank line.
    pub fn classify(&self, line: &str) -> Option<LineClass> {
        let view = LineView::new(line);
        if view.trimmed.is_empty() {
            return None;
        }
        self.cfg.classes.enabled().find(|c| self.matches_view(*c, &view))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedLine {
    pub index: usize,
    pub class: LineClass,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanOutcome {
    pub removed: Vec<RemovedLine>,
    pub words_removed: usize,
    /// `Modified` when lines were excised, `Reject` when nothing non-blank
    /// is left, `Keep` otherwise.
    pub verdict: Verdict,
}

impl CleanOutcome {
    pub fn words_by_class(&self) -> impl Iterator<Item = (LineClass, usize)> + '_ {
        LineClass::ALL.into_iter().filter_map(|c| {
            let w: usize = self.removed.iter().filter(|r| r.class == c).map(|r| r.words).sum();
            self.removed.iter().any(|r| r.class == c).then_some((c, w))
        })
    }
}

pub fn clean_lines(doc: &mut Document, cleaner: &LineCleaner) -> CleanOutcome {
    let mut removed = Vec::new();
    let mut kept: Vec<&str> = Vec::new();
    let mut any_content = false;
    for (index, line) in doc.text.split('\n').enumerate() {
        match cleaner.classify(line) {
            Some(class) => removed.push(RemovedLine {
                index,
                class,
                words: count_words(line),
            }),
            None => {
                any_content |= !line.trim().is_empty();
                kept.push(line);
            }
        }
    }
    let words_removed = removed.iter().map(|r| r.words).sum();
    let verdict = if !any_content {
        Verdict::reject(STAGE_LINE_CLEAN, "EmptyAfterClean")
    } else if removed.is_empty() {
        Verdict::Keep
    } else {
        Verdict::Modified {
            stage: STAGE_LINE_CLEAN,
            words_removed,
        }
    };
    if !removed.is_empty() {
        let text = kept.join("\n");
        doc.text = text;
    }
    CleanOutcome {
        removed,
        words_removed,
        verdict,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordRemovalGate {
    pub max_ratio: f64,
}

impl Default for WordRemovalGate {
    fn default() -> Self {
        WordRemovalGate { max_ratio: 0.05 }
    }
}

pub fn removal_ratio(w_pre: usize, w_post: usize) -> Option<f64> {
    (w_pre > 0).then(|| (w_pre.saturating_sub(w_post)) as f64 / w_pre as f64)
}

/// Rejects when the fraction of words removed exceeds the maximum. An empty
/// pre-cleaning document cannot be certified and is rejected.
pub fn word_removal_gate(w_pre: usize, w_post: usize, gate: &WordRemovalGate) -> Verdict {
    match removal_ratio(w_pre, w_post) {
        Some(rho) if rho <= gate.max_ratio => Verdict::Keep,
        _ => Verdict::reject(STAGE_WORD_REMOVAL, "WordRemovalRatio"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(line: &str) -> Option<LineClass> {
        LineCleaner::default().classify(line)
    }

    #[test]
    fn table_examples() {
        assert_eq!(class("Read more..."), Some(LineClass::SubstringModifier));
        assert_eq!(class("12K likes"), Some(LineClass::CounterLine));
        assert_eq!(class("Home > Products > Shoes"), Some(LineClass::Navigation));
        let prose = "The committee met on Tuesday to review the proposal, and after a long discussion about \
                     budgets, schedules, and the concerns raised by residents of the northern district, it voted \
                     to postpone the decision until more information about the environmental impact could be \
                     gathered from independent experts and the public had a further chance to comment on it.";
        assert!(count_words(prose) >= 50);
        for c in LineClass::ALL {
            assert!(!LineCleaner::default().matches(c, prose), "{c:?}");
        }
    }

    #[test]
    fn uppercase_boundary() {
        assert_eq!(class("BREAKING NEWS TODAY"), Some(LineClass::UppercaseRatio));
        // 4 upper, 4 lower cased characters
        assert_eq!(class("ABcd EFgh"), None);
    }

    #[test]
    fn clean_removes_and_rejects() {
        let mut d = Document::new(
            "x",
            "",
            "Home > News\nA real sentence with several words in it.\n\nFollow us on Twitter",
        );
        let out = clean_lines(&mut d, &LineCleaner::default());
        assert_eq!(d.text, "A real sentence with several words in it.\n");
        assert_eq!(out.words_removed, 3 + 4);
        assert!(matches!(out.verdict, Verdict::Modified { words_removed: 7, .. }));

        let mut d = Document::new("y", "", "Submit\n\nPassword");
        let out = clean_lines(&mut d, &LineCleaner::default());
        assert_eq!(out.verdict, Verdict::reject(STAGE_LINE_CLEAN, "EmptyAfterClean"));
    }

    #[test]
    fn gate_boundaries() {
        let g = WordRemovalGate::default();
        assert_eq!(word_removal_gate(100, 96, &g), Verdict::Keep);
        assert!(word_removal_gate(100, 94, &g).is_reject());
        assert_eq!(word_removal_gate(100, 95, &g), Verdict::Keep);
        assert!(word_removal_gate(0, 0, &g).is_reject());
    }

    #[test]
    fn core_toggle_disables_extended() {
        let c = LineCleaner::default().with_classes(ClassToggles::core_only());
        assert_eq!(c.classify("Home > Products > Shoes"), None);
        assert_eq!(c.classify("12K likes"), Some(LineClass::CounterLine));
        assert_eq!(ClassToggles::core_only().enabled().count(), 5);
    }
}
