//! Document-level quality gates. Each gate evaluates its criteria in a fixed
//! order and attributes a rejection to the first criterion that fails.

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::LazyLock;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::corpus::{split_words, Document, Verdict};
use crate::error::{CurateError, Result};
use crate::urlstage::{load_list, UrlMatcher};

pub const STAGE_GOPHER_QUALITY: &str = "gopher_quality";
pub const STAGE_NEMO: &str = "nemo";
pub const STAGE_GOPHER_REPETITION: &str = "gopher_repetition";
pub const STAGE_CUSTOM_QUALITY: &str = "custom_quality";
pub const STAGE_BADWORDS: &str = "badwords";

pub const GOPHER_CRITERIA: [&str; 8] = [
    "TooFewWords",
    "TooManyWords",
    "AvgWordLen",
    "SymbolWordRatio",
    "BulletLineRatio",
    "EllipsisLineRatio",
    "AlphaWordsRatio",
    "TooFewStopWords",
];
pub const NEMO_CRITERIA: [&str; 5] = [
    "NonAlphaNumericRatio",
    "NumericRatio",
    "UrlRatio",
    "WhitespaceRatio",
    "ParenthesesRatio",
];
pub const REPETITION_CRITERIA: [&str; 6] = [
    "DupLineFrac",
    "DupLineCharFrac",
    "DupParFrac",
    "DupParCharFrac",
    "TopNGramCharFrac",
    "DupNGramCharFrac",
];
pub const CUSTOM_CRITERIA: [&str; 3] = ["TooFewTokens", "StopWordRatio", "UnclosedBracketRatio"];
pub const BADWORDS_CRITERIA: [&str; 1] = ["Badword"];

/// Classic eight-word list used for the minimum stop-word count.
pub const GOPHER_STOP_WORDS: [&str; 8] = ["the", "be", "to", "of", "and", "that", "have", "with"];

/// General English function words, used for the stop-word ratio.
pub const ENGLISH_STOP_WORDS: &[&str] = &[
    "a",
    "about",
    "above",
    "after",
    "again",
    "against",
    "all",
    "also",
    "am",
    "an",
    "and",
    "any",
    "are",
    "as",
    "at",
    "be",
    "because",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "can",
    "could",
    "did",
    "do",
    "does",
    "doing",
    "down",
    "during",
    "each",
    "even",
    "few",
    "for",
    "from",
    "further",
    "get",
    "got",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "here",
    "hers",
    "herself",
    "him",
    "himself",
    "his",
    "how",
    "i",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "itself",
    "just",
    "like",
    "made",
    "make",
    "many",
    "may",
    "me",
    "might",
    "more",
    "most",
    "much",
    "must",
    "my",
    "myself",
    "no",
    "nor",
    "not",
    "now",
    "of",
    "off",
    "on",
    "once",
    "one",
    "only",
    "or",
    "other",
    "our",
    "ours",
    "ourselves",
    "out",
    "over",
    "own",
    "said",
    "same",
    "she",
    "should",
    "so",
    "some",
    "still",
    "such",
    "than",
    "that",
    "the",
    "their",
    "theirs",
    "them",
    "themselves",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "through",
    "to",
    "too",
    "two",
    "under",
    "until",
    "up",
    "upon",
    "us",
    "very",
    "was",
    "way",
    "we",
    "well",
    "were",
    "what",
    "when",
    "where",
    "which",
    "while",
    "who",
    "whom",
    "why",
    "will",
    "with",
    "would",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
];

static ENGLISH_SET: LazyLock<StopWords> = LazyLock::new(|| StopWords::new(ENGLISH_STOP_WORDS.iter().copied()));

/// English stop-word test against the shared built-in list.
pub fn is_english_stop_word(word: &str) -> bool {
    ENGLISH_SET.contains_word(word)
}

#[derive(Debug, Clone, Default)]
pub struct StopWords(FxHashSet<String>);

impl StopWords {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopWords(words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect())
    }

    pub fn gopher() -> Self {
        Self::new(GOPHER_STOP_WORDS)
    }

    pub fn english() -> Self {
        ENGLISH_SET.clone()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Matches a raw word after lowercasing and trimming edge punctuation.
    pub fn contains_word(&self, word: &str) -> bool {
        let w = word.trim_matches(|c: char| !c.is_alphanumeric());
        if w.is_empty() {
            return false;
        }
        if w.bytes().all(|b| !b.is_ascii_uppercase()) {
            self.0.contains(w)
        } else if w.len() <= 32 && w.is_ascii() {
            // Lowercase on the stack; stop words are short.
            let mut buf = [0u8; 32];
            let lower = &mut buf[..w.len()];
            lower.copy_from_slice(w.as_bytes());
            lower.make_ascii_lowercase();
            std::str::from_utf8(lower).is_ok_and(|l| self.0.contains(l))
        } else {
            self.0.contains(&w.to_lowercase())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GopherQualityThresholds {
    pub min_words: usize,
    pub max_words: usize,
    pub min_mean_word_len: f64,
    pub max_mean_word_len: f64,
    pub max_symbol_word_ratio: f64,
    pub max_bullet_line_ratio: f64,
    pub max_ellipsis_line_ratio: f64,
    pub min_alpha_word_ratio: f64,
    pub min_stop_words: usize,
}

impl Default for GopherQualityThresholds {
    fn default() -> Self {
        GopherQualityThresholds {
            min_words: 50,
            max_words: 100_000,
            min_mean_word_len: 3.0,
            max_mean_word_len: 10.0,
            max_symbol_word_ratio: 0.10,
            max_bullet_line_ratio: 0.90,
            max_ellipsis_line_ratio: 0.30,
            min_alpha_word_ratio: 0.80,
            min_stop_words: 2,
        }
    }
}

fn check_ratio(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CurateError::Config(format!("{name} must lie in [0, 1], got {v}")))
    }
}

impl GopherQualityThresholds {
    pub fn validate(&self) -> Result<()> {
        if self.min_words > self.max_words || self.min_mean_word_len > self.max_mean_word_len {
            return Err(CurateError::Config("gopher quality min exceeds max".into()));
        }
        check_ratio("max_symbol_word_ratio", self.max_symbol_word_ratio)?;
        check_ratio("max_bullet_line_ratio", self.max_bullet_line_ratio)?;
        check_ratio("max_ellipsis_line_ratio", self.max_ellipsis_line_ratio)?;
        check_ratio("min_alpha_word_ratio", self.min_alpha_word_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NemoThresholds {
    pub max_non_alnum_ratio: f64,
    pub max_numeric_ratio: f64,
    pub max_url_char_ratio: f64,
    pub max_whitespace_ratio: f64,
    pub max_paren_ratio: f64,
}

impl Default for NemoThresholds {
    fn default() -> Self {
        NemoThresholds {
            max_non_alnum_ratio: 0.25,
            max_numeric_ratio: 0.15,
            max_url_char_ratio: 0.20,
            max_whitespace_ratio: 0.25,
            max_paren_ratio: 0.10,
        }
    }
}

impl NemoThresholds {
    pub fn validate(&self) -> Result<()> {
        check_ratio("max_non_alnum_ratio", self.max_non_alnum_ratio)?;
        check_ratio("max_numeric_ratio", self.max_numeric_ratio)?;
        check_ratio("max_url_char_ratio", self.max_url_char_ratio)?;
        check_ratio("max_whitespace_ratio", self.max_whitespace_ratio)?;
        check_ratio("max_paren_ratio", self.max_paren_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepetitionThresholds {
    pub dup_line_frac: f64,
    pub dup_line_char_frac: f64,
    pub dup_para_frac: f64,
    pub dup_para_char_frac: f64,
    /// n = 2, 3, 4
    pub top_ngram_char_frac: [f64; 3],
    /// n = 5 ..= 10
    pub dup_ngram_char_frac: [f64; 6],
}

impl Default for RepetitionThresholds {
    fn default() -> Self {
        RepetitionThresholds {
            dup_line_frac: 0.30,
            dup_line_char_frac: 0.20,
            dup_para_frac: 0.30,
            dup_para_char_frac: 0.20,
            top_ngram_char_frac: [0.20, 0.18, 0.16],
            dup_ngram_char_frac: [0.15, 0.14, 0.13, 0.12, 0.11, 0.10],
        }
    }
}

impl RepetitionThresholds {
    pub fn metric_count(&self) -> usize {
        4 + self.top_ngram_char_frac.len() + self.dup_ngram_char_frac.len()
    }

    pub fn validate(&self) -> Result<()> {
        for v in [
            self.dup_line_frac,
            self.dup_line_char_frac,
            self.dup_para_frac,
            self.dup_para_char_frac,
        ]
        .iter()
        .chain(&self.top_ngram_char_frac)
        .chain(&self.dup_ngram_char_frac)
        {
            check_ratio("repetition threshold", *v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CustomQualityThresholds {
    pub min_tokens: usize,
    pub min_stop_word_ratio: f64,
    pub max_unclosed_bracket_ratio: f64,
}

impl Default for CustomQualityThresholds {
    fn default() -> Self {
        CustomQualityThresholds {
            min_tokens: 50,
            min_stop_word_ratio: 0.20,
            max_unclosed_bracket_ratio: 0.05,
        }
    }
}

impl CustomQualityThresholds {
    pub fn validate(&self) -> Result<()> {
        check_ratio("min_stop_word_ratio", self.min_stop_word_ratio)?;
        check_ratio("max_unclosed_bracket_ratio", self.max_unclosed_bracket_ratio)
    }
}

fn is_bullet_line(line: &str) -> bool {
    line.trim_start().starts_with(['•', '-', '*', '‣', '▪'])
}

fn is_ellipsis_line(line: &str) -> bool {
    let l = line.trim_end();
    l.ends_with("...") || l.ends_with('…')
}

/// Symbol occurrences for the symbol-to-word ratio: `#`, `...` and `…`.
pub fn symbol_count(text: &str) -> usize {
    text.matches('#').count() + text.matches("...").count() + text.matches('…').count()
}

pub fn gopher_quality(doc: &Document, th: &GopherQualityThresholds, stop_words: &StopWords) -> Verdict {
    match gopher_quality_failure(&doc.text, th, stop_words) {
        Some(c) => Verdict::reject(STAGE_GOPHER_QUALITY, c),
        None => Verdict::Keep,
    }
}

pub fn gopher_quality_failure(
    text: &str,
    th: &GopherQualityThresholds,
    stop_words: &StopWords,
) -> Option<&'static str> {
    let words: Vec<&str> = split_words(text).collect();
    let n = words.len();
    if n < th.min_words {
        return Some("TooFewWords");
    }
    if n > th.max_words {
        return Some("TooManyWords");
    }
    let nf = n as f64;
    let mean_len = words.iter().map(|w| w.chars().count()).sum::<usize>() as f64 / nf;
    if mean_len < th.min_mean_word_len || mean_len > th.max_mean_word_len {
        return Some("AvgWordLen");
    }
    if symbol_count(text) as f64 / nf > th.max_symbol_word_ratio {
        return Some("SymbolWordRatio");
    }
    let lines: Vec<&str> = text.split('\n').filter(|l| !l.trim().is_empty()).collect();
    let nl = lines.len().max(1) as f64;
    if lines.iter().filter(|l| is_bullet_line(l)).count() as f64 / nl > th.max_bullet_line_ratio {
        return Some("BulletLineRatio");
    }
    if lines.iter().filter(|l| is_ellipsis_line(l)).count() as f64 / nl > th.max_ellipsis_line_ratio {
        return Some("EllipsisLineRatio");
    }
    let alpha = words.iter().filter(|w| w.chars().any(char::is_alphabetic)).count();
    if (alpha as f64 / nf) < th.min_alpha_word_ratio {
        return Some("AlphaWordsRatio");
    }
    // Stops scanning once enough distinct stop words are seen.
    let mut distinct: Vec<String> = Vec::with_capacity(th.min_stop_words);
    for w in &words {
        if distinct.len() >= th.min_stop_words {
            break;
        }
        if stop_words.contains_word(w) {
            let norm = w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
            if !distinct.contains(&norm) {
                distinct.push(norm);
            }
        }
    }
    if distinct.len() < th.min_stop_words {
        return Some("TooFewStopWords");
    }
    None
}

/// Character-class ratios over all characters of the text.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CharRatios {
    pub non_alnum: f64,
    pub numeric: f64,
    pub url: f64,
    pub whitespace: f64,
    pub paren: f64,
}

pub fn char_ratios(text: &str, urls: &UrlMatcher) -> Option<CharRatios> {
    let (mut total, mut non_alnum, mut numeric, mut ws, mut paren) = (0usize, 0usize, 0usize, 0usize, 0usize);
    if text.is_ascii() {
        // Byte path with the same classes as the char path below.
        for &b in text.as_bytes() {
            if matches!(b, b'\t'..=b'\r' | b' ') {
                ws += 1;
            } else if !b.is_ascii_alphanumeric() {
                non_alnum += 1;
            }
            if b.is_ascii_digit() {
                numeric += 1;
            }
            if matches!(b, b'(' | b')' | b'[' | b']' | b'{' | b'}') {
                paren += 1;
            }
        }
        total = text.len();
    } else {
        for c in text.chars() {
            total += 1;
            if c.is_whitespace() {
                ws += 1;
            } else if !c.is_alphanumeric() {
                non_alnum += 1;
            }
            if c.is_numeric() {
                numeric += 1;
            }
            if matches!(c, '(' | ')' | '[' | ']' | '{' | '}') {
                paren += 1;
            }
        }
    }
    if total == 0 {
        return None;
    }
    let t = total as f64;
    Some(CharRatios {
        non_alnum: non_alnum as f64 / t,
        numeric: numeric as f64 / t,
        url: urls.url_char_count(text) as f64 / t,
        whitespace: ws as f64 / t,
        paren: paren as f64 / t,
    })
}

pub fn nemo(doc: &Document, th: &NemoThresholds, urls: &UrlMatcher) -> Verdict {
    let Some(r) = char_ratios(&doc.text, urls) else {
        return Verdict::reject(STAGE_NEMO, "NonAlphaNumericRatio");
    };
    let checks = [
        (r.non_alnum, th.max_non_alnum_ratio, "NonAlphaNumericRatio"),
        (r.numeric, th.max_numeric_ratio, "NumericRatio"),
        (r.url, th.max_url_char_ratio, "UrlRatio"),
        (r.whitespace, th.max_whitespace_ratio, "WhitespaceRatio"),
        (r.paren, th.max_paren_ratio, "ParenthesesRatio"),
    ];
    for (v, max, name) in checks {
        if v > max {
            return Verdict::reject(STAGE_NEMO, name);
        }
    }
    Verdict::Keep
}

/// Non-blank lines.
pub fn repetition_lines(text: &str) -> Vec<&str> {
    text.split('\n').filter(|l| !l.trim().is_empty()).collect()
}

/// Blocks separated by a blank line.
pub fn repetition_paragraphs(text: &str) -> Vec<&str> {
    text.split("\n\n")
        .map(|p| p.trim_matches('\n'))
        .filter(|p| !p.trim().is_empty())
        .collect()
}

/// Duplicate fraction of elements and of characters, counting every
/// occurrence after the first as a duplicate. Character fraction is over
/// `total_chars`.
pub fn duplicate_fractions(elements: &[&str], total_chars: usize) -> (f64, f64) {
    if elements.is_empty() {
        return (0.0, 0.0);
    }
    let mut seen: FxHashSet<&str> = FxHashSet::default();
    seen.reserve(elements.len());
    let (mut dup, mut dup_chars) = (0usize, 0usize);
    for e in elements {
        if !seen.insert(e) {
            dup += 1;
            dup_chars += e.chars().count();
        }
    }
    let cf = if total_chars == 0 {
        0.0
    } else {
        dup_chars as f64 / total_chars as f64
    };
    (dup as f64 / elements.len() as f64, cf)
}

/// Longest n-gram the repetition metrics look at.
const MAX_NGRAM: usize = 10;

/// N-gram occurrences of one length, each mapped to a dense class id. Only
/// positions whose prefix repeats are kept, since a unique n-gram cannot
/// grow into a repeated one.
struct NgramLevel {
    pos: Vec<u32>,
    class: Vec<u32>,
    counts: Vec<u32>,
    first: Vec<u32>,
}

impl NgramLevel {
    fn new(pos: Vec<u32>, class: Vec<u32>, n_classes: usize) -> Self {
        let mut counts = vec![0u32; n_classes];
        let mut first = vec![u32::MAX; n_classes];
        for (&i, &c) in pos.iter().zip(&class) {
            counts[c as usize] += 1;
            if first[c as usize] == u32::MAX {
                first[c as usize] = i;
            }
        }
        NgramLevel {
            pos,
            class,
            counts,
            first,
        }
    }

    fn has_repeat(&self) -> bool {
        self.counts.iter().any(|&c| c >= 2)
    }

    /// Occurrences of classes seen at least twice, in text order.
    fn repeated(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.pos
            .iter()
            .zip(&self.class)
            .filter(|(_, &c)| self.counts[c as usize] >= 2)
            .map(|(&i, &c)| (i as usize, c))
    }

    /// Extends each repeated (n-1)-gram by its next word.
    fn extend(&self, ids: &[u32], n: usize) -> Self {
        let mut intern: FxHashMap<u64, u32> = FxHashMap::default();
        let (mut pos, mut class) = (Vec::new(), Vec::new());
        for (i, p) in self.repeated() {
            if i + n > ids.len() {
                continue;
            }
            let key = (u64::from(p) << 32) | u64::from(ids[i + n - 1]);
            let next = intern.len() as u32;
            pos.push(i as u32);
            class.push(*intern.entry(key).or_insert(next));
        }
        let n_classes = intern.len();
        NgramLevel::new(pos, class, n_classes)
    }
}

/// Words interned to ids, with per-word character counts and the n-gram
/// classes of every length up to the longest one that still repeats.
pub struct WordTable<'a> {
    pub words: Vec<&'a str>,
    lens: Vec<usize>,
    total_chars: usize,
    levels: Vec<NgramLevel>,
}

impl<'a> WordTable<'a> {
    pub fn new(text: &'a str) -> Self {
        let words: Vec<&str> = split_words(text).collect();
        let mut intern: FxHashMap<&str, u32> = FxHashMap::default();
        let mut ids = Vec::with_capacity(words.len());
        let mut lens = Vec::with_capacity(words.len());
        for w in &words {
            let next = intern.len() as u32;
            ids.push(*intern.entry(w).or_insert(next));
            lens.push(w.chars().count());
        }
        let total_chars = lens.iter().sum();
        let mut levels = Vec::new();
        if !ids.is_empty() {
            let pos = (0..ids.len() as u32).collect();
            levels.push(NgramLevel::new(pos, ids.clone(), intern.len()));
            for n in 2..=MAX_NGRAM.min(ids.len()) {
                let prev = levels.last().expect("non-empty");
                if !prev.has_repeat() {
                    break;
                }
                let lvl = prev.extend(&ids, n);
                levels.push(lvl);
            }
        }
        WordTable {
            words,
            lens,
            total_chars,
            levels,
        }
    }

    /// Level for n-grams of length `n`, or `None` when none can repeat.
    fn level(&self, n: usize) -> Option<&NgramLevel> {
        assert!((1..=MAX_NGRAM).contains(&n), "n-gram length {n} out of range");
        if self.total_chars == 0 {
            return None;
        }
        self.levels.get(n - 1)
    }

    fn span_chars(&self, start: usize, n: usize) -> usize {
        self.lens[start..start + n].iter().sum()
    }

    /// Characters covered by non-overlapping occurrences of the most frequent
    /// repeated n-gram, over all word characters. Ties prefer the longer
    /// n-gram, then the lexicographically smaller one.
    pub fn top_ngram_char_frac(&self, n: usize) -> f64 {
        let Some(lvl) = self.level(n) else { return 0.0 };
        let mut best: Option<(u32, usize, usize)> = None; // (count, chars, start)
        for (&count, &start) in lvl.counts.iter().zip(&lvl.first) {
            if count < 2 {
                continue;
            }
            let start = start as usize;
            let chars = self.span_chars(start, n);
            let better = match best {
                None => true,
                Some((bc, bchars, bstart)) => {
                    (count, chars) > (bc, bchars)
                        || ((count, chars) == (bc, bchars)
                            && self.words[start..start + n] < self.words[bstart..bstart + n])
                }
            };
            if better {
                best = Some((count, chars, start));
            }
        }
        let Some((_, chars, start)) = best else {
            return 0.0;
        };
        let top = lvl.class[lvl.pos.partition_point(|&p| (p as usize) < start)];
        // Greedy left-to-right, skipping overlapping occurrences.
        let mut occurrences = 0usize;
        let mut free_from = 0usize;
        for (i, c) in lvl.repeated() {
            if c == top && i >= free_from {
                occurrences += 1;
                free_from = i + n;
            }
        }
        (occurrences * chars) as f64 / self.total_chars as f64
    }

    /// Characters of words covered by any n-gram occurring at least twice,
    /// each word counted once, over all word characters.
    pub fn dup_ngram_char_frac(&self, n: usize) -> f64 {
        let Some(lvl) = self.level(n) else { return 0.0 };
        let mut chars = 0usize;
        // End of the covered run so far, exclusive.
        let mut covered_to = 0usize;
        for (i, _) in lvl.repeated() {
            let from = covered_to.max(i);
            chars += self.lens[from..i + n].iter().sum::<usize>();
            covered_to = i + n;
        }
        chars as f64 / self.total_chars as f64
    }
}

/// All thirteen repetition metrics in threshold-table order.
#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionMetrics {
    pub dup_line_frac: f64,
    pub dup_line_char_frac: f64,
    pub dup_para_frac: f64,
    pub dup_para_char_frac: f64,
    pub top_ngram_char_frac: [f64; 3],
    pub dup_ngram_char_frac: [f64; 6],
}

pub fn repetition_metrics(text: &str) -> RepetitionMetrics {
    let total = text.chars().count();
    let (dl, dlc) = duplicate_fractions(&repetition_lines(text), total);
    let (dp, dpc) = duplicate_fractions(&repetition_paragraphs(text), total);
    let table = WordTable::new(text);
    RepetitionMetrics {
        dup_line_frac: dl,
        dup_line_char_frac: dlc,
        dup_para_frac: dp,
        dup_para_char_frac: dpc,
        top_ngram_char_frac: [2, 3, 4].map(|n| table.top_ngram_char_frac(n)),
        dup_ngram_char_frac: [5, 6, 7, 8, 9, 10].map(|n| table.dup_ngram_char_frac(n)),
    }
}

pub fn gopher_repetition(doc: &Document, th: &RepetitionThresholds) -> Verdict {
    match gopher_repetition_failure(&doc.text, th) {
        Some(c) => Verdict::reject(STAGE_GOPHER_REPETITION, c),
        None => Verdict::Keep,
    }
}

pub fn gopher_repetition_failure(text: &str, th: &RepetitionThresholds) -> Option<&'static str> {
    let total = text.chars().count();
    let (dl, dlc) = duplicate_fractions(&repetition_lines(text), total);
    if dl > th.dup_line_frac {
        return Some("DupLineFrac");
    }
    if dlc > th.dup_line_char_frac {
        return Some("DupLineCharFrac");
    }
    let (dp, dpc) = duplicate_fractions(&repetition_paragraphs(text), total);
    if dp > th.dup_para_frac {
        return Some("DupParFrac");
    }
    if dpc > th.dup_para_char_frac {
        return Some("DupParCharFrac");
    }
    let table = WordTable::new(text);
    for (n, max) in (2..).zip(th.top_ngram_char_frac) {
        if table.top_ngram_char_frac(n) > max {
            return Some("TopNGramCharFrac");
        }
    }
    for (n, max) in (5..).zip(th.dup_ngram_char_frac) {
        if table.dup_ngram_char_frac(n) > max {
            return Some("DupNGramCharFrac");
        }
    }
    None
}

/// Unmatched bracket characters over all bracket characters, for `()`,
/// `[]` and `{}`. Zero brackets gives zero.
pub fn unclosed_bracket_ratio(text: &str) -> f64 {
    let mut stack: Vec<char> = Vec::new();
    let (mut total, mut unmatched) = (0usize, 0usize);
    for c in text.chars() {
        match c {
            '(' | '[' | '{' => {
                total += 1;
                stack.push(c);
            }
            ')' | ']' | '}' => {
                total += 1;
                let open = match c {
                    ')' => '(',
                    ']' => '[',
                    _ => '{',
                };
                if stack.last() == Some(&open) {
                    stack.pop();
                } else {
                    unmatched += 1;
                }
            }
            _ => {}
        }
    }
    unmatched += stack.len();
    if total == 0 {
        0.0
    } else {
        unmatched as f64 / total as f64
    }
}

pub fn custom_quality(doc: &Document, th: &CustomQualityThresholds, stop_words: &StopWords) -> Verdict {
    match custom_quality_failure(&doc.text, th, stop_words) {
        Some(c) => Verdict::reject(STAGE_CUSTOM_QUALITY, c),
        None => Verdict::Keep,
    }
}

pub fn custom_quality_failure(
    text: &str,
    th: &CustomQualityThresholds,
    stop_words: &StopWords,
) -> Option<&'static str> {
    let words: Vec<&str> = split_words(text).collect();
    if words.len() < th.min_tokens {
        return Some("TooFewTokens");
    }
    let stop = words.iter().filter(|w| stop_words.contains_word(w)).count();
    let ratio = if words.is_empty() {
        0.0
    } else {
        stop as f64 / words.len() as f64
    };
    if ratio < th.min_stop_word_ratio {
        return Some("StopWordRatio");
    }
    if unclosed_bracket_ratio(text) > th.max_unclosed_bracket_ratio {
        return Some("UnclosedBracketRatio");
    }
    None
}

fn word_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Whole-word lexicon; multi-word entries match as contiguous word runs.
#[derive(Debug, Clone, Default)]
pub struct BadwordsLexicon {
    single: HashSet<String>,
    multi: Vec<Vec<String>>,
}

impl BadwordsLexicon {
    pub fn new<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = BadwordsLexicon::default();
        for t in terms {
            let toks: Vec<String> = word_tokens(t.as_ref()).collect();
            match toks.len() {
                0 => {}
                1 => {
                    lex.single.insert(toks.into_iter().next().unwrap());
                }
                _ => lex.multi.push(toks),
            }
        }
        lex
    }

    pub fn is_empty(&self) -> bool {
        self.single.is_empty() && self.multi.is_empty()
    }

    pub fn matches(&self, text: &str) -> bool {
        if self.is_empty() {
            return false;
        }
        let toks: Vec<String> = word_tokens(text).collect();
        if toks.iter().any(|t| self.single.contains(t)) {
            return true;
        }
        self.multi
            .iter()
            .any(|m| toks.windows(m.len()).any(|w| w == m.as_slice()))
    }
}

pub fn badwords_document_filter(doc: &Document, lexicon: &BadwordsLexicon) -> Verdict {
    if lexicon.matches(&doc.text) {
        Verdict::reject(STAGE_BADWORDS, "Badword")
    } else {
        Verdict::Keep
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DocQualityConfig {
    pub gopher: GopherQualityThresholds,
    pub nemo: NemoThresholds,
    pub repetition: RepetitionThresholds,
    pub custom: CustomQualityThresholds,
    /// Replaces the eight-word list for the minimum stop-word count.
    pub gopher_stop_words_path: Option<PathBuf>,
    /// Replaces the bundled English list for the stop-word ratio.
    pub stop_words_path: Option<PathBuf>,
    pub badwords_path: Option<PathBuf>,
}

impl DocQualityConfig {
    pub fn validate(&self) -> Result<()> {
        self.gopher.validate()?;
        self.nemo.validate()?;
        self.repetition.validate()?;
        self.custom.validate()
    }
}

/// Loaded word lists for the document gates.
#[derive(Debug, Clone)]
pub struct DocQualityResources {
    pub gopher_stop_words: StopWords,
    pub stop_words: StopWords,
    pub badwords: BadwordsLexicon,
}

impl Default for DocQualityResources {
    fn default() -> Self {
        DocQualityResources {
            gopher_stop_words: StopWords::gopher(),
            stop_words: StopWords::english(),
            badwords: BadwordsLexicon::default(),
        }
    }
}

impl DocQualityResources {
    pub fn load(cfg: &DocQualityConfig, missing: &mut Vec<String>) -> Self {
        let mut read = |p: &Option<PathBuf>| -> Option<Vec<String>> {
            let p = p.as_ref()?;
            load_list(p).map_err(|_| missing.push(p.display().to_string())).ok()
        };
        DocQualityResources {
            gopher_stop_words: read(&cfg.gopher_stop_words_path).map_or_else(StopWords::gopher, StopWords::new),
            stop_words: read(&cfg.stop_words_path).map_or_else(StopWords::english, StopWords::new),
            badwords: read(&cfg.badwords_path).map(BadwordsLexicon::new).unwrap_or_default(),
        }
    }
}
