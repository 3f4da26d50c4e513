//! URL-based pre-filtering: domain blocklist, three substring lexicons, and
//! the two content modifiers (inline URL stripping, newline normalization).

use std::borrow::Cow;
use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use aho_corasick::{AhoCorasick, MatchKind};
use serde::{Deserialize, Serialize};

use crate::corpus::{count_words, split_words, Document, Verdict};
use crate::error::{CurateError, Result};

pub const STAGE_BLOCKLIST: &str = "ut1_blocklist";
pub const STAGE_STRICT: &str = "url_strict_substring";
pub const STAGE_HARD: &str = "url_hard_substring";
pub const STAGE_SOFT: &str = "url_soft_substring";
pub const STAGE_URL_TOKENS: &str = "url_token_removal";
pub const STAGE_NEWLINES: &str = "newline_normalization";

const DEFAULT_PUBLIC_SUFFIXES: &[&str] = &[
    "com",
    "net",
    "org",
    "edu",
    "gov",
    "mil",
    "int",
    "info",
    "biz",
    "io",
    "co",
    "uk",
    "co.uk",
    "org.uk",
    "ac.uk",
    "gov.uk",
    "ltd.uk",
    "me.uk",
    "de",
    "fr",
    "ru",
    "cn",
    "com.cn",
    "jp",
    "co.jp",
    "ne.jp",
    "br",
    "com.br",
    "au",
    "com.au",
    "net.au",
    "org.au",
    "ca",
    "nl",
    "es",
    "it",
    "se",
    "ch",
    "pl",
    "eu",
    "in",
    "co.in",
    "nz",
    "co.nz",
    "za",
    "co.za",
    "kr",
    "co.kr",
    "mx",
    "com.mx",
    "ar",
    "com.ar",
    "tv",
    "me",
    "us",
    "xyz",
    "blogspot.com",
    "github.io",
    "appspot.com",
];

const DEFAULT_TLDS: &[&str] = &[
    "com", "net", "org", "edu", "gov", "mil", "int", "info", "biz", "io", "co", "uk", "de", "fr", "ru", "cn", "jp",
    "br", "au", "ca", "nl", "es", "se", "ch", "pl", "eu", "xyz", "online", "site", "top", "club", "app", "dev", "tech",
    "store", "blog", "news", "live", "shop", "ly", "gl", "tv", "fm", "ai", "cc", "ws", "nz", "za", "kr", "mx", "ar",
];

/// Reads a one-entry-per-line list. Entries are trimmed and lowercased;
/// blank lines and `#` comments are skipped.
pub fn load_list(path: &Path) -> Result<Vec<String>> {
    let raw = fs::read_to_string(path).map_err(|e| CurateError::resource(path, e))?;
    Ok(parse_list(&raw))
}

pub fn parse_list(raw: &str) -> Vec<String> {
    raw.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// Suffix list used to find the registered domain of a host.
#[derive(Debug, Clone)]
pub struct PublicSuffixList {
    suffixes: HashSet<String>,
}

impl Default for PublicSuffixList {
    fn default() -> Self {
        Self::new(DEFAULT_PUBLIC_SUFFIXES.iter().copied())
    }
}

impl PublicSuffixList {
    pub fn new<I, S>(suffixes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        PublicSuffixList {
            suffixes: suffixes
                .into_iter()
                .map(|s| s.as_ref().trim_matches('.').to_ascii_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// The longest listed suffix plus one label. Unlisted TLDs fall back to
    /// the implicit `*` rule (last label is the suffix). A host that is
    /// itself a suffix has no registered domain.
    pub fn registered_domain(&self, host: &str) -> Option<String> {
        let host = host.trim_end_matches('.').to_ascii_lowercase();
        if host.is_empty() {
            return None;
        }
        if host.parse::<std::net::IpAddr>().is_ok() || host.starts_with('[') {
            return Some(host);
        }
        let labels: Vec<&str> = host.split('.').collect();
        if labels.iter().any(|l| l.is_empty()) {
            return None;
        }
        let mut suffix_len = 1;
        for start in 0..labels.len() {
            let candidate = labels[start..].join(".");
            if self.suffixes.contains(&candidate) {
                suffix_len = labels.len() - start;
                break;
            }
        }
        if labels.len() <= suffix_len {
            return None;
        }
        Some(labels[labels.len() - suffix_len - 1..].join("."))
    }
}

fn parse_url(raw: &str) -> Option<url::Url> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    match url::Url::parse(raw) {
        Ok(u) if u.host_str().is_some() => Some(u),
        _ => url::Url::parse(&format!("http://{raw}"))
            .ok()
            .filter(|u| u.host_str().is_some()),
    }
}

pub fn url_host(raw: &str) -> Option<String> {
    parse_url(raw).and_then(|u| u.host_str().map(str::to_ascii_lowercase))
}

fn url_path(raw: &str) -> Option<String> {
    parse_url(raw).map(|u| u.path().to_lowercase())
}

#[derive(Debug, Clone, Default)]
pub struct DomainBlocklist {
    domains: HashSet<String>,
    suffixes: PublicSuffixList,
}

impl DomainBlocklist {
    pub fn new<I, S>(domains: I, suffixes: PublicSuffixList) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        DomainBlocklist {
            domains: domains
                .into_iter()
                .map(|d| d.as_ref().trim().trim_end_matches('.').to_ascii_lowercase())
                .filter(|d| !d.is_empty())
                .collect(),
            suffixes,
        }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn contains_url(&self, url: &str) -> bool {
        let Some(host) = url_host(url) else {
            if !url.trim().is_empty() {
                log::debug!("no host in url {url:?}; blocklist skipped");
            }
            return false;
        };
        self.suffixes
            .registered_domain(&host)
            .is_some_and(|d| self.domains.contains(&d))
    }
}

pub fn check_blocklist(url: &str, blocklist: &DomainBlocklist) -> Verdict {
    if blocklist.contains_url(url) {
        Verdict::reject(STAGE_BLOCKLIST, "BlocklistedDomain")
    } else {
        Verdict::Keep
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LexiconKind {
    Strict,
    Hard,
    Soft,
}

impl LexiconKind {
    pub fn min_matches(self) -> usize {
        match self {
            LexiconKind::Strict | LexiconKind::Hard => 1,
            LexiconKind::Soft => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubstringLexicon {
    kind: LexiconKind,
    terms: Vec<String>,
    matcher: Option<AhoCorasick>,
}

impl SubstringLexicon {
    pub fn new<I, S>(kind: LexiconKind, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut terms: Vec<String> = terms
            .into_iter()
            .map(|t| t.as_ref().trim().to_lowercase())
            .filter(|t| !t.is_empty())
            .collect();
        terms.sort();
        terms.dedup();
        let matcher = if terms.is_empty() {
            None
        } else {
            Some(
                AhoCorasick::builder()
                    .match_kind(MatchKind::Standard)
                    .build(&terms)
                    .expect("lexicon automaton"),
            )
        };
        SubstringLexicon { kind, terms, matcher }
    }

    pub fn kind(&self) -> LexiconKind {
        self.kind
    }

    pub fn min_matches(&self) -> usize {
        self.kind.min_matches()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Distinct terms occurring anywhere in `haystack`.
    fn distinct_matches(&self, haystack: &str) -> usize {
        let Some(ac) = &self.matcher else { return 0 };
        let mut seen = HashSet::new();
        for m in ac.find_overlapping_iter(haystack) {
            seen.insert(m.pattern().as_usize());
        }
        seen.len()
    }

    fn any_match(&self, haystack: &str) -> bool {
        self.matcher.as_ref().is_some_and(|ac| ac.is_match(haystack))
    }

    /// Whether some term occurs bounded on both sides by a path delimiter
    /// (`-`, `.`, `/`) or the string ends.
    fn delimited_match(&self, path: &str) -> bool {
        let Some(ac) = &self.matcher else {
            return false;
        };
        let bytes = path.as_bytes();
        let is_delim = |b: u8| matches!(b, b'-' | b'.' | b'/');
        ac.find_overlapping_iter(path).any(|m| {
            let left = m.start() == 0 || is_delim(bytes[m.start() - 1]);
            let right = m.end() == bytes.len() || is_delim(bytes[m.end()]);
            left && right
        })
    }
}

pub fn check_strict_substrings(url: &str, lexicon: &SubstringLexicon) -> Verdict {
    debug_assert_eq!(lexicon.kind(), LexiconKind::Strict);
    match url_path(url) {
        Some(path) if lexicon.delimited_match(&path) => Verdict::reject(STAGE_STRICT, "StrictSubstring"),
        _ => Verdict::Keep,
    }
}

pub fn check_hard_substrings(url: &str, lexicon: &SubstringLexicon) -> Verdict {
    debug_assert_eq!(lexicon.kind(), LexiconKind::Hard);
    if lexicon.any_match(&url.to_lowercase()) {
        Verdict::reject(STAGE_HARD, "HardSubstring")
    } else {
        Verdict::Keep
    }
}

pub fn check_soft_substrings(url: &str, lexicon: &SubstringLexicon) -> Verdict {
    debug_assert_eq!(lexicon.kind(), LexiconKind::Soft);
    if lexicon.distinct_matches(&url.to_lowercase()) >= lexicon.min_matches() {
        Verdict::reject(STAGE_SOFT, "SoftSubstring")
    } else {
        Verdict::Keep
    }
}

/// Recognizes whitespace-delimited tokens that are URLs: scheme- or
/// `www.`-prefixed, or a dotted host whose last label is a known TLD.
#[derive(Debug, Clone)]
pub struct UrlMatcher {
    tlds: HashSet<String>,
}

impl Default for UrlMatcher {
    fn default() -> Self {
        Self::new(DEFAULT_TLDS.iter().copied())
    }
}

const SCHEMES: [&str; 4] = ["http://", "https://", "ftp://", "www."];

impl UrlMatcher {
    pub fn new<I, S>(tlds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        UrlMatcher {
            tlds: tlds
                .into_iter()
                .map(|t| t.as_ref().trim().trim_start_matches('.').to_ascii_lowercase())
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }

    pub fn is_url_token(&self, token: &str) -> bool {
        let t = token
            .trim_start_matches(['"', '\'', '(', '[', '<', '{'])
            .trim_end_matches(['"', '\'', ')', ']', '>', '}', ',', ';', ':', '!', '?', '.']);
        // Every accepted form contains a dot or a scheme colon.
        if t.is_empty() || !t.bytes().any(|b| b == b'.' || b == b':') {
            return false;
        }
        let lower = t.to_ascii_lowercase();
        if let Some(scheme) = SCHEMES.iter().find(|s| lower.starts_with(**s)) {
            return lower.len() > scheme.len();
        }
        let host = lower.split(['/', '?', '#']).next().unwrap_or("");
        let host = host.rsplit_once(':').map_or(host, |(h, port)| {
            if !port.is_empty() && port.bytes().all(|b| b.is_ascii_digit()) {
                h
            } else {
                host
            }
        });
        let mut count = 0;
        let mut last = "";
        for label in host.split('.') {
            if label.is_empty() || !label.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-') {
                return false;
            }
            count += 1;
            last = label;
        }
        count >= 2 && self.tlds.contains(last)
    }

    /// Total characters of URL tokens in `text`.
    pub fn url_char_count(&self, text: &str) -> usize {
        split_words(text)
            .filter(|t| self.is_url_token(t))
            .map(|t| t.chars().count())
            .sum()
    }
}

fn token_spans(line: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                spans.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        spans.push((s, line.len()));
    }
    spans
}

fn strip_line<'a>(line: &'a str, matcher: &UrlMatcher, removed: &mut usize) -> Cow<'a, str> {
    if !split_words(line).any(|t| matcher.is_url_token(t)) {
        return Cow::Borrowed(line);
    }
    let spans = token_spans(line);
    let is_url: Vec<bool> = spans.iter().map(|&(s, e)| matcher.is_url_token(&line[s..e])).collect();
    if !is_url.iter().any(|&u| u) {
        return Cow::Borrowed(line);
    }
    // Byte ranges to cut: a leading token takes its trailing whitespace with
    // it, any other token takes the whitespace before it.
    let mut cuts: Vec<(usize, usize)> = Vec::new();
    for (i, &(s, e)) in spans.iter().enumerate() {
        if !is_url[i] {
            continue;
        }
        *removed += 1;
        let cut = if i == 0 {
            let end = spans.get(1).map_or(line.len(), |n| n.0);
            (s, end)
        } else {
            (spans[i - 1].1, e)
        };
        cuts.push(cut);
    }
    let mut out = String::with_capacity(line.len());
    let mut pos = 0;
    for (s, e) in cuts {
        let s = s.max(pos);
        if s > pos {
            out.push_str(&line[pos..s]);
        }
        pos = pos.max(e);
    }
    out.push_str(&line[pos..]);
    Cow::Owned(out)
}

/// Removes URL tokens from every line. Never changes the number of lines.
pub fn strip_inline_urls(doc: &mut Document, matcher: &UrlMatcher) -> usize {
    if !split_words(&doc.text).any(|t| matcher.is_url_token(t)) {
        return 0;
    }
    let mut removed = 0;
    let mut changed = false;
    let mut out = String::with_capacity(doc.text.len());
    for (i, line) in doc.text.split('\n').enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let l = strip_line(line, matcher, &mut removed);
        changed |= matches!(l, Cow::Owned(_));
        out.push_str(&l);
    }
    if changed {
        doc.text = out;
    }
    removed
}

/// Collapses every run of three or more `\n` to exactly two.
pub fn normalize_newlines(text: &str) -> Cow<'_, str> {
    if !text.contains("\n\n\n") {
        return Cow::Borrowed(text);
    }
    let mut out = String::with_capacity(text.len());
    let mut run = 0;
    for c in text.chars() {
        if c == '\n' {
            run += 1;
            continue;
        }
        out.extend(std::iter::repeat_n('\n', run.min(2)));
        run = 0;
        out.push(c);
    }
    out.extend(std::iter::repeat_n('\n', run.min(2)));
    Cow::Owned(out)
}

/// Applies [`normalize_newlines`] to a document; returns the word delta.
pub fn normalize_document_newlines(doc: &mut Document) -> usize {
    if let Cow::Owned(t) = normalize_newlines(&doc.text) {
        let before = count_words(&doc.text);
        doc.text = t;
        before - count_words(&doc.text)
    } else {
        0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UrlStageConfig {
    pub blocklist_path: Option<PathBuf>,
    pub strict_terms_path: Option<PathBuf>,
    pub hard_terms_path: Option<PathBuf>,
    pub soft_terms_path: Option<PathBuf>,
    pub tld_list_path: Option<PathBuf>,
    pub public_suffix_path: Option<PathBuf>,
}

/// Loaded URL-stage resources.
#[derive(Debug, Clone)]
pub struct UrlFilters {
    pub blocklist: DomainBlocklist,
    pub strict: SubstringLexicon,
    pub hard: SubstringLexicon,
    pub soft: SubstringLexicon,
    pub matcher: UrlMatcher,
}

impl Default for UrlFilters {
    fn default() -> Self {
        UrlFilters {
            blocklist: DomainBlocklist::default(),
            strict: SubstringLexicon::new(LexiconKind::Strict, Vec::<String>::new()),
            hard: SubstringLexicon::new(LexiconKind::Hard, Vec::<String>::new()),
            soft: SubstringLexicon::new(LexiconKind::Soft, Vec::<String>::new()),
            matcher: UrlMatcher::default(),
        }
    }
}

impl UrlFilters {
    /// Loads every configured list. Missing files are collected into
    /// `missing` instead of failing one at a time.
    pub fn load(cfg: &UrlStageConfig, missing: &mut Vec<String>) -> Self {
        let mut read = |p: &Option<PathBuf>| -> Option<Vec<String>> {
            let p = p.as_ref()?;
            match load_list(p) {
                Ok(v) => Some(v),
                Err(_) => {
                    missing.push(p.display().to_string());
                    None
                }
            }
        };
        let suffixes = read(&cfg.public_suffix_path).map_or_else(PublicSuffixList::default, PublicSuffixList::new);
        let blocklist = DomainBlocklist::new(read(&cfg.blocklist_path).unwrap_or_default(), suffixes);
        let strict = SubstringLexicon::new(LexiconKind::Strict, read(&cfg.strict_terms_path).unwrap_or_default());
        let hard = SubstringLexicon::new(LexiconKind::Hard, read(&cfg.hard_terms_path).unwrap_or_default());
        let soft = SubstringLexicon::new(LexiconKind::Soft, read(&cfg.soft_terms_path).unwrap_or_default());
        let matcher = read(&cfg.tld_list_path).map_or_else(UrlMatcher::default, UrlMatcher::new);
        UrlFilters {
            blocklist,
            strict,
            hard,
            soft,
            matcher,
        }
    }
}
