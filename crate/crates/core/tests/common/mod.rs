#![allow(dead_code)]

use std::collections::BTreeSet;

use curate_core::decontam::ReferenceSet;
use curate_core::docquality::{
    custom_quality_failure, gopher_quality_failure, gopher_repetition_failure, nemo, CustomQualityThresholds,
    GopherQualityThresholds, NemoThresholds, RepetitionThresholds, StopWords,
};
use curate_core::lineclean::LineClass;
use curate_core::qualitygate::LabeledExample;
use curate_core::synth::{SynthConfig, SynthCorpus};
use curate_core::urlstage::UrlMatcher;
use curate_core::Document;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distinct lowercase words: `q` plus three letters (or four when wide), so
/// none is a stop word, a URL or uppercase.
pub struct Filler {
    next: usize,
    wide: bool,
}

impl Filler {
    pub fn new() -> Self {
        Filler { next: 0, wide: false }
    }

    pub fn wide() -> Self {
        Filler { next: 0, wide: true }
    }

    pub fn word(&mut self) -> String {
        let i = self.next;
        self.next += 1;
        let l = |k: usize| (b'a' + (k % 26) as u8) as char;
        if self.wide {
            assert!(i < 26usize.pow(4), "filler exhausted");
            format!("q{}{}{}{}", l(i / 17_576), l(i / 676), l(i / 26), l(i))
        } else {
            assert!(i < 26usize.pow(3), "filler exhausted");
            format!("q{}{}{}", l(i / 676), l(i / 26), l(i))
        }
    }

    pub fn words(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.word()).collect()
    }

    pub fn line(&mut self, n: usize) -> String {
        self.words(n).join(" ")
    }

    /// A unique line of exactly `len` characters (`len >= 1`).
    pub fn line_of_len(&mut self, len: usize) -> String {
        let mut s = String::new();
        while len - s.len() > 9 {
            s.push_str(&self.word());
            s.push(' ');
        }
        let w = self.word();
        let rest = len - s.len();
        // The last word is a fresh filler stretched or cut to fit.
        let mut last: String = w.chars().take(rest).collect();
        while last.len() < rest {
            last.push('z');
        }
        s.push_str(&last);
        s
    }
}

/// Uppercase pattern words, disjoint from the filler.
pub fn pattern_words(n: usize) -> Vec<String> {
    let l = |k: usize| (b'A' + (k % 26) as u8) as char;
    (0..n)
        .map(|i| format!("Z{}{}{}", l(i / 676), l(i / 26), l(i)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    GopherQuality,
    Nemo,
    Repetition,
    CustomQuality,
}

pub struct GoldenCase {
    pub table: Table,
    pub row: &'static str,
    pub passing: bool,
    pub text: String,
    pub expected: Option<&'static str>,
}

impl GoldenCase {
    pub fn evaluate(&self) -> Option<&'static str> {
        match self.table {
            Table::GopherQuality => {
                gopher_quality_failure(&self.text, &GopherQualityThresholds::default(), &StopWords::gopher())
            }
            Table::Nemo => nemo(
                &Document::new("g", "", self.text.clone()),
                &NemoThresholds::default(),
                &UrlMatcher::default(),
            )
            .criterion(),
            Table::Repetition => gopher_repetition_failure(&self.text, &RepetitionThresholds::default()),
            Table::CustomQuality => {
                custom_quality_failure(&self.text, &CustomQualityThresholds::default(), &StopWords::english())
            }
        }
    }
}

fn pair(table: Table, row: &'static str, criterion: &'static str, pass: String, fail: String) -> [GoldenCase; 2] {
    [
        GoldenCase {
            table,
            row,
            passing: true,
            text: pass,
            expected: None,
        },
        GoldenCase {
            table,
            row,
            passing: false,
            text: fail,
            expected: Some(criterion),
        },
    ]
}

/// Prose of `n` words alternating filler with `the` and `and`.
fn gopher_prose(n: usize) -> Vec<String> {
    let mut f = Filler::wide();
    (0..n)
        .map(|i| match i % 4 {
            1 => "the".to_string(),
            3 => "and".to_string(),
            _ => f.word(),
        })
        .collect()
}

fn join_lines(lines: &[String]) -> String {
    lines.join("\n")
}

fn gopher_cases() -> Vec<GoldenCase> {
    let t = Table::GopherQuality;
    let mut out = Vec::new();

    out.extend(pair(
        t,
        "word count (min 50)",
        "TooFewWords",
        gopher_prose(50).join(" "),
        gopher_prose(49).join(" "),
    ));
    {
        let pass = gopher_prose(100_000);
        let fail = {
            let mut v = pass.clone();
            v.push("qend".into());
            v
        };
        out.push(GoldenCase {
            table: t,
            row: "word count (max 100000)",
            passing: true,
            text: pass.join(" "),
            expected: None,
        });
        out.push(GoldenCase {
            table: t,
            row: "word count (max 100000)",
            passing: false,
            text: fail.join(" "),
            expected: Some("TooManyWords"),
        });
    }

    // All three-letter words give a mean of exactly 3.0; one two-letter word
    // drops it below.
    let three = |n: usize| -> Vec<String> {
        (0..n)
            .map(|i| match i % 3 {
                0 => "the".to_string(),
                1 => "and".to_string(),
                _ => format!(
                    "q{}{}",
                    (b'a' + (i / 26 % 26) as u8) as char,
                    (b'a' + (i % 26) as u8) as char
                ),
            })
            .collect()
    };
    let mut short = three(50);
    short[2] = "qa".into();
    out.extend(pair(
        t,
        "mean word length (min 3.0)",
        "AvgWordLen",
        three(50).join(" "),
        short.join(" "),
    ));
    {
        // Fifty words: alternate stop words (3 chars) with 17-char filler for
        // a total of exactly 500 characters.
        let mut f = Filler::new();
        let long = |f: &mut Filler, len: usize| format!("{}{}", f.word(), "x".repeat(len - 4));
        let pass: Vec<String> = (0..50)
            .map(|i| {
                if i % 2 == 0 {
                    ["the", "and"][i / 2 % 2].to_string()
                } else {
                    long(&mut f, 17)
                }
            })
            .collect();
        let fail_words = {
            let mut v = pass.clone();
            v[1].push('x');
            v
        };
        out.push(GoldenCase {
            table: t,
            row: "mean word length (max 10.0)",
            passing: true,
            text: pass.join(" "),
            expected: None,
        });
        out.push(GoldenCase {
            table: t,
            row: "mean word length (max 10.0)",
            passing: false,
            text: fail_words.join(" "),
            expected: Some("AvgWordLen"),
        });
    }

    let hashed = |n_hash: usize| -> String {
        let mut w = gopher_prose(100);
        for i in 0..n_hash {
            let j = i * 4;
            w[j] = format!("#{}", w[j]);
        }
        w.join(" ")
    };
    out.extend(pair(
        t,
        "symbol-to-word ratio (max 0.10)",
        "SymbolWordRatio",
        hashed(10),
        hashed(11),
    ));

    let bullets = |n_bullets: usize| -> String {
        let prose = gopher_prose(200);
        let lines: Vec<String> = prose
            .chunks(2)
            .enumerate()
            .map(|(i, c)| {
                let l = c.join(" ");
                if i < n_bullets {
                    format!("-{l}")
                } else {
                    l
                }
            })
            .collect();
        join_lines(&lines)
    };
    out.extend(pair(
        t,
        "bullet-line ratio (max 0.90)",
        "BulletLineRatio",
        bullets(90),
        bullets(91),
    ));

    let ellipses = |n: usize| -> String {
        let prose = gopher_prose(400);
        let lines: Vec<String> = prose
            .chunks(4)
            .enumerate()
            .map(|(i, c)| {
                let l = c.join(" ");
                if i < n {
                    format!("{l}...")
                } else {
                    l
                }
            })
            .collect();
        join_lines(&lines)
    };
    out.extend(pair(
        t,
        "ellipsis-line ratio (max 0.30)",
        "EllipsisLineRatio",
        ellipses(30),
        ellipses(31),
    ));

    let numeric = |n: usize| -> String {
        let mut w = gopher_prose(100);
        let mut k = 0;
        for x in w.iter_mut() {
            if k == n {
                break;
            }
            if x.starts_with('q') {
                *x = "123".into();
                k += 1;
            }
        }
        w.join(" ")
    };
    out.extend(pair(
        t,
        "alphabetic word ratio (min 0.80)",
        "AlphaWordsRatio",
        numeric(20),
        numeric(21),
    ));

    let stop = |distinct: usize| -> String {
        let mut f = Filler::new();
        let mut w = f.words(60);
        w[10] = "the".into();
        w[20] = "the".into();
        if distinct == 2 {
            w[30] = "and".into();
        }
        w.join(" ")
    };
    out.extend(pair(t, "stop-word count (min 2)", "TooFewStopWords", stop(2), stop(1)));
    out
}

/// Exactly `total` ASCII characters split into tokens by `spaces` single
/// spaces. `special` characters go first, letters fill the rest.
fn char_mix(total: usize, spaces: usize, special: &[(char, usize)]) -> String {
    let body = total - spaces;
    let mut pool: Vec<char> = Vec::with_capacity(body);
    for &(c, n) in special {
        pool.extend(std::iter::repeat_n(c, n));
    }
    assert!(pool.len() <= body, "specials exceed body");
    pool.resize(body, 'a');
    let tokens = spaces + 1;
    let mut out = String::with_capacity(total);
    let (per, extra) = (body / tokens, body % tokens);
    let mut it = pool.into_iter();
    for t in 0..tokens {
        if t > 0 {
            out.push(' ');
        }
        let n = per + usize::from(t < extra);
        out.extend(it.by_ref().take(n));
    }
    assert_eq!(out.chars().count(), total);
    out
}

fn nemo_cases() -> Vec<GoldenCase> {
    let t = Table::Nemo;
    let mut out = Vec::new();
    out.extend(pair(
        t,
        "non-alphanumeric ratio (max 0.25)",
        "NonAlphaNumericRatio",
        char_mix(1000, 150, &[('!', 250)]),
        char_mix(1000, 150, &[('!', 251)]),
    ));
    out.extend(pair(
        t,
        "numeric ratio (max 0.15)",
        "NumericRatio",
        char_mix(1000, 150, &[('7', 150)]),
        char_mix(1000, 150, &[('7', 151)]),
    ));
    let url = |len: usize| -> String {
        let token = format!("http://{}.com", "a".repeat(len - 11));
        let rest = char_mix(1000 - len - 1, 150, &[]);
        let s = format!("{token} {rest}");
        assert_eq!(s.chars().count(), 1000);
        s
    };
    out.extend(pair(
        t,
        "URL character ratio (max 0.20)",
        "UrlRatio",
        url(200),
        url(201),
    ));
    out.extend(pair(
        t,
        "whitespace ratio (max 0.25)",
        "WhitespaceRatio",
        char_mix(1000, 250, &[]),
        char_mix(1000, 251, &[]),
    ));
    let parens = |n: usize| -> String {
        let mut spec = vec![('(', n / 2), (')', n / 2)];
        if n % 2 == 1 {
            spec.push(('[', 1));
        }
        char_mix(1000, 150, &spec)
    };
    out.extend(pair(
        t,
        "parenthesis ratio (max 0.10)",
        "ParenthesesRatio",
        parens(100),
        parens(101),
    ));
    out
}

/// `times` copies of `element`, each followed by one unique filler line,
/// then unique filler lines up to `lines` elements in total.
fn with_duplicates(f: &mut Filler, element: &str, times: usize, elements: usize, sep: &str, per: usize) -> String {
    let mut parts: Vec<String> = Vec::with_capacity(elements);
    for _ in 0..times {
        parts.push(element.to_string());
        parts.push(f.line(per));
    }
    while parts.len() < elements {
        parts.push(f.line(per));
    }
    assert_eq!(parts.len(), elements);
    parts.join(sep)
}

/// Appends a unique separator-joined filler element so the text has exactly
/// `total` characters.
fn pad_to(f: &mut Filler, mut text: String, total: usize, sep: &str) -> String {
    let have = text.chars().count();
    let need = total - have - sep.len();
    text.push_str(sep);
    text.push_str(&f.line_of_len(need));
    assert_eq!(text.chars().count(), total);
    text
}

/// One line of `n` words: `times` non-overlapping copies of `pattern`, each
/// followed by unique filler, filler elsewhere.
fn ngram_doc(pattern: &[String], times: usize, n: usize) -> String {
    let mut f = Filler::new();
    let gap = (n - times * pattern.len()) / times;
    let mut words: Vec<String> = Vec::with_capacity(n);
    for _ in 0..times {
        words.extend(pattern.iter().cloned());
        words.extend(f.words(gap));
    }
    while words.len() < n {
        words.push(f.word());
    }
    assert_eq!(words.len(), n);
    words.join(" ")
}

fn repetition_cases() -> Vec<GoldenCase> {
    let t = Table::Repetition;
    let mut out = Vec::new();

    // 100 lines; a one-word line repeated. 30 duplicates of 100 is 0.30.
    let dl_pass = {
        let mut f = Filler::new();
        let mut parts = vec!["Zdup".to_string(); 31];
        parts.extend((0..69).map(|_| f.line(6)));
        interleave(parts, 31)
    };
    let dl_fail = {
        let mut f = Filler::new();
        let mut parts = vec!["Zdup".to_string(); 32];
        parts.extend((0..68).map(|_| f.line(6)));
        interleave(parts, 32)
    };
    out.extend(pair(
        t,
        "duplicate line fraction (max 0.30)",
        "DupLineFrac",
        dl_pass,
        dl_fail,
    ));

    // Ten duplicates of a 100-character single-word line: 1000 of 5000
    // characters is exactly 0.20.
    let long_word = format!("Z{}", "y".repeat(99));
    let dlc = |total: usize| {
        let mut f = Filler::new();
        let body = with_duplicates(&mut f, &long_word, 11, 40, "\n", 6);
        pad_to(&mut f, body, total, "\n")
    };
    out.extend(pair(
        t,
        "duplicate line character fraction (max 0.20)",
        "DupLineCharFrac",
        dlc(5000),
        dlc(4999),
    ));

    // 100 paragraphs, unique ones three lines long, so line duplication stays
    // low while paragraph duplication hits 0.30.
    let dup_paras = |copies: usize| {
        let mut f = Filler::new();
        let mut parts = vec!["Zdup".to_string(); copies];
        parts.extend((0..100 - copies).map(|_| {
            let ls: Vec<String> = (0..3).map(|_| f.line(6)).collect();
            ls.join("\n")
        }));
        interleave_sep(parts, copies, "\n\n")
    };
    out.extend(pair(
        t,
        "duplicate paragraph fraction (max 0.30)",
        "DupParFrac",
        dup_paras(31),
        dup_paras(32),
    ));

    // A paragraph of one word plus a whitespace-only line: 100 characters as
    // a paragraph, 4 as a line.
    let para = format!("Zdup\n{}", " ".repeat(95));
    let dpc = |total: usize| {
        let mut f = Filler::new();
        let body = with_duplicates(&mut f, &para, 11, 40, "\n\n", 6);
        pad_to(&mut f, body, total, "\n\n")
    };
    out.extend(pair(
        t,
        "duplicate paragraph character fraction (max 0.20)",
        "DupParCharFrac",
        dpc(5000),
        dpc(4999),
    ));

    // Top n-gram: words are four characters, so the fraction is
    // n * occurrences / words.
    for (n, max, times) in [(2usize, "0.20", 100usize), (3, "0.18", 60), (4, "0.16", 40)] {
        let p = pattern_words(n);
        let row: &'static str = Box::leak(format!("top {n}-gram character fraction (max {max})").into_boxed_str());
        out.extend(pair(
            t,
            row,
            "TopNGramCharFrac",
            ngram_doc(&p, times, 1000),
            ngram_doc(&p, times + 1, 1000),
        ));
    }

    // Duplicate n-gram: a k-word pattern repeated r times in 1000k words
    // covers k * r / (1000k) of the characters, exactly the threshold.
    for (k, max, r) in [
        (5usize, "0.15", 150usize),
        (6, "0.14", 140),
        (7, "0.13", 130),
        (8, "0.12", 120),
        (9, "0.11", 110),
        (10, "0.10", 100),
    ] {
        let p = pattern_words(k);
        let row: &'static str =
            Box::leak(format!("duplicate {k}-gram character fraction (max {max})").into_boxed_str());
        out.extend(pair(
            t,
            row,
            "DupNGramCharFrac",
            ngram_doc(&p, r, 1000 * k),
            ngram_doc(&p, r + 1, 1000 * k),
        ));
    }
    out
}

/// Spreads the first `dups` elements (the duplicates) evenly among the rest.
fn interleave(parts: Vec<String>, dups: usize) -> String {
    interleave_sep(parts, dups, "\n")
}

fn interleave_sep(parts: Vec<String>, dups: usize, sep: &str) -> String {
    let (d, rest) = parts.split_at(dups);
    let mut out: Vec<&str> = Vec::with_capacity(parts.len());
    let mut ri = rest.iter();
    for x in d {
        out.push(x);
        if let Some(r) = ri.next() {
            out.push(r);
        }
    }
    out.extend(ri.map(String::as_str));
    out.join(sep)
}

fn custom_cases() -> Vec<GoldenCase> {
    let t = Table::CustomQuality;
    let mut out = Vec::new();
    let prose = |n: usize, stops: usize| -> Vec<String> {
        let mut f = Filler::new();
        let mut w = f.words(n);
        for i in 0..stops {
            w[i * n / stops] = "the".into();
        }
        w
    };
    out.extend(pair(
        t,
        "minimum token count (min 50)",
        "TooFewTokens",
        prose(50, 20).join(" "),
        prose(49, 20).join(" "),
    ));
    out.extend(pair(
        t,
        "stop-word ratio (min 0.20)",
        "StopWordRatio",
        prose(100, 20).join(" "),
        prose(100, 19).join(" "),
    ));
    // Two stray `(` against 19 or 18 matched pairs: 2/40 = 0.05, 2/38 > 0.05.
    let brackets = |pairs: usize| -> String {
        let mut w = prose(100, 30);
        let mut k = 0;
        for x in w.iter_mut() {
            if k == pairs {
                break;
            }
            if x.starts_with('q') {
                *x = format!("({x})");
                k += 1;
            }
        }
        w.push("((".into());
        w.join(" ")
    };
    out.extend(pair(
        t,
        "unclosed bracket ratio (max 0.05)",
        "UnclosedBracketRatio",
        brackets(19),
        brackets(18),
    ));
    out
}

/// One just-passing and one just-failing document for every threshold row
/// of the four document-level filters, plus the upper bounds of the two
/// two-sided rows.
pub fn golden_cases() -> Vec<GoldenCase> {
    let mut v = gopher_cases();
    v.extend(nemo_cases());
    v.extend(repetition_cases());
    v.extend(custom_cases());
    v
}

pub const BENCHMARKS: [&str; 9] = [
    "ARC-C",
    "ARC-E",
    "CSQA",
    "HellaSwag",
    "MMLU",
    "OBQA",
    "PIQA",
    "SIQA",
    "WinoGrande",
];

/// A clean corpus with verbatim benchmark excerpts planted into `planted`
/// randomly chosen documents, and the reference set they came from. Each
/// plant is a whole reference instance, re-cased and re-punctuated so only
/// normalization makes it match.
pub struct PlantedCorpus {
    pub docs: Vec<Document>,
    pub refset: ReferenceSet,
    pub planted: BTreeSet<String>,
    /// Instances planted, as (benchmark, instance id).
    pub planted_instances: BTreeSet<(String, String)>,
}

pub fn planted_corpus(n_docs: usize, planted: usize, per_benchmark: usize, seed: u64) -> PlantedCorpus {
    let mut docs = SynthCorpus::new(SynthConfig {
        paragraphs: (1, 2),
        sentences: (1, 3),
        ..SynthConfig::clean(seed)
    })
    .documents(n_docs);
    let mut bench = SynthCorpus::new(SynthConfig::clean(seed ^ 0x5eed));
    let mut refset = ReferenceSet::new(8);
    let mut items = Vec::new();
    for b in BENCHMARKS {
        for i in 0..per_benchmark {
            let text = bench.sentence();
            let id = format!("{b}-{i}");
            refset.add(b, &id, &text);
            items.push((b.to_string(), id, text));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets = rand::seq::index::sample(&mut rng, n_docs, planted);
    let mut planted_ids = BTreeSet::new();
    let mut planted_instances = BTreeSet::new();
    for t in targets {
        let (b, id, text) = &items[rng.random_range(0..items.len())];
        let excerpt = format!("\"{}\" --", text.to_uppercase().replace(' ', "  "));
        let d = &mut docs[t];
        let mut words: Vec<&str> = d.text.split(' ').collect();
        let at = rng.random_range(0..=words.len());
        words.insert(at, &excerpt);
        d.text = words.join(" ");
        planted_ids.insert(d.id.clone());
        planted_instances.insert((b.clone(), id.clone()));
    }
    PlantedCorpus {
        docs,
        refset,
        planted: planted_ids,
        planted_instances,
    }
}

/// Two classes with disjoint content vocabularies mixed into a shared pool of
/// function words, so only the content words carry the label.
pub fn two_class(n_per_class: usize, seed: u64) -> Vec<LabeledExample> {
    const SHARED: [&str; 12] = [
        "the", "of", "and", "to", "in", "is", "that", "for", "it", "as", "with", "on",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = |tag: &str| (0..400).map(|i| format!("{tag}{i}")).collect::<Vec<_>>();
    let (va, vb) = (vocab("alpha"), vocab("beta"));
    let text = |v: &[String], rng: &mut ChaCha8Rng| {
        let n = rng.random_range(10..60);
        (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    SHARED[rng.random_range(0..SHARED.len())].to_string()
                } else {
                    v[rng.random_range(0..v.len())].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = Vec::new();
    for i in 0..n_per_class {
        out.push(LabeledExample {
            id: format!("a{i}"),
            text: text(&va, &mut rng),
            label: true,
        });
        out.push(LabeledExample {
            id: format!("b{i}"),
            text: text(&vb, &mut rng),
            label: false,
        });
    }
    out
}

/// Lines each class must flag, and near misses it must leave alone.
pub fn line_fixtures(class: LineClass) -> (&'static [&'static str], &'static [&'static str]) {
    match class {
        LineClass::LineLength => (
            &["Menu", "   Subscribe   ", "»"],
            &["Two words", "A full sentence with several words.", "Read the news"],
        ),
        LineClass::UppercaseRatio => (
            &[
                "SUBSCRIBE TODAY",
                "BREAKING NEWS: Markets",
                "FREE SHIPPING ON ALL ORDERS",
            ],
            &[
                "Normal sentence Case.",
                "NASA launched a new probe today.",
                "Half UPPER half lower",
            ],
        ),
        LineClass::NumericRatio => (
            &["100 200 300", "42 42", "0 1 2 3"],
            &["3.14 meters", "Page 2 of 10", "1,000"],
        ),
        LineClass::CounterLine => (
            &["12K likes", "1.2M views · 300 comments", "5 shares"],
            &["likes and shares", "I have 5 cats", "12K"],
        ),
        LineClass::SubstringModifier => (
            &["Read more", "Click here to continue", "© 2024 All rights reserved."],
            &[
                "If you want to read more about the history of this town, visit the library.",
                "Normal prose line here.",
                "She wanted to sign the petition.",
            ],
        ),
        LineClass::CodeArtifact => (
            &[
                "var x = 1;",
                "function foo() {",
                "$(document).ready(function() {",
                "@media screen and (max-width: 600px) {",
            ],
            &[
                "let the games begin",
                "function of the liver is complex.",
                "variables are fun to study",
            ],
        ),
        LineClass::Navigation => (
            &["Home > News > World", "Products » Shoes", "Docs | API | Guide"],
            &[
                "a > b is true when a is greater than b",
                "Paris/London flights are cheap",
                "Rock | Paper and scissors in the garden at night",
            ],
        ),
        LineClass::CookieBanner => (
            &[
                "We use cookies. By continuing you consent.",
                "GDPR cookie settings",
                "Cookie consent preferences",
            ],
            &[
                "I baked a cookie today.",
                "Informed consent is required.",
                "The GDPR was passed in 2016.",
            ],
        ),
        LineClass::SocialCTA => (
            &[
                "Follow us on Twitter",
                "Share this article",
                "Subscribe now for updates",
            ],
            &[
                "We follow using GPS",
                "Followers gathered outside",
                "Sharing this idea is good",
            ],
        ),
        LineClass::FormElement => (
            &["Username:", "Password *", "Remember me"],
            &[
                "Enter your username below to continue.",
                "Email us at the office",
                "Submit your paper by Friday",
            ],
        ),
        LineClass::Timestamp => (
            &["2024-03-15 10:42", "10:42 PM", "03/15/2024"],
            &["Meeting at 10:42 with Bob", "Posted 2024-03-15", "1042"],
        ),
    }
}
