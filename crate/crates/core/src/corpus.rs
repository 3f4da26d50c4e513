//! Document model and JSONL ingestion/emission.
//!
//! A record is one JSON object per line with at least a string `text` field.
//! `id`, `url` and a `metadata` object are optional; all other fields are
//! carried through to the output untouched.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde_json::{Map, Value};

use crate::error::{CurateError, Result};

/// Metadata keys consulted, in order, for the canonical WARC target URI.
const TARGET_URI_KEYS: [&str; 4] = ["WARC-Target-URI", "warc-target-uri", "Target-URI", "target_uri"];

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub url: String,
    pub text: String,
    pub meta: BTreeMap<String, String>,
    /// The record as it was parsed, including the original text.
    record: Map<String, Value>,
}

impl Document {
    pub fn new(id: impl Into<String>, url: impl Into<String>, text: impl Into<String>) -> Self {
        let id = id.into();
        let url = url.into();
        let text = text.into();
        let mut record = Map::new();
        record.insert("id".into(), Value::String(id.clone()));
        if !url.is_empty() {
            record.insert("url".into(), Value::String(url.clone()));
        }
        record.insert("text".into(), Value::String(text.clone()));
        Document {
            id,
            url,
            text,
            meta: BTreeMap::new(),
            record,
        }
    }

    /// Builds a document from a parsed JSON object. `fallback_id` is used when
    /// the record carries no `id`.
    pub fn from_record(record: Map<String, Value>, fallback_id: &str) -> std::result::Result<Self, String> {
        let text = match record.get("text") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err("field `text` is not a string".into()),
            None => return Err("missing field `text`".into()),
        };
        let id = match record.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => fallback_id.to_string(),
        };
        let mut meta = BTreeMap::new();
        if let Some(Value::Object(m)) = record.get("metadata") {
            for (k, v) in m {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                meta.insert(k.clone(), v);
            }
        }
        let target = TARGET_URI_KEYS.iter().find_map(|k| meta.get(*k).cloned()).or_else(|| {
            TARGET_URI_KEYS
                .iter()
                .find_map(|k| record.get(*k).and_then(Value::as_str).map(str::to_string))
        });
        let url = target
            .filter(|u| !u.is_empty())
            .or_else(|| record.get("url").and_then(Value::as_str).map(str::to_string))
            .unwrap_or_default();
        Ok(Document {
            id,
            url,
            text,
            meta,
            record,
        })
    }

    pub fn lines(&self) -> std::str::Split<'_, char> {
        self.text.split('\n')
    }

    pub fn set_lines<S: AsRef<str>>(&mut self, lines: &[S]) {
        let mut text = String::with_capacity(self.text.len());
        for (i, l) in lines.iter().enumerate() {
            if i > 0 {
                text.push('\n');
            }
            text.push_str(l.as_ref());
        }
        self.text = text;
    }

    /// A top-level field of the input record.
    pub fn field(&self, key: &str) -> Option<&Value> {
        self.record.get(key)
    }

    /// Text of the record as it was read, before any modifier ran.
    pub fn original_text(&self) -> &str {
        self.record.get("text").and_then(Value::as_str).unwrap_or(&self.text)
    }

    /// Output form for the kept stream: the input record with `text` replaced.
    pub fn to_kept_json(&self) -> Value {
        let mut rec = self.record.clone();
        rec.insert("text".into(), Value::String(self.text.clone()));
        Value::Object(rec)
    }

    /// Output form for the rejected sidecar: the original record plus the
    /// stage and criterion that rejected it.
    pub fn to_rejected_json(&self, stage: &str, criterion: &str) -> Value {
        let mut rec = self.record.clone();
        let mut by = Map::new();
        by.insert("stage".into(), Value::String(stage.into()));
        by.insert("criterion".into(), Value::String(criterion.into()));
        rec.insert("rejected_by".into(), Value::Object(by));
        Value::Object(rec)
    }

    /// The kept form with extra annotation fields appended.
    pub fn to_annotated_json(&self, extra: impl IntoIterator<Item = (String, Value)>) -> Value {
        let mut v = self.to_kept_json();
        if let Value::Object(m) = &mut v {
            for (k, x) in extra {
                m.insert(k, x);
            }
        }
        v
    }
}

/// Outcome of one stage for one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Reject {
        stage: &'static str,
        criterion: &'static str,
    },
    Modified {
        stage: &'static str,
        words_removed: usize,
    },
}

impl Verdict {
    pub fn reject(stage: &'static str, criterion: &'static str) -> Self {
        debug_assert!(!criterion.is_empty());
        Verdict::Reject { stage, criterion }
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, Verdict::Reject { .. })
    }

    pub fn criterion(&self) -> Option<&'static str> {
        match self {
            Verdict::Reject { criterion, .. } => Some(criterion),
            _ => None,
        }
    }
}

/// Counts the "tokens" used for all retention accounting.
pub trait WordCounter: Send + Sync {
    fn count(&self, text: &str) -> usize;
}

/// Number of maximal non-whitespace runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceCounter;

impl WordCounter for WhitespaceCounter {
    fn count(&self, text: &str) -> usize {
        count_words(text)
    }
}

impl<F> WordCounter for F
where
    F: Fn(&str) -> usize + Send + Sync,
{
    fn count(&self, text: &str) -> usize {
        self(text)
    }
}

/// ASCII members of the `char::is_whitespace` set.
fn is_ascii_ws(b: u8) -> bool {
    matches!(b, b'\t'..=b'\r' | b' ')
}

pub fn count_words(text: &str) -> usize {
    if !text.is_ascii() {
        return text.split_whitespace().count();
    }
    let mut n = 0;
    let mut in_word = false;
    for &b in text.as_bytes() {
        let ws = is_ascii_ws(b);
        n += usize::from(!ws && !in_word);
        in_word = !ws;
    }
    n
}

/// Same tokens as `str::split_whitespace`, scanning bytes when the text is
/// ASCII.
pub fn split_words(text: &str) -> Words<'_> {
    if text.is_ascii() {
        Words::Ascii { text, pos: 0 }
    } else {
        Words::Unicode(text.split_whitespace())
    }
}

pub enum Words<'a> {
    Ascii { text: &'a str, pos: usize },
    Unicode(std::str::SplitWhitespace<'a>),
}

impl<'a> Iterator for Words<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        match self {
            Words::Ascii { text, pos } => {
                let bytes = text.as_bytes();
                let mut i = *pos;
                while i < bytes.len() && is_ascii_ws(bytes[i]) {
                    i += 1;
                }
                if i == bytes.len() {
                    *pos = i;
                    return None;
                }
                let start = i;
                while i < bytes.len() && !is_ascii_ws(bytes[i]) {
                    i += 1;
                }
                *pos = i;
                Some(&text[start..i])
            }
            Words::Unicode(it) => it.next(),
        }
    }
}

/// One line of JSONL input.
#[derive(Debug)]
pub enum Record {
    Doc(Document),
    ParseFailure { line: u64, reason: String },
}

/// Streaming JSONL reader. Blank lines are skipped; lines that fail to parse
/// come back as [`Record::ParseFailure`].
pub struct JsonlReader<R> {
    inner: R,
    line_no: u64,
    buf: String,
}

impl<R: BufRead> JsonlReader<R> {
    pub fn new(inner: R) -> Self {
        JsonlReader {
            inner,
            line_no: 0,
            buf: String::new(),
        }
    }
}

impl<R: BufRead> Iterator for JsonlReader<R> {
    type Item = Result<Record>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            let n = match self.inner.read_line(&mut self.buf) {
                Ok(n) => n,
                Err(source) => {
                    return Some(Err(CurateError::Io {
                        last_good_line: self.line_no,
                        source,
                    }))
                }
            };
            if n == 0 {
                return None;
            }
            self.line_no += 1;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() {
                continue;
            }
            let rec = match serde_json::from_str::<Value>(line) {
                Ok(Value::Object(map)) => match Document::from_record(map, &self.line_no.to_string()) {
                    Ok(doc) => Record::Doc(doc),
                    Err(reason) => Record::ParseFailure {
                        line: self.line_no,
                        reason,
                    },
                },
                Ok(_) => Record::ParseFailure {
                    line: self.line_no,
                    reason: "record is not a JSON object".into(),
                },
                Err(e) => Record::ParseFailure {
                    line: self.line_no,
                    reason: e.to_string(),
                },
            };
            return Some(Ok(rec));
        }
    }
}

pub fn read_jsonl<R: BufRead>(stream: R) -> JsonlReader<R> {
    JsonlReader::new(stream)
}

/// Opens a plain or gzip-compressed input file, sniffing the gzip magic.
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let mut file = File::open(path).map_err(|e| CurateError::resource(path, e))?;
    let mut magic = [0u8; 2];
    let got = file.read(&mut magic).map_err(|e| CurateError::resource(path, e))?;
    drop(file);
    let file = File::open(path).map_err(|e| CurateError::resource(path, e))?;
    if got == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::with_capacity(1 << 20, MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::with_capacity(1 << 20, file)))
    }
}

pub fn write_json_line<W: Write>(out: &mut W, value: &Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

/// Splits documents into the kept and rejected streams. `Modified` counts as
/// kept. Expects one verdict per document.
pub fn write_jsonl<K: Write, J: Write>(
    docs: &[Document],
    verdicts: &[Verdict],
    kept: &mut K,
    rejected: &mut J,
) -> Result<()> {
    if docs.len() != verdicts.len() {
        return Err(CurateError::Config(format!(
            "{} documents but {} verdicts",
            docs.len(),
            verdicts.len()
        )));
    }
    for (i, (doc, verdict)) in docs.iter().zip(verdicts).enumerate() {
        let res = match verdict {
            Verdict::Reject { stage, criterion } => write_json_line(rejected, &doc.to_rejected_json(stage, criterion)),
            Verdict::Keep | Verdict::Modified { .. } => write_json_line(kept, &doc.to_kept_json()),
        };
        res.map_err(|source| CurateError::Io {
            last_good_line: i as u64,
            source,
        })?;
    }
    Ok(())
}
