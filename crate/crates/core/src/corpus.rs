//! Post collections: loading, label aliases, class statistics and seeded
//! stratified splitting.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::text_analysis::tokenize;

/// Ordinal depression-sign class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    NotDepression = 0,
    Moderate = 1,
    Severe = 2,
}

impl Label {
    pub const COUNT: usize = 3;
    pub const ALL: [Label; Self::COUNT] = [Label::NotDepression, Label::Moderate, Label::Severe];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Self::ALL.get(i).copied()
    }

    /// Canonical persisted string, as used in the shared-task files.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::NotDepression => "not depression",
            Label::Moderate => "moderate",
            Label::Severe => "severe",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LabelAliases::default()
            .resolve(s)
            .ok_or_else(|| format!("unknown label {s:?}"))
    }
}

/// Case-insensitive, whitespace-trimmed mapping from label strings to classes.
#[derive(Debug, Clone)]
pub struct LabelAliases {
    map: HashMap<String, Label>,
}

impl Default for LabelAliases {
    fn default() -> Self {
        let mut aliases = Self { map: HashMap::new() };
        for label in Label::ALL {
            aliases.insert(label.as_str(), label);
            aliases.insert(&label.index().to_string(), label);
        }
        aliases.insert("not_depression", Label::NotDepression);
        aliases.insert("none", Label::NotDepression);
        aliases
    }
}

impl LabelAliases {
    fn key(s: &str) -> String {
        s.trim().to_lowercase()
    }

    pub fn insert(&mut self, alias: &str, label: Label) {
        self.map.insert(Self::key(alias), label);
    }

    pub fn resolve(&self, s: &str) -> Option<Label> {
        self.map.get(&Self::key(s)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// Posts in insertion order with optional parallel gold labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    labels: Option<Vec<Label>>,
}

impl LabeledCorpus {
    pub fn new(documents: Vec<Document>, labels: Vec<Label>) -> Result<Self, CorpusError> {
        if documents.len() != labels.len() {
            return Err(CorpusError::LengthMismatch {
                documents: documents.len(),
                labels: labels.len(),
            });
        }
        check_unique_ids(&documents)?;
        Ok(Self {
            documents,
            labels: Some(labels),
        })
    }

    pub fn unlabeled(documents: Vec<Document>) -> Result<Self, CorpusError> {
        check_unique_ids(&documents)?;
        Ok(Self {
            documents,
            labels: None,
        })
    }

    /// Labeled corpus from raw texts; ids are the 0-based row positions.
    pub fn from_texts<S: Into<String>>(texts: impl IntoIterator<Item = (S, Label)>) -> Self {
        let (documents, labels): (Vec<_>, Vec<_>) = texts
            .into_iter()
            .enumerate()
            .map(|(i, (t, l))| (Document::new(i.to_string(), t), l))
            .unzip();
        Self {
            documents,
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn require_labels(&self) -> Result<&[Label], CorpusError> {
        self.labels().ok_or(CorpusError::Unlabeled)
    }

    pub fn class_distribution(&self) -> Result<ClassDistribution, CorpusError> {
        Ok(class_distribution(self.require_labels()?))
    }

    /// Sub-corpus of the given row positions, in the order given.
    pub fn select(&self, rows: &[usize]) -> LabeledCorpus {
        LabeledCorpus {
            documents: rows.iter().map(|&i| self.documents[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| rows.iter().map(|&i| l[i]).collect()),
        }
    }

    /// Writes the corpus as TSV with `id`, `text` and (if labeled) `label` columns.
    pub fn write_tsv<W: Write>(&self, out: W) -> Result<(), CorpusError> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .quote_style(csv::QuoteStyle::Never)
            .from_writer(out);
        let labeled = self.labels.is_some();
        if labeled {
            w.write_record(["id", "text", "label"])?;
        } else {
            w.write_record(["id", "text"])?;
        }
        for (i, doc) in self.documents.iter().enumerate() {
            for field in [&doc.id, &doc.text] {
                if field.contains(['\t', '\n', '\r']) {
                    return Err(CorpusError::MalformedRow {
                        row: i + 2,
                        reason: "tab or newline cannot be written to TSV".into(),
                    });
                }
            }
            match &self.labels {
                Some(l) => w.write_record([doc.id.as_str(), doc.text.as_str(), l[i].as_str()])?,
                None => w.write_record([doc.id.as_str(), doc.text.as_str()])?,
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_unique_ids(documents: &[Document]) -> Result<(), CorpusError> {
    let mut seen = HashSet::new();
    for (i, d) in documents.iter().enumerate() {
        if !seen.insert(d.id.as_str()) {
            return Err(CorpusError::DuplicateId {
                row: i + 2,
                id: d.id.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("row {row}: unknown label {value:?}")]
    UnknownLabel { row: u64, value: String },
    #[error("row {row}: duplicate id {id:?}")]
    DuplicateId { row: usize, id: String },
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("class {0} has fewer than 2 documents")]
    ClassTooSmall(Label),
    #[error("corpus has no labels")]
    Unlabeled,
    #[error("{documents} documents but {labels} labels")]
    LengthMismatch { documents: usize, labels: usize },
    #[error("test fraction must lie in (0, 1), got {0}")]
    BadFraction(f64),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusFormat {
    Tsv,
    Csv,
}

impl CorpusFormat {
    /// `.csv` means CSV; anything else is read as TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Tsv,
        }
    }
}

/// Header names of the id, text and (optional) label columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub id: String,
    pub text: String,
    pub label: Option<String>,
}

impl ColumnMap {
    pub fn new(id: &str, text: &str, label: Option<&str>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            label: label.map(Into::into),
        }
    }

    /// Columns of the LT-EDI 2022 depression shared-task files.
    pub fn shared_task() -> Self {
        Self::new("PID", "Text_data", Some("Label"))
    }
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self::new("id", "text", Some("label"))
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat, columns: &ColumnMap) -> Result<LabeledCorpus, CorpusError> {
    let file = File::open(path)?;
    read_corpus(file, format, columns, &LabelAliases::default())
}

/// Reads a delimited corpus. Header matching is exact; label matching goes
/// through `aliases`. Errors report the 1-based file line.
pub fn read_corpus<R: Read>(
    input: R,
    format: CorpusFormat,
    columns: &ColumnMap,
    aliases: &LabelAliases,
) -> Result<LabeledCorpus, CorpusError> {
    let mut builder = csv::ReaderBuilder::new();
    builder.flexible(true).has_headers(true);
    match format {
        CorpusFormat::Tsv => builder.delimiter(b'\t').quoting(false),
        CorpusFormat::Csv => builder.delimiter(b','),
    };
    let mut reader = builder.from_reader(input);
    let headers = reader.headers()?.clone();
    let width = headers.len();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim_start_matches('\u{feff}') == name)
            .ok_or_else(|| CorpusError::MissingColumn(name.to_string()))
    };
    let id_col = find(&columns.id)?;
    let text_col = find(&columns.text)?;
    let label_col = columns.label.as_deref().map(find).transpose()?;

    let mut documents = Vec::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line()) as usize;
        if record.len() != width {
            return Err(CorpusError::MalformedRow {
                row,
                reason: format!("expected {width} fields, found {}", record.len()),
            });
        }
        let id = record[id_col].to_string();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { row, id });
        }
        if let Some(col) = label_col {
            let value = &record[col];
            let label = aliases.resolve(value).ok_or_else(|| CorpusError::UnknownLabel {
                row: row as u64,
                value: value.to_string(),
            })?;
            labels.push(label);
        }
        documents.push(Document {
            id,
            text: record[text_col].to_string(),
        });
    }
    Ok(LabeledCorpus {
        documents,
        labels: label_col.map(|_| labels),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDistribution {
    pub counts: [usize; Label::COUNT],
    pub total: usize,
}

impl std::ops::Add for ClassDistribution {
    type Output = ClassDistribution;

    fn add(self, rhs: Self) -> Self {
        let mut counts = self.counts;
        for (c, r) in counts.iter_mut().zip(rhs.counts) {
            *c += r;
        }
        ClassDistribution {
            counts,
            total: self.total + rhs.total,
        }
    }
}

pub fn class_distribution(labels: &[Label]) -> ClassDistribution {
    let mut counts = [0; Label::COUNT];
    for l in labels {
        counts[l.index()] += 1;
    }
    ClassDistribution {
        counts,
        total: labels.len(),
    }
}

/// The PRNG behind every seeded operation: xoshiro256** seeded through SplitMix64.
pub fn seeded_rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Number of items drawn from a class of `n` at `fraction`, half rounding away from zero.
pub fn stratum_take(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).round() as usize).min(n)
}

/// Seeded per-class sample of row positions: for each class in ordinal order
/// the class rows are shuffled and the first `take(n_c)` kept. The returned
/// rows are sorted, so corpus order is preserved.
pub(crate) fn stratified_sample(
    labels: &[Label],
    rng: &mut Xoshiro256StarStar,
    take: impl Fn(usize) -> usize,
) -> Vec<usize> {
    let mut chosen = Vec::new();
    for class in Label::ALL {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        let k = take(rows.len());
        rows.shuffle(rng);
        chosen.extend_from_slice(&rows[..k]);
    }
    chosen.sort_unstable();
    chosen
}

/// Per-class seeded train/test partition; `round(test_fraction * n_c)` of each
/// class goes to test. Both halves keep corpus order.
pub fn stratified_split(
    corpus: &LabeledCorpus,
    test_fraction: f64,
    seed: u64,
) -> Result<(LabeledCorpus, LabeledCorpus), CorpusError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CorpusError::BadFraction(test_fraction));
    }
    let labels = corpus.require_labels()?;
    let dist = class_distribution(labels);
    if let Some(c) = Label::ALL.into_iter().find(|c| dist.counts[c.index()] < 2) {
        return Err(CorpusError::ClassTooSmall(c));
    }
    let mut rng = seeded_rng(seed);
    let test_rows = stratified_sample(labels, &mut rng, |n| stratum_take(n, test_fraction));
    let mut is_test = vec![false; corpus.len()];
    for &i in &test_rows {
        is_test[i] = true;
    }
    let train_rows: Vec<usize> = (0..corpus.len()).filter(|&i| !is_test[i]).collect();
    Ok((corpus.select(&train_rows), corpus.select(&test_rows)))
}

/// One histogram bucket covering `[start, end]` words inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBucket {
    pub start: usize,
    pub end: usize,
    pub count: usize,
}

/// Post lengths in word tokens, bucketed as `[0, w-1], [w, 2w-1], ...` up to the longest post.
pub fn length_histogram(corpus: &LabeledCorpus, bucket_width: usize) -> Vec<LengthBucket> {
    let width = bucket_width.max(1);
    let lengths: Vec<usize> = corpus
        .documents()
        .iter()
        .map(|d| tokenize(&d.text).iter().filter(|t| t.is_word).count())
        .collect();
    let Some(&max) = lengths.iter().max() else {
        return Vec::new();
    };
    let mut buckets: Vec<LengthBucket> = (0..=max / width)
        .map(|b| LengthBucket {
            start: b * width,
            end: b * width + width - 1,
            count: 0,
        })
        .collect();
    for len in lengths {
        buckets[len / width].count += 1;
    }
    buckets
}

/// CSV `bucket_start,bucket_end,count`.
pub fn write_histogram_csv<W: Write>(buckets: &[LengthBucket], out: W) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bucket_start", "bucket_end", "count"])?;
    for b in buckets {
        w.write_record([b.start.to_string(), b.end.to_string(), b.count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
