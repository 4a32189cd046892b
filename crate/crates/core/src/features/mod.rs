//! The four feature templates and their assembly into one vector per post.
//!
//! Column layout: the sparse word block first (raw, unnormalized counts), then
//! the dense tail of the active blocks among POS distribution, readability &
//! style (min-max scaled) and person & number, always in that order. Word
//! weights are therefore on a different scale from the dense blocks, and
//! coefficient magnitudes are only comparable within a template.

mod person_number;
mod pos;
mod readability;
mod scaler;
mod vocabulary;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text_analysis::{AnalyzedDocument, EasyWords, PosTag};

pub use person_number::{person_number, PERSON_NUMBER_NAMES};
pub use pos::{pos_distribution, tag_counts, PosSoftmaxInput};
pub use readability::{
    readability_style, style_from_statistics, style_index, TextStatistics, STYLE_NAMES, STYLE_WIDTH,
};
pub use scaler::StyleScaler;
pub use vocabulary::{fit_vocabulary, vectorize_words, VocabularyIndex};

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("no token of two or more characters; vocabulary would be empty")]
    EmptyVocabulary,
    #[error("cannot fit on an empty corpus")]
    EmptyCorpus,
    #[error("readability scaler has not been fitted")]
    ScalerNotFitted,
    #[error("schema uses word features but no vocabulary was supplied")]
    VocabularyMissing,
    #[error("vocabulary has {actual} terms but the schema declares {expected}")]
    VocabularyMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureTemplate {
    Words,
    PosDist,
    ReadabilityStyle,
    PersonNumber,
}

impl FeatureTemplate {
    pub const ALL: [FeatureTemplate; 4] = [
        FeatureTemplate::Words,
        FeatureTemplate::PosDist,
        FeatureTemplate::ReadabilityStyle,
        FeatureTemplate::PersonNumber,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureTemplate::Words => "words",
            FeatureTemplate::PosDist => "pos",
            FeatureTemplate::ReadabilityStyle => "read",
            FeatureTemplate::PersonNumber => "pnum",
        }
    }

    /// Width of the dense templates; `None` for the vocabulary-sized word block.
    pub fn fixed_width(self) -> Option<usize> {
        match self {
            FeatureTemplate::Words => None,
            FeatureTemplate::PosDist => Some(PosTag::COUNT),
            FeatureTemplate::ReadabilityStyle => Some(STYLE_WIDTH),
            FeatureTemplate::PersonNumber => Some(PERSON_NUMBER_NAMES.len()),
        }
    }
}

impl fmt::Display for FeatureTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureTemplate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureTemplate::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown template {s:?} (expected words, pos, read or pnum)"))
    }
}

/// The two model configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSet {
    /// Words, POS tags, readability & style.
    Model1,
    /// Model 1 plus person & number.
    Model2,
}

impl FeatureSet {
    pub fn templates(self) -> &'static [FeatureTemplate] {
        use FeatureTemplate::*;
        match self {
            FeatureSet::Model1 => &[Words, PosDist, ReadabilityStyle],
            FeatureSet::Model2 => &[Words, PosDist, ReadabilityStyle, PersonNumber],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::Model1 => "model1",
            FeatureSet::Model2 => "model2",
        }
    }
}

impl FromStr for FeatureSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "model1" => Ok(FeatureSet::Model1),
            "model2" => Ok(FeatureSet::Model2),
            _ => Err(format!("unknown feature set {s:?} (expected model1 or model2)")),
        }
    }
}

/// Named, ordered feature space of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    templates: Vec<FeatureTemplate>,
    vocab_size: usize,
    pos_input: PosSoftmaxInput,
    scaler: Option<StyleScaler>,
}

impl FeatureSchema {
    /// Schema over the given templates, kept in canonical block order.
    pub fn new(templates: &[FeatureTemplate], vocab_size: usize, pos_input: PosSoftmaxInput) -> Self {
        let mut templates = templates.to_vec();
        templates.sort_unstable();
        templates.dedup();
        let vocab_size = if templates.contains(&FeatureTemplate::Words) {
            vocab_size
        } else {
            0
        };
        Self {
            templates,
            vocab_size,
            pos_input,
            scaler: None,
        }
    }

    pub fn for_set(set: FeatureSet, vocab_size: usize, pos_input: PosSoftmaxInput) -> Self {
        Self::new(set.templates(), vocab_size, pos_input)
    }

    pub fn with_scaler(mut self, scaler: StyleScaler) -> Self {
        self.scaler = Some(scaler);
        self
    }

    pub fn templates(&self) -> &[FeatureTemplate] {
        &self.templates
    }

    pub fn is_active(&self, t: FeatureTemplate) -> bool {
        self.templates.contains(&t)
    }

    pub fn feature_set(&self) -> Option<FeatureSet> {
        [FeatureSet::Model1, FeatureSet::Model2]
            .into_iter()
            .find(|s| s.templates() == self.templates.as_slice())
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn pos_input(&self) -> PosSoftmaxInput {
        self.pos_input
    }

    pub fn scaler(&self) -> Option<&StyleScaler> {
        self.scaler.as_ref()
    }

    pub fn needs_scaler(&self) -> bool {
        self.is_active(FeatureTemplate::ReadabilityStyle)
    }

    pub fn width(&self, t: FeatureTemplate) -> usize {
        if !self.is_active(t) {
            return 0;
        }
        t.fixed_width().unwrap_or(self.vocab_size)
    }

    /// Total dimension D.
    pub fn dimension(&self) -> usize {
        self.templates.iter().map(|&t| self.width(t)).sum()
    }

    /// First column of an active template.
    pub fn offset(&self, t: FeatureTemplate) -> Option<usize> {
        if !self.is_active(t) {
            return None;
        }
        Some(
            self.templates
                .iter()
                .take_while(|&&x| x != t)
                .map(|&x| self.width(x))
                .sum(),
        )
    }

    /// `(template, name)` for every column in order.
    pub fn columns<'a>(&'a self, vocab: Option<&'a VocabularyIndex>) -> Vec<(FeatureTemplate, String)> {
        let mut out = Vec::with_capacity(self.dimension());
        for &t in &self.templates {
            match t {
                FeatureTemplate::Words => {
                    for j in 0..self.vocab_size {
                        let name = vocab
                            .and_then(|v| v.term(j))
                            .map_or_else(|| format!("word_{j}"), str::to_string);
                        out.push((t, name));
                    }
                }
                FeatureTemplate::PosDist => out.extend(PosTag::ALL.iter().map(|p| (t, p.as_str().to_string()))),
                FeatureTemplate::ReadabilityStyle => out.extend(STYLE_NAMES.iter().map(|n| (t, n.to_string()))),
                FeatureTemplate::PersonNumber => out.extend(PERSON_NUMBER_NAMES.iter().map(|n| (t, n.to_string()))),
            }
        }
        out
    }

    pub fn scale_style(&self, raw: &[f64; STYLE_WIDTH]) -> Result<[f64; STYLE_WIDTH], FeatureError> {
        Ok(self.scaler.as_ref().ok_or(FeatureError::ScalerNotFitted)?.scale(raw))
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if let Some(s) = &self.scaler {
            s.validate()?;
        }
        let mut sorted = self.templates.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != self.templates {
            return Err("templates must be unique and in block order".into());
        }
        if !self.is_active(FeatureTemplate::Words) && self.vocab_size != 0 {
            return Err("vocab_size set without a word block".into());
        }
        Ok(())
    }
}

/// One post in feature space: a sparse word block followed by a dense tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    word_dim: usize,
    words: Vec<(usize, u32)>,
    dense: Vec<f64>,
}

impl FeatureVector {
    /// `words` must be sorted by column with every column below `word_dim`.
    pub fn new(word_dim: usize, words: Vec<(usize, u32)>, dense: Vec<f64>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(words.iter().all(|&(j, _)| j < word_dim));
        Self { word_dim, words, dense }
    }

    /// Vector without a word block.
    pub fn dense(values: Vec<f64>) -> Self {
        Self::new(0, Vec::new(), values)
    }

    pub fn dim(&self) -> usize {
        self.word_dim + self.dense.len()
    }

    pub fn word_counts(&self) -> &[(usize, u32)] {
        &self.words
    }

    pub fn dense_tail(&self) -> &[f64] {
        &self.dense
    }

    /// `(column, value)` pairs for stored entries; dense zeros included.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let off = self.word_dim;
        self.words
            .iter()
            .map(|&(j, c)| (j, f64::from(c)))
            .chain(self.dense.iter().enumerate().map(move |(j, &v)| (off + j, v)))
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.entries().map(|(j, v)| weights[j] * v).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (j, v) in self.entries() {
            out[j] = v;
        }
        out
    }
}

/// Builds a post's vector under `schema`.
pub fn assemble(
    doc: &AnalyzedDocument,
    schema: &FeatureSchema,
    vocab: Option<&VocabularyIndex>,
    easy_words: Option<&EasyWords>,
) -> Result<FeatureVector, FeatureError> {
    let mut words = Vec::new();
    if schema.is_active(FeatureTemplate::Words) {
        let vocab = vocab.ok_or(FeatureError::VocabularyMissing)?;
        if vocab.len() != schema.vocab_size() {
            return Err(FeatureError::VocabularyMismatch {
                expected: schema.vocab_size(),
                actual: vocab.len(),
            });
        }
        words = vectorize_words(doc, vocab);
    }
    let mut dense = Vec::with_capacity(schema.dimension() - schema.vocab_size());
    if schema.is_active(FeatureTemplate::PosDist) {
        dense.extend(pos_distribution(doc, schema.pos_input()));
    }
    if schema.is_active(FeatureTemplate::ReadabilityStyle) {
        let scaled = schema.scale_style(&readability_style(doc, easy_words))?;
        // a post without words keeps the all-zero style block after scaling too
        if doc.word_count() == 0 {
            dense.extend([0.0; STYLE_WIDTH]);
        } else {
            dense.extend(scaled);
        }
    }
    if schema.is_active(FeatureTemplate::PersonNumber) {
        dense.extend(person_number(doc));
    }
    Ok(FeatureVector::new(schema.vocab_size(), words, dense))
}
