use serde::{Deserialize, Serialize};

use crate::text_analysis::{AnalyzedDocument, PosTag};

/// What the POS softmax is applied to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosSoftmaxInput {
    /// Raw tag counts per post.
    #[default]
    Counts,
    /// Tag counts divided by the token count.
    RelFreq,
}

pub fn tag_counts(doc: &AnalyzedDocument) -> [f64; PosTag::COUNT] {
    let mut counts = [0.0; PosTag::COUNT];
    for t in &doc.tags {
        counts[t.index()] += 1.0;
    }
    counts
}

/// Softmax over the 17 tag counts in [`PosTag::ALL`] order.
///
/// With raw counts the output sharpens as posts get longer.
pub fn pos_distribution(doc: &AnalyzedDocument, input: PosSoftmaxInput) -> [f64; PosTag::COUNT] {
    let mut x = tag_counts(doc);
    if input == PosSoftmaxInput::RelFreq && !doc.tags.is_empty() {
        let n = doc.tags.len() as f64;
        x.iter_mut().for_each(|v| *v /= n);
    }
    softmax(&mut x);
    x
}

pub(crate) fn softmax(x: &mut [f64]) {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in x.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    // exp underflows for count gaps beyond ~745; keep every component positive
    x.iter_mut().for_each(|v| *v = (*v / sum).max(f64::MIN_POSITIVE));
}
