use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::text_analysis::AnalyzedDocument;

/// Lexicographically ordered unigram vocabulary: lowercased word tokens of at
/// least two characters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VocabularyIndex {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl VocabularyIndex {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, column: usize) -> Option<&str> {
        self.terms.get(column).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

impl TryFrom<Vec<String>> for VocabularyIndex {
    type Error = String;

    fn try_from(terms: Vec<String>) -> Result<Self, Self::Error> {
        if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(format!("vocabulary not strictly sorted at {:?}", w[1]));
        }
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Self { terms, index })
    }
}

impl From<VocabularyIndex> for Vec<String> {
    fn from(v: VocabularyIndex) -> Self {
        v.terms
    }
}

pub(crate) fn qualifies(lower: &str) -> bool {
    lower.chars().nth(1).is_some()
}

pub fn fit_vocabulary<'a>(
    docs: impl IntoIterator<Item = &'a AnalyzedDocument>,
) -> Result<VocabularyIndex, FeatureError> {
    let mut terms: Vec<String> = docs
        .into_iter()
        .flat_map(|d| d.tokens.iter())
        .filter(|t| t.is_word && qualifies(&t.lower))
        .map(|t| t.lower.clone())
        .collect();
    terms.sort_unstable();
    terms.dedup();
    if terms.is_empty() {
        return Err(FeatureError::EmptyVocabulary);
    }
    Ok(VocabularyIndex::try_from(terms).expect("sorted and deduplicated"))
}

/// Raw term counts, sorted by column; out-of-vocabulary tokens are dropped.
pub fn vectorize_words(doc: &AnalyzedDocument, vocab: &VocabularyIndex) -> Vec<(usize, u32)> {
    let mut counts: HashMap<usize, u32> = HashMap::new();
    for t in doc.tokens.iter().filter(|t| t.is_word) {
        if let Some(col) = vocab.get(&t.lower) {
            *counts.entry(col).or_default() += 1;
        }
    }
    let mut out: Vec<(usize, u32)> = counts.into_iter().collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::analyze;
    use proptest::prelude::*;

    fn vocab(texts: &[&str]) -> Result<VocabularyIndex, FeatureError> {
        let docs: Vec<_> = texts.iter().map(|t| analyze(t)).collect();
        fit_vocabulary(&docs)
    }

    #[test]
    fn lexicographic_columns() {
        let v = vocab(&["cat sat", "Cat mat"]).unwrap();
        assert_eq!(v.terms(), ["cat", "mat", "sat"]);
        assert_eq!(v.get("sat"), Some(2));
        assert_eq!(v, vocab(&["cat sat", "Cat mat"]).unwrap());
    }

    #[test]
    fn single_char_tokens_only() {
        assert!(matches!(vocab(&["a b c"]), Err(FeatureError::EmptyVocabulary)));
    }

    #[test]
    fn counting() {
        let v = vocab(&["cat sat", "cat mat"]).unwrap();
        assert_eq!(vectorize_words(&analyze("cat cat sat"), &v), [(0, 2), (2, 1)]);
        assert!(vectorize_words(&analyze(""), &v).is_empty());
        assert!(vectorize_words(&analyze("dog dog"), &v).is_empty());
    }

    #[test]
    fn serde_validates_order() {
        let v = vocab(&["cat sat mat"]).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["cat","mat","sat"]"#);
        assert_eq!(serde_json::from_str::<VocabularyIndex>(&json).unwrap(), v);
        assert!(serde_json::from_str::<VocabularyIndex>(r#"["sat","cat"]"#).is_err());
    }

    proptest! {
        #[test]
        fn counts_match_brute_force_tally(text in "[a-dA-D' .,!]{0,80}") {
            let doc = analyze(&text);
            let v = match fit_vocabulary([&doc]) {
                Ok(v) => v,
                Err(_) => return Ok(()),
            };
            // oracle: split on anything that is not a letter or apostrophe, then
            // trim edge apostrophes, matching the tokenizer's word shape
            let mut tally: std::collections::BTreeMap<String, u32> = Default::default();
            for raw in text.split(|c: char| !(c.is_alphanumeric() || c == '\'')) {
                for piece in raw.split("''") {
                    let w = piece.trim_matches('\'').to_lowercase();
                    if w.chars().count() >= 2 {
                        *tally.entry(w).or_default() += 1;
                    }
                }
            }
            let got: Vec<(String, u32)> = vectorize_words(&doc, &v)
                .into_iter()
                .map(|(i, c)| (v.term(i).unwrap().to_string(), c))
                .collect();
            let want: Vec<(String, u32)> = tally.into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }
}
