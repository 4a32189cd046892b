//! Readability grades and style ratios over an analyzed post.
//!
//! Statistics: W words, S sentences, Y syllables, L letters (alphanumeric
//! characters of word tokens), CW complex words (>= 3 syllables), LW long
//! words (> 6 letters), DW difficult words (not on the easy-word list; CW when
//! no list is available), T distinct lowercased word types.

use std::collections::HashSet;

use crate::text_analysis::{AnalyzedDocument, EasyWords, PosTag};

pub const STYLE_WIDTH: usize = 22;

pub const STYLE_NAMES: [&str; STYLE_WIDTH] = [
    "flesch_reading_ease",
    "kincaid_grade",
    "ari",
    "coleman_liau",
    "gunning_fog",
    "lix",
    "rix",
    "smog",
    "dale_chall",
    "word_count",
    "sentence_count",
    "chars_per_word",
    "syllables_per_word",
    "words_per_sentence",
    "type_token_ratio",
    "long_word_ratio",
    "complex_word_ratio",
    "pronoun_ratio",
    "conjunction_ratio",
    "preposition_ratio",
    "aux_ratio",
    "tobe_ratio",
];

const BE_FORMS: [&str; 8] = ["be", "am", "is", "are", "was", "were", "been", "being"];

/// Raw counts behind the metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TextStatistics {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub letters: usize,
    pub complex_words: usize,
    pub long_words: usize,
    pub difficult_words: usize,
    pub types: usize,
    pub pronouns: usize,
    pub conjunctions: usize,
    pub prepositions: usize,
    pub auxiliaries: usize,
    pub tobe: usize,
}

impl TextStatistics {
    pub fn of(doc: &AnalyzedDocument, easy_words: Option<&EasyWords>) -> Self {
        let mut s = TextStatistics {
            sentences: doc.sentences.len(),
            ..Default::default()
        };
        let mut types = HashSet::new();
        for (tok, tag, _, syl) in doc.words() {
            let letters = tok.surface.chars().filter(|c| c.is_alphanumeric()).count();
            let complex = syl >= 3;
            s.words += 1;
            s.syllables += syl;
            s.letters += letters;
            s.complex_words += usize::from(complex);
            s.long_words += usize::from(letters > 6);
            s.difficult_words += usize::from(match easy_words {
                Some(list) => !list.contains(&tok.lower),
                None => complex,
            });
            types.insert(tok.lower.as_str());
            match tag {
                PosTag::Pron => s.pronouns += 1,
                PosTag::Cconj | PosTag::Sconj => s.conjunctions += 1,
                PosTag::Adp => s.prepositions += 1,
                PosTag::Aux => s.auxiliaries += 1,
                _ => {}
            }
            s.tobe += usize::from(BE_FORMS.contains(&tok.lower.as_str()));
        }
        s.types = types.len();
        s
    }
}

/// The 22 raw metrics in [`STYLE_NAMES`] order; all zero for a post without words.
pub fn readability_style(doc: &AnalyzedDocument, easy_words: Option<&EasyWords>) -> [f64; STYLE_WIDTH] {
    style_from_statistics(&TextStatistics::of(doc, easy_words))
}

pub fn style_from_statistics(st: &TextStatistics) -> [f64; STYLE_WIDTH] {
    if st.words == 0 {
        return [0.0; STYLE_WIDTH];
    }
    let w = st.words as f64;
    let s = st.sentences.max(1) as f64;
    let y = st.syllables as f64;
    let l = st.letters as f64;
    let cw = st.complex_words as f64;
    let lw = st.long_words as f64;
    let dw = st.difficult_words as f64;
    let wps = w / s;
    let spw = y / w;

    let flesch = 206.835 - 1.015 * wps - 84.6 * spw;
    let kincaid = 0.39 * wps + 11.8 * spw - 15.59;
    let ari = 4.71 * (l / w) + 0.5 * wps - 21.43;
    let coleman_liau = 0.0588 * (100.0 * l / w) - 0.296 * (100.0 * s / w) - 15.8;
    let fog = 0.4 * (wps + 100.0 * cw / w);
    let lix = wps + 100.0 * lw / w;
    let rix = lw / s;
    let smog = 1.043 * (cw * 30.0 / s).sqrt() + 3.1291;
    let dw_ratio = dw / w;
    let dale_chall = 0.1579 * (100.0 * dw_ratio) + 0.0496 * wps + if dw_ratio > 0.05 { 3.6365 } else { 0.0 };

    [
        flesch,
        kincaid,
        ari,
        coleman_liau,
        fog,
        lix,
        rix,
        smog,
        dale_chall,
        w,
        s,
        l / w,
        spw,
        wps,
        st.types as f64 / w,
        lw / w,
        cw / w,
        st.pronouns as f64 / w,
        st.conjunctions as f64 / w,
        st.prepositions as f64 / w,
        st.auxiliaries as f64 / w,
        st.tobe as f64 / w,
    ]
}

pub fn style_index(name: &str) -> Option<usize> {
    STYLE_NAMES.iter().position(|n| *n == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::{analyze, bundled_analyzer};
    use approx::assert_abs_diff_eq;

    fn raw(text: &str) -> [f64; STYLE_WIDTH] {
        readability_style(&analyze(text), bundled_analyzer().easy_words())
    }

    fn metric(v: &[f64; STYLE_WIDTH], name: &str) -> f64 {
        v[style_index(name).unwrap()]
    }

    #[test]
    fn the_cat_sat() {
        let v = raw("The cat sat.");
        assert_eq!(metric(&v, "word_count"), 3.0);
        assert_eq!(metric(&v, "sentence_count"), 1.0);
        // 206.835 - 1.015*3 - 84.6*1 and 4.71*3 + 0.5*3 - 21.43
        assert_abs_diff_eq!(metric(&v, "flesch_reading_ease"), 119.19, epsilon = 1e-9);
        assert_abs_diff_eq!(metric(&v, "ari"), -5.80, epsilon = 1e-9);
        assert_abs_diff_eq!(metric(&v, "kincaid_grade"), 0.39 * 3.0 + 11.8 - 15.59, epsilon = 1e-12);
        // Coleman-Liau: 0.0588*300 - 0.296*(100/3) - 15.8
        assert_abs_diff_eq!(metric(&v, "coleman_liau"), 17.64 - 29.6 / 3.0 - 15.8, epsilon = 1e-9);
        assert_eq!(metric(&v, "smog"), 3.1291);
        // every word is familiar
        assert_abs_diff_eq!(metric(&v, "dale_chall"), 0.0496 * 3.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_is_all_zero() {
        assert_eq!(raw(""), [0.0; STYLE_WIDTH]);
        assert_eq!(raw("?! :)"), [0.0; STYLE_WIDTH]);
    }

    #[test]
    fn type_token_ratio() {
        assert_abs_diff_eq!(
            metric(&raw("cat cat cat."), "type_token_ratio"),
            1.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn difficult_and_complex_words() {
        let doc = analyze("Hopelessness overwhelms everybody. I am sad.");
        let st = TextStatistics::of(&doc, bundled_analyzer().easy_words());
        assert_eq!(st.words, 6);
        assert_eq!(st.sentences, 2);
        assert_eq!(st.complex_words, 3); // hope-less-ness, o-ver-whelms, ev-e-ry-bod-y
        assert_eq!(st.long_words, 3);
        assert_eq!(st.difficult_words, 2);
        assert_eq!(st.pronouns, 2);
        assert_eq!(st.auxiliaries, 1);
        assert_eq!(st.tobe, 1);
        let fallback = TextStatistics::of(&doc, None);
        assert_eq!(fallback.difficult_words, fallback.complex_words);
        let v = style_from_statistics(&st);
        // DW/W = 1/3 > 0.05 adds the adjustment constant
        assert_abs_diff_eq!(v[8], 0.1579 * (100.0 / 3.0) + 0.0496 * 3.0 + 3.6365, epsilon = 1e-12);
    }

    #[test]
    fn names_are_unique() {
        let set: HashSet<_> = STYLE_NAMES.iter().collect();
        assert_eq!(set.len(), STYLE_WIDTH);
    }
}
