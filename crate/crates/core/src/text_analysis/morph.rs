use super::{Lexicon, MorphFeatures, PosTag, Token};

/// Person/number features from the morphology lexicon.
///
/// A lexicon entry's features apply only when the token carries the entry's
/// tag, so e.g. "are" is marked plural only when tagged AUX.
pub(super) fn morph_analyze(lexicon: &Lexicon, tokens: &[Token], tags: &[PosTag]) -> Vec<MorphFeatures> {
    tokens
        .iter()
        .zip(tags)
        .map(|(tok, &tag)| {
            if !tok.is_word {
                return MorphFeatures::default();
            }
            match lexicon.lookup(&tok.lower) {
                Some(e) if e.tag == tag => MorphFeatures {
                    person: e.person,
                    number: e.number,
                },
                _ => MorphFeatures::default(),
            }
        })
        .collect()
}
