use super::{Lexicon, PosTag, Token};

fn is_punctuation(c: char) -> bool {
    matches!(
        c,
        '!' | '"' | '\'' | '(' | ')' | ',' | '-' | '.' | '/' | ':' | ';' | '?'
            | '[' | '\\' | ']' | '_' | '{' | '}' | '`'
            | '«' | '»' | '¡' | '¿' | '·'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205E}'
            | '\u{3000}'..='\u{303F}'
    )
}

const ADJ_SUFFIXES: [&str; 8] = ["ous", "ful", "less", "able", "ible", "ive", "ish", "ical"];

fn is_terminator(token: &Token) -> bool {
    matches!(token.surface.as_str(), "." | "!" | "?")
}

/// Three-stage tagger: lexicon lookup, then suffix/shape rules, then NOUN.
pub(super) fn pos_tag(lexicon: &Lexicon, tokens: &[Token]) -> Vec<PosTag> {
    let mut sentence_initial = true;
    tokens
        .iter()
        .map(|tok| {
            if !tok.is_word {
                if is_terminator(tok) {
                    sentence_initial = true;
                }
                let c = tok.surface.chars().next().unwrap_or(' ');
                return if is_punctuation(c) { PosTag::Punct } else { PosTag::Sym };
            }
            let tag = tag_word(lexicon, tok, sentence_initial);
            sentence_initial = false;
            tag
        })
        .collect()
}

fn tag_word(lexicon: &Lexicon, tok: &Token, sentence_initial: bool) -> PosTag {
    if let Some(entry) = lexicon.lookup(&tok.lower) {
        return entry.tag;
    }
    let first = tok.surface.chars().next().unwrap_or(' ');
    if first.is_numeric() {
        return PosTag::Num;
    }
    if first.is_uppercase() && !sentence_initial {
        return PosTag::Propn;
    }
    let w = tok.lower.as_str();
    let len = w.chars().count();
    if len >= 4 && w.ends_with("ly") {
        PosTag::Adv
    } else if (len >= 5 && w.ends_with("ing")) || (len >= 4 && w.ends_with("ed")) {
        PosTag::Verb
    } else if len >= 5 && ADJ_SUFFIXES.iter().any(|s| w.ends_with(s)) {
        PosTag::Adj
    } else {
        PosTag::Noun
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::tokenize;

    fn tags(text: &str) -> Vec<PosTag> {
        pos_tag(&Lexicon::bundled(), &tokenize(text))
    }

    #[test]
    fn punctuation_and_default() {
        assert_eq!(tags("."), [PosTag::Punct]);
        assert_eq!(tags("blorp"), [PosTag::Noun]);
        assert_eq!(tags("$ + 😢"), [PosTag::Sym, PosTag::Sym, PosTag::Sym]);
        assert_eq!(tags("\u{201C}"), [PosTag::Punct]);
    }

    #[test]
    fn lexicon_entries() {
        use PosTag::*;
        assert_eq!(tags("I am lost"), [Pron, Aux, Verb]);
        assert_eq!(
            tags("I am lost because I do not like them"),
            [Pron, Aux, Verb, Sconj, Pron, Aux, Part, Verb, Pron]
        );
    }

    #[test]
    fn shape_and_suffix_rules() {
        use PosTag::*;
        assert_eq!(tags("Blorp met Alice"), [Noun, Noun, Propn]);
        assert_eq!(tags("quickly crying walked hopeless 42"), [Adv, Verb, Verb, Adj, Num]);
        assert_eq!(tags("ok. Crying"), [Intj, Punct, Verb]);
    }
}
