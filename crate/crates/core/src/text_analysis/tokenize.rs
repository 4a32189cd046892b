use serde::{Deserialize, Serialize};

/// A token span over the source text.
///
/// `start`/`end` are byte offsets into the UTF-8 input, so `&text[start..end] == surface`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub start: usize,
    pub end: usize,
    /// True when the token contains at least one letter or digit.
    pub is_word: bool,
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into word tokens and single-character symbol tokens.
///
/// Word tokens are maximal runs of alphanumeric characters; an apostrophe is kept
/// when it sits between two alphanumeric characters ("don't"). Every other
/// non-whitespace character becomes its own token.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_end = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_alphanumeric() {
                    j += 1;
                } else if is_apostrophe(cj) && chars.get(j + 1).is_some_and(|&(_, n)| n.is_alphanumeric()) {
                    j += 2;
                } else {
                    break;
                }
            }
            tokens.push(make_token(text, start, byte_end(j), true));
            i = j;
        } else {
            tokens.push(make_token(text, start, byte_end(i + 1), false));
            i += 1;
        }
    }
    tokens
}

fn make_token(text: &str, start: usize, end: usize, is_word: bool) -> Token {
    let surface = &text[start..end];
    Token {
        surface: surface.to_string(),
        lower: surface.to_lowercase(),
        start,
        end,
        is_word,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \n\t ").is_empty());
    }

    #[test]
    fn punctuation_splits_off() {
        assert_eq!(surfaces("I am lost."), ["I", "am", "lost", "."]);
    }

    #[test]
    fn internal_apostrophes_are_kept() {
        assert_eq!(surfaces("don't stop"), ["don't", "stop"]);
        assert_eq!(surfaces("I\u{2019}m ok"), ["I\u{2019}m", "ok"]);
        assert_eq!(surfaces("'quoted' dogs'"), ["'", "quoted", "'", "dogs", "'"]);
    }

    #[test]
    fn symbol_runs_become_single_chars() {
        let toks = tokenize("wow!!! 😢😢");
        let s: Vec<&str> = toks.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(s, ["wow", "!", "!", "!", "😢", "😢"]);
        assert!(toks[0].is_word);
        assert!(!toks[4].is_word);
        assert_eq!(&"wow!!! 😢😢"[toks[5].start..toks[5].end], "😢");
    }

    #[test]
    fn lower_is_case_folded() {
        let t = &tokenize("HeLLo")[0];
        assert_eq!(t.lower, "hello");
        assert_eq!((t.start, t.end), (0, 5));
    }

    #[test]
    fn digits_are_words() {
        let toks = tokenize("21 years");
        assert!(toks[0].is_word);
        assert_eq!(toks[0].surface, "21");
    }
}
