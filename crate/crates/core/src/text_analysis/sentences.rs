use std::ops::Range;

use super::Token;

fn is_terminator(token: &Token) -> bool {
    matches!(token.surface.as_str(), "." | "!" | "?")
}

/// Groups tokens into sentences, returned as token-index ranges.
///
/// A boundary follows each run of `.`, `!` or `?`. Trailing material without a
/// terminator forms a final sentence. Segments without any word token are
/// merged into a neighbour, so the ranges always cover every token whenever the
/// text contains at least one word, and there are no sentences otherwise.
pub fn split_sentences(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut segments: Vec<Range<usize>> = Vec::new();
    let mut start = 0;
    for (i, tok) in tokens.iter().enumerate() {
        let next_is_terminator = tokens.get(i + 1).is_some_and(is_terminator);
        if is_terminator(tok) && !next_is_terminator {
            segments.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        segments.push(start..tokens.len());
    }

    let has_word = |r: &Range<usize>| tokens[r.clone()].iter().any(|t| t.is_word);
    let mut sentences: Vec<Range<usize>> = Vec::new();
    let mut pending: Option<usize> = None;
    for seg in segments {
        if has_word(&seg) {
            let begin = pending.take().unwrap_or(seg.start);
            sentences.push(begin..seg.end);
        } else if let Some(last) = sentences.last_mut() {
            last.end = seg.end;
        } else {
            pending.get_or_insert(seg.start);
        }
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::tokenize;

    fn sentence_texts(text: &str) -> Vec<String> {
        let toks = tokenize(text);
        split_sentences(&toks)
            .into_iter()
            .map(|r| text[toks[r.start].start..toks[r.end - 1].end].to_string())
            .collect()
    }

    #[test]
    fn empty_has_no_sentences() {
        assert!(split_sentences(&tokenize("")).is_empty());
    }

    #[test]
    fn two_simple_sentences() {
        assert_eq!(sentence_texts("Hi. Bye."), ["Hi.", "Bye."]);
    }

    #[test]
    fn terminator_runs_collapse() {
        assert_eq!(sentence_texts("Wait... what?! ok"), ["Wait...", "what?!", "ok"]);
    }

    #[test]
    fn punctuation_only_text_has_no_sentences() {
        assert!(split_sentences(&tokenize("... !!")).is_empty());
    }

    #[test]
    fn leading_and_trailing_punctuation_attach_to_neighbours() {
        let toks = tokenize("!! hello . :)");
        let s = split_sentences(&toks);
        assert_eq!(s, vec![0..toks.len()]);
    }
}
