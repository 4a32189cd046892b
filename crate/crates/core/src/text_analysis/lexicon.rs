use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::{Number, Person, PosTag};

pub(crate) const BUNDLED_LEXICON: &str = include_str!("../../resources/lexicon.tsv");
pub(crate) const BUNDLED_EASY_WORDS: &str = include_str!("../../resources/easy_words.txt");

pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const EASY_WORDS_FILE: &str = "easy_words.txt";

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexEntry {
    pub tag: PosTag,
    pub person: Option<Person>,
    pub number: Option<Number>,
}

/// Closed-class and morphology lexicon keyed by lowercased form.
///
/// Text format, one entry per line: `form tag person number`, whitespace
/// separated, `-` for an absent feature. Blank lines and `#` comments are
/// skipped. The first entry for a form wins.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, LexEntry>,
}

impl Lexicon {
    pub fn parse(source: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (i, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| LexiconError::Parse { line: i + 1, reason };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 4 {
                return Err(err(format!("expected 2 to 4 fields, found {}", fields.len())));
            }
            let tag: PosTag = fields[1].parse().map_err(err)?;
            let person = match fields.get(2).copied().unwrap_or("-") {
                "-" => None,
                "1" => Some(Person::First),
                "2" => Some(Person::Second),
                "3" => Some(Person::Third),
                other => return Err(err(format!("bad person {other:?}"))),
            };
            let number = match fields.get(3).copied().unwrap_or("-") {
                "-" => None,
                "Sg" => Some(Number::Singular),
                "Pl" => Some(Number::Plural),
                other => return Err(err(format!("bad number {other:?}"))),
            };
            entries
                .entry(normalize_form(fields[0]))
                .or_insert(LexEntry { tag, person, number });
        }
        Ok(Self { entries })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is well-formed")
    }

    pub fn lookup(&self, lower: &str) -> Option<&LexEntry> {
        self.entries.get(&normalize_form(lower))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lowercases and maps typographic apostrophes to `'`.
pub(crate) fn normalize_form(form: &str) -> String {
    form.to_lowercase().replace('\u{2019}', "'")
}

/// Familiar-word list used for the Dale-Chall difficult-word count.
#[derive(Debug, Clone, Default)]
pub struct EasyWords {
    words: HashSet<String>,
}

impl EasyWords {
    pub fn parse(source: &str) -> Self {
        let words = source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(normalize_form)
            .collect();
        Self { words }
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_EASY_WORDS)
    }

    pub fn contains(&self, lower: &str) -> bool {
        self.words.contains(&normalize_form(lower))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub(crate) fn read_lexicon(dir: &Path) -> Result<Lexicon, LexiconError> {
    let path = dir.join(LEXICON_FILE);
    let text = fs::read_to_string(&path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Lexicon::parse(&text)
}

/// Returns `None` when the directory carries no easy-word list.
pub(crate) fn read_easy_words(dir: &Path) -> Result<Option<EasyWords>, LexiconError> {
    let path = dir.join(EASY_WORDS_FILE);
    match fs::read_to_string(&path) {
        Ok(text) => Ok(Some(EasyWords::parse(&text))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(source) => Err(LexiconError::Io {
            path: path.display().to_string(),
            source,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_resources_load() {
        let lex = Lexicon::bundled();
        assert!(lex.len() > 300);
        let i = lex.lookup("I").unwrap();
        assert_eq!(i.tag, PosTag::Pron);
        assert_eq!(i.person, Some(Person::First));
        assert_eq!(i.number, Some(Number::Singular));
        assert_eq!(lex.lookup("lost").unwrap().tag, PosTag::Verb);
        assert!(EasyWords::bundled().contains("about"));
        assert!(!EasyWords::bundled().contains("hopelessness"));
    }

    #[test]
    fn curly_apostrophe_matches() {
        let lex = Lexicon::bundled();
        assert_eq!(lex.lookup("don\u{2019}t").unwrap().tag, PosTag::Aux);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = Lexicon::parse("# c\nfoo NOUN\nbar BOGUS\n").unwrap_err();
        assert!(matches!(err, LexiconError::Parse { line: 3, .. }), "{err}");
        assert!(Lexicon::parse("x NOUN 4").is_err());
        assert!(Lexicon::parse("x NOUN 1 Du").is_err());
    }

    #[test]
    fn first_entry_wins() {
        let lex = Lexicon::parse("like VERB\nlike ADP\n").unwrap();
        assert_eq!(lex.lookup("like").unwrap().tag, PosTag::Verb);
    }
}
