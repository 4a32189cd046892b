//! Deterministic linguistic analysis: tokenization, sentence splitting,
//! syllable counting, universal POS tagging and person/number morphology.
//!
//! Everything here is a pure function of the input text and the read-only
//! resources held by an [`Analyzer`].

mod lexicon;
mod morph;
mod sentences;
mod syllables;
mod tagger;
mod tokenize;

use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

pub use lexicon::{EasyWords, LexEntry, Lexicon, LexiconError, EASY_WORDS_FILE, LEXICON_FILE};
pub use sentences::split_sentences;
pub use syllables::count_syllables;
pub use tokenize::{tokenize, Token};

/// Environment variable naming a directory that replaces the bundled resources.
pub const RESOURCES_ENV: &str = "DEPSIG_RESOURCES";

/// The 17 universal part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl PosTag {
    pub const COUNT: usize = 17;

    pub const ALL: [PosTag; Self::COUNT] = [
        PosTag::Adj,
        PosTag::Adp,
        PosTag::Adv,
        PosTag::Aux,
        PosTag::Cconj,
        PosTag::Det,
        PosTag::Intj,
        PosTag::Noun,
        PosTag::Num,
        PosTag::Part,
        PosTag::Pron,
        PosTag::Propn,
        PosTag::Punct,
        PosTag::Sconj,
        PosTag::Sym,
        PosTag::Verb,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Adj => "ADJ",
            PosTag::Adp => "ADP",
            PosTag::Adv => "ADV",
            PosTag::Aux => "AUX",
            PosTag::Cconj => "CCONJ",
            PosTag::Det => "DET",
            PosTag::Intj => "INTJ",
            PosTag::Noun => "NOUN",
            PosTag::Num => "NUM",
            PosTag::Part => "PART",
            PosTag::Pron => "PRON",
            PosTag::Propn => "PROPN",
            PosTag::Punct => "PUNCT",
            PosTag::Sconj => "SCONJ",
            PosTag::Sym => "SYM",
            PosTag::Verb => "VERB",
            PosTag::X => "X",
        }
    }

    /// Position in [`PosTag::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Person {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Number {
    Singular,
    Plural,
}

/// Person/number marking of a single token; both absent for unmarked words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphFeatures {
    pub person: Option<Person>,
    pub number: Option<Number>,
}

impl MorphFeatures {
    pub fn is_marked(&self) -> bool {
        self.person.is_some() || self.number.is_some()
    }
}

/// A fully analyzed post. All per-token lists are parallel to `tokens`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalyzedDocument {
    pub tokens: Vec<Token>,
    pub sentences: Vec<Range<usize>>,
    pub tags: Vec<PosTag>,
    pub morph: Vec<MorphFeatures>,
    /// Syllable count per token; 0 for non-word tokens.
    pub syllables: Vec<usize>,
}

impl AnalyzedDocument {
    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word).count()
    }

    /// Iterates `(token, tag, morph, syllables)` over word tokens only.
    pub fn words(&self) -> impl Iterator<Item = (&Token, PosTag, MorphFeatures, usize)> + '_ {
        self.tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_word)
            .map(|(i, t)| (t, self.tags[i], self.morph[i], self.syllables[i]))
    }
}

/// Lexicon-backed analyzer. Cheap to share; all methods take `&self`.
#[derive(Debug, Clone)]
pub struct Analyzer {
    lexicon: Lexicon,
    easy_words: Option<EasyWords>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Self::bundled()
    }
}

impl Analyzer {
    pub fn new(lexicon: Lexicon, easy_words: Option<EasyWords>) -> Self {
        Self { lexicon, easy_words }
    }

    /// Analyzer over the resources compiled into the crate.
    pub fn bundled() -> Self {
        Self::new(Lexicon::bundled(), Some(EasyWords::bundled()))
    }

    /// Loads `lexicon.tsv` (required) and `easy_words.txt` (optional) from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, LexiconError> {
        Ok(Self::new(lexicon::read_lexicon(dir)?, lexicon::read_easy_words(dir)?))
    }

    /// Uses `$DEPSIG_RESOURCES` when set, the bundled resources otherwise.
    pub fn from_env() -> Result<Self, LexiconError> {
        match std::env::var_os(RESOURCES_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Ok(Self::bundled()),
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// `None` when no easy-word list was available; Dale-Chall then falls back
    /// to complex words as difficult words.
    pub fn easy_words(&self) -> Option<&EasyWords> {
        self.easy_words.as_ref()
    }

    pub fn pos_tag(&self, tokens: &[Token]) -> Vec<PosTag> {
        tagger::pos_tag(&self.lexicon, tokens)
    }

    pub fn morph_analyze(&self, tokens: &[Token], tags: &[PosTag]) -> Vec<MorphFeatures> {
        morph::morph_analyze(&self.lexicon, tokens, tags)
    }

    pub fn analyze(&self, text: &str) -> AnalyzedDocument {
        let tokens = tokenize(text);
        let sentences = split_sentences(&tokens);
        let tags = self.pos_tag(&tokens);
        let morph = self.morph_analyze(&tokens, &tags);
        let syllables = tokens
            .iter()
            .map(|t| if t.is_word { count_syllables(&t.surface) } else { 0 })
            .collect();
        AnalyzedDocument {
            tokens,
            sentences,
            tags,
            morph,
            syllables,
        }
    }
}

static BUNDLED: LazyLock<Analyzer> = LazyLock::new(Analyzer::bundled);

/// Analyzer over the bundled resources, built once per process.
pub fn bundled_analyzer() -> &'static Analyzer {
    &BUNDLED
}

/// Analyzes `text` with the bundled resources.
pub fn analyze(text: &str) -> AnalyzedDocument {
    BUNDLED.analyze(text)
}
