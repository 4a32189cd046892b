//! Seeded generator of toy three-class corpora with class-specific keywords.
//!
//! Useful for benchmarks, demos and tests; the vocabulary is small and the
//! class signal strong, so a healthy pipeline separates the classes easily.

use rand::Rng;

use crate::corpus::{seeded_rng, Label, LabeledCorpus};

pub const FILLER: &[&str] = &[
    "the", "day", "work", "home", "time", "week", "people", "thing", "really", "just", "today", "school", "night",
    "morning", "family", "friend", "about", "again", "think", "know", "make", "going", "back", "still", "with",
    "after", "before", "some", "this", "that", "there", "what", "when", "because", "and", "but", "then", "also",
    "would", "could", "much", "more", "little", "long", "year", "house", "phone", "food", "music", "life",
];

pub fn keywords(label: Label) -> &'static [&'static str] {
    match label {
        Label::NotDepression => &[
            "happy",
            "excited",
            "fun",
            "great",
            "enjoy",
            "laugh",
            "party",
            "sunny",
            "trip",
            "awesome",
            "proud",
            "celebrate",
        ],
        Label::Moderate => &[
            "tired",
            "stressed",
            "worried",
            "lonely",
            "anxious",
            "bored",
            "overwhelmed",
            "struggling",
            "exhausted",
            "unmotivated",
            "sad",
            "down",
        ],
        Label::Severe => &[
            "hopeless",
            "worthless",
            "empty",
            "numb",
            "pointless",
            "despair",
            "unbearable",
            "trapped",
            "broken",
            "dark",
            "suicidal",
            "disappear",
        ],
    }
}

fn pronouns(label: Label) -> &'static [&'static str] {
    match label {
        Label::NotDepression => &["we", "they", "you", "she", "I"],
        Label::Moderate => &["I", "I", "we", "they", "my"],
        Label::Severe => &["I", "I", "I", "me", "my"],
    }
}

/// Draws one post: 2-4 sentences of 6-12 words. Each slot is an own-class
/// keyword with probability 0.3, another class's keyword with 0.03, a
/// pronoun with 0.12 and a filler word otherwise.
pub fn generate_post<R: Rng>(label: Label, rng: &mut R) -> String {
    let sentences = rng.random_range(2..=4);
    let mut out = Vec::new();
    for _ in 0..sentences {
        let len = rng.random_range(6..=12);
        let mut words: Vec<&str> = Vec::with_capacity(len);
        for _ in 0..len {
            let u: f64 = rng.random();
            let pick = |list: &[&'static str], rng: &mut R| list[rng.random_range(0..list.len())];
            let w = if u < 0.3 {
                pick(keywords(label), rng)
            } else if u < 0.33 {
                let other = Label::ALL[(label.index() + rng.random_range(1..3)) % 3];
                pick(keywords(other), rng)
            } else if u < 0.45 {
                pick(pronouns(label), rng)
            } else {
                pick(FILLER, rng)
            };
            words.push(w);
        }
        let mut sentence = words.join(" ");
        if let Some(first) = sentence.get(..1) {
            sentence = first.to_uppercase() + &sentence[1..];
        }
        sentence.push(if rng.random_bool(0.2) { '!' } else { '.' });
        out.push(sentence);
    }
    out.join(" ")
}

/// `per_class` posts of each class, interleaved by class, fully determined by `seed`.
pub fn keyword_corpus(per_class: usize, seed: u64) -> LabeledCorpus {
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(per_class * Label::COUNT);
    for _ in 0..per_class {
        for label in Label::ALL {
            rows.push((generate_post(label, &mut rng), label));
        }
    }
    LabeledCorpus::from_texts(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_balanced() {
        let a = keyword_corpus(10, 3);
        assert_eq!(a, keyword_corpus(10, 3));
        assert_ne!(a, keyword_corpus(10, 4));
        assert_eq!(a.class_distribution().unwrap().counts, [10, 10, 10]);
        assert!(a.documents().iter().all(|d| !d.text.is_empty()));
    }
}
