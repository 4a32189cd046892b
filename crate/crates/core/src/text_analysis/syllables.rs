fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic English syllable count.
///
/// Counts maximal vowel groups (`aeiouy`), drops one for a silent final "e"
/// except in a consonant + "le" ending, and never returns less than 1.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphabetic())
        .collect();
    let mut groups: usize = 0;
    let mut in_group = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

#[cfg(test)]
mod tests {
    use super::count_syllables;

    #[test]
    fn reference_words() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("because"), 2);
        assert_eq!(count_syllables("table"), 2);
    }

    #[test]
    fn silent_e_and_floor() {
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("smile"), 1);
        assert_eq!(count_syllables("hopeless"), 3);
        assert_eq!(count_syllables("rhythm"), 1);
        assert_eq!(count_syllables("Depression"), 3);
        assert_eq!(count_syllables("42"), 1);
    }
}
