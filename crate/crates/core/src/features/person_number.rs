use crate::text_analysis::{AnalyzedDocument, Number, Person};

pub const PERSON_NUMBER_NAMES: [&str; 5] = ["p1", "p2", "p3", "sg", "pl"];

/// `(p1, p2, p3, sg, pl)`: person shares over person-marked tokens followed by
/// number shares over number-marked tokens. A group with no marked token is all zero.
pub fn person_number(doc: &AnalyzedDocument) -> [f64; 5] {
    let mut person = [0usize; 3];
    let mut number = [0usize; 2];
    for m in &doc.morph {
        match m.person {
            Some(Person::First) => person[0] += 1,
            Some(Person::Second) => person[1] += 1,
            Some(Person::Third) => person[2] += 1,
            None => {}
        }
        match m.number {
            Some(Number::Singular) => number[0] += 1,
            Some(Number::Plural) => number[1] += 1,
            None => {}
        }
    }
    let shares = |counts: &[usize]| -> Vec<f64> {
        let total: usize = counts.iter().sum();
        counts
            .iter()
            .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
            .collect()
    };
    let mut out = [0.0; 5];
    out[..3].copy_from_slice(&shares(&person));
    out[3..].copy_from_slice(&shares(&number));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::analyze;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let v = person_number(&analyze("I am lost because I do not like them"));
        assert_eq!(v, [0.75, 0.0, 0.25, 0.75, 0.25]);
    }

    #[test]
    fn unmarked_and_partial() {
        assert_eq!(person_number(&analyze("the cat sat")), [0.0; 5]);
        assert_eq!(person_number(&analyze("we went")), [1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(person_number(&analyze("you")), [0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn groups_sum_to_zero_or_one(words in prop::collection::vec(
            prop::sample::select(vec!["i", "you", "they", "is", "are", "cat", "we", "his", "runs", "."]),
            0..30,
        )) {
            let v = person_number(&analyze(&words.join(" ")));
            let p: f64 = v[..3].iter().sum();
            let n: f64 = v[3..].iter().sum();
            prop_assert!(p == 0.0 || (p - 1.0).abs() < 1e-12);
            prop_assert!(n == 0.0 || (n - 1.0).abs() < 1e-12);
            prop_assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}
