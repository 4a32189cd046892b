//! Confusion matrices, per-class precision/recall/F1 and macro F1.
//!
//! Undefined ratios (0/0) count as 0, so macro F1 is always the mean over
//! exactly three classes.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{class_distribution, ClassDistribution, Label, LabeledCorpus};
use crate::model::LinearModel;
use crate::pipeline;
use crate::text_analysis::Analyzer;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{gold} gold labels but {pred} predictions")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("nothing to evaluate")]
    Empty,
}

/// Rows are gold classes, columns predicted classes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; Label::COUNT]; Label::COUNT],
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn get(&self, gold: Label, pred: Label) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..Label::COUNT).all(|g| (0..Label::COUNT).all(|p| g == p || self.counts[g][p] == 0))
    }

    pub fn accuracy(&self) -> f64 {
        let diag: u64 = (0..Label::COUNT).map(|c| self.counts[c][c]).sum();
        ratio(diag, self.total())
    }

    /// CSV with a `gold` column followed by one column per predicted class.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["gold".to_string()];
        header.extend(Label::ALL.iter().map(|l| l.as_str().to_string()));
        w.write_record(&header)?;
        for g in Label::ALL {
            let mut row = vec![g.as_str().to_string()];
            row.extend(self.counts[g.index()].iter().map(u64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn confusion(gold: &[Label], pred: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut m = ConfusionMatrix::default();
    for (g, p) in gold.iter().zip(pred) {
        m.counts[g.index()][p.index()] += 1;
    }
    Ok(m)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn class_prf(m: &ConfusionMatrix, class: Label) -> Prf {
    let c = class.index();
    let tp = m.counts[c][c];
    let predicted: u64 = (0..Label::COUNT).map(|g| m.counts[g][c]).sum();
    let actual: u64 = m.counts[c].iter().sum();
    let precision = ratio(tp, predicted);
    let recall = ratio(tp, actual);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf { precision, recall, f1 }
}

pub fn macro_f1(m: &ConfusionMatrix) -> f64 {
    Label::ALL.iter().map(|&c| class_prf(m, c).f1).sum::<f64>() / Label::COUNT as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class: Vec<ClassReport>,
    pub macro_f1: f64,
    pub accuracy: f64,
    pub distribution: ClassDistribution,
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    pub fn from_predictions(gold: &[Label], pred: &[Label]) -> Result<Self, EvalError> {
        let m = confusion(gold, pred)?;
        let per_class = Label::ALL
            .iter()
            .map(|&label| {
                let Prf { precision, recall, f1 } = class_prf(&m, label);
                ClassReport {
                    label,
                    precision,
                    recall,
                    f1,
                    support: m.counts[label.index()].iter().sum(),
                }
            })
            .collect();
        Ok(Self {
            per_class,
            macro_f1: macro_f1(&m),
            accuracy: m.accuracy(),
            distribution: class_distribution(gold),
            confusion: m,
        })
    }

    pub fn recall_vector(&self) -> [f64; Label::COUNT] {
        let mut r = [0.0; Label::COUNT];
        for c in &self.per_class {
            r[c.label.index()] = c.recall;
        }
        r
    }

    /// Plain-text summary for terminals.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<16}{:>10}{:>10}{:>10}{:>9}\n",
            "class", "precision", "recall", "f1", "support"
        );
        for c in &self.per_class {
            s += &format!(
                "{:<16}{:>10.4}{:>10.4}{:>10.4}{:>9}\n",
                c.label.as_str(),
                c.precision,
                c.recall,
                c.f1,
                c.support
            );
        }
        s += &format!(
            "macro F1 {:.4}  accuracy {:.4}  n {}\n",
            self.macro_f1, self.accuracy, self.distribution.total
        );
        s
    }
}

/// Predicts every post of a labeled corpus and scores the predictions.
pub fn evaluate(model: &LinearModel, corpus: &LabeledCorpus, analyzer: &Analyzer) -> Result<EvalReport, crate::Error> {
    let gold = corpus.require_labels()?;
    if gold.is_empty() {
        return Err(EvalError::Empty.into());
    }
    let pred = pipeline::predict_corpus(model, corpus, analyzer)?
        .into_iter()
        .map(|(label, _)| label)
        .collect::<Vec<_>>();
    Ok(EvalReport::from_predictions(gold, &pred)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use Label::*;

    fn matrix(rows: [[u64; 3]; 3]) -> ConfusionMatrix {
        ConfusionMatrix { counts: rows }
    }

    /// Brute-force macro F1 straight from the definitions, over label pairs.
    fn oracle_macro_f1(pairs: &[(usize, usize)]) -> f64 {
        let mut total = 0.0;
        for c in 0..3 {
            let tp = pairs.iter().filter(|&&(g, p)| g == c && p == c).count() as f64;
            let fp = pairs.iter().filter(|&&(g, p)| g != c && p == c).count() as f64;
            let fn_ = pairs.iter().filter(|&&(g, p)| g == c && p != c).count() as f64;
            // F1 = 2TP / (2TP + FP + FN), which equals the harmonic mean and is 0 when TP = 0
            let den = 2.0 * tp + fp + fn_;
            total += if den == 0.0 { 0.0 } else { 2.0 * tp / den };
        }
        total / 3.0
    }

    #[test]
    fn small_confusions() {
        let m = confusion(&[NotDepression, Moderate, Severe], &[NotDepression, Moderate, Severe]).unwrap();
        assert_eq!(m, matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(macro_f1(&m), 1.0);
        let m = confusion(&[NotDepression, NotDepression], &[Moderate, Moderate]).unwrap();
        assert_eq!(m, matrix([[0, 2, 0], [0, 0, 0], [0, 0, 0]]));
    }

    #[test]
    fn confusion_errors() {
        assert!(matches!(
            confusion(&[Moderate], &[]),
            Err(EvalError::LengthMismatch { .. })
        ));
        assert!(matches!(confusion(&[], &[]), Err(EvalError::Empty)));
    }

    #[test]
    fn hand_computed_prf() {
        let m = matrix([[2, 1, 0], [0, 3, 0], [1, 0, 1]]);
        let p = class_prf(&m, NotDepression);
        assert_abs_diff_eq!(p.precision, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.recall, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.f1, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_division_convention() {
        let Prf { precision, recall, f1 } = class_prf(&matrix([[3, 0, 0], [0, 2, 0], [0, 0, 0]]), Severe);
        assert_eq!((precision, recall, f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn constant_classifier_on_balanced_gold() {
        let n = 7;
        let m = matrix([[n, 0, 0], [n, 0, 0], [n, 0, 0]]);
        assert_abs_diff_eq!(class_prf(&m, NotDepression).f1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(macro_f1(&m), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn always_moderate_recall() {
        let mut gold = vec![NotDepression; 1971];
        gold.extend(vec![Moderate; 6019]);
        gold.extend(vec![Severe; 901]);
        let pred = vec![Moderate; gold.len()];
        let r = EvalReport::from_predictions(&gold, &pred).unwrap();
        assert_eq!(r.recall_vector(), [0.0, 1.0, 0.0]);
        assert_eq!(r.distribution.counts, [1971, 6019, 901]);
        assert!(r.to_text().contains("macro F1"));
    }

    #[test]
    fn confusion_csv() {
        let mut buf = Vec::new();
        matrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]]).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "gold,not depression,moderate,severe");
        assert_eq!(text.lines().nth(3).unwrap(), "severe,7,8,9");
    }

    fn arb_pairs() -> impl Strategy<Value = Vec<(usize, usize)>> {
        prop::collection::vec((0usize..3, 0usize..3), 1..80)
    }

    fn labels(pairs: &[(usize, usize)]) -> (Vec<Label>, Vec<Label>) {
        pairs.iter().map(|&(g, p)| (Label::ALL[g], Label::ALL[p])).unzip()
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(pairs in arb_pairs()) {
            let (g, p) = labels(&pairs);
            let m = confusion(&g, &p).unwrap();
            prop_assert_eq!(m.total(), pairs.len() as u64);
            for gi in 0..3 {
                for pi in 0..3 {
                    let tally = pairs.iter().filter(|&&x| x == (gi, pi)).count() as u64;
                    prop_assert_eq!(m.counts[gi][pi], tally);
                }
            }
            prop_assert!((macro_f1(&m) - oracle_macro_f1(&pairs)).abs() < 1e-12);
        }

        #[test]
        fn order_and_relabeling_invariance(mut pairs in arb_pairs(), perm in Just([0usize, 1, 2]).prop_shuffle()) {
            let (g, p) = labels(&pairs);
            let base = macro_f1(&confusion(&g, &p).unwrap());
            pairs.reverse();
            let (g2, p2) = labels(&pairs);
            prop_assert!((macro_f1(&confusion(&g2, &p2).unwrap()) - base).abs() < 1e-12);
            let relabeled: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
            let (g3, p3) = labels(&relabeled);
            let m3 = confusion(&g3, &p3).unwrap();
            prop_assert!((macro_f1(&m3) - base).abs() < 1e-12);
            let m = confusion(&g2, &p2).unwrap();
            for (c, &pc) in Label::ALL.iter().zip(&perm) {
                let a = class_prf(&m, *c);
                let b = class_prf(&m3, Label::ALL[pc]);
                prop_assert!((a.f1 - b.f1).abs() < 1e-15);
            }
        }

        #[test]
        fn bounded_and_one_iff_diagonal(pairs in arb_pairs()) {
            let (g, p) = labels(&pairs);
            let m = confusion(&g, &p).unwrap();
            let f = macro_f1(&m);
            prop_assert!((0.0..=1.0).contains(&f));
            for c in Label::ALL {
                let prf = class_prf(&m, c);
                prop_assert!([prf.precision, prf.recall, prf.f1].iter().all(|v| (0.0..=1.0).contains(v)));
            }
            // every class appears in gold here, so F1 = 1 exactly when nothing is off-diagonal
            if (0..3).all(|c| g.iter().any(|l| l.index() == c)) {
                prop_assert_eq!(f == 1.0, m.is_diagonal());
            }
        }
    }
}
