//! Coefficient rankings and bootstrap stability of the learned weights.
//!
//! Rankings are per class: every feature of a class is sorted by |weight|.
//! Word counts are unnormalized while the other templates live in [0, 1], so
//! magnitudes should only be compared within one template; reports keep the
//! template next to every entry for that reason.

use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::{seeded_rng, stratified_sample, stratum_take, Label, LabeledCorpus};
use crate::features::{FeatureSet, FeatureTemplate, PosSoftmaxInput};
use crate::model::{self, LinearModel, TrainConfig, NUM_CLASSES};
use crate::pipeline::{analyze_corpus, FeatureSpace};
use crate::text_analysis::Analyzer;
use crate::Error;

#[derive(Debug, thiserror::Error)]
pub enum InterpretError {
    #[error("bootstrap needs at least 2 runs, got {0}")]
    TooFewRuns(usize),
    #[error("subsample fraction must lie in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("plot data row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub class: Label,
    pub template: FeatureTemplate,
    pub feature_name: String,
    pub weight: f64,
    pub abs_weight: f64,
    /// 1-based position within the class ranking.
    pub rank: usize,
}

fn by_magnitude(a: (f64, FeatureTemplate, &str), b: (f64, FeatureTemplate, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(b.2))
}

/// Column order by |weight| descending, ties by template block order then name.
fn rank_order(columns: &[(FeatureTemplate, String)], weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.sort_by(|&i, &j| {
        by_magnitude(
            (weights[i].abs(), columns[i].0, &columns[i].1),
            (weights[j].abs(), columns[j].0, &columns[j].1),
        )
    });
    order
}

fn rank_class(class: Label, columns: &[(FeatureTemplate, String)], weights: &[f64]) -> Vec<CoefficientEntry> {
    rank_order(columns, weights)
        .into_iter()
        .enumerate()
        .map(|(pos, j)| CoefficientEntry {
            class,
            template: columns[j].0,
            feature_name: columns[j].1.clone(),
            weight: weights[j],
            abs_weight: weights[j].abs(),
            rank: pos + 1,
        })
        .collect()
}

/// All `(class, feature)` pairs, grouped by class in label order.
pub fn rank_coefficients(model: &LinearModel) -> Vec<CoefficientEntry> {
    let columns = model.schema().columns(Some(model.vocab()));
    Label::ALL
        .iter()
        .flat_map(|&c| rank_class(c, &columns, model.class_weights(c)))
        .collect()
}

/// The `k` strongest entries of one class and template, keeping their
/// within-class rank.
pub fn top_k_by_template(
    ranking: &[CoefficientEntry],
    template: FeatureTemplate,
    class: Label,
    k: usize,
) -> Result<Vec<CoefficientEntry>, InterpretError> {
    if k == 0 {
        return Err(InterpretError::ZeroK);
    }
    let mut hits: Vec<CoefficientEntry> = ranking
        .iter()
        .filter(|e| e.class == class && e.template == template)
        .cloned()
        .collect();
    hits.sort_by_key(|e| e.rank);
    hits.truncate(k);
    Ok(hits)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapEntry {
    pub class: Label,
    pub template: FeatureTemplate,
    pub feature_name: String,
    pub mean: f64,
    pub std: f64,
    /// Share of runs whose weight has the sign of the mean (0 counts as its own sign).
    pub sign_consistency: f64,
    /// Within-class rank by |mean|.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub n_runs: usize,
    pub subsample_fraction: f64,
    pub seed: u64,
    pub entries: Vec<BootstrapEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub feature_set: FeatureSet,
    pub pos_input: PosSoftmaxInput,
    pub train: TrainConfig,
    pub n_runs: usize,
    pub subsample_fraction: f64,
    pub seed: u64,
    /// Worker threads for the independent runs; results do not depend on it.
    pub threads: usize,
}

/// Trains `n_runs` models on seeded stratified subsamples (without
/// replacement) over a vocabulary and scaler fitted once on the full corpus,
/// then summarizes every weight across runs.
pub fn bootstrap_importance(
    corpus: &LabeledCorpus,
    config: &BootstrapConfig,
    analyzer: &Analyzer,
) -> Result<BootstrapReport, Error> {
    if config.n_runs < 2 {
        return Err(InterpretError::TooFewRuns(config.n_runs).into());
    }
    let fraction = config.subsample_fraction;
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(InterpretError::BadFraction(fraction).into());
    }
    let labels = corpus.require_labels()?;
    let docs = analyze_corpus(corpus, analyzer);
    let space = FeatureSpace::fit(&docs, config.feature_set, config.pos_input, analyzer)?;
    let x = space.vectorize_all(&docs, analyzer)?;

    let mut rng = seeded_rng(config.seed);
    let samples: Vec<Vec<usize>> = (0..config.n_runs)
        .map(|_| stratified_sample(labels, &mut rng, |n| stratum_take(n, fraction).max(1)))
        .collect();

    let run = |rows: &Vec<usize>| -> Result<Vec<f64>, model::ModelError> {
        let xs: Vec<_> = rows.iter().map(|&i| x[i].clone()).collect();
        let ys: Vec<_> = rows.iter().map(|&i| labels[i]).collect();
        Ok(model::fit(&xs, &ys, &config.train)?.weights)
    };
    let threads = config.threads.clamp(1, config.n_runs);
    let results: Vec<Result<Vec<f64>, model::ModelError>> = if threads == 1 {
        samples.iter().map(run).collect()
    } else {
        let chunk = config.n_runs.div_ceil(threads);
        std::thread::scope(|s| {
            let handles: Vec<_> = samples
                .chunks(chunk)
                .map(|part| s.spawn(|| part.iter().map(run).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("bootstrap worker panicked"))
                .collect()
        })
    };
    let runs: Vec<Vec<f64>> = results.into_iter().collect::<Result<_, _>>()?;

    let columns = space.schema.columns(Some(&space.vocab));
    let dim = columns.len();
    let n = runs.len() as f64;
    let mut entries = Vec::with_capacity(NUM_CLASSES * dim);
    for class in Label::ALL {
        let mut stats: Vec<(f64, f64, f64)> = Vec::with_capacity(dim);
        for j in 0..dim {
            let col = class.index() * dim + j;
            let values: Vec<f64> = runs.iter().map(|w| w[col]).collect();
            // Welford: identical runs give exactly zero spread
            let (mut mean, mut m2) = (0.0, 0.0);
            for (k, &v) in values.iter().enumerate() {
                let delta = v - mean;
                mean += delta / (k + 1) as f64;
                m2 += delta * (v - mean);
            }
            let var = m2 / (n - 1.0);
            let mean_sign = sign(mean);
            let agree = values.iter().filter(|&&v| sign(v) == mean_sign).count() as f64;
            stats.push((mean, var.sqrt(), agree / n));
        }
        let means: Vec<f64> = stats.iter().map(|s| s.0).collect();
        for (pos, j) in rank_order(&columns, &means).into_iter().enumerate() {
            let (mean, std, sign_consistency) = stats[j];
            entries.push(BootstrapEntry {
                class,
                template: columns[j].0,
                feature_name: columns[j].1.clone(),
                mean,
                std,
                sign_consistency,
                rank: pos + 1,
            });
        }
    }
    Ok(BootstrapReport {
        n_runs: config.n_runs,
        subsample_fraction: fraction,
        seed: config.seed,
        entries,
    })
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

const RANKING_HEADER: [&str; 6] = ["class", "template", "feature_name", "weight", "abs_weight", "rank"];

/// Plot data for sorted-coefficient charts, one row per entry.
pub fn write_ranking_csv<W: Write>(ranking: &[CoefficientEntry], out: W) -> Result<(), InterpretError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RANKING_HEADER)?;
    for e in ranking {
        w.write_record([
            e.class.as_str(),
            e.template.as_str(),
            &e.feature_name,
            &e.weight.to_string(),
            &e.abs_weight.to_string(),
            &e.rank.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Same columns as the ranking (weight = mean) plus `mean,std,sign_consistency`.
pub fn write_bootstrap_csv<W: Write>(report: &BootstrapReport, out: W) -> Result<(), InterpretError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = RANKING_HEADER.to_vec();
    header.extend(["mean", "std", "sign_consistency"]);
    w.write_record(&header)?;
    for e in &report.entries {
        w.write_record([
            e.class.as_str(),
            e.template.as_str(),
            &e.feature_name,
            &e.mean.to_string(),
            &e.mean.abs().to_string(),
            &e.rank.to_string(),
            &e.mean.to_string(),
            &e.std.to_string(),
            &e.sign_consistency.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_ranking_csv<R: Read>(input: R) -> Result<Vec<CoefficientEntry>, InterpretError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |reason: String| InterpretError::BadRow { row: i + 2, reason };
        if rec.len() < RANKING_HEADER.len() {
            return Err(bad(format!("expected {} fields", RANKING_HEADER.len())));
        }
        let num = |k: usize| rec[k].parse::<f64>().map_err(|e| bad(e.to_string()));
        out.push(CoefficientEntry {
            class: rec[0].parse().map_err(bad)?,
            template: rec[1].parse().map_err(bad)?,
            feature_name: rec[2].to_string(),
            weight: num(3)?,
            abs_weight: num(4)?,
            rank: rec[5]
                .parse()
                .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
        });
    }
    Ok(out)
}
