//! WebAssembly bindings for the browser demo.
//!
//! Three operations are exported, each returning a JSON string: analyze a
//! post, train a model on the synthetic keyword corpus, and classify a post
//! with the most recently trained model.

use std::cell::RefCell;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use depsig::corpus::stratified_split;
use depsig::evaluation::evaluate;
use depsig::features::{
    person_number, pos_distribution, readability_style, PosSoftmaxInput, PERSON_NUMBER_NAMES, STYLE_NAMES,
};
use depsig::interpret::{rank_coefficients, top_k_by_template};
use depsig::text_analysis::{bundled_analyzer, Number, Person, PosTag};
use depsig::{pipeline, synthetic, FeatureSet, Label, LinearModel, TrainConfig};

thread_local! {
    static MODEL: RefCell<Option<LinearModel>> = const { RefCell::new(None) };
}

#[derive(Debug, Serialize)]
pub struct TokenView {
    pub surface: String,
    pub tag: &'static str,
    pub person: Option<u8>,
    pub number: Option<&'static str>,
    pub syllables: usize,
}

#[derive(Debug, Serialize)]
pub struct Named {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub tokens: Vec<TokenView>,
    pub sentences: usize,
    pub pos_distribution: Vec<Named>,
    /// Unscaled readability and style metrics.
    pub readability: Vec<Named>,
    pub person_number: Vec<Named>,
}

fn named(names: &[&'static str], values: &[f64]) -> Vec<Named> {
    names
        .iter()
        .zip(values)
        .map(|(&name, &value)| Named { name, value })
        .collect()
}

pub fn analysis(text: &str) -> Analysis {
    let analyzer = bundled_analyzer();
    let doc = analyzer.analyze(text);
    let tokens = doc
        .tokens
        .iter()
        .enumerate()
        .map(|(i, t)| TokenView {
            surface: t.surface.clone(),
            tag: doc.tags[i].as_str(),
            person: doc.morph[i].person.map(|p| match p {
                Person::First => 1,
                Person::Second => 2,
                Person::Third => 3,
            }),
            number: doc.morph[i].number.map(|n| match n {
                Number::Singular => "Sg",
                Number::Plural => "Pl",
            }),
            syllables: doc.syllables[i],
        })
        .collect();
    let tags: Vec<&'static str> = PosTag::ALL.iter().map(|t| t.as_str()).collect();
    Analysis {
        tokens,
        sentences: doc.sentences.len(),
        pos_distribution: named(&tags, &pos_distribution(&doc, PosSoftmaxInput::Counts)),
        readability: named(&STYLE_NAMES, &readability_style(&doc, analyzer.easy_words())),
        person_number: named(&PERSON_NUMBER_NAMES, &person_number(&doc)),
    }
}

#[derive(Debug, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub weight: f64,
    pub rank: usize,
}

#[derive(Debug, Serialize)]
pub struct TemplateTop {
    pub template: &'static str,
    pub entries: Vec<Coefficient>,
}

#[derive(Debug, Serialize)]
pub struct ClassSummary {
    pub label: &'static str,
    pub f1: f64,
    pub top: Vec<TemplateTop>,
}

#[derive(Debug, Serialize)]
pub struct TrainSummary {
    pub train_posts: usize,
    pub test_posts: usize,
    pub macro_f1: f64,
    pub accuracy: f64,
    pub iterations: usize,
    pub converged: bool,
    pub dimension: usize,
    pub classes: Vec<ClassSummary>,
    pub confusion: [[u64; 3]; 3],
}

/// Trains Model 2 on a seeded synthetic corpus (`per_class` posts per class,
/// 25% held out) and keeps the model for [`prediction`].
pub fn train(per_class: usize, seed: u64, l2: f64) -> Result<TrainSummary, String> {
    if !(4..=400).contains(&per_class) {
        return Err(format!("posts per class must be between 4 and 400, got {per_class}"));
    }
    let analyzer = bundled_analyzer();
    let corpus = synthetic::keyword_corpus(per_class, seed);
    let (train, test) = stratified_split(&corpus, 0.25, seed).map_err(|e| e.to_string())?;
    let config = TrainConfig {
        l2_strength: l2,
        seed,
        ..TrainConfig::default()
    };
    let model = pipeline::train_model(&train, FeatureSet::Model2, PosSoftmaxInput::Counts, &config, analyzer)
        .map_err(|e| e.to_string())?;
    let report = evaluate(&model, &test, analyzer).map_err(|e| e.to_string())?;
    let ranking = rank_coefficients(&model);
    let classes = report
        .per_class
        .iter()
        .map(|c| ClassSummary {
            label: c.label.as_str(),
            f1: c.f1,
            top: model
                .schema()
                .templates()
                .iter()
                .map(|&t| TemplateTop {
                    template: t.as_str(),
                    entries: top_k_by_template(&ranking, t, c.label, 5)
                        .unwrap_or_default()
                        .into_iter()
                        .map(|e| Coefficient {
                            name: e.feature_name,
                            weight: e.weight,
                            rank: e.rank,
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let summary = TrainSummary {
        train_posts: train.len(),
        test_posts: test.len(),
        macro_f1: report.macro_f1,
        accuracy: report.accuracy,
        iterations: model.meta().iterations_run,
        converged: model.meta().converged,
        dimension: model.dimension(),
        classes,
        confusion: report.confusion.counts,
    };
    MODEL.with(|m| *m.borrow_mut() = Some(model));
    Ok(summary)
}

#[derive(Debug, Serialize)]
pub struct Prediction {
    pub label: &'static str,
    pub probabilities: Vec<(&'static str, f64)>,
}

pub fn prediction(text: &str) -> Result<Prediction, String> {
    MODEL.with(|m| {
        let model = m.borrow();
        let model = model.as_ref().ok_or("train a model first")?;
        let (label, p) = pipeline::predict_text(model, text, bundled_analyzer()).map_err(|e| e.to_string())?;
        Ok(Prediction {
            label: label.as_str(),
            probabilities: Label::ALL.iter().map(|l| (l.as_str(), p[l.index()])).collect(),
        })
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

#[wasm_bindgen]
pub fn analyze_text(text: &str) -> String {
    to_json(&analysis(text))
}

#[wasm_bindgen]
pub fn train_toy(per_class: u32, seed: u32, l2: f64) -> Result<String, JsError> {
    train(per_class as usize, u64::from(seed), l2)
        .map(|s| to_json(&s))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn predict(text: &str) -> Result<String, JsError> {
    prediction(text).map(|p| to_json(&p)).map_err(|e| JsError::new(&e))
}
