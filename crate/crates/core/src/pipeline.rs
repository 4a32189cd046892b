//! End-to-end glue: analysis, feature fitting, training and text-level prediction.

use crate::corpus::{Label, LabeledCorpus};
use crate::features::{
    assemble, fit_vocabulary, readability_style, FeatureSchema, FeatureSet, FeatureVector, PosSoftmaxInput,
    StyleScaler, VocabularyIndex,
};
use crate::model::{self, LinearModel, TrainConfig, NUM_CLASSES};
use crate::text_analysis::{AnalyzedDocument, Analyzer};
use crate::Error;

pub fn analyze_corpus(corpus: &LabeledCorpus, analyzer: &Analyzer) -> Vec<AnalyzedDocument> {
    corpus.documents().iter().map(|d| analyzer.analyze(&d.text)).collect()
}

/// Vocabulary and readability scaler fitted on training posts.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    pub schema: FeatureSchema,
    pub vocab: VocabularyIndex,
}

impl FeatureSpace {
    pub fn fit(
        docs: &[AnalyzedDocument],
        set: FeatureSet,
        pos_input: PosSoftmaxInput,
        analyzer: &Analyzer,
    ) -> Result<Self, Error> {
        let vocab = fit_vocabulary(docs)?;
        let raws: Vec<_> = docs
            .iter()
            .map(|d| readability_style(d, analyzer.easy_words()))
            .collect();
        let scaler = StyleScaler::fit(&raws)?;
        let schema = FeatureSchema::for_set(set, vocab.len(), pos_input).with_scaler(scaler);
        Ok(Self { schema, vocab })
    }

    pub fn vectorize(&self, doc: &AnalyzedDocument, analyzer: &Analyzer) -> Result<FeatureVector, Error> {
        Ok(assemble(doc, &self.schema, Some(&self.vocab), analyzer.easy_words())?)
    }

    pub fn vectorize_all(&self, docs: &[AnalyzedDocument], analyzer: &Analyzer) -> Result<Vec<FeatureVector>, Error> {
        docs.iter().map(|d| self.vectorize(d, analyzer)).collect()
    }
}

/// Fits the feature space on `corpus` and trains a model on all of it.
pub fn train_model(
    corpus: &LabeledCorpus,
    set: FeatureSet,
    pos_input: PosSoftmaxInput,
    config: &TrainConfig,
    analyzer: &Analyzer,
) -> Result<LinearModel, Error> {
    let labels = corpus.require_labels()?;
    let docs = analyze_corpus(corpus, analyzer);
    let space = FeatureSpace::fit(&docs, set, pos_input, analyzer)?;
    let x = space.vectorize_all(&docs, analyzer)?;
    let fit = model::fit(&x, labels, config)?;
    Ok(LinearModel::from_fit(fit, space.schema, space.vocab)?)
}

pub fn featurize_text(model: &LinearModel, text: &str, analyzer: &Analyzer) -> Result<FeatureVector, Error> {
    let doc = analyzer.analyze(text);
    Ok(assemble(
        &doc,
        model.schema(),
        Some(model.vocab()),
        analyzer.easy_words(),
    )?)
}

pub fn predict_text(
    model: &LinearModel,
    text: &str,
    analyzer: &Analyzer,
) -> Result<(Label, [f64; NUM_CLASSES]), Error> {
    let x = featurize_text(model, text, analyzer)?;
    let p = model.predict_proba(&x)?;
    Ok((model::argmax_label(&p), p))
}

/// Predictions in corpus order.
pub fn predict_corpus(
    model: &LinearModel,
    corpus: &LabeledCorpus,
    analyzer: &Analyzer,
) -> Result<Vec<(Label, [f64; NUM_CLASSES])>, Error> {
    corpus
        .documents()
        .iter()
        .map(|d| predict_text(model, &d.text, analyzer))
        .collect()
}
