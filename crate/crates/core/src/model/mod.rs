//! Multinomial logistic regression over the assembled feature space.

mod objective;
mod persist;
mod train;

use crate::corpus::Label;
use crate::features::{FeatureSchema, FeatureVector, VocabularyIndex};

pub use objective::{loss, loss_and_gradient, LossGradient};
pub use persist::{load, read_model, save, write_model, FORMAT_TAG, FORMAT_VERSION};
pub use train::{fit, Fit, TrainConfig, TrainMeta};

use objective::Scores;

pub const NUM_CLASSES: usize = Label::COUNT;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty training batch")]
    EmptyBatch,
    #[error("class {0} is absent from the training labels")]
    MissingClass(Label),
    #[error("loss became non-finite at iteration {iteration}; check feature scales")]
    NonFiniteLoss { iteration: usize },
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(String),
    #[error("corrupt model file: {0}")]
    CorruptModel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A trained classifier together with the feature space it was trained in.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Vec<f64>,
    biases: [f64; NUM_CLASSES],
    label_order: [Label; NUM_CLASSES],
    schema: FeatureSchema,
    vocab: VocabularyIndex,
    meta: TrainMeta,
}

impl LinearModel {
    /// `weights` is row-major `C x D` with `D = schema.dimension()`.
    pub fn new(
        weights: Vec<f64>,
        biases: [f64; NUM_CLASSES],
        schema: FeatureSchema,
        vocab: VocabularyIndex,
        meta: TrainMeta,
    ) -> Result<Self, ModelError> {
        let dim = schema.dimension();
        if weights.len() != NUM_CLASSES * dim {
            return Err(ModelError::DimensionMismatch(format!(
                "{} weights for {NUM_CLASSES} classes x {dim} features",
                weights.len()
            )));
        }
        if vocab.len() != schema.vocab_size() {
            return Err(ModelError::DimensionMismatch(format!(
                "vocabulary of {} terms for a schema declaring {}",
                vocab.len(),
                schema.vocab_size()
            )));
        }
        if weights.iter().chain(&biases).any(|w| !w.is_finite()) {
            return Err(ModelError::CorruptModel("non-finite weight".into()));
        }
        Ok(Self {
            weights,
            biases,
            label_order: Label::ALL,
            schema,
            vocab,
            meta,
        })
    }

    pub fn from_fit(fit: Fit, schema: FeatureSchema, vocab: VocabularyIndex) -> Result<Self, ModelError> {
        Self::new(fit.weights, fit.biases, schema, vocab, fit.meta)
    }

    pub fn dimension(&self) -> usize {
        self.schema.dimension()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn class_weights(&self, label: Label) -> &[f64] {
        let d = self.dimension();
        &self.weights[label.index() * d..(label.index() + 1) * d]
    }

    pub fn biases(&self) -> &[f64; NUM_CLASSES] {
        &self.biases
    }

    pub fn label_order(&self) -> &[Label; NUM_CLASSES] {
        &self.label_order
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn vocab(&self) -> &VocabularyIndex {
        &self.vocab
    }

    pub fn meta(&self) -> &TrainMeta {
        &self.meta
    }

    fn check(&self, x: &FeatureVector) -> Result<(), ModelError> {
        if x.dim() == self.dimension() {
            Ok(())
        } else {
            Err(ModelError::DimensionMismatch(format!(
                "vector of dimension {} for a model of dimension {}",
                x.dim(),
                self.dimension()
            )))
        }
    }

    /// Per-class scores `Wx + b`.
    pub fn decision_function(&self, x: &FeatureVector) -> Result<[f64; NUM_CLASSES], ModelError> {
        self.check(x)?;
        Ok(Scores::compute(&self.weights, &self.biases, x).raw)
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> Result<[f64; NUM_CLASSES], ModelError> {
        self.check(x)?;
        Ok(Scores::compute(&self.weights, &self.biases, x).probabilities())
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Label, ModelError> {
        Ok(argmax_label(&self.predict_proba(x)?))
    }
}

/// Highest-probability class; ties go to the lowest ordinal.
pub fn argmax_label(p: &[f64; NUM_CLASSES]) -> Label {
    let mut best = 0;
    for c in 1..NUM_CLASSES {
        if p[c] > p[best] {
            best = c;
        }
    }
    Label::ALL[best]
}
