//! Detection of depression signs (none / moderate / severe) in social-media
//! posts with interpretable multinomial logistic regression.
//!
//! Posts are analyzed by a deterministic lexicon + rule pipeline
//! ([`text_analysis`]), mapped into four feature templates ([`features`]):
//! raw word counts, a softmax POS distribution, min-max scaled readability and
//! style metrics, and person/number ratios. [`model`] trains the classifier,
//! [`evaluation`] scores it with macro F1 and [`interpret`] ranks and
//! bootstraps its coefficients.
//!
//! ```
//! use depsig::features::PosSoftmaxInput;
//! use depsig::{corpus, evaluation, pipeline, synthetic, Analyzer, FeatureSet, TrainConfig};
//!
//! # fn main() -> Result<(), depsig::Error> {
//! let analyzer = Analyzer::bundled();
//! let data = synthetic::keyword_corpus(30, 0);
//! let (train, test) = corpus::stratified_split(&data, 0.25, 0)?;
//! let model = pipeline::train_model(
//!     &train,
//!     FeatureSet::Model2,
//!     PosSoftmaxInput::Counts,
//!     &TrainConfig::default(),
//!     &analyzer,
//! )?;
//! let report = evaluation::evaluate(&model, &test, &analyzer)?;
//! assert!(report.macro_f1 > 0.5);
//! # Ok(())
//! # }
//! ```

pub mod corpus;
pub mod evaluation;
pub mod features;
pub mod interpret;
pub mod model;
pub mod pipeline;
pub mod synthetic;
pub mod text_analysis;

pub use corpus::{Document, Label, LabeledCorpus};
pub use features::{FeatureSet, FeatureTemplate};
pub use model::{LinearModel, TrainConfig};
pub use text_analysis::Analyzer;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Lexicon(#[from] text_analysis::LexiconError),
    #[error(transparent)]
    Feature(#[from] features::FeatureError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Eval(#[from] evaluation::EvalError),
    #[error(transparent)]
    Interpret(#[from] interpret::InterpretError),
}

impl Error {
    /// True for failures of the optimizer rather than of the input data.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Model(model::ModelError::NonFiniteLoss { .. }))
    }
}
