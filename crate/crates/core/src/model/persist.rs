//! Versioned JSON model files.
//!
//! Layout: `format` tag, `version`, `label_order`, `schema` (templates, word
//! block size, POS softmax input, scaler bounds), `vocabulary` as an ordered
//! term list, `weights` as one row per class, `biases` and `train_meta`.
//! Floats are written in shortest round-trip form, so loading reproduces
//! every weight bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{LinearModel, ModelError, TrainMeta, NUM_CLASSES};
use crate::corpus::Label;
use crate::features::{FeatureSchema, VocabularyIndex};

pub const FORMAT_TAG: &str = "depsig-model";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u64,
    label_order: Vec<Label>,
    schema: FeatureSchema,
    vocabulary: VocabularyIndex,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    train_meta: TrainMeta,
}

pub fn write_model<W: Write>(model: &LinearModel, out: W) -> Result<(), ModelError> {
    let d = model.dimension();
    let file = ModelFile {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        label_order: model.label_order().to_vec(),
        schema: model.schema().clone(),
        vocabulary: model.vocab().clone(),
        weights: model.weights().chunks(d.max(1)).map(<[f64]>::to_vec).collect(),
        biases: model.biases().to_vec(),
        train_meta: model.meta().clone(),
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &file).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_model<R: Read>(input: R) -> Result<LinearModel, ModelError> {
    let corrupt = |e: &dyn std::fmt::Display| ModelError::CorruptModel(e.to_string());
    let value: Value = serde_json::from_reader(input).map_err(|e| corrupt(&e))?;
    match value.get("format").and_then(Value::as_str) {
        Some(FORMAT_TAG) => {}
        other => return Err(corrupt(&format!("format tag {other:?}, expected {FORMAT_TAG:?}"))),
    }
    let version = match value.get("version") {
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::String(s)) => s.clone(),
        _ => return Err(corrupt(&"missing version")),
    };
    if version != FORMAT_VERSION.to_string() {
        return Err(ModelError::UnsupportedVersion(version));
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| corrupt(&e))?;
    if file.label_order != Label::ALL {
        return Err(corrupt(&"unexpected label order"));
    }
    file.schema.validate().map_err(|e| corrupt(&e))?;
    let d = file.schema.dimension();
    if file.weights.len() != NUM_CLASSES || file.weights.iter().any(|row| row.len() != d) {
        return Err(corrupt(&format!("weights must be {NUM_CLASSES} rows of {d}")));
    }
    let biases: [f64; NUM_CLASSES] = file
        .biases
        .try_into()
        .map_err(|_| corrupt(&format!("expected {NUM_CLASSES} biases")))?;
    if file.schema.needs_scaler() && file.schema.scaler().is_none() {
        return Err(corrupt(&"readability block without scaler bounds"));
    }
    LinearModel::new(
        file.weights.concat(),
        biases,
        file.schema,
        file.vocabulary,
        file.train_meta,
    )
    .map_err(|e| corrupt(&e))
}

pub fn save(model: &LinearModel, path: &Path) -> Result<(), ModelError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_model(model, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<LinearModel, ModelError> {
    read_model(BufReader::new(File::open(path)?))
}
