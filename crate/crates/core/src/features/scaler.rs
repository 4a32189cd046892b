use serde::{Deserialize, Serialize};

use super::readability::STYLE_WIDTH;
use super::FeatureError;

/// Per-column min-max scaling fitted on training posts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl StyleScaler {
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a [f64; STYLE_WIDTH]>) -> Result<Self, FeatureError> {
        let mut min = vec![f64::INFINITY; STYLE_WIDTH];
        let mut max = vec![f64::NEG_INFINITY; STYLE_WIDTH];
        let mut n = 0;
        for row in rows {
            n += 1;
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        if n == 0 {
            return Err(FeatureError::EmptyCorpus);
        }
        Ok(Self { min, max })
    }

    /// `(x - min) / (max - min)` clamped to [0, 1]; constant columns map to 0.
    pub fn scale(&self, raw: &[f64; STYLE_WIDTH]) -> [f64; STYLE_WIDTH] {
        let mut out = [0.0; STYLE_WIDTH];
        for (j, o) in out.iter_mut().enumerate() {
            let span = self.max[j] - self.min[j];
            if span > 0.0 {
                *o = ((raw[j] - self.min[j]) / span).clamp(0.0, 1.0);
            }
        }
        out
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if self.min.len() != STYLE_WIDTH || self.max.len() != STYLE_WIDTH {
            return Err(format!("scaler must have {STYLE_WIDTH} columns"));
        }
        if self.min.iter().chain(&self.max).any(|v| !v.is_finite()) {
            return Err("scaler bounds must be finite".into());
        }
        Ok(())
    }
}
