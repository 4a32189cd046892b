use crate::corpus::Label;
use crate::features::FeatureVector;

use super::{ModelError, NUM_CLASSES};

/// Mean cross-entropy plus `(l2 / 2N) * ||W||_F^2`, with its exact gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    /// Row-major `C x D`.
    pub grad_weights: Vec<f64>,
    pub grad_biases: [f64; NUM_CLASSES],
}

impl LossGradient {
    /// Infinity norm over weight and bias gradients.
    pub fn max_abs(&self) -> f64 {
        self.grad_weights
            .iter()
            .chain(&self.grad_biases)
            .fold(0.0, |m, g| m.max(g.abs()))
    }

    pub fn squared_norm(&self) -> f64 {
        self.grad_weights.iter().chain(&self.grad_biases).map(|g| g * g).sum()
    }
}

pub(crate) fn check_dims(weight_len: usize, x: &[FeatureVector], y: &[Label]) -> Result<usize, ModelError> {
    if x.len() != y.len() {
        return Err(ModelError::DimensionMismatch(format!(
            "{} vectors but {} labels",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(ModelError::EmptyBatch);
    }
    if !weight_len.is_multiple_of(NUM_CLASSES) {
        return Err(ModelError::DimensionMismatch(format!(
            "weight length {weight_len} is not a multiple of {NUM_CLASSES}"
        )));
    }
    let dim = weight_len / NUM_CLASSES;
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(ModelError::DimensionMismatch(format!(
            "vector of dimension {} for {dim} weights per class",
            bad.dim()
        )));
    }
    Ok(dim)
}

pub(crate) struct Scores {
    pub raw: [f64; NUM_CLASSES],
    pub log_sum_exp: f64,
}

impl Scores {
    pub fn compute(weights: &[f64], biases: &[f64; NUM_CLASSES], x: &FeatureVector) -> Self {
        let dim = weights.len() / NUM_CLASSES;
        let mut raw = [0.0; NUM_CLASSES];
        for (c, s) in raw.iter_mut().enumerate() {
            *s = x.dot(&weights[c * dim..(c + 1) * dim]) + biases[c];
        }
        let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = raw.iter().map(|s| (s - max).exp()).sum();
        Self {
            raw,
            log_sum_exp: max + sum.ln(),
        }
    }

    pub fn probabilities(&self) -> [f64; NUM_CLASSES] {
        self.raw.map(|s| (s - self.log_sum_exp).exp())
    }
}

fn penalty(weights: &[f64], l2: f64, n: f64) -> f64 {
    if l2 == 0.0 {
        return 0.0;
    }
    l2 / (2.0 * n) * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Objective value only; used by the line search.
pub fn loss(
    weights: &[f64],
    biases: &[f64; NUM_CLASSES],
    x: &[FeatureVector],
    y: &[Label],
    l2: f64,
) -> Result<f64, ModelError> {
    check_dims(weights.len(), x, y)?;
    let n = x.len() as f64;
    let nll: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let s = Scores::compute(weights, biases, xi);
            s.log_sum_exp - s.raw[yi.index()]
        })
        .sum();
    Ok(nll / n + penalty(weights, l2, n))
}

/// Objective and analytic gradient; the bias is not penalized.
pub fn loss_and_gradient(
    weights: &[f64],
    biases: &[f64; NUM_CLASSES],
    x: &[FeatureVector],
    y: &[Label],
    l2: f64,
) -> Result<LossGradient, ModelError> {
    let dim = check_dims(weights.len(), x, y)?;
    let n = x.len() as f64;
    let mut grad_weights = vec![0.0; weights.len()];
    let mut grad_biases = [0.0; NUM_CLASSES];
    let mut nll = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let s = Scores::compute(weights, biases, xi);
        nll += s.log_sum_exp - s.raw[yi.index()];
        let p = s.probabilities();
        for c in 0..NUM_CLASSES {
            let residual = p[c] - if c == yi.index() { 1.0 } else { 0.0 };
            grad_biases[c] += residual;
            let row = &mut grad_weights[c * dim..(c + 1) * dim];
            for (j, v) in xi.entries() {
                row[j] += residual * v;
            }
        }
    }
    let scale = 1.0 / n;
    for (g, &w) in grad_weights.iter_mut().zip(weights) {
        *g = *g * scale + l2 * scale * w;
    }
    grad_biases.iter_mut().for_each(|g| *g *= scale);
    Ok(LossGradient {
        loss: nll * scale + penalty(weights, l2, n),
        grad_weights,
        grad_biases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    /// Random dense instance with every class present.
    fn random_instance(
        rng: &mut Xoshiro256StarStar,
        n: usize,
        dim: usize,
    ) -> (Vec<f64>, [f64; 3], Vec<FeatureVector>, Vec<Label>) {
        let weights = (0..3 * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let biases = [0; 3].map(|_| rng.random_range(-1.0..1.0));
        let x = (0..n)
            .map(|_| FeatureVector::dense((0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()))
            .collect();
        let y = (0..n)
            .map(|i| Label::ALL[if i < 3 { i } else { rng.random_range(0..3) }])
            .collect();
        (weights, biases, x, y)
    }

    #[test]
    fn zero_model_loss_is_ln3() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(1);
        let (_, _, x, y) = random_instance(&mut rng, 7, 4);
        let lg = loss_and_gradient(&[0.0; 12], &[0.0; 3], &x, &y, 0.0).unwrap();
        assert_abs_diff_eq!(lg.loss, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn regularizer_only_gradient() {
        let x = vec![FeatureVector::dense(vec![0.0; 2]); 4];
        let y = vec![Label::NotDepression, Label::Moderate, Label::Severe, Label::Moderate];
        let w = vec![1.0, -2.0, 3.0, 0.5, 0.0, -4.0];
        let lambda = 1e3;
        let lg = loss_and_gradient(&w, &[0.0; 3], &x, &y, lambda).unwrap();
        for (g, wi) in lg.grad_weights.iter().zip(&w) {
            assert_eq!(*g, lambda / 4.0 * wi);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(5);
        let (w, b, x, y) = random_instance(&mut rng, 5, 8);
        let lambda = 0.3;
        let lg = loss_and_gradient(&w, &b, &x, &y, lambda).unwrap();
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for j in 0..w.len() {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[j] += h;
            down[j] -= h;
            let fd = (loss(&up, &b, &x, &y, lambda).unwrap() - loss(&down, &b, &x, &y, lambda).unwrap()) / (2.0 * h);
            worst = worst.max((fd - lg.grad_weights[j]).abs() / fd.abs().max(lg.grad_weights[j].abs()).max(1e-8));
        }
        for c in 0..3 {
            let (mut up, mut down) = (b, b);
            up[c] += h;
            down[c] -= h;
            let fd = (loss(&w, &up, &x, &y, lambda).unwrap() - loss(&w, &down, &x, &y, lambda).unwrap()) / (2.0 * h);
            worst = worst.max((fd - lg.grad_biases[c]).abs() / fd.abs().max(1e-8));
        }
        assert!(worst < 1e-5, "max relative error {worst}");
    }

    #[test]
    fn dimension_errors() {
        let x = vec![FeatureVector::dense(vec![1.0, 2.0])];
        let y = vec![Label::Moderate];
        assert!(matches!(
            loss_and_gradient(&[0.0; 9], &[0.0; 3], &x, &y, 0.0),
            Err(ModelError::DimensionMismatch(_))
        ));
        assert!(matches!(
            loss_and_gradient(&[0.0; 6], &[0.0; 3], &x, &[], 0.0),
            Err(ModelError::DimensionMismatch(_))
        ));
        assert!(matches!(
            loss_and_gradient(&[0.0; 6], &[0.0; 3], &[], &[], 0.0),
            Err(ModelError::EmptyBatch)
        ));
    }
}
