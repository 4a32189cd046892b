use serde::{Deserialize, Serialize};

use crate::corpus::{class_distribution, Label};
use crate::features::FeatureVector;

use super::objective::{check_dims, loss, loss_and_gradient};
use super::{ModelError, NUM_CLASSES};

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub l2_strength: f64,
    pub max_iter: usize,
    /// Stop once the gradient's infinity norm falls below this.
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            l2_strength: 1.0,
            max_iter: 1000,
            grad_tol: 1e-4,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = self.l2_strength >= 0.0 && self.l2_strength.is_finite() && self.max_iter >= 1 && self.grad_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidConfig(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub l2_strength: f64,
    pub iterations_run: usize,
    pub final_grad_norm: f64,
    pub final_loss: f64,
    pub converged: bool,
    pub seed: u64,
}

/// Trained parameters plus the objective value at each accepted iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub weights: Vec<f64>,
    pub biases: [f64; NUM_CLASSES],
    pub meta: TrainMeta,
    /// `loss_trace[0]` is the loss at the zero start.
    pub loss_trace: Vec<f64>,
}

/// Full-batch gradient descent from zero with backtracking line search.
///
/// Each iteration tries steps 1, 1/2, 1/4, ... until the Armijo condition
/// `f(w - t g) <= f(w) - c t ||g||^2` holds with `c = 1e-4`. Training stops
/// when `||g||_inf < grad_tol`, after `max_iter` accepted steps, or when no
/// step above 1e-20 decreases the objective.
pub fn fit(x: &[FeatureVector], y: &[Label], config: &TrainConfig) -> Result<Fit, ModelError> {
    config.validate()?;
    let dim = check_dims(NUM_CLASSES * x.first().map_or(0, FeatureVector::dim), x, y)?;
    let dist = class_distribution(y);
    if let Some(c) = Label::ALL.into_iter().find(|c| dist.counts[c.index()] == 0) {
        return Err(ModelError::MissingClass(c));
    }
    let l2 = config.l2_strength;
    let mut weights = vec![0.0; NUM_CLASSES * dim];
    let mut biases = [0.0; NUM_CLASSES];
    let mut current = loss_and_gradient(&weights, &biases, x, y, l2)?;
    if !current.loss.is_finite() {
        return Err(ModelError::NonFiniteLoss { iteration: 0 });
    }
    let mut loss_trace = vec![current.loss];
    let mut iterations = 0;
    let mut converged = current.max_abs() < config.grad_tol;

    while !converged && iterations < config.max_iter {
        let sq = current.squared_norm();
        let mut step = 1.0;
        let accepted = loop {
            let cand_w: Vec<f64> = weights
                .iter()
                .zip(&current.grad_weights)
                .map(|(w, g)| w - step * g)
                .collect();
            let mut cand_b = biases;
            for (b, g) in cand_b.iter_mut().zip(current.grad_biases) {
                *b -= step * g;
            }
            let f = loss(&cand_w, &cand_b, x, y, l2)?;
            if f.is_finite() && f <= current.loss - ARMIJO_C * step * sq {
                break Some((cand_w, cand_b));
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some((w, b)) = accepted else { break };
        let next = loss_and_gradient(&w, &b, x, y, l2)?;
        if !next.loss.is_finite() {
            return Err(ModelError::NonFiniteLoss {
                iteration: iterations + 1,
            });
        }
        debug_assert!(next.loss <= current.loss, "line search accepted an ascent step");
        weights = w;
        biases = b;
        current = next;
        iterations += 1;
        loss_trace.push(current.loss);
        converged = current.max_abs() < config.grad_tol;
    }

    Ok(Fit {
        weights,
        biases,
        meta: TrainMeta {
            l2_strength: l2,
            iterations_run: iterations,
            final_grad_norm: current.max_abs(),
            final_loss: current.loss,
            converged,
            seed: config.seed,
        },
        loss_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::objective::Scores;

    /// Two posts per class, each class with its own indicator column.
    fn separable() -> (Vec<FeatureVector>, Vec<Label>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for label in Label::ALL {
            for _ in 0..2 {
                x.push(FeatureVector::new(3, vec![(label.index(), 1)], vec![]));
                y.push(label);
            }
        }
        (x, y)
    }

    fn config(l2: f64) -> TrainConfig {
        TrainConfig {
            l2_strength: l2,
            ..Default::default()
        }
    }

    #[test]
    fn separable_toy_reaches_full_accuracy() {
        let (x, y) = separable();
        let fit = fit(&x, &y, &config(0.01)).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            let p = Scores::compute(&fit.weights, &fit.biases, xi).probabilities();
            let best = (0..3).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
            assert_eq!(best, yi.index());
        }
        assert!(fit.meta.iterations_run > 0);
    }

    #[test]
    fn training_is_bit_deterministic() {
        let (x, y) = separable();
        let a = fit(&x, &y, &config(1.0)).unwrap();
        let b = fit(&x, &y, &config(1.0)).unwrap();
        assert_eq!(a, b);
        assert!(a.meta.converged);
        assert!(a.meta.final_grad_norm < 1e-4);
    }

    #[test]
    fn loss_is_monotone() {
        let (x, y) = separable();
        let fit = fit(&x, &y, &config(0.0)).unwrap();
        assert!((fit.loss_trace[0] - 3f64.ln()).abs() < 1e-12);
        assert!(fit.loss_trace.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(fit.loss_trace.len(), fit.meta.iterations_run + 1);
    }

    #[test]
    fn missing_class_and_bad_config() {
        let x = vec![FeatureVector::dense(vec![1.0]); 4];
        let y = vec![Label::NotDepression; 4];
        assert!(matches!(
            fit(&x, &y, &config(1.0)),
            Err(ModelError::MissingClass(Label::Moderate))
        ));
        let (x, y) = separable();
        let bad = TrainConfig {
            grad_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(fit(&x, &y, &bad), Err(ModelError::InvalidConfig(_))));
    }

    #[test]
    fn max_iter_caps_iterations() {
        let (x, y) = separable();
        let capped = TrainConfig {
            max_iter: 3,
            l2_strength: 0.0,
            ..Default::default()
        };
        let fit = fit(&x, &y, &capped).unwrap();
        assert_eq!(fit.meta.iterations_run, 3);
        assert!(!fit.meta.converged);
    }

    #[test]
    fn huge_features_report_non_finite_loss() {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for l in Label::ALL {
            x.push(FeatureVector::dense(vec![f64::MAX]));
            y.push(l);
        }
        x.push(FeatureVector::dense(vec![f64::INFINITY]));
        y.push(Label::Moderate);
        assert!(matches!(
            fit(&x, &y, &config(1.0)),
            Err(ModelError::NonFiniteLoss { .. })
        ));
    }
}
