//! L2-regularized logistic regression trained by full-batch gradient
//! descent from zero initialization. Deterministic: no sampling, fixed
//! epoch count, no early stopping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LrConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 200,
            l2: 1e-4,
        }
    }
}

impl LrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::InvalidProbeConfig(
                "learning_rate must be > 0".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidProbeConfig("epochs must be >= 1".into()));
        }
        if self.l2 < 0.0 {
            return Err(Error::InvalidProbeConfig("l2 must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean cross-entropy plus (l2/2)*||w||^2, with its gradient in (w, b).
pub fn loss_and_gradient(
    weights: &[f64],
    bias: f64,
    features: &[Vec<f64>],
    labels: &[u8],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = features.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let z = x.iter().zip(weights).map(|(xi, wi)| xi * wi).sum::<f64>() + bias;
        let p = sigmoid(z);
        let y = f64::from(y);
        // log-loss written via log1p for stability at extreme z
        loss += if z >= 0.0 {
            (1.0 - y) * z + (-z).exp().ln_1p()
        } else {
            -y * z + z.exp().ln_1p()
        };
        let err = p - y;
        for (g, xi) in grad_w.iter_mut().zip(x) {
            *g += err * xi;
        }
        grad_b += err;
    }
    loss /= n;
    grad_b /= n;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    (loss, grad_w, grad_b)
}

pub fn train(config: &LrConfig, features: &[Vec<f64>], labels: &[u8]) -> Result<LogisticModel> {
    config.validate()?;
    let dim = features[0].len();
    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    for _ in 0..config.epochs {
        let (_, grad_w, grad_b) = loss_and_gradient(&weights, bias, features, labels, config.l2);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * grad_b;
    }
    Ok(LogisticModel { weights, bias })
}

impl LogisticModel {
    pub fn score(&self, features: &[f64]) -> f64 {
        let z = features
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum::<f64>()
            + self.bias;
        sigmoid(z)
    }
}
