//! Class-weighted linear SVM trained by seeded subgradient descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmHyper<F> {
    /// Weight of the lambda * ||w||^2 regularizer.
    pub lambda: F,
    pub epochs: usize,
    pub learning_rate: F,
    pub seed: u64,
}

impl<F: Scalar> Default for SvmHyper<F> {
    fn default() -> Self {
        SvmHyper {
            lambda: F::from_f64_lossy(0.01),
            epochs: 200,
            learning_rate: F::from_f64_lossy(0.5),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm<F> {
    pub weights: Vec<F>,
    pub bias: F,
    /// Balanced class weights (c_pos, c_neg) with c = m / (2 * m_class).
    pub class_weights: (F, F),
    pub hyper: SvmHyper<F>,
    /// Objective value at initialization and after each accepted epoch;
    /// non-increasing by construction.
    pub epoch_losses: Vec<F>,
}

/// Minimize lambda*||w||^2 + (1/m) * sum c_y * hinge(y * (w.x + b)) by
/// per-sample subgradient steps with seeded shuffling. After every epoch
/// the full objective is checkpointed; an epoch that increased it is
/// rolled back and the step size halved, so checkpoints never increase.
pub fn svm_train<F: Scalar>(x: &[Vec<F>], y: &[i8], hyper: SvmHyper<F>) -> Result<LinearSvm<F>> {
    if x.is_empty() {
        return Err(Error::EmptyInput {
            what: "svm training set".into(),
        });
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let dim = x[0].len();
    for row in x {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
    }
    let m_pos = y.iter().filter(|&&l| l > 0).count();
    let m_neg = y.len() - m_pos;
    if m_pos == 0 || m_neg == 0 {
        return Err(Error::SingleClassInput);
    }

    let m = F::from_usize_lossy(y.len());
    let two = F::from_f64_lossy(2.0);
    let c_pos = m / (two * F::from_usize_lossy(m_pos));
    let c_neg = m / (two * F::from_usize_lossy(m_neg));
    let class_weight = |label: i8| if label > 0 { c_pos } else { c_neg };

    let mut weights = vec![F::zero(); dim];
    let mut bias = F::zero();
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut step = hyper.learning_rate;

    let objective = |w: &[F], b: F| -> F {
        let reg = hyper.lambda * w.iter().fold(F::zero(), |acc, &v| acc + v * v);
        let hinge_sum = x.iter().zip(y).fold(F::zero(), |acc, (xi, &yi)| {
            let margin = F::from_f64_lossy(f64::from(yi)) * (dot(w, xi) + b);
            let hinge = (F::one() - margin).max(F::zero());
            acc + class_weight(yi) * hinge
        });
        reg + hinge_sum / m
    };

    let mut epoch_losses = vec![objective(&weights, bias)];
    for _ in 0..hyper.epochs {
        let snapshot = (weights.clone(), bias);
        order.shuffle(&mut rng);
        for &i in &order {
            let yi = F::from_f64_lossy(f64::from(y[i]));
            let margin = yi * (dot(&weights, &x[i]) + bias);
            let shrink = F::one() - step * two * hyper.lambda;
            for w in &mut weights {
                *w = *w * shrink;
            }
            if margin < F::one() {
                let scale = step * class_weight(y[i]) * yi;
                for (w, &xi) in weights.iter_mut().zip(&x[i]) {
                    *w += scale * xi;
                }
                bias += scale;
            }
        }
        let loss = objective(&weights, bias);
        let previous = *epoch_losses.last().unwrap();
        if loss <= previous {
            epoch_losses.push(loss);
        } else {
            weights = snapshot.0;
            bias = snapshot.1;
            step = step / two;
            epoch_losses.push(previous);
        }
    }

    Ok(LinearSvm {
        weights,
        bias,
        class_weights: (c_pos, c_neg),
        hyper,
        epoch_losses,
    })
}

impl<F: Scalar> LinearSvm<F> {
    /// Margin w.x + b; the predicted class is its sign, ties positive.
    pub fn score(&self, x: &[F]) -> Result<F> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(dot(&self.weights, x) + self.bias)
    }

    pub fn predict(&self, x: &[F]) -> Result<i8> {
        Ok(if self.score(x)? >= F::zero() { 1 } else { -1 })
    }
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}
