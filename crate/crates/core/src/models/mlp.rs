//! Small feed-forward network: rectifier hidden layers, logistic output,
//! trained by seeded mini-batch gradient descent on cross-entropy + L2.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{f1, stratified_kfold, ConfusionCounts};
use crate::scalar::Scalar;
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpHyper<F> {
    pub learning_rate: F,
    pub epochs: usize,
    pub batch_size: usize,
    /// Weight of the (l2/2) * sum(w^2) penalty; biases are not penalized.
    pub l2: F,
    pub seed: u64,
}

impl<F: Scalar> Default for MlpHyper<F> {
    fn default() -> Self {
        MlpHyper {
            learning_rate: F::from_f64_lossy(0.5),
            epochs: 300,
            batch_size: 16,
            l2: F::from_f64_lossy(1e-4),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<F> {
    /// [input, hidden..., 1]
    pub layer_sizes: Vec<usize>,
    /// Per layer, row-major (out x in).
    pub weights: Vec<Vec<F>>,
    pub biases: Vec<Vec<F>>,
    pub hyper: MlpHyper<F>,
    pub epoch_losses: Vec<F>,
}

impl<F: Scalar> Mlp<F> {
    /// Symmetry-breaking initialization: weights uniform in
    /// +-sqrt(6 / (fan_in + fan_out)), biases zero.
    pub fn init(layer_sizes: &[usize], hyper: MlpHyper<F>) -> Result<Mlp<F>> {
        validate_architecture(layer_sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..layer_sizes.len() - 1 {
            let fan_in = layer_sizes[l];
            let fan_out = layer_sizes[l + 1];
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let layer: Vec<F> = (0..fan_in * fan_out)
                .map(|_| F::from_f64_lossy((rng.gen::<f64>() * 2.0 - 1.0) * bound))
                .collect();
            weights.push(layer);
            biases.push(vec![F::zero(); fan_out]);
        }
        Ok(Mlp {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
            hyper,
            epoch_losses: Vec::new(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    /// Activations per layer (input first) plus the output logit.
    fn forward(&self, x: &[F]) -> (Vec<Vec<F>>, F) {
        let n_layers = self.layer_sizes.len() - 1;
        let mut activations = vec![x.to_vec()];
        let mut logit = F::zero();
        for l in 0..n_layers {
            let fan_in = self.layer_sizes[l];
            let fan_out = self.layer_sizes[l + 1];
            let input = activations.last().unwrap().clone();
            let mut out = Vec::with_capacity(fan_out);
            for o in 0..fan_out {
                let mut z = self.biases[l][o];
                let row = &self.weights[l][o * fan_in..(o + 1) * fan_in];
                for (w, a) in row.iter().zip(&input) {
                    z += *w * *a;
                }
                if l + 1 == n_layers {
                    logit = z;
                } else {
                    out.push(z.max(F::zero()));
                }
            }
            if l + 1 < n_layers {
                activations.push(out);
            }
        }
        (activations, logit)
    }

    pub fn logit(&self, x: &[F]) -> Result<F> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(self.forward(x).1)
    }

    /// Logistic output, clamped inside the open interval (0, 1).
    pub fn predict_proba(&self, x: &[F]) -> Result<F> {
        let p = sigmoid(self.logit(x)?);
        let eps = F::epsilon();
        Ok(p.max(eps).min(F::one() - eps))
    }

    pub fn predict(&self, x: &[F]) -> Result<bool> {
        Ok(self.predict_proba(x)? >= F::from_f64_lossy(0.5))
    }

    /// Mean cross-entropy over the batch plus the L2 penalty, computed
    /// from logits for numerical stability.
    pub fn loss(&self, x: &[Vec<F>], y: &[u8]) -> F {
        let mut total = F::zero();
        for (xi, &yi) in x.iter().zip(y) {
            let z = self.forward(xi).1;
            total += bce_from_logit(z, yi);
        }
        total / F::from_usize_lossy(x.len()) + self.penalty()
    }

    fn penalty(&self) -> F {
        let sum = self
            .weights
            .iter()
            .flatten()
            .fold(F::zero(), |acc, &w| acc + w * w);
        self.hyper.l2 * sum / F::from_f64_lossy(2.0)
    }

    /// Backpropagated gradient of `loss` over the batch, laid out like the
    /// parameters: per layer weights then biases.
    pub fn gradients(&self, x: &[Vec<F>], y: &[u8]) -> (Vec<Vec<F>>, Vec<Vec<F>>) {
        let n_layers = self.layer_sizes.len() - 1;
        let mut grad_w: Vec<Vec<F>> = self.weights.iter().map(|w| vec![F::zero(); w.len()]).collect();
        let mut grad_b: Vec<Vec<F>> = self.biases.iter().map(|b| vec![F::zero(); b.len()]).collect();
        let scale = F::one() / F::from_usize_lossy(x.len());

        for (xi, &yi) in x.iter().zip(y) {
            let (activations, logit) = self.forward(xi);
            // dL/dz at the output of the logistic + cross-entropy pair.
            let mut delta = vec![sigmoid(logit) - F::from_f64_lossy(f64::from(yi))];
            for l in (0..n_layers).rev() {
                let fan_in = self.layer_sizes[l];
                let input = &activations[l];
                for (o, &d) in delta.iter().enumerate() {
                    let row = &mut grad_w[l][o * fan_in..(o + 1) * fan_in];
                    for (g, &a) in row.iter_mut().zip(input) {
                        *g += scale * d * a;
                    }
                    grad_b[l][o] += scale * d;
                }
                if l > 0 {
                    let mut next = vec![F::zero(); fan_in];
                    for (o, &d) in delta.iter().enumerate() {
                        let row = &self.weights[l][o * fan_in..(o + 1) * fan_in];
                        for (i, &w) in row.iter().enumerate() {
                            next[i] += d * w;
                        }
                    }
                    // Rectifier subgradient: pass only where the unit fired.
                    for (n, &a) in next.iter_mut().zip(&activations[l]) {
                        if a <= F::zero() {
                            *n = F::zero();
                        }
                    }
                    delta = next;
                }
            }
        }
        for (gw, w) in grad_w.iter_mut().zip(&self.weights) {
            for (g, &wi) in gw.iter_mut().zip(w) {
                *g += self.hyper.l2 * wi;
            }
        }
        (grad_w, grad_b)
    }
}

fn sigmoid<F: Scalar>(z: F) -> F {
    F::one() / (F::one() + (-z).exp())
}

/// max(z,0) - z*y + ln(1 + exp(-|z|)): exact cross-entropy of the logistic
/// output without forming the probability.
fn bce_from_logit<F: Scalar>(z: F, y: u8) -> F {
    z.max(F::zero()) - z * F::from_f64_lossy(f64::from(y)) + (F::one() + (-z.abs()).exp()).ln()
}

fn validate_architecture(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidArchitecture {
            reason: format!("need at least [input, 1], got {layer_sizes:?}"),
        });
    }
    if *layer_sizes.last().unwrap() != 1 {
        return Err(Error::InvalidArchitecture {
            reason: format!("output layer must have size 1, got {layer_sizes:?}"),
        });
    }
    if layer_sizes.iter().any(|&s| s == 0) {
        return Err(Error::InvalidArchitecture {
            reason: format!("zero-width layer in {layer_sizes:?}"),
        });
    }
    Ok(())
}

/// Train by mini-batch gradient descent with seeded shuffling. Labels are
/// 0/1; both classes must be present.
pub fn mlp_train<F: Scalar>(
    x: &[Vec<F>],
    y: &[u8],
    layer_sizes: &[usize],
    hyper: MlpHyper<F>,
) -> Result<Mlp<F>> {
    if x.is_empty() {
        return Err(Error::EmptyInput {
            what: "mlp training set".into(),
        });
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    validate_architecture(layer_sizes)?;
    if layer_sizes[0] != x[0].len() {
        return Err(Error::DimensionMismatch {
            expected: layer_sizes[0],
            got: x[0].len(),
        });
    }
    for row in x {
        if row.len() != layer_sizes[0] {
            return Err(Error::DimensionMismatch {
                expected: layer_sizes[0],
                got: row.len(),
            });
        }
    }
    let n_pos = y.iter().filter(|&&v| v == 1).count();
    if n_pos == 0 || n_pos == y.len() {
        return Err(Error::SingleClassInput);
    }

    let mut model = Mlp::init(layer_sizes, hyper)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(model.hyper.seed, "shuffle"));
    let batch_size = model.hyper.batch_size.max(1);
    let lr = model.hyper.learning_rate;

    model.epoch_losses.push(model.loss(x, y));
    let mut order: Vec<usize> = (0..x.len()).collect();
    for _ in 0..model.hyper.epochs {
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch_size) {
            let bx: Vec<Vec<F>> = chunk.iter().map(|&i| x[i].clone()).collect();
            let by: Vec<u8> = chunk.iter().map(|&i| y[i]).collect();
            let (grad_w, grad_b) = model.gradients(&bx, &by);
            for (w, gw) in model.weights.iter_mut().zip(&grad_w) {
                for (wi, &g) in w.iter_mut().zip(gw) {
                    *wi -= lr * g;
                }
            }
            for (b, gb) in model.biases.iter_mut().zip(&grad_b) {
                for (bi, &g) in b.iter_mut().zip(gb) {
                    *bi -= lr * g;
                }
            }
        }
        model.epoch_losses.push(model.loss(x, y));
    }
    Ok(model)
}

/// Compare backpropagated gradients with central finite differences,
/// parameter-wise; returns the max relative error
/// |a - n| / max(|a| + |n|, 1e-4).
pub fn mlp_gradient_check<F: Scalar>(model: &Mlp<F>, x: &[Vec<F>], y: &[u8], epsilon: F) -> F {
    let (grad_w, grad_b) = model.gradients(x, y);
    let mut worst = F::zero();
    let mut probe = model.clone();
    let floor = F::from_f64_lossy(1e-4);
    let two = F::from_f64_lossy(2.0);

    let mut check = |analytic: F, get: &mut dyn FnMut(&mut Mlp<F>) -> &mut F| {
        let original = *get(&mut probe);
        *get(&mut probe) = original + epsilon;
        let plus = probe.loss(x, y);
        *get(&mut probe) = original - epsilon;
        let minus = probe.loss(x, y);
        *get(&mut probe) = original;
        let numeric = (plus - minus) / (two * epsilon);
        let rel = (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(floor);
        if rel > worst {
            worst = rel;
        }
    };

    for l in 0..model.weights.len() {
        for i in 0..model.weights[l].len() {
            check(grad_w[l][i], &mut |m| &mut m.weights[l][i]);
        }
        for i in 0..model.biases[l].len() {
            check(grad_b[l][i], &mut |m| &mut m.biases[l][i]);
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct GridSearchResult<F> {
    pub best_index: usize,
    /// Hidden layout of the winning candidate.
    pub best: Vec<usize>,
    /// Mean positive-class F1 per candidate; None when training failed.
    pub scores: Vec<Option<F>>,
}

/// Evaluate each hidden-layout candidate by stratified k-fold mean F1 on
/// the positive class; ties go to the first-listed candidate. Candidates
/// that fail to train are skipped; the first error propagates only if
/// every candidate fails.
pub fn grid_search_mlp<F: Scalar>(
    x: &[Vec<F>],
    y: &[u8],
    candidates: &[Vec<usize>],
    folds: usize,
    seed: u64,
    hyper: &MlpHyper<F>,
) -> Result<GridSearchResult<F>> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput {
            what: "grid search candidates".into(),
        });
    }
    let labels: Vec<bool> = y.iter().map(|&v| v == 1).collect();
    let partition = stratified_kfold(&labels, folds, derive_seed(seed, "grid/split"))?;

    let mut scores: Vec<Option<F>> = Vec::with_capacity(candidates.len());
    let mut first_error = None;
    for (c_idx, hidden) in candidates.iter().enumerate() {
        let mut layer_sizes = Vec::with_capacity(hidden.len() + 2);
        layer_sizes.push(x.first().map(Vec::len).unwrap_or(0));
        layer_sizes.extend_from_slice(hidden);
        layer_sizes.push(1);

        let mut fold_f1 = Vec::with_capacity(partition.len());
        let mut failed = None;
        for (fold, test_idx) in partition.iter().enumerate() {
            let in_test = |i: &usize| test_idx.contains(i);
            let train_idx: Vec<usize> = (0..x.len()).filter(|i| !in_test(i)).collect();
            let tx: Vec<Vec<F>> = train_idx.iter().map(|&i| x[i].clone()).collect();
            let ty: Vec<u8> = train_idx.iter().map(|&i| y[i]).collect();
            let fold_hyper = MlpHyper {
                seed: derive_seed(seed, &format!("grid/{c_idx}/{fold}")),
                ..hyper.clone()
            };
            match mlp_train(&tx, &ty, &layer_sizes, fold_hyper) {
                Ok(model) => {
                    let mut counts = ConfusionCounts::default();
                    for &i in test_idx {
                        let predicted = model.predict(&x[i]).expect("dims fixed by training");
                        counts.record(predicted, y[i] == 1);
                    }
                    fold_f1.push(f1::<F>(&counts));
                }
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        match failed {
            Some(e) => {
                if first_error.is_none() {
                    first_error = Some(e);
                }
                scores.push(None);
            }
            None => {
                let mean = fold_f1.iter().fold(F::zero(), |acc, &v| acc + v)
                    / F::from_usize_lossy(fold_f1.len());
                scores.push(Some(mean));
            }
        }
    }

    let mut best_index: Option<usize> = None;
    for (i, score) in scores.iter().enumerate() {
        if let Some(s) = score {
            let better = match best_index {
                None => true,
                Some(b) => Some(*s) > scores[b],
            };
            if better {
                best_index = Some(i);
            }
        }
    }
    match best_index {
        Some(best_index) => Ok(GridSearchResult {
            best_index,
            best: candidates[best_index].clone(),
            scores,
        }),
        None => Err(first_error.expect("no candidate viable implies an error")),
    }
}
