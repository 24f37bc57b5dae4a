//! Percentile bootstrap confidence intervals over per-sample predictions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::metrics::{auc, f1, ConfusionCounts};
use crate::scalar::Scalar;

/// One evaluated sample: the model's score, the true label, and the
/// thresholded prediction.
#[derive(Debug, Clone, Copy)]
pub struct Triple<F> {
    pub score: F,
    pub label: bool,
    pub predicted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BootstrapMetric {
    F1,
    Auc,
}

/// Resample triples with replacement B times and return the percentile
/// interval of the recomputed metric. Replicates that collapse to a single
/// class are redrawn, with a cap of 10*B total attempts.
pub fn bootstrap_ci<F: Scalar>(
    triples: &[Triple<F>],
    metric: BootstrapMetric,
    b: usize,
    level: f64,
    seed: u64,
) -> Result<(F, F)> {
    if b < 100 {
        return Err(Error::InvalidParameter {
            what: format!("bootstrap replicates B must be >= 100, got {b}"),
        });
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidParameter {
            what: format!("confidence level must be in (0, 1), got {level}"),
        });
    }
    let n_pos = triples.iter().filter(|t| t.label).count();
    if n_pos == 0 || n_pos == triples.len() {
        return Err(Error::SingleClassInput);
    }

    let n = triples.len();
    let max_attempts = 10 * b;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<F> = Vec::with_capacity(b);
    let mut attempts = 0;
    let mut replicate: Vec<Triple<F>> = Vec::with_capacity(n);
    while values.len() < b {
        if attempts >= max_attempts {
            return Err(Error::DegenerateResampling { attempts });
        }
        attempts += 1;
        replicate.clear();
        for _ in 0..n {
            replicate.push(triples[rng.gen_range(0..n)]);
        }
        let has_pos = replicate.iter().any(|t| t.label);
        let has_neg = replicate.iter().any(|t| !t.label);
        if !has_pos || !has_neg {
            continue;
        }
        values.push(evaluate(&replicate, metric));
    }

    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let alpha = (1.0 - level) / 2.0;
    let lo_idx = ((alpha * b as f64).floor() as usize).min(b - 1);
    let hi_idx = (((1.0 - alpha) * b as f64).ceil() as usize)
        .saturating_sub(1)
        .min(b - 1);
    Ok((values[lo_idx], values[hi_idx]))
}

/// The metric on the full (non-resampled) prediction set.
pub fn point_estimate<F: Scalar>(triples: &[Triple<F>], metric: BootstrapMetric) -> F {
    evaluate(triples, metric)
}

fn evaluate<F: Scalar>(triples: &[Triple<F>], metric: BootstrapMetric) -> F {
    match metric {
        BootstrapMetric::F1 => {
            let mut counts = ConfusionCounts::default();
            for t in triples {
                counts.record(t.predicted, t.label);
            }
            f1(&counts)
        }
        BootstrapMetric::Auc => {
            let scores: Vec<F> = triples.iter().map(|t| t.score).collect();
            let labels: Vec<bool> = triples.iter().map(|t| t.label).collect();
            auc(&scores, &labels).expect("both classes checked before evaluate")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perfect(n_each: usize) -> Vec<Triple<f64>> {
        let mut t = Vec::new();
        for i in 0..n_each {
            t.push(Triple {
                score: 1.0 + i as f64,
                label: true,
                predicted: true,
            });
            t.push(Triple {
                score: -1.0 - i as f64,
                label: false,
                predicted: false,
            });
        }
        t
    }

    #[test]
    fn perfect_classifier_has_degenerate_interval() {
        let triples = perfect(25);
        let (lo, hi) = bootstrap_ci(&triples, BootstrapMetric::F1, 200, 0.95, 1).unwrap();
        assert_eq!((lo, hi), (1.0, 1.0));
        let (lo, hi) = bootstrap_ci(&triples, BootstrapMetric::Auc, 200, 0.95, 1).unwrap();
        assert_eq!((lo, hi), (1.0, 1.0));
    }

    #[test]
    fn interval_contains_point_estimate_on_random_instances() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for trial in 0..100 {
            let n = rng.gen_range(20..60);
            let triples: Vec<Triple<f64>> = (0..n)
                .map(|_| {
                    let label = rng.gen_bool(0.5);
                    let noise: f64 = rng.gen_range(-1.0..1.0);
                    let score = if label { 0.4 + noise } else { -0.4 + noise };
                    Triple {
                        score,
                        label,
                        predicted: score >= 0.0,
                    }
                })
                .collect();
            if triples.iter().all(|t| t.label) || triples.iter().all(|t| !t.label) {
                continue;
            }
            for metric in [BootstrapMetric::F1, BootstrapMetric::Auc] {
                let point = point_estimate(&triples, metric);
                let (lo, hi) = bootstrap_ci(&triples, metric, 300, 0.95, trial).unwrap();
                assert!(
                    lo <= point && point <= hi,
                    "trial {trial} {metric:?}: {point} not in [{lo}, {hi}]"
                );
            }
        }
    }

    #[test]
    fn same_seed_same_interval() {
        let triples = perfect(10);
        let a = bootstrap_ci(&triples, BootstrapMetric::Auc, 1000, 0.95, 5).unwrap();
        let b = bootstrap_ci(&triples, BootstrapMetric::Auc, 1000, 0.95, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extreme_imbalance_still_completes_within_the_attempt_cap() {
        // With one positive among 41, roughly a third of replicates are
        // single-class and get redrawn; the 10B cap leaves ample room.
        let mut triples = vec![Triple {
            score: 1.0,
            label: true,
            predicted: true,
        }];
        triples.extend(vec![
            Triple {
                score: -1.0,
                label: false,
                predicted: false,
            };
            40
        ]);
        let (lo, hi) = bootstrap_ci(&triples, BootstrapMetric::F1, 100, 0.95, 2).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn parameter_validation() {
        let triples = perfect(5);
        assert!(matches!(
            bootstrap_ci(&triples, BootstrapMetric::F1, 50, 0.95, 1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            bootstrap_ci(&triples, BootstrapMetric::F1, 100, 1.5, 1),
            Err(Error::InvalidParameter { .. })
        ));
    }
}
