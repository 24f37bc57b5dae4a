//! Confusion metrics, exact rank-based AUC, and ROC curves.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fp: usize, fn_: usize, tn: usize) -> ConfusionCounts {
        ConfusionCounts { tp, fp, fn_, tn }
    }

    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn precision<F: Scalar>(c: &ConfusionCounts) -> F {
    if c.tp == 0 {
        F::zero()
    } else {
        F::from_usize_lossy(c.tp) / F::from_usize_lossy(c.tp + c.fp)
    }
}

pub fn recall<F: Scalar>(c: &ConfusionCounts) -> F {
    if c.tp == 0 {
        F::zero()
    } else {
        F::from_usize_lossy(c.tp) / F::from_usize_lossy(c.tp + c.fn_)
    }
}

/// Harmonic mean of precision and recall: 2PR / (P + R). Zero when tp = 0.
pub fn f1<F: Scalar>(c: &ConfusionCounts) -> F {
    f1_flagged(c).0
}

/// Like [`f1`] but flags the undefined input tp = fp = fn = 0, which is
/// reported as 0.
pub fn f1_flagged<F: Scalar>(c: &ConfusionCounts) -> (F, bool) {
    if c.tp == 0 && c.fp == 0 && c.fn_ == 0 {
        return (F::zero(), true);
    }
    if c.tp == 0 {
        return (F::zero(), false);
    }
    let p: F = precision(c);
    let r: F = recall(c);
    let two = F::from_f64_lossy(2.0);
    (two * p * r / (p + r), false)
}

/// Probability that a random positive outscores a random negative, ties
/// counted 1/2. Computed exactly through midranks, not by trapezoids.
pub fn auc<F: Scalar>(scores: &[F], labels: &[bool]) -> Result<F> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: scores.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassInput);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));

    // Midranks over tie groups, summed for the positive class.
    let mut rank_sum_pos = F::zero();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j share the midrank (i + j + 1) / 2.
        let midrank = F::from_usize_lossy(i + j + 1) / F::from_f64_lossy(2.0);
        for &idx in &order[i..j] {
            if labels[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let np = F::from_usize_lossy(n_pos);
    let nn = F::from_usize_lossy(n_neg);
    let min_rank_sum = np * (np + F::one()) / F::from_f64_lossy(2.0);
    Ok((rank_sum_pos - min_rank_sum) / (np * nn))
}

/// Threshold sweep at distinct scores, descending. Points start at (0,0)
/// and end at (1,1); the trapezoid area over them equals [`auc`].
pub fn roc_curve<F: Scalar>(scores: &[F], labels: &[bool]) -> Result<Vec<(F, F)>> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: scores.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassInput);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(Ordering::Equal));

    let np = F::from_usize_lossy(n_pos);
    let nn = F::from_usize_lossy(n_neg);
    let mut points = vec![(F::zero(), F::zero())];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        for &idx in &order[i..j] {
            if labels[idx] {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        points.push((F::from_usize_lossy(fp) / nn, F::from_usize_lossy(tp) / np));
        i = j;
    }
    Ok(points)
}

/// Trapezoidal area under a (fpr, tpr) polyline.
pub fn trapezoid<F: Scalar>(points: &[(F, F)]) -> F {
    let half = F::from_f64_lossy(0.5);
    points.windows(2).fold(F::zero(), |acc, w| {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        acc + (x2 - x1) * (y1 + y2) * half
    })
}
