//! Stratified k-fold partitions.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Partition indices into k disjoint test sets preserving per-class counts
/// within one. Deterministic given the seed; each test set is sorted.
pub fn stratified_kfold(labels: &[bool], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter {
            what: format!("fold count k must be >= 2, got {k}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (class, name) in [(true, "positive"), (false, "negative")] {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        if indices.len() < k {
            return Err(Error::ClassTooSmall {
                class: name.into(),
                count: indices.len(),
                folds: k,
            });
        }
        indices.shuffle(&mut rng);
        for (pos, idx) in indices.into_iter().enumerate() {
            folds[pos % k].push(idx);
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}
