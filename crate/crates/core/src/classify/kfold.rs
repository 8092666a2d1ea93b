use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, LabeledSample};

/// Seeded shuffle of `0..n` cut into `k` contiguous folds whose sizes differ
/// by at most one (the first `n % k` folds are one larger).
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ClassifyError> {
    if k < 2 {
        return Err(ClassifyError::InvalidFoldCount(k));
    }
    if n < k {
        return Err(ClassifyError::TooFewSamples { samples: n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let len = base + usize::from(fold < extra);
        folds.push(order[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

pub fn kfold_split(samples: &[LabeledSample], k: usize, seed: u64) -> Result<Vec<Vec<LabeledSample>>, ClassifyError> {
    Ok(kfold_indices(samples.len(), k, seed)?
        .into_iter()
        .map(|fold| fold.into_iter().map(|i| samples[i].clone()).collect())
        .collect())
}

/// Training indices for fold `held_out`: everything else, in original order.
pub fn training_indices(folds: &[Vec<usize>], held_out: usize) -> Vec<usize> {
    let mut train: Vec<usize> = folds
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != held_out)
        .flat_map(|(_, fold)| fold.iter().copied())
        .collect();
    train.sort_unstable();
    train
}
