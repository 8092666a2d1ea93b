//! Synthetic labeled sets for classifier tests.

use admintoken::{FeatureVector, Label, LabeledSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn label_of(admin: bool) -> Label {
    if admin {
        Label::AdministratedErc20
    } else {
        Label::Other
    }
}

/// `n` random vectors labeled by `rule`, ids `s0000..`.
pub fn labeled_by(n: usize, seed: u64, rule: impl Fn(&FeatureVector) -> bool) -> Vec<LabeledSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let vector = FeatureVector::from_index(rng.gen_range(0..512));
            LabeledSample {
                id: format!("s{i:04}"),
                label: label_of(rule(&vector)),
                vector,
            }
        })
        .collect()
}

/// Label = f2 or f5.
pub fn f2_or_f5(v: &FeatureVector) -> bool {
    v.get(2) || v.get(5)
}

pub fn training_accuracy(model: &admintoken::TrainedModel, samples: &[LabeledSample]) -> f64 {
    let correct = samples.iter().filter(|s| model.predict(&s.vector) == s.label).count();
    correct as f64 / samples.len() as f64
}
