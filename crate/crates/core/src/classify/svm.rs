use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Label, LabeledSample};
use crate::features::{FeatureVector, FEATURE_COUNT};

pub const LAMBDA: f64 = 1e-4;
pub const EPOCHS: usize = 200;

/// Linear SVM trained by Pegasos-style hinge-loss subgradient descent.
/// Features and labels are mapped to ±1; the bias is a constant +1 feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: [f64; FEATURE_COUNT],
    pub bias: f64,
}

fn signed(vector: &FeatureVector) -> [f64; FEATURE_COUNT] {
    vector.as_array().map(|b| if b { 1.0 } else { -1.0 })
}

fn target(label: Label) -> f64 {
    match label {
        Label::AdministratedErc20 => 1.0,
        Label::Other => -1.0,
    }
}

impl LinearSvm {
    pub fn fit(samples: &[LabeledSample], seed: u64) -> Self {
        let data: Vec<([f64; FEATURE_COUNT], f64)> =
            samples.iter().map(|s| (signed(&s.vector), target(s.label))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut model = LinearSvm {
            weights: [0.0; FEATURE_COUNT],
            bias: 0.0,
        };
        let mut step = 0u64;
        for _ in 0..EPOCHS {
            order.shuffle(&mut rng);
            for &i in &order {
                step += 1;
                let eta = 1.0 / (LAMBDA * step as f64);
                let (x, y) = &data[i];
                let margin = y * model.score_signed(x);
                let shrink = 1.0 - eta * LAMBDA;
                model.weights.iter_mut().for_each(|w| *w *= shrink);
                model.bias *= shrink;
                if margin < 1.0 {
                    for (w, xj) in model.weights.iter_mut().zip(x) {
                        *w += eta * y * xj;
                    }
                    model.bias += eta * y;
                }
            }
        }
        model
    }

    fn score_signed(&self, x: &[f64; FEATURE_COUNT]) -> f64 {
        self.weights.iter().zip(x).map(|(w, xj)| w * xj).sum::<f64>() + self.bias
    }

    pub fn decision(&self, vector: &FeatureVector) -> f64 {
        self.score_signed(&signed(vector))
    }

    pub fn predict(&self, vector: &FeatureVector) -> Label {
        if self.decision(vector) > 0.0 {
            Label::AdministratedErc20
        } else {
            Label::Other
        }
    }
}
