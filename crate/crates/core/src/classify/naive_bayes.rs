use serde::{Deserialize, Serialize};

use super::{Label, LabeledSample};
use crate::features::{FeatureVector, FEATURE_COUNT};

pub const VAR_SMOOTHING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub prior: f64,
    pub mean: [f64; FEATURE_COUNT],
    pub var: [f64; FEATURE_COUNT],
}

/// Gaussian naive Bayes over the 0/1 features. `classes[0]` describes
/// administrated tokens, `classes[1]` the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNaiveBayes {
    pub classes: [ClassStats; 2],
}

impl GaussianNaiveBayes {
    /// Callers guarantee both classes are present.
    pub fn fit(samples: &[LabeledSample]) -> Self {
        let stats = |label: Label| {
            let members: Vec<&FeatureVector> = samples.iter().filter(|s| s.label == label).map(|s| &s.vector).collect();
            let n = members.len() as f64;
            let mut mean = [0.0; FEATURE_COUNT];
            let mut var = [0.0; FEATURE_COUNT];
            for j in 0..FEATURE_COUNT {
                let values = members.iter().map(|v| f64::from(u8::from(v.as_array()[j])));
                mean[j] = values.clone().sum::<f64>() / n;
                var[j] = values.map(|x| (x - mean[j]).powi(2)).sum::<f64>() / n + VAR_SMOOTHING;
            }
            ClassStats {
                prior: n / samples.len() as f64,
                mean,
                var,
            }
        };
        GaussianNaiveBayes {
            classes: [stats(Label::AdministratedErc20), stats(Label::Other)],
        }
    }

    /// Joint log-likelihood of `vector` under each class.
    pub fn log_scores(&self, vector: &FeatureVector) -> [f64; 2] {
        self.classes.each_ref().map(|class| {
            let mut terms: Vec<f64> = Vec::with_capacity(FEATURE_COUNT + 1);
            terms.push(class.prior.ln());
            for j in 0..FEATURE_COUNT {
                let x = f64::from(u8::from(vector.as_array()[j]));
                let var = class.var[j];
                terms.push(-0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - class.mean[j]).powi(2) / (2.0 * var));
            }
            // sorted summation: classes that are feature permutations of each other score identically
            terms.sort_by(f64::total_cmp);
            terms.iter().sum()
        })
    }

    pub fn predict(&self, vector: &FeatureVector) -> Label {
        let [admin, other] = self.log_scores(vector);
        if admin > other {
            Label::AdministratedErc20
        } else {
            Label::Other
        }
    }
}
