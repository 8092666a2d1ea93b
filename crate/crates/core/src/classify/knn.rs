use serde::{Deserialize, Serialize};

use super::{Label, LabeledSample};
use crate::features::FeatureVector;

/// 1-nearest-neighbour under Hamming distance. Ties go to the earliest
/// training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestNeighbor {
    pub vectors: Vec<FeatureVector>,
    pub labels: Vec<Label>,
}

impl NearestNeighbor {
    pub fn fit(samples: &[LabeledSample]) -> Self {
        NearestNeighbor {
            vectors: samples.iter().map(|s| s.vector).collect(),
            labels: samples.iter().map(|s| s.label).collect(),
        }
    }

    pub fn predict(&self, vector: &FeatureVector) -> Label {
        // min_by_key keeps the first minimum
        self.vectors
            .iter()
            .zip(&self.labels)
            .min_by_key(|(v, _)| v.hamming(vector))
            .map_or(Label::Other, |(_, &label)| label)
    }
}
