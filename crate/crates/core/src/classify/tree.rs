use serde::{Deserialize, Serialize};

use super::{Label, LabeledSample};
use crate::features::{FeatureVector, FEATURE_COUNT};

pub const MAX_DEPTH: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        label: Label,
        /// `[administrated, other]` training counts.
        counts: [usize; 2],
    },
    Split {
        /// 1-based feature index.
        feature: usize,
        if_zero: usize,
        if_one: usize,
    },
}

/// Greedy Gini-impurity tree over binary features. `nodes[0]` is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

fn counts(samples: &[&LabeledSample]) -> [usize; 2] {
    let admin = samples.iter().filter(|s| s.label == Label::AdministratedErc20).count();
    [admin, samples.len() - admin]
}

/// `n * gini` for a node with the given class counts.
fn weighted_gini([a, b]: [usize; 2]) -> f64 {
    let n = (a + b) as f64;
    if n == 0.0 {
        return 0.0;
    }
    n - (a * a + b * b) as f64 / n
}

impl DecisionTree {
    pub fn fit(samples: &[LabeledSample]) -> Self {
        let mut tree = DecisionTree { nodes: Vec::new() };
        let all: Vec<&LabeledSample> = samples.iter().collect();
        tree.grow(&all, 0);
        tree
    }

    fn grow(&mut self, samples: &[&LabeledSample], depth: usize) -> usize {
        let here = counts(samples);
        let id = self.nodes.len();
        self.nodes.push(leaf(here));
        if depth >= MAX_DEPTH || here[0] == 0 || here[1] == 0 {
            return id;
        }

        let mut best: Option<(usize, f64)> = None;
        for feature in 1..=FEATURE_COUNT {
            let (ones, zeros): (Vec<&LabeledSample>, Vec<&LabeledSample>) =
                samples.iter().partition(|s| s.vector.get(feature));
            if ones.is_empty() || zeros.is_empty() {
                continue;
            }
            let impurity = weighted_gini(counts(&zeros)) + weighted_gini(counts(&ones));
            if best.is_none_or(|(_, b)| impurity < b) {
                best = Some((feature, impurity));
            }
        }
        let Some((feature, _)) = best else {
            return id;
        };

        let (ones, zeros): (Vec<&LabeledSample>, Vec<&LabeledSample>) =
            samples.iter().partition(|s| s.vector.get(feature));
        let if_zero = self.grow(&zeros, depth + 1);
        let if_one = self.grow(&ones, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            if_zero,
            if_one,
        };
        id
    }

    pub fn predict(&self, vector: &FeatureVector) -> Label {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { label, .. } => return *label,
                Node::Split {
                    feature,
                    if_zero,
                    if_one,
                } => at = if vector.get(*feature) { *if_one } else { *if_zero },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { if_zero, if_one, .. } => 1 + walk(nodes, *if_zero).max(walk(nodes, *if_one)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Majority leaf; an even split predicts `Other`.
fn leaf(counts: [usize; 2]) -> Node {
    let label = if counts[0] > counts[1] {
        Label::AdministratedErc20
    } else {
        Label::Other
    };
    Node::Leaf { label, counts }
}
