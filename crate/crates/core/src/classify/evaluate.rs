use serde::{Deserialize, Serialize};

use super::kfold::{kfold_indices, training_indices};
use super::{predict, train, ClassifyError, LabeledSample, ModelKind};

/// Accuracy figures published for the 385-sample mainnet study, echoed next to
/// local results. Never asserted against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedAccuracy {
    pub model: String,
    pub parameters: String,
    pub accuracy_percent: f64,
}

pub fn published_accuracies() -> Vec<PublishedAccuracy> {
    [
        ("Support Vector Classifier (SVC)", "scikit-learn default", 96.6233),
        ("Decision Tree", "max. depth = 9", 96.3636),
        ("K-Nearest Neighbors (K-NN)", "k=1", 95.5844),
        ("Random Forest", "scikit-learn default", 96.3636),
        ("Gaussian Naive Bayes", "scikit-learn default", 61.0389),
        ("Linear Discriminant Analysis (LDA)", "n_components = 1", 96.3636),
        ("Gradient Boosting", "scikit-learn default", 96.3636),
        ("Adaptive Boosting (AdaBoost)", "scikit-learn default", 95.0649),
        ("Multi-Layer Perc. Classifier (MLPC)", "alpha=1, max_iter=1000", 96.6233),
    ]
    .into_iter()
    .map(|(model, parameters, accuracy_percent)| PublishedAccuracy {
        model: model.into(),
        parameters: parameters.into(),
        accuracy_percent,
    })
    .collect()
}

/// Cross-validation outcome for one model kind. Exactly one of
/// `mean_accuracy` / `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindEvaluation {
    pub kind: ModelKind,
    pub fold_accuracies: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl KindEvaluation {
    pub fn succeeded(&self) -> bool {
        self.mean_accuracy.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub k: usize,
    pub seed: u64,
    pub sample_count: usize,
    pub fold_sizes: Vec<usize>,
    pub results: Vec<KindEvaluation>,
    #[serde(rename = "published_reference")]
    pub published: Vec<PublishedAccuracy>,
}

impl EvaluationReport {
    pub fn result(&self, kind: ModelKind) -> Option<&KindEvaluation> {
        self.results.iter().find(|r| r.kind == kind)
    }
}

/// K-fold cross-validation of each kind on the same folds. A kind whose
/// training fails on any fold is recorded as failed; the others still run.
pub fn evaluate(samples: &[LabeledSample], kinds: &[ModelKind], k: usize, seed: u64) -> Result<EvaluationReport, ClassifyError> {
    if kinds.is_empty() {
        return Err(ClassifyError::NoModelKinds);
    }
    let folds = kfold_indices(samples.len(), k, seed)?;
    let results = kinds
        .iter()
        .map(|&kind| match cross_validate(samples, &folds, kind, seed) {
            Ok(fold_accuracies) => KindEvaluation {
                kind,
                mean_accuracy: Some(fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64),
                fold_accuracies,
                error: None,
            },
            Err(err) => KindEvaluation {
                kind,
                fold_accuracies: Vec::new(),
                mean_accuracy: None,
                error: Some(err.to_string()),
            },
        })
        .collect();
    Ok(EvaluationReport {
        k,
        seed,
        sample_count: samples.len(),
        fold_sizes: folds.iter().map(Vec::len).collect(),
        results,
        published: published_accuracies(),
    })
}

fn cross_validate(samples: &[LabeledSample], folds: &[Vec<usize>], kind: ModelKind, seed: u64) -> Result<Vec<f64>, ClassifyError> {
    let mut accuracies = Vec::with_capacity(folds.len());
    for (held_out, test) in folds.iter().enumerate() {
        let training: Vec<LabeledSample> = training_indices(folds, held_out)
            .into_iter()
            .map(|i| samples[i].clone())
            .collect();
        let model = train(kind, &training, seed)?;
        let correct = test
            .iter()
            .filter(|&&i| predict(&model, &samples[i].vector) == samples[i].label)
            .count();
        accuracies.push(correct as f64 / test.len() as f64);
    }
    Ok(accuracies)
}

/// Means closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Highest mean accuracy wins; ties go to the kind earliest in
/// [`ModelKind::PREFERENCE`].
pub fn select_best(report: &EvaluationReport) -> Result<ModelKind, ClassifyError> {
    let best = report
        .results
        .iter()
        .filter_map(|r| r.mean_accuracy)
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(ClassifyError::NoSuccessfulModels);
    }
    let tied: Vec<ModelKind> = report
        .results
        .iter()
        .filter(|r| r.mean_accuracy.is_some_and(|m| best - m <= TIE_TOLERANCE))
        .map(|r| r.kind)
        .collect();
    ModelKind::PREFERENCE
        .into_iter()
        .find(|kind| tied.contains(kind))
        .ok_or(ClassifyError::NoSuccessfulModels)
}
