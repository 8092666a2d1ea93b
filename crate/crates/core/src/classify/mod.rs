//! Binary classification of feature vectors: training, k-fold model
//! selection, and corpus-wide prediction.

mod evaluate;
mod kfold;
mod knn;
mod naive_bayes;
mod svm;
mod tree;

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use evaluate::{evaluate, published_accuracies, select_best, EvaluationReport, KindEvaluation, PublishedAccuracy, TIE_TOLERANCE};
pub use kfold::{kfold_indices, kfold_split, training_indices};
pub use knn::NearestNeighbor;
pub use naive_bayes::{ClassStats, GaussianNaiveBayes, VAR_SMOOTHING};
pub use svm::{LinearSvm, EPOCHS as SVM_EPOCHS, LAMBDA as SVM_LAMBDA};
pub use tree::{DecisionTree, Node, MAX_DEPTH};

use crate::features::{FeatureRow, FeatureVector};

/// Version of the model file envelope.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    AdministratedErc20,
    Other,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::AdministratedErc20 => "administrated_erc20",
            Label::Other => "other",
        }
    }

    pub fn parse(text: &str) -> Option<Label> {
        match text {
            "administrated_erc20" => Some(Label::AdministratedErc20),
            "other" => Some(Label::Other),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub id: String,
    pub vector: FeatureVector,
    pub label: Label,
}

/// Classifier families. Only the first four train; the rest exist so the
/// registry lines up with the published comparison table and report
/// [`ClassifyError::UnsupportedModelKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[serde(rename = "nearest_neighbor_1")]
    NearestNeighbor1,
    GaussianNaiveBayes,
    DecisionTreeDepth9,
    LinearSvm,
    RandomForest,
    Lda,
    GradientBoosting,
    AdaBoost,
    Mlpc,
}

impl ModelKind {
    pub const IMPLEMENTED: [ModelKind; 4] = [
        ModelKind::NearestNeighbor1,
        ModelKind::GaussianNaiveBayes,
        ModelKind::DecisionTreeDepth9,
        ModelKind::LinearSvm,
    ];

    pub const UNSUPPORTED: [ModelKind; 5] = [
        ModelKind::RandomForest,
        ModelKind::Lda,
        ModelKind::GradientBoosting,
        ModelKind::AdaBoost,
        ModelKind::Mlpc,
    ];

    /// Tie-break order for [`select_best`].
    pub const PREFERENCE: [ModelKind; 4] = [
        ModelKind::LinearSvm,
        ModelKind::DecisionTreeDepth9,
        ModelKind::NearestNeighbor1,
        ModelKind::GaussianNaiveBayes,
    ];

    pub fn is_supported(self) -> bool {
        Self::IMPLEMENTED.contains(&self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::NearestNeighbor1 => "nearest_neighbor_1",
            ModelKind::GaussianNaiveBayes => "gaussian_naive_bayes",
            ModelKind::DecisionTreeDepth9 => "decision_tree_depth9",
            ModelKind::LinearSvm => "linear_svm",
            ModelKind::RandomForest => "random_forest",
            ModelKind::Lda => "lda",
            ModelKind::GradientBoosting => "gradient_boosting",
            ModelKind::AdaBoost => "ada_boost",
            ModelKind::Mlpc => "mlpc",
        }
    }

    fn needs_both_classes(self) -> bool {
        matches!(self, ModelKind::GaussianNaiveBayes | ModelKind::LinearSvm)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::IMPLEMENTED
            .into_iter()
            .chain(Self::UNSUPPORTED)
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ClassifyError::UnknownModelKind(s.to_owned()))
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("{0} needs samples of both classes")]
    SingleClassTraining(ModelKind),
    #[error("model kind {0} is not implemented")]
    UnsupportedModelKind(ModelKind),
    #[error("unknown model kind `{0}`")]
    UnknownModelKind(String),
    #[error("no training samples")]
    EmptyTraining,
    #[error("{samples} samples cannot be split into {k} folds")]
    TooFewSamples { samples: usize, k: usize },
    #[error("fold count must be at least 2, got {0}")]
    InvalidFoldCount(usize),
    #[error("no model kinds requested")]
    NoModelKinds,
    #[error("no model kind evaluated successfully")]
    NoSuccessfulModels,
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("labels file: {0}")]
    LabelsFormat(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum ModelParameters {
    NearestNeighbor(NearestNeighbor),
    GaussianNaiveBayes(GaussianNaiveBayes),
    DecisionTree(DecisionTree),
    LinearSvm(LinearSvm),
}

/// An immutable trained classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub kind: ModelKind,
    #[serde(rename = "seed")]
    pub training_seed: u64,
    /// `[administrated, other]` training-set frequencies.
    pub class_prior: [f64; 2],
    pub parameters: ModelParameters,
}

impl TrainedModel {
    pub fn predict(&self, vector: &FeatureVector) -> Label {
        match &self.parameters {
            ModelParameters::NearestNeighbor(m) => m.predict(vector),
            ModelParameters::GaussianNaiveBayes(m) => m.predict(vector),
            ModelParameters::DecisionTree(m) => m.predict(vector),
            ModelParameters::LinearSvm(m) => m.predict(vector),
        }
    }

    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("model serializes");
        json.push('\n');
        json
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        let model: TrainedModel = serde_json::from_str(text).map_err(|e| ClassifyError::ModelFormat(e.to_string()))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(ClassifyError::ModelFormat(format!(
                "unsupported format_version {}",
                model.format_version
            )));
        }
        let consistent = matches!(
            (model.kind, &model.parameters),
            (ModelKind::NearestNeighbor1, ModelParameters::NearestNeighbor(_))
                | (ModelKind::GaussianNaiveBayes, ModelParameters::GaussianNaiveBayes(_))
                | (ModelKind::DecisionTreeDepth9, ModelParameters::DecisionTree(_))
                | (ModelKind::LinearSvm, ModelParameters::LinearSvm(_))
        );
        if !consistent {
            return Err(ClassifyError::ModelFormat(format!(
                "kind {} does not match its parameters",
                model.kind
            )));
        }
        Ok(model)
    }
}

/// Trains `kind` on `samples`. Deterministic given the sample order and seed.
pub fn train(kind: ModelKind, samples: &[LabeledSample], seed: u64) -> Result<TrainedModel, ClassifyError> {
    if !kind.is_supported() {
        return Err(ClassifyError::UnsupportedModelKind(kind));
    }
    if samples.is_empty() {
        return Err(ClassifyError::EmptyTraining);
    }
    let admin = samples.iter().filter(|s| s.label == Label::AdministratedErc20).count();
    if kind.needs_both_classes() && (admin == 0 || admin == samples.len()) {
        return Err(ClassifyError::SingleClassTraining(kind));
    }
    let parameters = match kind {
        ModelKind::NearestNeighbor1 => ModelParameters::NearestNeighbor(NearestNeighbor::fit(samples)),
        ModelKind::GaussianNaiveBayes => ModelParameters::GaussianNaiveBayes(GaussianNaiveBayes::fit(samples)),
        ModelKind::DecisionTreeDepth9 => ModelParameters::DecisionTree(DecisionTree::fit(samples)),
        ModelKind::LinearSvm => ModelParameters::LinearSvm(LinearSvm::fit(samples, seed)),
        _ => unreachable!("unsupported kinds rejected above"),
    };
    let n = samples.len() as f64;
    Ok(TrainedModel {
        format_version: MODEL_FORMAT_VERSION,
        kind,
        training_seed: seed,
        class_prior: [admin as f64 / n, (samples.len() - admin) as f64 / n],
        parameters,
    })
}

pub fn predict(model: &TrainedModel, vector: &FeatureVector) -> Label {
    model.predict(vector)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedRow {
    pub id: String,
    pub label: Label,
    pub f1: bool,
}

/// Predicts every row, preserving order and carrying f1 through.
pub fn classify_corpus(model: &TrainedModel, rows: &[FeatureRow]) -> Vec<ClassifiedRow> {
    rows.iter()
        .map(|row| ClassifiedRow {
            id: row.id.clone(),
            label: model.predict(&row.vector),
            f1: row.vector.is_erc20(),
        })
        .collect()
}

/// `(id, label)` pairs in file order.
pub type Labels = Vec<(String, Label)>;

/// Parses an `id,label` file. Returns labels in file order plus per-line
/// problems. Lines with an empty label are unlabeled and skipped silently.
pub fn read_labels<R: Read>(reader: R) -> Result<(Labels, Vec<String>), ClassifyError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = csv.headers().map_err(|e| ClassifyError::LabelsFormat(e.to_string()))?;
    if header.len() != 2 || &header[0] != "id" || &header[1] != "label" {
        if header.is_empty() {
            return Ok((Vec::new(), Vec::new()));
        }
        return Err(ClassifyError::LabelsFormat(format!(
            "header must be `id,label`, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut labels = Vec::new();
    let mut problems = Vec::new();
    for record in csv.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(e.to_string());
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            problems.push(format!("line {line}: expected 2 columns"));
            continue;
        }
        match record[1].trim() {
            "" => {}
            text => match Label::parse(text) {
                Some(label) => labels.push((record[0].trim().to_owned(), label)),
                None => problems.push(format!("line {line}: unknown label `{text}`")),
            },
        }
    }
    Ok((labels, problems))
}

pub fn write_labels<W: Write>(writer: W, labels: &[(String, Label)]) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "label"])?;
    for (id, label) in labels {
        csv.write_record([id.as_str(), label.as_str()])?;
    }
    csv.flush()
}

/// Attaches labels to matrix rows by id, in matrix order. Rows without a label
/// (from either the labels map or the matrix's own label column) are dropped.
pub fn join_labels(rows: &[FeatureRow], labels: &[(String, Label)]) -> Vec<LabeledSample> {
    let by_id: HashMap<&str, Label> = labels.iter().map(|(id, l)| (id.as_str(), *l)).collect();
    rows.iter()
        .filter_map(|row| {
            let label = by_id.get(row.id.as_str()).copied().or(row.label)?;
            Some(LabeledSample {
                id: row.id.clone(),
                vector: row.vector,
                label,
            })
        })
        .collect()
}

pub fn write_classified<W: Write>(writer: W, rows: &[ClassifiedRow]) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "label", "f1"])?;
    for row in rows {
        csv.write_record([row.id.as_str(), row.label.as_str(), if row.f1 { "1" } else { "0" }])?;
    }
    csv.flush()
}

pub fn read_classified<R: Read>(reader: R) -> Result<(Vec<ClassifiedRow>, Vec<String>), ClassifyError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for record in csv.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(e.to_string());
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let parsed = (record.len() == 3)
            .then(|| {
                let label = Label::parse(record[1].trim())?;
                let f1 = match record[2].trim() {
                    "0" => false,
                    "1" => true,
                    _ => return None,
                };
                Some(ClassifiedRow {
                    id: record[0].trim().to_owned(),
                    label,
                    f1,
                })
            })
            .flatten();
        match parsed {
            Some(row) => rows.push(row),
            None => problems.push(format!("line {line}: malformed classified row")),
        }
    }
    Ok((rows, problems))
}
