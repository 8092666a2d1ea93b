use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use admintoken::classify::{self, ClassifyError, Label, ModelKind, TrainedModel};
use admintoken::corpus::{self, ContentId, CorpusError, CorpusManifest, Sample, SampleSpec};
use admintoken::features::{self, FeatureRow, MatrixError};
use admintoken::governance::{self, BoardFile, GovError};
use admintoken::report::{self, Format};
use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

const WORKFLOW: &str = "\
Workflow:
  1. ingest    pre-process sources: strip comments, flatten multi-part JSON, dedupe
  2. sample    pick a Slovin-sized random sample for manual labelling
  3. extract   extract feature vectors for the labelled sample (--ids)
  4. evaluate  k-fold evaluation of the candidate classifiers
  5. evaluate  choose the best performing classifier (printed as `best=`)
  6. extract   extract feature vectors for the whole corpus
  7. train     train the chosen classifier on the labelled sample
  8. classify  classify every row with the trained model
  9. report    analyse and report prevalence

Governance:
     gov-run   run a trustee governance scenario and print its event trace

Exit codes: 0 success, 1 internal or configuration error, 2 invalid input.";

#[derive(Parser)]
#[command(name = "admintoken", version, about = "Detect administrated ERC20 tokens in Solidity source corpora", after_help = WORKFLOW)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Step 1: normalize and deduplicate a source tree into a content store.
    Ingest {
        root: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Step 2: draw a reproducible random sample sized by Slovin's formula.
    Sample {
        manifest: PathBuf,
        #[arg(long, default_value_t = 0.94915)]
        confidence: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Steps 3 and 6: write the feature matrix for the whole manifest, or for a sample.
    Extract {
        manifest: PathBuf,
        #[arg(long)]
        store: PathBuf,
        /// Sample file from `sample`; restricts extraction to its ids.
        #[arg(long)]
        ids: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Steps 4 and 5: k-fold evaluation and model selection.
    Evaluate {
        features: PathBuf,
        /// `id,label` file; omitted when the matrix carries a label column.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated model kinds.
        #[arg(long, value_delimiter = ',', default_values_t = default_models())]
        models: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Step 7: train one classifier on the labelled sample.
    Train {
        features: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value = "linear_svm")]
        model: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Step 8: classify every row of a feature matrix.
    Classify {
        features: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Classified rows, `id,label,f1`.
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON prevalence report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Step 9: summarize classified rows.
    Report {
        classified: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a governance scenario and print the event trace as JSON.
    GovRun {
        scenario: PathBuf,
        #[arg(long)]
        board: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_models() -> Vec<String> {
    ModelKind::IMPLEMENTED.iter().map(|k| k.as_str().to_owned()).collect()
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

type CmdResult = Result<(), Failure>;

impl From<CorpusError> for Failure {
    fn from(err: CorpusError) -> Self {
        match err {
            CorpusError::Io { .. } => Failure::Internal(err.into()),
            _ => Failure::Input(err.into()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(err: ClassifyError) -> Self {
        match err {
            ClassifyError::ModelFormat(_) => Failure::Internal(err.into()),
            _ => Failure::Input(err.into()),
        }
    }
}

impl From<GovError> for Failure {
    fn from(err: GovError) -> Self {
        match err {
            GovError::MalformedScript(_) => Failure::Input(err.into()),
            _ => Failure::Internal(err.into()),
        }
    }
}

impl From<MatrixError> for Failure {
    fn from(err: MatrixError) -> Self {
        Failure::Input(err.into())
    }
}

fn internal(err: impl Into<anyhow::Error>) -> Failure {
    Failure::Internal(err.into())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Internal)
}

fn create_output(path: &Path) -> Result<fs::File, Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))
            .map_err(Failure::Internal)?;
    }
    fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Failure::Internal)
}

fn write_output(path: &Path, contents: &str) -> CmdResult {
    create_output(path)?
        .write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Internal)
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("artifact serializes");
    json.push('\n');
    json
}

fn warn(message: impl std::fmt::Display) {
    eprintln!("warning: {message}");
}

fn load_matrix(path: &Path) -> Result<Vec<FeatureRow>, Failure> {
    let text = read_input(path)?;
    let (rows, problems) = features::read_matrix(text.as_bytes())?;
    for problem in problems {
        warn(format_args!("{}: {problem}", path.display()));
    }
    Ok(rows)
}

fn load_labeled(features_path: &Path, labels_path: Option<&Path>) -> Result<Vec<classify::LabeledSample>, Failure> {
    let rows = load_matrix(features_path)?;
    let labels: Vec<(String, Label)> = match labels_path {
        Some(path) => {
            let (labels, problems) = classify::read_labels(read_input(path)?.as_bytes())?;
            for problem in problems {
                warn(format_args!("{}: {problem}", path.display()));
            }
            labels
        }
        None => Vec::new(),
    };
    Ok(classify::join_labels(&rows, &labels))
}

fn cmd_ingest(root: &Path, store: &Path, manifest_path: &Path) -> CmdResult {
    let outcome = corpus::ingest(root)?;
    for warning in &outcome.warnings {
        warn(warning);
    }
    corpus::write_store(store, &outcome.units)?;
    outcome.manifest.save(manifest_path)?;
    println!("unique={}", outcome.manifest.unique_count);
    Ok(())
}

fn cmd_sample(manifest_path: &Path, confidence: f64, seed: u64, out: &Path) -> CmdResult {
    let manifest = CorpusManifest::load(manifest_path)?;
    let spec = SampleSpec::new(manifest.entries.len() as u64, confidence, seed)?;
    let ids = corpus::select_sample(&manifest, &spec)?;
    println!("n={}", spec.sample_n);
    write_output(out, &to_json(&Sample { spec, ids }))
}

fn cmd_extract(manifest_path: &Path, store: &Path, ids: Option<&Path>, out: &Path) -> CmdResult {
    let manifest = CorpusManifest::load(manifest_path)?;
    let wanted: Vec<ContentId> = match ids {
        Some(path) => {
            let sample: Sample = serde_json::from_str(&read_input(path)?)
                .with_context(|| format!("parsing sample {}", path.display()))
                .map_err(Failure::Input)?;
            sample.ids
        }
        None => manifest.entries.iter().map(|e| e.id.clone()).collect(),
    };
    let mut rows = Vec::with_capacity(wanted.len());
    for id in &wanted {
        match corpus::read_store(store, id) {
            Ok(source) => rows.push(FeatureRow {
                id: id.to_string(),
                vector: features::extract_features(&source),
                label: None,
            }),
            Err(err) => warn(format_args!("skipping {id}: {err}")),
        }
    }
    if rows.is_empty() && !wanted.is_empty() {
        return Err(Failure::Input(anyhow!("no store entry could be read")));
    }
    features::write_matrix(create_output(out)?, &rows, false)?;
    println!("rows={}", rows.len());
    Ok(())
}

fn parse_kinds(names: &[String]) -> Result<Vec<ModelKind>, Failure> {
    names
        .iter()
        .map(|name| name.trim().parse::<ModelKind>().map_err(Failure::from))
        .collect()
}

fn cmd_evaluate(features_path: &Path, labels: Option<&Path>, k: usize, seed: u64, models: &[String], out: &Path) -> CmdResult {
    let kinds = parse_kinds(models)?;
    let samples = load_labeled(features_path, labels)?;
    let evaluation = classify::evaluate(&samples, &kinds, k, seed)?;
    let best = classify::select_best(&evaluation)?;
    for result in &evaluation.results {
        match (result.mean_accuracy, &result.error) {
            (Some(mean), _) => println!("{}\t{:.4}", result.kind, mean),
            (None, Some(err)) => println!("{}\tfailed: {err}", result.kind),
            (None, None) => {}
        }
    }
    println!("best={best}");
    let mut doc = serde_json::to_value(&evaluation).map_err(internal)?;
    doc["selected"] = serde_json::Value::String(best.as_str().to_owned());
    write_output(out, &to_json(&doc))
}

fn cmd_train(features_path: &Path, labels: Option<&Path>, model: &str, seed: u64, out: &Path) -> CmdResult {
    let kind: ModelKind = model.parse()?;
    let samples = load_labeled(features_path, labels)?;
    let trained = classify::train(kind, &samples, seed)?;
    println!("trained {} on {} samples", kind, samples.len());
    write_output(out, &trained.to_json())
}

fn cmd_classify(features_path: &Path, model_path: &Path, out: &Path, report_path: Option<&Path>) -> CmdResult {
    let model = TrainedModel::from_json(&read_input(model_path)?)?;
    let rows = load_matrix(features_path)?;
    let classified = classify::classify_corpus(&model, &rows);
    classify::write_classified(create_output(out)?, &classified).map_err(internal)?;
    let summary = report::summarize(&classified);
    for id in &summary.demoted {
        warn(format_args!("{id} predicted administrated without the ERC20 interface; counted as other"));
    }
    if let Some(path) = report_path {
        write_output(path, &report::render(&summary.report, Format::Json))?;
    }
    println!(
        "rows={} erc20={} administrated={}",
        summary.report.total, summary.report.erc20_count, summary.report.administrated_count
    );
    Ok(())
}

fn cmd_report(classified_path: &Path, format: ReportFormat, out: Option<&Path>) -> CmdResult {
    let (rows, problems) = classify::read_classified(read_input(classified_path)?.as_bytes())?;
    for problem in problems {
        warn(format_args!("{}: {problem}", classified_path.display()));
    }
    let summary = report::summarize(&rows);
    for id in &summary.demoted {
        warn(format_args!("{id} predicted administrated without the ERC20 interface; counted as other"));
    }
    let format = match format {
        ReportFormat::Text => Format::Text,
        ReportFormat::Json => Format::Json,
    };
    let rendered = report::render(&summary.report, format);
    match out {
        Some(path) => write_output(path, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn cmd_gov_run(scenario_path: &Path, board_path: &Path, out: Option<&Path>) -> CmdResult {
    let (board, config) = BoardFile::parse(&read_input(board_path)?)?.into_parts()?;
    let steps = governance::parse_scenario(&read_input(scenario_path)?)?;
    let outcome = governance::run_scenario(board, config, &steps)?;
    let rendered = to_json(&outcome.trace);
    match out {
        Some(path) => write_output(path, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Ingest { root, store, manifest } => cmd_ingest(&root, &store, &manifest),
        Command::Sample {
            manifest,
            confidence,
            seed,
            out,
        } => cmd_sample(&manifest, confidence, seed, &out),
        Command::Extract { manifest, store, ids, out } => cmd_extract(&manifest, &store, ids.as_deref(), &out),
        Command::Evaluate {
            features,
            labels,
            k,
            seed,
            models,
            out,
        } => cmd_evaluate(&features, labels.as_deref(), k, seed, &models, &out),
        Command::Train {
            features,
            labels,
            model,
            seed,
            out,
        } => cmd_train(&features, labels.as_deref(), &model, seed, &out),
        Command::Classify {
            features,
            model,
            out,
            report,
        } => cmd_classify(&features, &model, &out, report.as_deref()),
        Command::Report { classified, format, out } => cmd_report(&classified, format, out.as_deref()),
        Command::GovRun { scenario, board, out } => cmd_gov_run(&scenario, &board, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Internal(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
