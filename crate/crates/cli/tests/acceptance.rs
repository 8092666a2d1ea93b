//! One PASS/FAIL line per acceptance criterion. Tolerances are pinned below.

#[path = "../../core/tests/common/gov_invariants.rs"]
mod gov_invariants;
#[path = "../../core/tests/common/labeled.rs"]
mod labeled;
#[path = "support/pipeline.rs"]
mod pipeline;
#[path = "../../core/tests/common/strip_oracle.rs"]
mod strip_oracle;

use std::fs;
use std::time::{Duration, Instant};

use admintoken::classify::{
    evaluate, kfold_indices, select_best, train, training_indices, EvaluationReport, KindEvaluation,
};
use admintoken::corpus::{slovin, strip_comments, SourceUnit};
use admintoken::features::{extract_features, FeatureVector, FEATURE_COUNT};
use admintoken::governance::{parse_scenario, run_scenario, BoardFile, GovEventKind};
use admintoken::report::{render, summarize, Format};
use admintoken::{Label, ModelKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SLOVIN_BUDGET: Duration = Duration::from_millis(1);
const GOLDEN_BUDGET: Duration = Duration::from_secs(5);
const FUZZ_BUDGET: Duration = Duration::from_secs(60);
const PERFECT: f64 = 1.0;
const PERFECT_TOLERANCE: f64 = 0.0;
const NB_FLOOR: f64 = 0.90;
const REPORT_TOLERANCE: f64 = 0.0;
const ORACLE_CASES: usize = 10_000;
const FUZZ_SCENARIOS: usize = 1_000;
const FUZZ_STEPS: usize = 200;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slovin_reproduction() -> Verdict {
    let start = Instant::now();
    let n = slovin(84_062, 0.94915).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(n == 385 && elapsed < SLOVIN_BUDGET, format!("n={n} in {elapsed:?}"))
}

fn kfold_shape() -> Verdict {
    let folds = kfold_indices(385, 5, 0).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
    let train: Vec<usize> = (0..5).map(|i| training_indices(&folds, i).len()).collect();
    check(sizes == [77; 5] && train == [308; 5], format!("folds={sizes:?} train={train:?}"))
}

fn golden_suite() -> Verdict {
    let start = Instant::now();
    let dir = pipeline::golden_dir();
    let text = fs::read_to_string(dir.join("expected.csv")).map_err(|e| e.to_string())?;
    let (mut fixtures, mut mismatches) = (0, Vec::new());
    let mut positives = [0usize; FEATURE_COUNT];
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        let mut bits = [0u8; FEATURE_COUNT];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = cols[i + 1].parse().map_err(|_| format!("bad bit in {line}"))?;
            positives[i] += usize::from(*b);
        }
        let raw = fs::read(dir.join(cols[0])).map_err(|e| e.to_string())?;
        let got = extract_features(&SourceUnit::normalize(cols[0], raw).0.normalized);
        if got != FeatureVector::from_bits(bits) {
            mismatches.push(cols[0].to_owned());
        }
        fixtures += 1;
    }
    let elapsed = start.elapsed();
    let balanced = positives.iter().all(|&p| p >= 5 && fixtures - p >= 5);
    check(
        fixtures >= 60 && balanced && mismatches.is_empty() && elapsed < GOLDEN_BUDGET,
        format!("{fixtures} fixtures, mismatches={mismatches:?}, per-feature positives={positives:?}, {elapsed:?}"),
    )
}

fn classifier_sanity() -> Verdict {
    let samples = labeled::labeled_by(385, 21, labeled::f2_or_f5);
    let report = evaluate(&samples, &ModelKind::IMPLEMENTED, 5, 0).map_err(|e| e.to_string())?;
    let mean = |k| report.result(k).and_then(|r| r.mean_accuracy).unwrap_or(f64::NAN);
    let tree = mean(ModelKind::DecisionTreeDepth9);
    let svm = mean(ModelKind::LinearSvm);
    let nb = mean(ModelKind::GaussianNaiveBayes);

    let mut seen = std::collections::BTreeMap::new();
    let conflict_free: Vec<_> = labeled::labeled_by(300, 8, |v| v.get(3) ^ v.get(7) ^ v.get(9))
        .into_iter()
        .filter(|s| *seen.entry(s.vector.bits()).or_insert(s.label) == s.label)
        .collect();
    let knn = train(ModelKind::NearestNeighbor1, &conflict_free, 0).map_err(|e| e.to_string())?;
    let knn_train = labeled::training_accuracy(&knn, &conflict_free);
    check(
        (tree - PERFECT).abs() <= PERFECT_TOLERANCE
            && (svm - PERFECT).abs() <= PERFECT_TOLERANCE
            && nb >= NB_FLOOR
            && (knn_train - PERFECT).abs() <= PERFECT_TOLERANCE,
        format!("tree={tree:.4} svm={svm:.4} nb={nb:.4} 1nn_train={knn_train:.4}"),
    )
}

fn tie_rule() -> Verdict {
    let base = evaluate(&labeled::labeled_by(10, 0, labeled::f2_or_f5), &[ModelKind::DecisionTreeDepth9], 2, 0)
        .map_err(|e| e.to_string())?;
    let entry = |kind, m: f64| KindEvaluation {
        kind,
        fold_accuracies: vec![m; 5],
        mean_accuracy: Some(m),
        error: None,
    };
    let report = EvaluationReport {
        results: vec![
            entry(ModelKind::GaussianNaiveBayes, 0.610389),
            entry(ModelKind::NearestNeighbor1, 0.955844),
            entry(ModelKind::DecisionTreeDepth9, 0.966233),
            entry(ModelKind::LinearSvm, 0.966233),
        ],
        ..base
    };
    let best = select_best(&report).map_err(|e| e.to_string())?;
    check(best == ModelKind::LinearSvm, format!("selected {best}"))
}

fn prevalence_report() -> Verdict {
    let rows: Vec<_> = (0..200)
        .map(|i| admintoken::classify::ClassifiedRow {
            id: format!("r{i}"),
            label: if i < 117 { Label::AdministratedErc20 } else { Label::Other },
            f1: i < 130,
        })
        .collect();
    let r = summarize(&rows).report;
    let text = render(&r, Format::Text);
    let echoed = ["64.6%", "57.96%", "89.76%"].iter().all(|p| text.contains(p));
    check(
        (r.frac_erc20 - 0.650).abs() <= REPORT_TOLERANCE && (r.frac_admin_of_erc20 - 0.900).abs() <= REPORT_TOLERANCE && echoed,
        format!("frac_erc20={} frac_admin_of_erc20={} reference echoed={echoed}", r.frac_erc20, r.frac_admin_of_erc20),
    )
}

fn governance_fuzz() -> Verdict {
    let start = Instant::now();
    let report = gov_invariants::fuzz(FUZZ_SCENARIOS, FUZZ_STEPS, 7);
    let elapsed = start.elapsed();
    let detail = format!(
        "{} scenarios, {} steps, {} events, {} activations, {} pauses, {} violations, {elapsed:?}",
        report.scenarios,
        report.steps,
        report.events,
        report.activations,
        report.pauses,
        report.violations.len()
    );
    check(
        report.scenarios == FUZZ_SCENARIOS && report.violations.is_empty() && elapsed < FUZZ_BUDGET,
        match report.violations.first() {
            Some(v) => format!("{detail}; first: {v}"),
            None => detail,
        },
    )
}

fn golden_trace() -> Verdict {
    let dir = pipeline::governance_dir();
    let read = |n: &str| fs::read_to_string(dir.join(n)).map_err(|e| e.to_string());
    let (board, config) = BoardFile::parse(&read("board.json")?)
        .and_then(BoardFile::into_parts)
        .map_err(|e| e.to_string())?;
    let steps = parse_scenario(&read("vote_scenario.json")?).map_err(|e| e.to_string())?;
    let outcome = run_scenario(board, config, &steps).map_err(|e| e.to_string())?;
    use GovEventKind::*;
    let kinds = outcome.event_kinds();
    let at = |kind| outcome.state.log().iter().find(|e| e.kind == kind).map(|e| e.at.0);
    let deferred = match (at(ActionCleared), at(ActionActivated)) {
        (Some(c), Some(a)) => a - c >= config.maintenance_delay,
        _ => false,
    };
    check(
        kinds == [TrusteeVoted, TrusteeVoted, ActionCleared, TrusteeVoted, ActionActivated] && deferred,
        format!("{kinds:?}, cleared={:?} activated={:?}", at(ActionCleared), at(ActionActivated)),
    )
}

fn strip_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut mismatches = 0;
    let mut first = None;
    for _ in 0..ORACLE_CASES {
        let picks: Vec<usize> = (0..rng.gen_range(0..40))
            .map(|_| rng.gen_range(0..strip_oracle::FRAGMENTS.len()))
            .collect();
        let src = strip_oracle::assemble(&picks);
        if strip_comments(&src) != strip_oracle::oracle_strip(&src) {
            mismatches += 1;
            first.get_or_insert(src);
        }
    }
    check(mismatches == 0, format!("{ORACLE_CASES} cases, {mismatches} mismatches, first={first:?}"))
}

fn end_to_end_determinism() -> Verdict {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        pipeline::full_pipeline(a.path(), 42, "0.94915"),
        pipeline::full_pipeline(b.path(), 42, "0.94915"),
    ];
    let files = |r: &pipeline::Artifacts| {
        vec![
            r.manifest.clone(),
            r.sample.clone(),
            r.sample_features.clone(),
            r.evaluation.clone(),
            r.model.clone(),
            r.corpus_features.clone(),
            r.classified.clone(),
            r.report.clone(),
        ]
    };
    let differing: Vec<String> = files(&runs[0])
        .iter()
        .zip(files(&runs[1]))
        .filter(|(x, y)| pipeline::comparable(x) != pipeline::comparable(y))
        .map(|(x, _)| x.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    check(differing.is_empty(), format!("8 artifacts compared, differing={differing:?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("slovin reproduction", slovin_reproduction),
        ("k-fold shape", kfold_shape),
        ("feature golden suite", golden_suite),
        ("classifier sanity", classifier_sanity),
        ("model-selection tie rule", tie_rule),
        ("prevalence report", prevalence_report),
        ("governance property fuzz", governance_fuzz),
        ("governance golden trace", golden_trace),
        ("strip oracle equivalence", strip_oracle_equivalence),
        ("end-to-end determinism", end_to_end_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
