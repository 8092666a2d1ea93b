//! Helpers for driving the `admintoken` binary end to end.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use admintoken::corpus::{CorpusManifest, ManifestEntry};
use admintoken::SourceUnit;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/golden")
}

pub fn governance_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/governance")
}

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_admintoken"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        stdout(&out),
        stderr(&out)
    );
    out
}

/// Golden-corpus labels keyed by file name.
pub fn golden_labels() -> BTreeMap<String, String> {
    let text = fs::read_to_string(golden_dir().join("expected.csv")).unwrap();
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].to_owned(), cols[cols.len() - 1].to_owned())
        })
        .collect()
}

/// Writes `id,label` for every manifest entry whose origin is a labeled
/// golden file.
pub fn write_golden_labels(manifest: &Path, out: &Path) {
    let manifest = CorpusManifest::load(manifest).unwrap();
    let labels = golden_labels();
    let mut text = String::from("id,label\n");
    for entry in &manifest.entries {
        let name = Path::new(&entry.origin).file_name().unwrap().to_string_lossy().into_owned();
        if let Some(label) = labels.get(&name) {
            text.push_str(&format!("{},{label}\n", entry.id));
        }
    }
    fs::write(out, text).unwrap();
}

/// A manifest of `n` synthetic entries that point at no store.
pub fn synthetic_manifest(n: usize, path: &Path) {
    let entries = (0..n)
        .map(|i| {
            let unit = SourceUnit::normalize(format!("c{i}.sol"), format!("contract C{i} {{}}").into_bytes()).0;
            ManifestEntry::from(&unit)
        })
        .collect();
    CorpusManifest::new(entries).save(path).unwrap();
}

/// Paths produced by [`full_pipeline`].
pub struct Artifacts {
    pub manifest: PathBuf,
    pub sample: PathBuf,
    pub sample_features: PathBuf,
    pub labels: PathBuf,
    pub evaluation: PathBuf,
    pub model: PathBuf,
    pub corpus_features: PathBuf,
    pub classified: PathBuf,
    pub report: PathBuf,
    pub evaluate_stdout: String,
}

/// ingest, sample, extract, evaluate, train, extract, classify over the
/// golden corpus. Labels come from the golden expectations.
pub fn full_pipeline(dir: &Path, seed: u64, confidence: &str) -> Artifacts {
    let p = |name: &str| dir.join(name);
    let store = p("store");
    let a = Artifacts {
        manifest: p("manifest.json"),
        sample: p("sample.json"),
        sample_features: p("sample_features.csv"),
        labels: p("labels.csv"),
        evaluation: p("evaluation.json"),
        model: p("model.json"),
        corpus_features: p("features.csv"),
        classified: p("classified.csv"),
        report: p("report.json"),
        evaluate_stdout: String::new(),
    };
    let seed = seed.to_string();
    let s = |p: &Path| p.to_string_lossy().into_owned();
    ok(run([
        "ingest".into(),
        s(&golden_dir()),
        "--store".into(),
        s(&store),
        "--manifest".into(),
        s(&a.manifest),
    ]));
    ok(run(["sample".into(), s(&a.manifest), "--confidence".into(), confidence.into(), "--seed".into(), seed.clone(), "--out".into(), s(&a.sample)]));
    ok(run(["extract".into(), s(&a.manifest), "--store".into(), s(&store), "--ids".into(), s(&a.sample), "--out".into(), s(&a.sample_features)]));
    write_golden_labels(&a.manifest, &a.labels);
    let eval = ok(run([
        "evaluate".into(),
        s(&a.sample_features),
        "--labels".into(),
        s(&a.labels),
        "--seed".into(),
        seed.clone(),
        "--out".into(),
        s(&a.evaluation),
    ]));
    let best = stdout(&eval)
        .lines()
        .find_map(|l| l.strip_prefix("best=").map(str::to_owned))
        .expect("best= line");
    ok(run([
        "train".into(),
        s(&a.sample_features),
        "--labels".into(),
        s(&a.labels),
        "--model".into(),
        best,
        "--seed".into(),
        seed,
        "--out".into(),
        s(&a.model),
    ]));
    ok(run(["extract".into(), s(&a.manifest), "--store".into(), s(&store), "--out".into(), s(&a.corpus_features)]));
    ok(run([
        "classify".into(),
        s(&a.corpus_features),
        "--model".into(),
        s(&a.model),
        "--out".into(),
        s(&a.classified),
        "--report".into(),
        s(&a.report),
    ]));
    Artifacts {
        evaluate_stdout: stdout(&eval),
        ..a
    }
}

/// File contents with the manifest's creation stamp removed.
pub fn comparable(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    if path.file_name().is_some_and(|n| n == "manifest.json") {
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("created_at");
        return v.to_string();
    }
    text
}
