//! Browser bindings. Every export takes and returns plain strings (JSON), so
//! the same functions run natively under `cargo test`.

use admintoken::corpus::{slovin, strip_comments_report};
use admintoken::features::{explain_features, extract_features, registry};
use admintoken::governance::{parse_scenario, run_scenario, BoardFile};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct FeatureHit {
    feature: usize,
    name: &'static str,
    present: bool,
}

#[derive(Serialize)]
struct WitnessOut {
    feature: usize,
    pattern: String,
    start: usize,
    end: usize,
    text: String,
}

#[derive(Serialize)]
struct Extraction {
    bits: String,
    erc20: bool,
    features: Vec<FeatureHit>,
    witnesses: Vec<WitnessOut>,
    stripped: String,
    unterminated_comment: bool,
}

fn error_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// Strips comments, extracts the nine features and returns the bits with
/// their witnesses. Witness offsets index into `stripped`.
#[wasm_bindgen]
pub fn analyze_source(source: &str) -> String {
    let stripped = strip_comments_report(source);
    let vector = extract_features(&stripped.text);
    let witnesses = explain_features(&stripped.text)
        .into_iter()
        .map(|w| WitnessOut {
            feature: w.feature_index,
            text: stripped.text[w.span()].to_owned(),
            pattern: w.pattern,
            start: w.start,
            end: w.end,
        })
        .collect();
    let features = registry()
        .iter()
        .map(|rule| FeatureHit {
            feature: rule.feature_index,
            name: rule.name,
            present: vector.get(rule.feature_index),
        })
        .collect();
    serde_json::to_string(&Extraction {
        bits: vector.to_string(),
        erc20: vector.is_erc20(),
        features,
        witnesses,
        stripped: stripped.text,
        unterminated_comment: stripped.unterminated_block,
    })
    .expect("extraction serializes")
}

/// Slovin sample size. `population` arrives as a JS number.
#[wasm_bindgen]
pub fn sample_size(population: f64, confidence: f64) -> String {
    if !(population.is_finite() && population >= 0.0 && population.fract() == 0.0) {
        return error_json("population must be a non-negative integer");
    }
    match slovin(population as u64, confidence) {
        Ok(n) => serde_json::json!({ "n": n }).to_string(),
        Err(err) => error_json(err),
    }
}

/// Runs a governance scenario against a board file and returns the trace and
/// final state.
#[wasm_bindgen]
pub fn run_governance(board_json: &str, scenario_json: &str) -> String {
    let run = || -> Result<String, String> {
        let (board, config) = BoardFile::parse(board_json)
            .and_then(BoardFile::into_parts)
            .map_err(|e| e.to_string())?;
        let steps = parse_scenario(scenario_json).map_err(|e| e.to_string())?;
        let outcome = run_scenario(board, config, &steps).map_err(|e| e.to_string())?;
        Ok(serde_json::json!({ "trace": outcome.trace, "state": outcome.state }).to_string())
    };
    run().unwrap_or_else(error_json)
}
