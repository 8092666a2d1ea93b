use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ContentId, CorpusError, CorpusManifest};

/// Name of the generator used by [`select_sample`], recorded in sample files.
pub const SAMPLE_GENERATOR: &str = "chacha8";

/// Slovin's representative sample size, `ceil(N / (1 + N (1 - c)^2))`, clamped to `[1, N]`.
pub fn slovin(population_n: u64, confidence: f64) -> Result<u64, CorpusError> {
    if population_n == 0 {
        return Err(CorpusError::EmptyPopulation);
    }
    if !(0.0..1.0).contains(&confidence) {
        return Err(CorpusError::InvalidConfidence(confidence));
    }
    let n = population_n as f64;
    let margin = 1.0 - confidence;
    let size = (n / (1.0 + n * margin * margin)).ceil() as u64;
    Ok(size.clamp(1, population_n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub population_n: u64,
    pub confidence: f64,
    pub sample_n: u64,
    pub seed: u64,
    pub generator: String,
}

impl SampleSpec {
    pub fn new(population_n: u64, confidence: f64, seed: u64) -> Result<Self, CorpusError> {
        Ok(Self {
            population_n,
            confidence,
            sample_n: slovin(population_n, confidence)?,
            seed,
            generator: SAMPLE_GENERATOR.to_owned(),
        })
    }
}

/// A drawn sample together with the parameters that reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(flatten)]
    pub spec: SampleSpec,
    pub ids: Vec<ContentId>,
}

/// Draws `spec.sample_n` distinct ids uniformly without replacement.
///
/// The result lists ids in manifest order, so it depends only on the manifest
/// and the seed.
pub fn select_sample(manifest: &CorpusManifest, spec: &SampleSpec) -> Result<Vec<ContentId>, CorpusError> {
    let available = manifest.entries.len();
    let wanted = usize::try_from(spec.sample_n).unwrap_or(usize::MAX);
    if wanted > available {
        return Err(CorpusError::SampleTooLarge {
            requested: spec.sample_n,
            available: available as u64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut picked = rand::seq::index::sample(&mut rng, available, wanted).into_vec();
    picked.sort_unstable();
    Ok(picked
        .into_iter()
        .map(|i| manifest.entries[i].id.clone())
        .collect())
}
