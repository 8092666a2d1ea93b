//! The nine binary syntactic features of administrated ERC20 tokens.
//!
//! | bit | signature |
//! |-----|-----------|
//! | f1 | all eight mandatory ERC20 items (six functions, two events) |
//! | f2 | `selfdestruct(` / legacy `suicide(` |
//! | f3 | pausable functionality |
//! | f4 | deprecation / redirection to an upgraded contract |
//! | f5 | `mint` / `burn` functions behind a privileged marker |
//! | f6 | withdraw / transfer functions behind a privileged marker |
//! | f7 | modifiers whose `require` reads state that a function assigns |
//! | f8 | `msg.sender ==` style checks written directly in a function body |
//! | f9 | `freeze` / `halt` / `kill` style function names |
//!
//! All rules run on comment-stripped text. They are regex-based with a small
//! amount of brace scanning, see [`scan`].

mod matrix;
mod rules;
pub mod scan;

use serde::{Deserialize, Serialize};

pub use matrix::{read_matrix, write_matrix, FeatureRow, MatrixError, RowError, MATRIX_HEADER};
pub use rules::{
    explain_features, extract_features, registry, registry_dump, Combinator, Constraint, Pattern, PatternDump, RuleDump,
    SignatureRule, Witness, PRIVILEGE_WINDOW,
};

pub const FEATURE_COUNT: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FeatureVector([bool; FEATURE_COUNT]);

impl FeatureVector {
    pub const fn new(bits: [bool; FEATURE_COUNT]) -> Self {
        FeatureVector(bits)
    }

    /// Builds from 0/1 digits; any non-zero digit counts as set.
    pub fn from_bits(bits: [u8; FEATURE_COUNT]) -> Self {
        FeatureVector(bits.map(|b| b != 0))
    }

    /// The vector whose bit `i` (f1 = bit 0) is bit `i` of `index`. Covers all
    /// 512 vectors for `index < 512`.
    pub fn from_index(index: u16) -> Self {
        FeatureVector(std::array::from_fn(|i| index >> i & 1 == 1))
    }

    /// Iterates over all 512 possible vectors.
    pub fn all() -> impl Iterator<Item = FeatureVector> {
        (0..1u16 << FEATURE_COUNT).map(FeatureVector::from_index)
    }

    /// Value of feature `f<feature>`, 1-based.
    pub fn get(&self, feature: usize) -> bool {
        self.0[feature - 1]
    }

    pub fn set(&mut self, feature: usize, value: bool) {
        self.0[feature - 1] = value;
    }

    pub fn as_array(&self) -> &[bool; FEATURE_COUNT] {
        &self.0
    }

    pub fn bits(&self) -> [u8; FEATURE_COUNT] {
        self.0.map(u8::from)
    }

    /// f1: the contract implements the ERC20 interface.
    pub fn is_erc20(&self) -> bool {
        self.0[0]
    }

    pub fn hamming(&self, other: &FeatureVector) -> u32 {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count() as u32
    }
}

impl std::fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
