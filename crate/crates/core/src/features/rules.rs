use std::collections::HashSet;
use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::scan::{blank_strings, matching_close, CodeRegions};
use super::{FeatureVector, FEATURE_COUNT};

/// Bytes after a mint/burn/withdraw/transfer signature searched for a privileged marker.
pub const PRIVILEGE_WINDOW: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Combinator {
    /// Every pattern must match.
    All,
    /// At least one pattern must match.
    Any,
}

/// Extra condition a pattern hit must satisfy before it counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    None,
    /// A privileged marker (`onlyOwner`, `onlyAdmin`, `onlyMinter`, or a direct
    /// sender check) starts within [`PRIVILEGE_WINDOW`] bytes after the hit and
    /// before the next declaration keyword.
    PrivilegedWindow,
    /// The hit lies inside a function-like body and outside every modifier body.
    FunctionBodyOnly,
    /// The hit is a `require(` inside a modifier body whose condition reads an
    /// identifier assigned inside some function body, and does not itself check
    /// the caller's identity.
    ModifierGuardOnAssignedState,
}

#[derive(Debug, Clone)]
pub struct Pattern {
    pub id: &'static str,
    pub regex: Regex,
}

#[derive(Debug, Clone)]
pub struct SignatureRule {
    pub feature_index: usize,
    pub name: &'static str,
    pub combinator: Combinator,
    pub constraint: Constraint,
    pub patterns: Vec<Pattern>,
}

/// Serializable view of a rule, for audit dumps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDump {
    pub feature_index: usize,
    pub name: String,
    pub combinator: Combinator,
    pub constraint: Constraint,
    pub patterns: Vec<PatternDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDump {
    pub id: String,
    pub regex: String,
}

impl SignatureRule {
    pub fn dump(&self) -> RuleDump {
        RuleDump {
            feature_index: self.feature_index,
            name: self.name.to_owned(),
            combinator: self.combinator,
            constraint: self.constraint,
            patterns: self
                .patterns
                .iter()
                .map(|p| PatternDump {
                    id: p.id.to_owned(),
                    regex: p.regex.as_str().to_owned(),
                })
                .collect(),
        }
    }

    pub fn pattern(&self, id: &str) -> Option<&Pattern> {
        self.patterns.iter().find(|p| p.id == id)
    }
}

/// Evidence for a set bit: the byte range that satisfied a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub feature_index: usize,
    pub start: usize,
    pub end: usize,
    pub pattern: String,
}

impl Witness {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }
}

fn rule(
    feature_index: usize,
    name: &'static str,
    combinator: Combinator,
    constraint: Constraint,
    patterns: &[(&'static str, &str)],
) -> SignatureRule {
    SignatureRule {
        feature_index,
        name,
        combinator,
        constraint,
        patterns: patterns
            .iter()
            .map(|&(id, re)| Pattern {
                id,
                regex: Regex::new(re).expect("rule regex compiles"),
            })
            .collect(),
    }
}

/// The nine rules, indexed `registry()[i]` for feature `f<i+1>`.
pub fn registry() -> &'static [SignatureRule; FEATURE_COUNT] {
    static REGISTRY: OnceLock<[SignatureRule; FEATURE_COUNT]> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        use Combinator::*;
        use Constraint::*;
        [
            rule(1, "erc20_interface", All, None, &[
                ("f1.totalSupply", r"\bfunction\s+totalSupply\b"),
                ("f1.balanceOf", r"\bfunction\s+balanceOf\b"),
                ("f1.transfer", r"\bfunction\s+transfer\b"),
                ("f1.transferFrom", r"\bfunction\s+transferFrom\b"),
                ("f1.approve", r"\bfunction\s+approve\b"),
                ("f1.allowance", r"\bfunction\s+allowance\b"),
                ("f1.event_Transfer", r"\bevent\s+Transfer\b"),
                ("f1.event_Approval", r"\bevent\s+Approval\b"),
            ]),
            rule(2, "self_destruct", Any, None, &[
                ("f2.selfdestruct", r"\bselfdestruct\s*\("),
                ("f2.suicide", r"\bsuicide\s*\("),
            ]),
            rule(3, "pausable", Any, None, &[
                ("f3.whenNotPaused", r"\bwhenNotPaused\b"),
                ("f3.whenPaused", r"\bwhenPaused\b"),
                ("f3.pause_fn", r"\bfunction\s+pause\b"),
                ("f3.unpause_fn", r"\bfunction\s+unpause\b"),
                ("f3.Pausable", r"\bPausable\b"),
            ]),
            rule(4, "deprecation", Any, None, &[
                ("f4.deprecate_call", r"\bdeprecate\s*\("),
                ("f4.deprecated_flag", r"\bdeprecated\b"),
                ("f4.upgradedAddress", r"upgradedAddress"),
            ]),
            rule(5, "privileged_mint_burn", Any, PrivilegedWindow, &[
                ("f5.mint_fn", r"\bfunction\s+mint\b"),
                ("f5.burn_fn", r"\bfunction\s+burn(From)?\b"),
            ]),
            rule(6, "privileged_transfer_withdraw", Any, PrivilegedWindow, &[
                ("f6.withdraw_fn", r"\bfunction\s+withdraw\w*"),
                ("f6.transferAnyERC20Token", r"\btransferAnyERC20Token\b"),
                ("f6.transfer_fn", r"\bfunction\s+\w*[Tt]ransfer\w*"),
            ]),
            rule(7, "disabling_modifier", Any, ModifierGuardOnAssignedState, &[
                ("f7.modifier_require", r"\brequire\s*\("),
            ]),
            rule(8, "direct_sender_check", Any, FunctionBodyOnly, &[
                ("f8.sender_eq", r"\bmsg\.sender\s*=="),
                ("f8.eq_sender", r"==\s*msg\.sender\b"),
                ("f8.origin_eq", r"\b(tx|msg)\.origin\s*=="),
                ("f8.eq_origin", r"==\s*(tx|msg)\.origin\b"),
            ]),
            rule(9, "freeze_halt_kill", Any, None, &[
                ("f9.name", r"\bfunction\s+(freeze|unfreeze|halt|unhalt|kill)\w*\b"),
            ]),
        ]
    })
}

fn privileged_marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"\bonly(Owner|Admin|Minter)\b|\bmsg\.sender\s*==|==\s*msg\.sender\b|\b(tx|msg)\.origin\s*==|==\s*(tx|msg)\.origin\b",
        )
        .unwrap()
    })
}

fn declaration_keyword() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\b(function|modifier|constructor|fallback|receive|event|contract|interface|library)\b").unwrap()
    })
}

fn identity_reference() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b(msg\.sender|tx\.origin|msg\.origin)\b").unwrap())
}

fn identifier() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b[A-Za-z_][A-Za-z0-9_]*\b").unwrap())
}

fn assignment_target() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b([A-Za-z_][A-Za-z0-9_]*)\s*(?:\[[^\]\n]*\]\s*)*=").unwrap())
}

/// Per-source scratch state shared by the rules.
struct Analysis<'a> {
    src: &'a str,
    regions: OnceLock<CodeRegions>,
}

impl<'a> Analysis<'a> {
    fn new(src: &'a str) -> Self {
        Analysis {
            src,
            regions: OnceLock::new(),
        }
    }

    fn regions(&self) -> &CodeRegions {
        self.regions.get_or_init(|| CodeRegions::of(self.src))
    }

    fn privileged_after(&self, hit: &regex::Match<'_>) -> bool {
        let next_decl = declaration_keyword()
            .find_at(self.src, hit.end())
            .map_or(self.src.len(), |m| m.start());
        let limit = next_decl.min(hit.end() + PRIVILEGE_WINDOW);
        privileged_marker()
            .find_at(self.src, hit.start())
            .is_some_and(|m| m.start() < limit)
    }

    /// Identifiers written to by an assignment inside a `function` body.
    fn assigned_in_functions(&self) -> HashSet<&'a str> {
        let bytes = self.src.as_bytes();
        let regions = self.regions();
        assignment_target()
            .captures_iter(self.src)
            .filter(|caps| {
                let whole = caps.get(0).unwrap();
                !matches!(bytes.get(whole.end()), Some(b'=' | b'>'))
                    && regions.in_plain_function_body(whole.start())
            })
            .map(|caps| caps.get(1).unwrap().as_str())
            .collect()
    }

    fn witnesses(&self, rule: &SignatureRule) -> Vec<Witness> {
        let witness = |p: &Pattern, span: Range<usize>| Witness {
            feature_index: rule.feature_index,
            start: span.start,
            end: span.end,
            pattern: p.id.to_owned(),
        };
        let mut found = Vec::new();
        match rule.constraint {
            Constraint::None => {
                for p in &rule.patterns {
                    if let Some(m) = p.regex.find(self.src) {
                        found.push(witness(p, m.range()));
                    }
                }
            }
            Constraint::PrivilegedWindow => {
                for p in &rule.patterns {
                    if let Some(m) = p.regex.find_iter(self.src).find(|m| self.privileged_after(m)) {
                        found.push(witness(p, m.range()));
                    }
                }
            }
            Constraint::FunctionBodyOnly => {
                let regions = self.regions();
                for p in &rule.patterns {
                    if let Some(m) = p.regex.find_iter(self.src).find(|m| regions.in_function_body(m.start())) {
                        found.push(witness(p, m.range()));
                    }
                }
            }
            Constraint::ModifierGuardOnAssignedState => {
                for p in &rule.patterns {
                    found.extend(self.modifier_guards(p).into_iter().map(|span| witness(p, span)));
                }
            }
        }
        match rule.combinator {
            Combinator::All if found.len() < rule.patterns.len() => Vec::new(),
            _ => found,
        }
    }

    /// Spans of `require(...)` calls in modifier bodies that read admin-set state.
    fn modifier_guards(&self, require: &Pattern) -> Vec<Range<usize>> {
        let regions = self.regions();
        if regions.modifiers.is_empty() {
            return Vec::new();
        }
        let assigned = self.assigned_in_functions();
        let bytes = self.src.as_bytes();
        let mut spans = Vec::new();
        for body in &regions.modifiers {
            for m in require.regex.find_iter(&self.src[body.clone()]) {
                let start = body.start + m.start();
                let open = body.start + m.end() - 1;
                let close = matching_close(bytes, open, b'(', b')').min(body.end);
                let condition = blank_strings(&self.src[open + 1..close]);
                if identity_reference().is_match(&condition) {
                    continue;
                }
                let reads_assigned = identifier().find_iter(&condition).any(|id| {
                    let member = id.start() > 0 && condition.as_bytes()[id.start() - 1] == b'.';
                    !member && assigned.contains(id.as_str())
                });
                if reads_assigned {
                    spans.push(start..close);
                }
            }
        }
        spans
    }
}

/// Computes `f1..f9` for comment-stripped source text.
pub fn extract_features(source: &str) -> FeatureVector {
    let analysis = Analysis::new(source);
    let mut vector = FeatureVector::default();
    for rule in registry() {
        vector.set(rule.feature_index, !analysis.witnesses(rule).is_empty());
    }
    vector
}

/// Lists a witness span for every set feature bit, ordered by feature.
pub fn explain_features(source: &str) -> Vec<Witness> {
    let analysis = Analysis::new(source);
    registry().iter().flat_map(|rule| analysis.witnesses(rule)).collect()
}

pub fn registry_dump() -> Vec<RuleDump> {
    registry().iter().map(SignatureRule::dump).collect()
}
