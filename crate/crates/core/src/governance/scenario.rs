use serde::{Deserialize, Serialize};

use super::{GovError, GovEvent, GovEventKind, GovernanceConfig, GovernanceState, Timestamp, TrusteeBoard, TrusteeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOp {
    Vote,
    Pause,
    Unpause,
    QueryCleared,
    QueryPaused,
}

impl StepOp {
    pub fn as_str(self) -> &'static str {
        match self {
            StepOp::Vote => "vote",
            StepOp::Pause => "pause",
            StepOp::Unpause => "unpause",
            StepOp::QueryCleared => "query_cleared",
            StepOp::QueryPaused => "query_paused",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioStep {
    pub at: u64,
    pub op: StepOp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_id: Option<u8>,
}

/// One line of a trace. Emitted events carry their kind; rejected steps and
/// queries carry the step op. `seq` is the position in the trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub seq: u64,
    pub at: u64,
    pub kind: String,
    pub actor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_id: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<bool>,
}

impl TraceEntry {
    /// The event kind, or `None` for rejections and queries.
    pub fn event_kind(&self) -> Option<GovEventKind> {
        if self.rejected.is_some() {
            return None;
        }
        GovEventKind::parse(&self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub trace: Vec<TraceEntry>,
    pub state: GovernanceState,
}

impl ScenarioOutcome {
    pub fn event_kinds(&self) -> Vec<GovEventKind> {
        self.trace.iter().filter_map(TraceEntry::event_kind).collect()
    }
}

fn default_delay() -> u64 {
    GovernanceConfig::default().maintenance_delay
}

fn default_pause_max() -> u64 {
    GovernanceConfig::default().pause_max
}

fn default_cooldown() -> u64 {
    GovernanceConfig::default().pause_cooldown
}

/// Board and timing configuration as stored on disk. Missing durations take
/// the defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoardFile {
    pub trustees: Vec<String>,
    pub threshold: usize,
    #[serde(default = "default_delay")]
    pub maintenance_delay: u64,
    #[serde(default = "default_pause_max")]
    pub pause_max: u64,
    #[serde(default = "default_cooldown")]
    pub pause_cooldown: u64,
}

impl BoardFile {
    pub fn parse(json: &str) -> Result<Self, GovError> {
        serde_json::from_str(json).map_err(|e| GovError::InvalidBoard(e.to_string()))
    }

    pub fn into_parts(self) -> Result<(TrusteeBoard, GovernanceConfig), GovError> {
        let count = self.trustees.len();
        let board = TrusteeBoard::new(self.trustees.into_iter().map(TrusteeId), self.threshold)?;
        if board.trustees().len() != count {
            return Err(GovError::InvalidBoard("duplicate trustee".into()));
        }
        let config = GovernanceConfig {
            maintenance_delay: self.maintenance_delay,
            pause_max: self.pause_max,
            pause_cooldown: self.pause_cooldown,
        };
        config.validate()?;
        Ok((board, config))
    }
}

fn validate_steps(steps: &[ScenarioStep]) -> Result<(), GovError> {
    for (i, pair) in steps.windows(2).enumerate() {
        if pair[1].at < pair[0].at {
            return Err(GovError::MalformedScript(format!(
                "step {} at {} is before step {} at {}",
                i + 1,
                pair[1].at,
                i,
                pair[0].at
            )));
        }
    }
    for (i, step) in steps.iter().enumerate() {
        let needs_actor = matches!(step.op, StepOp::Vote | StepOp::Pause | StepOp::Unpause);
        let needs_action = matches!(step.op, StepOp::Vote | StepOp::QueryCleared);
        if needs_actor && step.actor.is_none() {
            return Err(GovError::MalformedScript(format!("step {i}: {} needs an actor", step.op.as_str())));
        }
        if needs_action && step.action_id.is_none() {
            return Err(GovError::MalformedScript(format!(
                "step {i}: {} needs an action_id",
                step.op.as_str()
            )));
        }
    }
    Ok(())
}

/// Parses and validates a scenario document.
pub fn parse_scenario(json: &str) -> Result<Vec<ScenarioStep>, GovError> {
    let steps: Vec<ScenarioStep> =
        serde_json::from_str(json).map_err(|e| GovError::MalformedScript(e.to_string()))?;
    validate_steps(&steps)?;
    Ok(steps)
}

/// Runs `steps` against a fresh state. Step failures are recorded in the
/// trace and do not stop the run.
pub fn run_scenario(
    board: TrusteeBoard,
    config: GovernanceConfig,
    steps: &[ScenarioStep],
) -> Result<ScenarioOutcome, GovError> {
    validate_steps(steps)?;
    let mut state = GovernanceState::new(board, config)?;
    let mut trace = Vec::new();
    for step in steps {
        let now = Timestamp(step.at);
        let actor = TrusteeId(step.actor.clone().unwrap_or_default());
        let action_id = step.action_id.unwrap_or(0);
        let outcome = match step.op {
            StepOp::Vote => state.trustee_vote(&actor, action_id, now),
            StepOp::Pause => state.safely_pause(&actor, now),
            StepOp::Unpause => state.safely_unpause(&actor, now),
            StepOp::QueryCleared | StepOp::QueryPaused => {
                let result = match step.op {
                    StepOp::QueryCleared => state.action_cleared(action_id, now),
                    _ => state.safely_paused(now),
                };
                trace.push(TraceEntry {
                    seq: trace.len() as u64 + 1,
                    at: step.at,
                    kind: step.op.as_str().to_owned(),
                    actor: actor.0,
                    action_id: step.action_id,
                    rejected: None,
                    result: Some(result),
                });
                continue;
            }
        };
        match outcome {
            Ok(events) => {
                for event in events {
                    trace.push(TraceEntry {
                        seq: trace.len() as u64 + 1,
                        at: event.at.0,
                        kind: event.kind.as_str().to_owned(),
                        actor: event.actor.0,
                        action_id: event.action_id,
                        rejected: None,
                        result: None,
                    });
                }
            }
            Err(err) => trace.push(TraceEntry {
                seq: trace.len() as u64 + 1,
                at: step.at,
                kind: step.op.as_str().to_owned(),
                actor: actor.0,
                action_id: step.action_id,
                rejected: Some(err.to_string()),
                result: None,
            }),
        }
    }
    Ok(ScenarioOutcome { trace, state })
}

/// Rebuilds the final state from the event entries of a trace.
pub fn replay_trace(
    board: TrusteeBoard,
    config: GovernanceConfig,
    trace: &[TraceEntry],
) -> Result<GovernanceState, GovError> {
    let events: Vec<GovEvent> = trace
        .iter()
        .filter_map(|entry| entry.event_kind().map(|kind| (entry, kind)))
        .enumerate()
        .map(|(i, (entry, kind))| GovEvent {
            seq: i as u64 + 1,
            kind,
            actor: TrusteeId(entry.actor.clone()),
            action_id: entry.action_id,
            at: Timestamp(entry.at),
        })
        .collect();
    GovernanceState::replay(board, config, &events)
}
