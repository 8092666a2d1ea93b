//! Executable model of safely administrated governance.
//!
//! A fixed board of trustees votes on ten numbered maintenance actions. Once
//! `threshold` distinct trustees have voted, the action is *cleared* and a
//! maintenance delay starts; the first vote call after the delay *activates*
//! it, exactly once. Any trustee may pause the system. A pause lapses on its
//! own at `paused_since + pause_max`, and no new pause may start until
//! `pause_cooldown` has passed since the previous un-freeze.
//!
//! Time is injected by the caller. Every state change is expressed as a
//! [`GovEvent`] and applied through one code path, so replaying the log from
//! [`GovernanceState::new`] rebuilds the state exactly.

mod scenario;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scenario::{
    parse_scenario, replay_trace, run_scenario, BoardFile, ScenarioOutcome, ScenarioStep, StepOp, TraceEntry,
};

/// Number of governed actions, ids `0..ACTION_COUNT`.
pub const ACTION_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub fn after(self, seconds: u64) -> Timestamp {
        Timestamp(self.0.saturating_add(seconds))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrusteeId(pub String);

impl TrusteeId {
    pub fn new(id: impl Into<String>) -> Self {
        TrusteeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TrusteeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GovError {
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("{0} is not a trustee")]
    NotTrustee(TrusteeId),
    #[error("action {0} is out of range")]
    InvalidAction(u8),
    #[error("action {0} was already activated")]
    ActionAlreadyActivated(u8),
    #[error("clock went backwards: {now} is before {last}")]
    ClockWentBackwards { now: Timestamp, last: Timestamp },
    #[error("pause cooldown active until {until}")]
    PauseCooldownActive { until: Timestamp },
    #[error("guard failed: contract is not paused")]
    GuardFailedPaused,
    #[error("guard failed: contract is paused")]
    GuardFailedUnpaused,
    #[error("malformed scenario: {0}")]
    MalformedScript(String),
    #[error("event {seq} cannot be replayed: {reason}")]
    InvalidEvent { seq: u64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrusteeBoard {
    trustees: BTreeSet<TrusteeId>,
    threshold: usize,
}

impl TrusteeBoard {
    pub fn new(trustees: impl IntoIterator<Item = TrusteeId>, threshold: usize) -> Result<Self, GovError> {
        let trustees: BTreeSet<TrusteeId> = trustees.into_iter().collect();
        if trustees.is_empty() {
            return Err(GovError::InvalidBoard("no trustees".into()));
        }
        if threshold == 0 || threshold > trustees.len() {
            return Err(GovError::InvalidBoard(format!(
                "threshold {threshold} outside 1..={}",
                trustees.len()
            )));
        }
        Ok(TrusteeBoard { trustees, threshold })
    }

    pub fn trustees(&self) -> &BTreeSet<TrusteeId> {
        &self.trustees
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn is_trustee(&self, id: &TrusteeId) -> bool {
        self.trustees.contains(id)
    }
}

/// Durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovernanceConfig {
    pub maintenance_delay: u64,
    pub pause_max: u64,
    pub pause_cooldown: u64,
}

impl Default for GovernanceConfig {
    /// 48 h delay, 72 h maximum pause, 24 h cooldown.
    fn default() -> Self {
        GovernanceConfig {
            maintenance_delay: 172_800,
            pause_max: 259_200,
            pause_cooldown: 86_400,
        }
    }
}

impl GovernanceConfig {
    pub fn validate(&self) -> Result<(), GovError> {
        for (name, value) in [
            ("maintenance_delay", self.maintenance_delay),
            ("pause_max", self.pause_max),
            ("pause_cooldown", self.pause_cooldown),
        ] {
            if value == 0 {
                return Err(GovError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionState {
    pub action_id: u8,
    pub votes: BTreeSet<TrusteeId>,
    pub cleared_at: Option<Timestamp>,
    pub activated_at: Option<Timestamp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PauseState {
    pub paused_since: Option<Timestamp>,
    pub deadline: Option<Timestamp>,
    pub cooldown_until: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GovEventKind {
    TrusteeVoted,
    ActionCleared,
    ActionActivated,
    SafelyPaused,
    SafelyUnpaused,
}

impl GovEventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GovEventKind::TrusteeVoted => "TrusteeVoted",
            GovEventKind::ActionCleared => "ActionCleared",
            GovEventKind::ActionActivated => "ActionActivated",
            GovEventKind::SafelyPaused => "SafelyPaused",
            GovEventKind::SafelyUnpaused => "SafelyUnpaused",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [
            GovEventKind::TrusteeVoted,
            GovEventKind::ActionCleared,
            GovEventKind::ActionActivated,
            GovEventKind::SafelyPaused,
            GovEventKind::SafelyUnpaused,
        ]
        .into_iter()
        .find(|k| k.as_str() == text)
    }

    fn concerns_action(self) -> bool {
        matches!(
            self,
            GovEventKind::TrusteeVoted | GovEventKind::ActionCleared | GovEventKind::ActionActivated
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovEvent {
    pub seq: u64,
    pub kind: GovEventKind,
    pub actor: TrusteeId,
    pub action_id: Option<u8>,
    pub at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovernanceState {
    board: TrusteeBoard,
    config: GovernanceConfig,
    actions: Vec<ActionState>,
    pause: PauseState,
    log: Vec<GovEvent>,
    /// Time of the latest event. Calls may not be dated before it.
    clock: Timestamp,
}

impl GovernanceState {
    pub fn new(board: TrusteeBoard, config: GovernanceConfig) -> Result<Self, GovError> {
        config.validate()?;
        Ok(GovernanceState {
            board,
            config,
            actions: (0..ACTION_COUNT as u8)
                .map(|action_id| ActionState {
                    action_id,
                    votes: BTreeSet::new(),
                    cleared_at: None,
                    activated_at: None,
                })
                .collect(),
            pause: PauseState::default(),
            log: Vec::new(),
            clock: Timestamp(0),
        })
    }

    /// Rebuilds a state by applying `events` to a fresh one.
    pub fn replay(board: TrusteeBoard, config: GovernanceConfig, events: &[GovEvent]) -> Result<Self, GovError> {
        let mut state = GovernanceState::new(board, config)?;
        for event in events {
            state.apply(event.clone())?;
        }
        Ok(state)
    }

    pub fn board(&self) -> &TrusteeBoard {
        &self.board
    }

    pub fn config(&self) -> &GovernanceConfig {
        &self.config
    }

    pub fn actions(&self) -> &[ActionState] {
        &self.actions
    }

    pub fn action(&self, action_id: u8) -> Option<&ActionState> {
        self.actions.get(usize::from(action_id))
    }

    pub fn pause_state(&self) -> &PauseState {
        &self.pause
    }

    pub fn log(&self) -> &[GovEvent] {
        &self.log
    }

    pub fn clock(&self) -> Timestamp {
        self.clock
    }

    fn check_clock(&self, now: Timestamp) -> Result<(), GovError> {
        if now < self.clock {
            return Err(GovError::ClockWentBackwards { now, last: self.clock });
        }
        Ok(())
    }

    fn check_trustee(&self, trustee: &TrusteeId) -> Result<(), GovError> {
        if !self.board.is_trustee(trustee) {
            return Err(GovError::NotTrustee(trustee.clone()));
        }
        Ok(())
    }

    fn check_action(&self, action_id: u8) -> Result<&ActionState, GovError> {
        self.action(action_id).ok_or(GovError::InvalidAction(action_id))
    }

    /// Records `trustee`'s vote for `action_id`, clearing the action when the
    /// threshold is reached and activating it once the delay has elapsed.
    pub fn trustee_vote(&mut self, trustee: &TrusteeId, action_id: u8, now: Timestamp) -> Result<Vec<GovEvent>, GovError> {
        let action = self.check_action(action_id)?;
        self.check_clock(now)?;
        self.check_trustee(trustee)?;
        if action.activated_at.is_some() {
            return Err(GovError::ActionAlreadyActivated(action_id));
        }

        let mut emitted = Vec::new();
        if !action.votes.contains(trustee) {
            emitted.push(self.emit(GovEventKind::TrusteeVoted, trustee, Some(action_id), now));
            let action = &self.actions[usize::from(action_id)];
            if action.cleared_at.is_none() && action.votes.len() >= self.board.threshold {
                emitted.push(self.emit(GovEventKind::ActionCleared, trustee, Some(action_id), now));
            }
        }
        if self.action_cleared(action_id, now) {
            emitted.push(self.emit(GovEventKind::ActionActivated, trustee, Some(action_id), now));
        }
        Ok(emitted)
    }

    /// True when the action was cleared at least `maintenance_delay` ago and
    /// has not been activated yet.
    pub fn action_cleared(&self, action_id: u8, now: Timestamp) -> bool {
        self.action(action_id).is_some_and(|a| {
            a.activated_at.is_none()
                && a.cleared_at
                    .is_some_and(|cleared| now >= cleared.after(self.config.maintenance_delay))
        })
    }

    /// Paused and not yet past the forced un-freeze deadline.
    pub fn safely_paused(&self, now: Timestamp) -> bool {
        match (self.pause.paused_since, self.pause.deadline) {
            (Some(since), Some(deadline)) => since <= now && now < deadline,
            _ => false,
        }
    }

    pub fn safely_unpaused(&self, now: Timestamp) -> bool {
        !self.safely_paused(now)
    }

    /// Earliest time a new pause may start, counting a lapsed pause as
    /// un-frozen at its deadline.
    pub fn pause_allowed_from(&self) -> Timestamp {
        match self.pause.deadline {
            Some(deadline) => self.pause.cooldown_until.max(deadline.after(self.config.pause_cooldown)),
            None => self.pause.cooldown_until,
        }
    }

    pub fn safely_pause(&mut self, trustee: &TrusteeId, now: Timestamp) -> Result<Vec<GovEvent>, GovError> {
        self.check_clock(now)?;
        self.check_trustee(trustee)?;
        if self.safely_paused(now) {
            return Ok(Vec::new());
        }
        let until = self.pause_allowed_from();
        if now < until {
            return Err(GovError::PauseCooldownActive { until });
        }
        Ok(vec![self.emit(GovEventKind::SafelyPaused, trustee, None, now)])
    }

    /// Ends the current pause. A pause that already lapsed is still closed
    /// out, with the cooldown measured from its deadline.
    pub fn safely_unpause(&mut self, trustee: &TrusteeId, now: Timestamp) -> Result<Vec<GovEvent>, GovError> {
        self.check_clock(now)?;
        self.check_trustee(trustee)?;
        if self.pause.paused_since.is_none() {
            return Ok(Vec::new());
        }
        Ok(vec![self.emit(GovEventKind::SafelyUnpaused, trustee, None, now)])
    }

    /// Passes only while paused.
    pub fn guard_when_paused(&self, now: Timestamp) -> Result<(), GovError> {
        if self.safely_paused(now) {
            Ok(())
        } else {
            Err(GovError::GuardFailedPaused)
        }
    }

    /// Passes only while not paused.
    pub fn guard_when_unpaused(&self, now: Timestamp) -> Result<(), GovError> {
        if self.safely_unpaused(now) {
            Ok(())
        } else {
            Err(GovError::GuardFailedUnpaused)
        }
    }

    fn emit(&mut self, kind: GovEventKind, actor: &TrusteeId, action_id: Option<u8>, at: Timestamp) -> GovEvent {
        let event = GovEvent {
            seq: self.log.len() as u64 + 1,
            kind,
            actor: actor.clone(),
            action_id,
            at,
        };
        self.apply(event.clone()).expect("self-emitted events apply");
        event
    }

    /// The single mutation path. Validates the event against the current state
    /// so that replaying a foreign log cannot build an unreachable state.
    fn apply(&mut self, event: GovEvent) -> Result<(), GovError> {
        let invalid = |reason: &str| GovError::InvalidEvent {
            seq: event.seq,
            reason: reason.to_owned(),
        };
        if event.seq != self.log.len() as u64 + 1 {
            return Err(invalid("out of sequence"));
        }
        if event.at < self.clock {
            return Err(invalid("dated before the previous event"));
        }
        if !self.board.is_trustee(&event.actor) {
            return Err(invalid("actor is not a trustee"));
        }
        let delay = self.config.maintenance_delay;
        match (event.kind.concerns_action(), event.action_id) {
            (true, Some(id)) => {
                let threshold = self.board.threshold;
                let action = self
                    .actions
                    .get_mut(usize::from(id))
                    .ok_or_else(|| invalid("action out of range"))?;
                if action.activated_at.is_some() {
                    return Err(invalid("action already activated"));
                }
                match event.kind {
                    GovEventKind::TrusteeVoted => {
                        if !action.votes.insert(event.actor.clone()) {
                            return Err(invalid("duplicate vote"));
                        }
                    }
                    GovEventKind::ActionCleared => {
                        if action.cleared_at.is_some() || action.votes.len() < threshold {
                            return Err(invalid("clearance without threshold"));
                        }
                        action.cleared_at = Some(event.at);
                    }
                    GovEventKind::ActionActivated => {
                        let ready = action.cleared_at.is_some_and(|c| event.at >= c.after(delay));
                        if !ready {
                            return Err(invalid("activation before the delay elapsed"));
                        }
                        action.activated_at = Some(event.at);
                    }
                    _ => unreachable!(),
                }
            }
            (false, None) => match event.kind {
                GovEventKind::SafelyPaused => {
                    if self.safely_paused(event.at) || event.at < self.pause_allowed_from() {
                        return Err(invalid("pause while paused or cooling down"));
                    }
                    self.pause = PauseState {
                        paused_since: Some(event.at),
                        deadline: Some(event.at.after(self.config.pause_max)),
                        cooldown_until: self.pause_allowed_from(),
                    };
                }
                GovEventKind::SafelyUnpaused => {
                    let deadline = self.pause.deadline.ok_or_else(|| invalid("unpause while not paused"))?;
                    self.pause = PauseState {
                        paused_since: None,
                        deadline: None,
                        cooldown_until: event.at.min(deadline).after(self.config.pause_cooldown),
                    };
                }
                _ => unreachable!(),
            },
            (true, None) => return Err(invalid("missing action id")),
            (false, Some(_)) => return Err(invalid("unexpected action id")),
        }
        self.clock = event.at;
        self.log.push(event);
        Ok(())
    }
}
