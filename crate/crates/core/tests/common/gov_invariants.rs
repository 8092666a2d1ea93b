//! Randomized driver for the governance model plus independent checks of its
//! eight safety properties.

use std::collections::{BTreeMap, BTreeSet};

use admintoken::governance::{
    replay_trace, run_scenario, GovEvent, GovEventKind, GovernanceConfig, GovernanceState, ScenarioStep, StepOp,
    Timestamp, TrusteeBoard, TrusteeId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Default)]
pub struct FuzzReport {
    pub scenarios: usize,
    pub steps: usize,
    pub events: usize,
    pub activations: usize,
    pub pauses: usize,
    pub violations: Vec<String>,
}

struct Setup {
    board: TrusteeBoard,
    config: GovernanceConfig,
    trustees: Vec<TrusteeId>,
    outsiders: Vec<TrusteeId>,
}

fn setup(rng: &mut ChaCha8Rng) -> Setup {
    let n = rng.gen_range(1..=5);
    let trustees: Vec<TrusteeId> = (0..n).map(|i| TrusteeId::new(format!("{:040x}", i + 1))).collect();
    let threshold = rng.gen_range(1..=n);
    let config = GovernanceConfig {
        maintenance_delay: rng.gen_range(1..=60),
        pause_max: rng.gen_range(1..=60),
        pause_cooldown: rng.gen_range(1..=60),
    };
    Setup {
        board: TrusteeBoard::new(trustees.clone(), threshold).unwrap(),
        config,
        trustees,
        outsiders: vec![TrusteeId::new("f".repeat(40)), TrusteeId::new("outsider")],
    }
}

/// Runs `scenarios` random scenarios of `steps` calls each.
pub fn fuzz(scenarios: usize, steps: usize, seed: u64) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    for scenario in 0..scenarios {
        let s = setup(&mut rng);
        let mut violations = Vec::new();
        run_one(&s, steps, &mut rng, &mut report, &mut violations);
        report
            .violations
            .extend(violations.into_iter().map(|v| format!("scenario {scenario}: {v}")));
        report.scenarios += 1;
    }
    report
}

fn run_one(s: &Setup, steps: usize, rng: &mut ChaCha8Rng, report: &mut FuzzReport, violations: &mut Vec<String>) {
    let mut state = GovernanceState::new(s.board.clone(), s.config).unwrap();
    let mut now = 0u64;
    let mut script = Vec::new();
    let horizon = s.config.pause_max.max(s.config.maintenance_delay) * 2;

    for step in 0..steps {
        let clock = state.clock().0;
        let backwards = clock > 0 && rng.gen_bool(0.03);
        let at = if backwards {
            clock - rng.gen_range(1..=clock.min(10))
        } else {
            now += match rng.gen_range(0..10) {
                0..=3 => 0,
                4..=8 => rng.gen_range(1..=horizon / 4 + 1),
                _ => rng.gen_range(horizon..=horizon * 3),
            };
            now
        };
        let actor = if rng.gen_bool(0.15) {
            s.outsiders[rng.gen_range(0..s.outsiders.len())].clone()
        } else {
            s.trustees[rng.gen_range(0..s.trustees.len())].clone()
        };
        let action_id = if rng.gen_bool(0.05) { rng.gen_range(10..=12) } else { rng.gen_range(0..3) };
        let op = match rng.gen_range(0..10) {
            0..=5 => StepOp::Vote,
            6 | 7 => StepOp::Pause,
            8 => StepOp::Unpause,
            _ => StepOp::QueryPaused,
        };

        let before = state.clone();
        let t = Timestamp(at);
        let result = match op {
            StepOp::Vote => state.trustee_vote(&actor, action_id, t),
            StepOp::Pause => state.safely_pause(&actor, t),
            StepOp::Unpause => state.safely_unpause(&actor, t),
            _ => Ok(Vec::new()),
        };
        report.steps += 1;

        // Authorization: outsiders and stale clocks change nothing.
        let unauthorized = !s.board.is_trustee(&actor) && op != StepOp::QueryPaused;
        if (unauthorized || backwards) && op != StepOp::QueryPaused && result.is_ok() {
            violations.push(format!("step {step}: {op:?} by {actor} at {at} accepted"));
        }
        if result.is_err() && state != before {
            violations.push(format!("step {step}: rejected call mutated state"));
        }
        // Vote idempotence: a repeated vote before clearance is a no-op.
        if op == StepOp::Vote && !unauthorized && !backwards {
            if let Some(a) = before.action(action_id) {
                if a.votes.contains(&actor) && a.cleared_at.is_none() {
                    match &result {
                        Ok(events) if events.is_empty() && state == before => {}
                        other => violations.push(format!("step {step}: repeated vote gave {other:?}")),
                    }
                }
            }
        }
        // Bounded pause, probed around the present.
        for probe in [at, at + 1, at + s.config.pause_max.saturating_sub(1), at + s.config.pause_max] {
            check_bounded_pause(&state, probe, violations);
        }
        if !backwards {
            script.push(ScenarioStep {
                at,
                op,
                actor: Some(actor.0.clone()),
                action_id: Some(action_id),
            });
        }
    }

    check_log(s, state.log(), violations);
    check_final_state(s, &state, violations);

    // Replay determinism, from the log and through the scenario runner.
    match GovernanceState::replay(s.board.clone(), s.config, state.log()) {
        Ok(replayed) if replayed == state => {}
        Ok(_) => violations.push("replayed log differs from live state".into()),
        Err(e) => violations.push(format!("log does not replay: {e}")),
    }
    match run_scenario(s.board.clone(), s.config, &script) {
        Ok(outcome) => {
            if outcome.state != state {
                violations.push("scenario runner diverged from direct calls".into());
            }
            match replay_trace(s.board.clone(), s.config, &outcome.trace) {
                Ok(replayed) if replayed == outcome.state => {}
                _ => violations.push("trace replay failed".into()),
            }
        }
        Err(e) => violations.push(format!("scenario rejected: {e}")),
    }

    report.events += state.log().len();
    report.activations += state.log().iter().filter(|e| e.kind == GovEventKind::ActionActivated).count();
    report.pauses += state.log().iter().filter(|e| e.kind == GovEventKind::SafelyPaused).count();
}

fn check_bounded_pause(state: &GovernanceState, now: u64, violations: &mut Vec<String>) {
    if state.safely_paused(Timestamp(now)) {
        let since = state.pause_state().paused_since.map(|t| t.0);
        match since {
            Some(since) if now - since < state.config().pause_max => {}
            _ => violations.push(format!("paused at {now} beyond pause_max (since {since:?})")),
        }
    }
}

/// Threshold safety, deferral, single activation, cooldown spacing and
/// authorization, recomputed from the event log alone.
fn check_log(s: &Setup, log: &[GovEvent], violations: &mut Vec<String>) {
    let mut votes: BTreeMap<u8, BTreeSet<&TrusteeId>> = BTreeMap::new();
    let mut cleared: BTreeMap<u8, u64> = BTreeMap::new();
    let mut activated: BTreeMap<u8, u64> = BTreeMap::new();
    let mut last_pause: Option<u64> = None;
    let mut unfrozen_at: Option<u64> = None;
    let mut last_seq = 0;

    for e in log {
        if e.seq <= last_seq {
            violations.push(format!("seq {} not increasing", e.seq));
        }
        last_seq = e.seq;
        if !s.board.is_trustee(&e.actor) {
            violations.push(format!("event {} by non-trustee {}", e.seq, e.actor));
        }
        match (e.kind, e.action_id) {
            (GovEventKind::TrusteeVoted, Some(a)) => {
                votes.entry(a).or_default().insert(&e.actor);
            }
            (GovEventKind::ActionCleared, Some(a)) => {
                let n = votes.get(&a).map_or(0, BTreeSet::len);
                if n < s.board.threshold() {
                    violations.push(format!("action {a} cleared with {n} votes"));
                }
                if cleared.insert(a, e.at.0).is_some() {
                    violations.push(format!("action {a} cleared twice"));
                }
            }
            (GovEventKind::ActionActivated, Some(a)) => {
                match cleared.get(&a) {
                    Some(&c) if e.at.0 >= c + s.config.maintenance_delay => {}
                    other => violations.push(format!("action {a} activated at {} with clearance {other:?}", e.at.0)),
                }
                if activated.insert(a, e.at.0).is_some() {
                    violations.push(format!("action {a} activated twice"));
                }
            }
            (GovEventKind::SafelyPaused, None) => {
                if let Some(p) = last_pause {
                    let unfreeze = unfrozen_at.unwrap_or(p + s.config.pause_max).min(p + s.config.pause_max);
                    if e.at.0 < unfreeze + s.config.pause_cooldown {
                        violations.push(format!(
                            "pause at {} within cooldown of un-freeze at {unfreeze}",
                            e.at.0
                        ));
                    }
                }
                last_pause = Some(e.at.0);
                unfrozen_at = None;
            }
            (GovEventKind::SafelyUnpaused, None) => {
                if last_pause.is_none() || unfrozen_at.is_some() {
                    violations.push(format!("unpause {} without a pause", e.seq));
                }
                unfrozen_at = Some(e.at.0);
            }
            _ => violations.push(format!("event {} has a malformed action id", e.seq)),
        }
    }
}

fn check_final_state(s: &Setup, state: &GovernanceState, violations: &mut Vec<String>) {
    for a in state.actions() {
        if !a.votes.iter().all(|v| s.board.is_trustee(v)) {
            violations.push(format!("action {} holds a non-trustee vote", a.action_id));
        }
        if let Some(act) = a.activated_at {
            match a.cleared_at {
                Some(c) if act.0 >= c.0 + s.config.maintenance_delay => {}
                _ => violations.push(format!("action {} activation not deferred", a.action_id)),
            }
            if a.votes.len() < s.board.threshold() {
                violations.push(format!("action {} activated below threshold", a.action_id));
            }
        }
    }
    let p = state.pause_state();
    if p.paused_since.is_some() != p.deadline.is_some() {
        violations.push("paused_since and deadline disagree".into());
    }
    if let (Some(since), Some(deadline)) = (p.paused_since, p.deadline) {
        if deadline.0 != since.0 + s.config.pause_max {
            violations.push("deadline is not paused_since + pause_max".into());
        }
    }
}
