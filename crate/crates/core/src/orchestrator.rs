//! Discrete-event simulation of the monitor, trigger, optimize, redeploy cycle.
//!
//! Time advances in whole milliseconds. Solvers run synchronously on a
//! snapshot when a trigger fires; their results are delivered later as events
//! after the configured delays, so a run is a pure function of the instance,
//! the fault schedule and the configuration.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering as CmpOrdering, Reverse};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{solve_exact, ExactStatus, SolverBudget};
use crate::heuristic::{solve_heuristic, HeuristicError};
use crate::model::{
    control_loop_latency, loop_participants, total_cost, validate_instance, Component, Instance, Solution,
    ValidationError,
};
use crate::scenarios::{Fault, FaultSchedule, LinkTarget};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    /// Seconds between two monitoring samples.
    pub monitor_period: f64,
    /// A loop must stay above its threshold this long (s) before it triggers.
    pub latency_persistence_window: f64,
    /// A CN must be unreachable this long (s) before it is declared down.
    pub node_down_timeout: f64,
    /// Simulated time (s) from trigger to heuristic result.
    pub heuristic_solver_delay: f64,
    pub redeploy_duration: f64,
    pub sim_horizon: f64,
    pub rng_seed: u64,
    /// Simulated time (s) from trigger to the exact result, when it proves optimality.
    pub exact_solver_delay: f64,
    /// Exact results later than this (s) after the trigger are discarded.
    pub exact_budget: f64,
    /// Work cap of the exact leg; `None` searches to completion.
    pub exact_node_limit: Option<u64>,
    /// Chance that a sample carries measurement noise.
    pub noise_spike_probability: f64,
    pub noise_spike_ms: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            monitor_period: 1.0,
            latency_persistence_window: 10.0,
            node_down_timeout: 50.0,
            heuristic_solver_delay: 5.0,
            redeploy_duration: 35.0,
            sim_horizon: 300.0,
            rng_seed: 0,
            exact_solver_delay: 30.0,
            exact_budget: 60.0,
            exact_node_limit: Some(2_000_000),
            noise_spike_probability: 0.0,
            noise_spike_ms: 2.0,
        }
    }
}

/// Seconds to whole milliseconds, rounding half up (`f64::round` needs std).
pub fn to_ms(seconds: f64) -> u64 {
    (seconds * 1000.0 + 0.5) as u64
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let durations = [
            ("monitor_period", self.monitor_period),
            ("latency_persistence_window", self.latency_persistence_window),
            ("node_down_timeout", self.node_down_timeout),
            ("heuristic_solver_delay", self.heuristic_solver_delay),
            ("redeploy_duration", self.redeploy_duration),
            ("sim_horizon", self.sim_horizon),
            ("exact_solver_delay", self.exact_solver_delay),
            ("exact_budget", self.exact_budget),
        ];
        for (field, v) in durations {
            if !(v > 0.0 && v.is_finite()) || to_ms(v) == 0 {
                return Err(SimError::InvalidConfig { field });
            }
        }
        if !(0.0..=1.0).contains(&self.noise_spike_probability) {
            return Err(SimError::InvalidConfig { field: "noise_spike_probability" });
        }
        if !(self.noise_spike_ms >= 0.0) {
            return Err(SimError::InvalidConfig { field: "noise_spike_ms" });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    MetricSample,
    ControlLoopViolation,
    NodeDownDetected,
    OptimizationTrigger,
    SolverStarted,
    HeuristicSolution,
    OptimalSolution,
    RedeployStarted,
    RedeployFinished,
    LoopSatisfied,
    FaultInjected,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::MetricSample => "MetricSample",
            EventKind::ControlLoopViolation => "ControlLoopViolation",
            EventKind::NodeDownDetected => "NodeDownDetected",
            EventKind::OptimizationTrigger => "OptimizationTrigger",
            EventKind::SolverStarted => "SolverStarted",
            EventKind::HeuristicSolution => "HeuristicSolution",
            EventKind::OptimalSolution => "OptimalSolution",
            EventKind::RedeployStarted => "RedeployStarted",
            EventKind::RedeployFinished => "RedeployFinished",
            EventKind::LoopSatisfied => "LoopSatisfied",
            EventKind::FaultInjected => "FaultInjected",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriggerCause {
    Latency,
    NodeDown,
}

/// Event-specific fields; unused ones stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EventPayload {
    pub e2: Option<usize>,
    pub xapp: Option<usize>,
    pub cn: Option<usize>,
    pub cost: Option<f64>,
    pub solution_digest: Option<u64>,
    /// Loop latency in ms; `None` on a sample means the loop could not be measured.
    pub latency_ms: Option<f64>,
    pub cause: Option<TriggerCause>,
    /// On `OptimalSolution`: whether it will be deployed.
    pub applied: Option<bool>,
    pub fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimEvent {
    pub time_ms: u64,
    pub kind: EventKind,
    pub payload: EventPayload,
}

impl SimEvent {
    pub fn time_s(&self) -> f64 {
        self.time_ms as f64 / 1000.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventTrace {
    pub events: Vec<SimEvent>,
    /// Placement live at the end of the run.
    pub final_solution: Solution,
}

impl EventTrace {
    pub fn of_kind(&self, kind: EventKind) -> impl Iterator<Item = &SimEvent> + '_ {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn first(&self, kind: EventKind) -> Option<&SimEvent> {
        self.of_kind(kind).next()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid instance ({} problem(s))", .0.len())]
    InvalidInstance(Vec<ValidationError>),
    #[error("invalid configuration: {field}")]
    InvalidConfig { field: &'static str },
    #[error("fault at {time} s lies outside the simulated horizon")]
    FaultOutsideHorizon { time: f64 },
    #[error("fault refers to an unknown node, or crashes the cloud")]
    UnknownFaultTarget,
    #[error("no feasible placement at {} s: {cause}", *time_ms as f64 / 1000.0)]
    SimInfeasible { time_ms: u64, cause: HeuristicError, trace: EventTrace },
}

/// Outcome of one optimizer race on a snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct RaceOutcome {
    /// Heuristic placement, deployed after the heuristic delay.
    pub applied: Solution,
    pub applied_cost: f64,
    /// Proven optimum, if the exact leg finished within its budget.
    pub optimal: Option<Solution>,
    pub optimal_cost: Option<f64>,
    /// Whether the optimum is strictly cheaper and so earns a second redeploy.
    pub optimal_improves: bool,
    pub exact_status: ExactStatus,
}

impl RaceOutcome {
    /// The optimum when it was found but is not worth deploying.
    pub fn late_optimal(&self) -> Option<&Solution> {
        if self.optimal_improves {
            None
        } else {
            self.optimal.as_ref()
        }
    }
}

/// Runs both solvers on `instance`. The exact leg counts only if it proves
/// optimality and its reporting delay fits the budget.
pub fn race_solvers(instance: &Instance, config: &SimConfig) -> Result<RaceOutcome, HeuristicError> {
    let applied = solve_heuristic(instance)?;
    let applied_cost = total_cost(instance, &applied);
    let budget = SolverBudget { wall_time_limit: f64::INFINITY, node_limit: config.exact_node_limit };
    let exact = solve_exact(instance, budget);
    let in_time = config.exact_solver_delay <= config.exact_budget;
    let (optimal, optimal_cost) = match (exact.status, in_time) {
        (ExactStatus::Optimal, true) => (exact.best, exact.best_cost),
        _ => (None, None),
    };
    let optimal_improves = optimal_cost.is_some_and(|c| c < applied_cost);
    Ok(RaceOutcome { applied, applied_cost, optimal, optimal_cost, optimal_improves, exact_status: exact.status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trigger {
    Latency { e2: usize, xapp: usize },
    NodeDown { cn: usize },
}

/// What the monitoring system knows at a given instant.
#[derive(Clone, Debug)]
pub struct LiveState {
    pub solution: Solution,
    /// Per CN: currently running.
    pub up: Vec<bool>,
    /// Per CN: when it went down, while it is down.
    pub down_since: Vec<Option<u64>>,
    /// Per CN: down and already reported.
    pub detected_down: Vec<bool>,
    /// Base instance with active latency faults applied.
    pub effective: Instance,
    /// Per (e2, xApp): time of the first sample of the current unbroken run
    /// above threshold.
    pub over_since: Vec<Vec<Option<u64>>>,
    /// Per (e2, xApp): latest sample.
    pub last_sample: Vec<Vec<Option<f64>>>,
}

impl LiveState {
    pub fn new(instance: &Instance, solution: Solution) -> Self {
        let (n_e2, n_x, n_cn) = (instance.n_e2(), instance.n_xapps(), instance.n_cn());
        Self {
            solution,
            up: vec![true; n_cn],
            down_since: vec![None; n_cn],
            detected_down: vec![false; n_cn],
            effective: instance.clone(),
            over_since: vec![vec![None; n_x]; n_e2],
            last_sample: vec![vec![None; n_x]; n_e2],
        }
    }

    /// Loop latency of `(e2, xapp)` as measured now, or `None` when a CN on
    /// the loop is down.
    pub fn measure(&self, e2: usize, xapp: usize) -> Option<f64> {
        let hosts = loop_participants(&self.effective, &self.solution, e2, xapp).ok()?;
        if hosts.iter().any(|&m| !self.up[m]) {
            return None;
        }
        control_loop_latency(&self.effective, &self.solution, e2, xapp).ok()
    }

    fn clear_histories(&mut self) {
        for row in &mut self.over_since {
            row.iter_mut().for_each(|v| *v = None);
        }
    }
}

/// Latency triggers for loops that have stayed above threshold for the whole
/// persistence window, and node-down triggers for CNs unreachable for the
/// timeout and not yet reported.
pub fn evaluate_triggers(state: &LiveState, now_ms: u64, config: &SimConfig) -> Vec<Trigger> {
    let window = to_ms(config.latency_persistence_window);
    let timeout = to_ms(config.node_down_timeout);
    let mut out = Vec::new();
    for (e2, row) in state.over_since.iter().enumerate() {
        for (xapp, since) in row.iter().enumerate() {
            if since.is_some_and(|t| now_ms >= t && now_ms - t >= window) {
                out.push(Trigger::Latency { e2, xapp });
            }
        }
    }
    for (cn, since) in state.down_since.iter().enumerate() {
        if !state.detected_down[cn] && since.is_some_and(|t| now_ms >= t && now_ms - t >= timeout) {
            out.push(Trigger::NodeDown { cn });
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Action {
    FaultStart(usize),
    FaultEnd(usize),
    RedeployFinish { solution: Solution },
    HeuristicReady { race: u64 },
    ExactReady { race: u64 },
    Sample,
}

impl Action {
    /// Order among actions due at the same instant.
    fn rank(&self) -> u8 {
        match self {
            Action::FaultStart(_) | Action::FaultEnd(_) => 0,
            Action::RedeployFinish { .. } => 1,
            Action::HeuristicReady { .. } => 2,
            Action::ExactReady { .. } => 3,
            Action::Sample => 4,
        }
    }
}

struct Queued {
    time: u64,
    rank: u8,
    seq: u64,
    action: Action,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        (self.time, self.rank, self.seq).cmp(&(other.time, other.rank, other.seq))
    }
}

struct PendingRace {
    id: u64,
    heuristic: Option<Result<Solution, HeuristicError>>,
    heuristic_cost: Option<f64>,
    exact: Option<Solution>,
}

struct Sim<'a> {
    base: &'a Instance,
    config: &'a SimConfig,
    faults: Vec<(u64, Fault)>,
    /// Vertex pairs and offsets of latency faults currently in effect.
    active_deltas: Vec<(usize, usize, usize, f64)>,
    state: LiveState,
    queue: BinaryHeap<Reverse<Queued>>,
    seq: u64,
    events: Vec<SimEvent>,
    rng: ChaCha8Rng,
    race: Option<PendingRace>,
    race_counter: u64,
    heuristic_pending: bool,
    redeploying: bool,
    queued_optimal: Option<Solution>,
    awaiting_satisfied: bool,
    retrigger: Option<Trigger>,
}

impl<'a> Sim<'a> {
    fn push(&mut self, time: u64, action: Action) {
        let rank = action.rank();
        self.seq += 1;
        self.queue.push(Reverse(Queued { time, rank, seq: self.seq, action }));
    }

    fn emit(&mut self, time_ms: u64, kind: EventKind, payload: EventPayload) {
        self.events.push(SimEvent { time_ms, kind, payload });
    }

    fn solution_payload(&self, solution: &Solution) -> EventPayload {
        EventPayload {
            cost: Some(total_cost(self.base, solution)),
            solution_digest: Some(solution.digest()),
            ..EventPayload::default()
        }
    }

    fn rebuild_effective(&mut self) {
        let mut inst = self.base.clone();
        for &(_, a, b, added) in &self.active_deltas {
            let v = inst.graph.get(a, b) + added;
            inst.graph.set(a, b, v);
        }
        self.state.effective = inst;
    }

    fn apply_fault(&mut self, now: u64, idx: usize) {
        let fault = self.faults[idx].1;
        self.emit(now, EventKind::FaultInjected, EventPayload { fault: Some(fault), ..EventPayload::default() });
        match fault {
            Fault::LatencyDelta { link, added_ms, duration } => {
                let (a, b) = match link {
                    LinkTarget::Between { a, b } => (a, b),
                    LinkTarget::E2ToE2T { e2 } => {
                        let t = self.state.solution.host(e2, Component::E2T).unwrap_or(0);
                        (self.base.e2_vertex(e2), self.base.cn_vertex(t))
                    }
                };
                self.active_deltas.push((idx, a, b, added_ms));
                self.rebuild_effective();
                if let Some(d) = duration {
                    self.push(now + to_ms(d), Action::FaultEnd(idx));
                }
            }
            Fault::CnCrash { cn, downtime } => {
                self.state.up[cn] = false;
                self.state.down_since[cn] = Some(now);
                if let Some(d) = downtime {
                    self.push(now + to_ms(d), Action::FaultEnd(idx));
                }
            }
        }
    }

    fn end_fault(&mut self, idx: usize) {
        match self.faults[idx].1 {
            Fault::LatencyDelta { .. } => {
                self.active_deltas.retain(|d| d.0 != idx);
                self.rebuild_effective();
            }
            Fault::CnCrash { cn, .. } => {
                self.state.up[cn] = true;
                self.state.down_since[cn] = None;
                self.state.detected_down[cn] = false;
            }
        }
    }

    fn hosts_anything(&self, cn: usize) -> bool {
        let sol = &self.state.solution;
        (0..sol.n_e2()).any(|e2| sol.slots(e2).contains(&Some(cn)))
    }

    /// Snapshot the optimizer sees: current latencies, reported-down CNs removed.
    fn snapshot(&self) -> (Instance, Vec<usize>) {
        let keep: Vec<bool> = self.state.detected_down.iter().map(|d| !d).collect();
        self.state.effective.restrict_compute_nodes(&keep)
    }

    fn start_race(&mut self, now: u64, trigger: Trigger) {
        let mut payload = EventPayload::default();
        match trigger {
            Trigger::Latency { e2, xapp } => {
                payload.e2 = Some(e2);
                payload.xapp = Some(xapp);
                payload.cause = Some(TriggerCause::Latency);
            }
            Trigger::NodeDown { cn } => {
                payload.cn = Some(cn);
                payload.cause = Some(TriggerCause::NodeDown);
            }
        }
        self.emit(now, EventKind::OptimizationTrigger, payload);
        self.emit(now, EventKind::SolverStarted, EventPayload::default());

        self.race_counter += 1;
        let id = self.race_counter;
        let (snapshot, map) = self.snapshot();
        let race = match race_solvers(&snapshot, self.config) {
            Ok(outcome) => PendingRace {
                id,
                heuristic: Some(Ok(outcome.applied.remap_hosts(&map))),
                heuristic_cost: Some(outcome.applied_cost),
                exact: outcome.optimal.map(|s| s.remap_hosts(&map)),
            },
            Err(e) => PendingRace { id, heuristic: Some(Err(e)), heuristic_cost: None, exact: None },
        };
        let has_exact = race.exact.is_some();
        // A newer race supersedes the exact leg of an older one.
        self.race = Some(race);
        self.heuristic_pending = true;
        self.push(now + to_ms(self.config.heuristic_solver_delay), Action::HeuristicReady { race: id });
        if has_exact {
            self.push(now + to_ms(self.config.exact_solver_delay), Action::ExactReady { race: id });
        }
    }

    fn start_redeploy(&mut self, now: u64, solution: Solution) {
        let payload = self.solution_payload(&solution);
        self.emit(now, EventKind::RedeployStarted, payload);
        self.redeploying = true;
        self.push(now + to_ms(self.config.redeploy_duration), Action::RedeployFinish { solution });
    }

    fn on_heuristic(&mut self, now: u64, race: u64) -> Result<(), (u64, HeuristicError)> {
        let Some(pending) = self.race.as_mut().filter(|r| r.id == race) else {
            return Ok(());
        };
        self.heuristic_pending = false;
        match pending.heuristic.take() {
            Some(Ok(solution)) => {
                let payload = self.solution_payload(&solution);
                self.emit(now, EventKind::HeuristicSolution, payload);
                if solution != self.state.solution {
                    self.start_redeploy(now, solution);
                }
                Ok(())
            }
            Some(Err(e)) => Err((now, e)),
            None => Ok(()),
        }
    }

    fn on_exact(&mut self, now: u64, race: u64) {
        let Some(pending) = self.race.as_mut().filter(|r| r.id == race) else {
            return;
        };
        let Some(optimal) = pending.exact.take() else {
            return;
        };
        let cost = total_cost(self.base, &optimal);
        let improves = pending.heuristic_cost.is_some_and(|h| cost < h);
        let mut payload = self.solution_payload(&optimal);
        payload.applied = Some(improves);
        self.emit(now, EventKind::OptimalSolution, payload);
        if !improves {
            return;
        }
        if self.redeploying {
            self.queued_optimal = Some(optimal);
        } else if optimal != self.state.solution {
            self.start_redeploy(now, optimal);
        }
    }

    fn on_redeploy_finish(&mut self, now: u64, solution: Solution) {
        let payload = self.solution_payload(&solution);
        self.state.solution = solution;
        self.redeploying = false;
        self.state.clear_histories();
        self.awaiting_satisfied = true;
        self.emit(now, EventKind::RedeployFinished, payload);
        if let Some(next) = self.queued_optimal.take() {
            if next != self.state.solution {
                self.start_redeploy(now, next);
            }
        }
    }

    fn on_sample(&mut self, now: u64) {
        let (n_e2, n_x) = (self.base.n_e2(), self.base.n_xapps());
        let mut all_ok = true;
        for e2 in 0..n_e2 {
            for xapp in 0..n_x {
                let noise = self.rng.gen_bool(self.config.noise_spike_probability);
                let measured =
                    self.state.measure(e2, xapp).map(|l| if noise { l + self.config.noise_spike_ms } else { l });
                self.state.last_sample[e2][xapp] = measured;
                self.emit(
                    now,
                    EventKind::MetricSample,
                    EventPayload { e2: Some(e2), xapp: Some(xapp), latency_ms: measured, ..EventPayload::default() },
                );
                let rho = self.base.xapps[xapp].rho_ms;
                match measured {
                    Some(l) if l > rho => {
                        all_ok = false;
                        if self.state.over_since[e2][xapp].is_none() {
                            self.state.over_since[e2][xapp] = Some(now);
                            self.emit(
                                now,
                                EventKind::ControlLoopViolation,
                                EventPayload {
                                    e2: Some(e2),
                                    xapp: Some(xapp),
                                    latency_ms: Some(l),
                                    ..EventPayload::default()
                                },
                            );
                        }
                    }
                    _ => self.state.over_since[e2][xapp] = None,
                }
            }
        }
        if self.awaiting_satisfied && all_ok {
            self.awaiting_satisfied = false;
            self.emit(now, EventKind::LoopSatisfied, EventPayload::default());
        }

        let fired = evaluate_triggers(&self.state, now, self.config);
        let mut first = self.retrigger;
        for t in fired {
            match t {
                Trigger::NodeDown { cn } => {
                    self.state.detected_down[cn] = true;
                    self.emit(
                        now,
                        EventKind::NodeDownDetected,
                        EventPayload { cn: Some(cn), ..EventPayload::default() },
                    );
                    // Losing a CN that hosts nothing leaves the placement intact.
                    if self.hosts_anything(cn) {
                        first.get_or_insert(t);
                    }
                }
                Trigger::Latency { .. } => {
                    first.get_or_insert(t);
                }
            }
        }
        let Some(trigger) = first else {
            return;
        };
        if self.heuristic_pending || self.redeploying {
            // Node-down reports must not be lost while the system is busy.
            if matches!(trigger, Trigger::NodeDown { .. }) {
                self.retrigger = Some(trigger);
            }
            return;
        }
        self.retrigger = None;
        // The streak that caused the trigger starts over.
        self.state.clear_histories();
        self.start_race(now, trigger);
    }
}

/// Simulates the orchestration cycle up to `config.sim_horizon`.
pub fn run_simulation(instance: &Instance, faults: &FaultSchedule, config: &SimConfig) -> Result<EventTrace, SimError> {
    let problems = validate_instance(instance);
    if !problems.is_empty() {
        return Err(SimError::InvalidInstance(problems));
    }
    config.validate()?;
    let horizon = to_ms(config.sim_horizon);
    let mut timed = Vec::with_capacity(faults.faults.len());
    for f in &faults.faults {
        if !(f.time >= 0.0) || f.time > config.sim_horizon {
            return Err(SimError::FaultOutsideHorizon { time: f.time });
        }
        let known = match f.fault {
            Fault::CnCrash { cn, .. } => cn < instance.n_cn() && !instance.compute_nodes[cn].is_cloud(),
            Fault::LatencyDelta { link: LinkTarget::E2ToE2T { e2 }, .. } => e2 < instance.n_e2(),
            Fault::LatencyDelta { link: LinkTarget::Between { a, b }, .. } => {
                a < instance.graph.len() && b < instance.graph.len()
            }
        };
        if !known {
            return Err(SimError::UnknownFaultTarget);
        }
        timed.push((to_ms(f.time), f.fault));
    }

    let mut events = Vec::new();
    let initial = match solve_heuristic(instance) {
        Ok(s) => s,
        Err(cause) => {
            let trace = EventTrace { events, final_solution: Solution::for_instance(instance) };
            return Err(SimError::SimInfeasible { time_ms: 0, cause, trace });
        }
    };
    events.push(SimEvent {
        time_ms: 0,
        kind: EventKind::HeuristicSolution,
        payload: EventPayload {
            cost: Some(total_cost(instance, &initial)),
            solution_digest: Some(initial.digest()),
            ..EventPayload::default()
        },
    });

    let mut sim = Sim {
        base: instance,
        config,
        faults: timed,
        active_deltas: Vec::new(),
        state: LiveState::new(instance, initial),
        queue: BinaryHeap::new(),
        seq: 0,
        events,
        rng: ChaCha8Rng::seed_from_u64(config.rng_seed),
        race: None,
        race_counter: 0,
        heuristic_pending: false,
        redeploying: false,
        queued_optimal: None,
        awaiting_satisfied: false,
        retrigger: None,
    };
    for idx in 0..sim.faults.len() {
        let t = sim.faults[idx].0;
        sim.push(t, Action::FaultStart(idx));
    }
    let period = to_ms(config.monitor_period);
    let mut t = 0;
    while t <= horizon {
        sim.push(t, Action::Sample);
        t += period;
    }

    while let Some(Reverse(item)) = sim.queue.pop() {
        if item.time > horizon {
            break;
        }
        let now = item.time;
        match item.action {
            Action::FaultStart(idx) => sim.apply_fault(now, idx),
            Action::FaultEnd(idx) => sim.end_fault(idx),
            Action::RedeployFinish { solution } => sim.on_redeploy_finish(now, solution),
            Action::HeuristicReady { race } => {
                if let Err((time_ms, cause)) = sim.on_heuristic(now, race) {
                    let trace = EventTrace { events: sim.events, final_solution: sim.state.solution };
                    return Err(SimError::SimInfeasible { time_ms, cause, trace });
                }
            }
            Action::ExactReady { race } => sim.on_exact(now, race),
            Action::Sample => sim.on_sample(now),
        }
    }
    Ok(EventTrace { events: sim.events, final_solution: sim.state.solution })
}
