//! Optimal placement by depth-first branch-and-bound.
//!
//! Variables are the hosts of every component slot of every E2 node. The
//! search commits one slot at a time, keeps the cost of everything committed
//! so far (activation plus per-class running cost), and prunes when that cost
//! plus the cheapest way to instantiate every class not yet running cannot
//! beat the incumbent. Partial control loops are checked as soon as enough of
//! their hosts are known.
//!
//! A second pass walks the space in lexicographic order, bounded by the
//! proven optimum, so that ties between optimal placements always resolve to
//! the same answer.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::model::{total_cost, Component, Instance, Occupancy, Solution};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverBudget {
    /// Seconds; only enforced when the caller supplies a [`Clock`].
    pub wall_time_limit: f64,
    /// Maximum number of branch-and-bound nodes.
    pub node_limit: Option<u64>,
}

impl SolverBudget {
    pub fn seconds(wall_time_limit: f64) -> Self {
        Self { wall_time_limit, node_limit: None }
    }

    pub fn nodes(node_limit: u64) -> Self {
        Self { wall_time_limit: f64::INFINITY, node_limit: Some(node_limit) }
    }

    pub fn unlimited() -> Self {
        Self { wall_time_limit: f64::INFINITY, node_limit: None }
    }
}

/// Elapsed-time source for budget enforcement.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances; budgets then depend on node counts only.
#[derive(Clone, Copy, Debug, Default)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactStatus {
    Optimal,
    /// Budget exhausted or cancelled; `best` holds the incumbent, if any.
    Timeout,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult {
    pub status: ExactStatus,
    pub best: Option<Solution>,
    pub best_cost: Option<f64>,
    pub explored_nodes: u64,
    /// Seconds as reported by the clock in use.
    pub elapsed: f64,
}

/// Size of the decision space as `(n_e2 * n_cn)^n_comp + (n_e2 * n_cn)^n_xapps`.
pub fn estimate_search_space(n_e2: u64, n_cn: u64, n_comp: u32, n_xapps: u32) -> f64 {
    let base = n_e2 as f64 * n_cn as f64;
    let pow = |e: u32| (0..e).fold(1.0_f64, |acc, _| acc * base);
    pow(n_comp) + pow(n_xapps)
}

/// Solves to optimality within `budget.node_limit` (no wall clock).
pub fn solve_exact(instance: &Instance, budget: SolverBudget) -> ExactResult {
    solve_exact_with(instance, budget, &FrozenClock, None)
}

/// Solves with an explicit clock and an optional cancellation flag, both
/// checked at every node.
pub fn solve_exact_with(
    instance: &Instance,
    budget: SolverBudget,
    clock: &dyn Clock,
    cancel: Option<&AtomicBool>,
) -> ExactResult {
    let mut search = Search::new(instance, budget, clock, cancel);

    if search.allowed_e2t.iter().any(|row| !row.contains(&true)) {
        return search.finish(ExactStatus::Infeasible, None);
    }

    search.order = branch_order(instance, true);
    search.mode = Mode::Improve;
    search.dfs(0);
    let improved = search.best.take();
    if search.stopped {
        return search.finish(ExactStatus::Timeout, improved);
    }
    let Some((cost, incumbent)) = improved else {
        return search.finish(ExactStatus::Infeasible, None);
    };

    search.reset(instance);
    search.order = branch_order(instance, false);
    search.mode = Mode::Canonical { target: cost };
    search.dfs(0);
    let canonical = search.best.take().unwrap_or((cost, incumbent));
    search.finish(ExactStatus::Optimal, Some(canonical))
}

/// `latency_first`: per E2 node t, xApps, s, d, r. Otherwise r, t, s, d, xApps.
fn branch_order(instance: &Instance, latency_first: bool) -> Vec<(usize, Component)> {
    let mut per_node: Vec<Component> = Vec::with_capacity(instance.n_slots());
    if latency_first {
        per_node.push(Component::E2T);
        per_node.extend((0..instance.n_xapps()).map(Component::XApp));
        per_node.extend([Component::Sdl, Component::Nib, Component::RicMan]);
    } else {
        per_node.extend([Component::RicMan, Component::E2T, Component::Sdl, Component::Nib]);
        per_node.extend((0..instance.n_xapps()).map(Component::XApp));
    }
    (0..instance.n_e2()).flat_map(|e2| per_node.iter().map(move |&c| (e2, c))).collect()
}

#[derive(Clone, Copy, Debug)]
enum Mode {
    /// Find strictly cheaper placements than the incumbent.
    Improve,
    /// Stop at the first placement whose cost does not exceed `target`.
    Canonical { target: f64 },
}

struct Search<'a> {
    instance: &'a Instance,
    budget: SolverBudget,
    clock: &'a dyn Clock,
    cancel: Option<&'a AtomicBool>,
    order: Vec<(usize, Component)>,
    mode: Mode,
    solution: Solution,
    occupancy: Occupancy,
    committed: f64,
    /// Cheapest running cost of each class over all CNs.
    class_floor: Vec<f64>,
    /// Number of CNs running each class.
    class_active: Vec<u32>,
    allowed_e2t: Vec<Vec<bool>>,
    best: Option<(f64, Solution)>,
    explored: u64,
    stopped: bool,
}

fn tolerance(cost: f64) -> f64 {
    1e-9 * if cost.abs() > 1.0 { cost.abs() } else { 1.0 }
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, budget: SolverBudget, clock: &'a dyn Clock, cancel: Option<&'a AtomicBool>) -> Self {
        let class_floor = instance
            .components()
            .map(|c| (0..instance.n_cn()).map(|m| instance.var_cost(m, c)).fold(f64::INFINITY, f64::min))
            .collect();
        // An E2T whose first segment alone breaks the tightest threshold can
        // never be part of a feasible loop.
        let budget_ms = instance.min_rho();
        let allowed_e2t = (0..instance.n_e2())
            .map(|e2| {
                (0..instance.n_cn())
                    .map(|m| instance.round_trip_factor * instance.latency_e2_cn(e2, m) <= budget_ms)
                    .collect()
            })
            .collect();
        Self {
            instance,
            budget,
            clock,
            cancel,
            order: Vec::new(),
            mode: Mode::Improve,
            solution: Solution::for_instance(instance),
            occupancy: Occupancy::new(instance),
            committed: 0.0,
            class_floor,
            class_active: vec![0; instance.n_slots()],
            allowed_e2t,
            best: None,
            explored: 0,
            stopped: false,
        }
    }

    fn reset(&mut self, instance: &Instance) {
        self.solution = Solution::for_instance(instance);
        self.occupancy = Occupancy::new(instance);
        self.committed = 0.0;
        self.class_active.iter_mut().for_each(|c| *c = 0);
        self.best = None;
    }

    fn finish(&self, status: ExactStatus, best: Option<(f64, Solution)>) -> ExactResult {
        let (best_cost, best) = match best {
            Some((c, s)) => (Some(c), Some(s)),
            None => (None, None),
        };
        ExactResult { status, best, best_cost, explored_nodes: self.explored, elapsed: self.clock.elapsed_secs() }
    }

    fn out_of_budget(&self) -> bool {
        if let Some(flag) = self.cancel {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        if let Some(limit) = self.budget.node_limit {
            if self.explored >= limit {
                return true;
            }
        }
        self.clock.elapsed_secs() >= self.budget.wall_time_limit
    }

    fn lower_bound(&self) -> f64 {
        let missing: f64 =
            self.class_active.iter().zip(&self.class_floor).filter(|(n, _)| **n == 0).map(|(_, f)| *f).sum();
        self.committed + missing
    }

    fn pruned(&self, bound: f64) -> bool {
        match self.mode {
            Mode::Improve => match &self.best {
                Some((best, _)) => bound >= *best - tolerance(*best),
                None => false,
            },
            Mode::Canonical { target } => bound > target + tolerance(target),
        }
    }

    /// Returns true when the search must stop (budget or canonical hit).
    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            let cost = total_cost(self.instance, &self.solution);
            match self.mode {
                Mode::Improve => {
                    let better = match &self.best {
                        Some((best, _)) => cost < *best - tolerance(*best),
                        None => true,
                    };
                    if better {
                        self.best = Some((cost, self.solution.clone()));
                    }
                    return false;
                }
                Mode::Canonical { .. } => {
                    self.best = Some((cost, self.solution.clone()));
                    return true;
                }
            }
        }

        let (e2, component) = self.order[depth];
        for cn in self.candidates(e2, component) {
            if self.out_of_budget() {
                self.stopped = true;
                return true;
            }
            self.explored += 1;
            if !self.occupancy.fits(self.instance, cn, component) {
                continue;
            }
            let slot = component.slot();
            let activates = !self.occupancy.is_active(cn, component);
            let delta = self.occupancy.add(self.instance, cn, component);
            self.committed += delta;
            if activates {
                self.class_active[slot] += 1;
            }
            self.solution.set_host(e2, component, Some(cn));

            let viable = !self.pruned(self.lower_bound()) && self.loops_viable(e2, component);
            let stop = viable && self.dfs(depth + 1);

            self.solution.set_host(e2, component, None);
            if activates {
                self.class_active[slot] -= 1;
            }
            self.occupancy.remove(self.instance, cn, component);
            self.committed -= delta;
            if stop {
                return true;
            }
        }
        false
    }

    fn candidates(&self, e2: usize, component: Component) -> Vec<usize> {
        let mut out: Vec<usize> =
            (0..self.instance.n_cn()).filter(|&m| component != Component::E2T || self.allowed_e2t[e2][m]).collect();
        if let Mode::Improve = self.mode {
            // Cheapest extension first finds good incumbents early.
            out.sort_by(|&a, &b| {
                let ca = self.occupancy.marginal_cost(self.instance, a, component);
                let cb = self.occupancy.marginal_cost(self.instance, b, component);
                ca.total_cmp(&cb).then(a.cmp(&b))
            });
        }
        out
    }

    fn loops_viable(&self, e2: usize, component: Component) -> bool {
        if component == Component::RicMan {
            return true;
        }
        let inst = self.instance;
        (0..inst.n_xapps())
            .all(|a| inst.round_trip_factor * partial_loop(inst, &self.solution, e2, a) <= inst.xapps[a].rho_ms)
    }
}

/// One-way loop latency counting only segments whose endpoints are placed.
/// Never exceeds the complete value, so it is a valid pruning bound.
fn partial_loop(inst: &Instance, sol: &Solution, e2: usize, xapp: usize) -> f64 {
    let t = sol.host(e2, Component::E2T);
    let s = sol.host(e2, Component::Sdl);
    let d = sol.host(e2, Component::Nib);
    let head = sol.host(e2, Component::XApp(xapp));
    let seg = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => inst.latency_cn(a, b),
        _ => 0.0,
    };
    let data_leg = |from: Option<usize>| seg(from, s) + seg(s, d);

    let mut sum = t.map_or(0.0, |t| inst.latency_e2_cn(e2, t)) + seg(t, head);
    let spec = &inst.xapps[xapp];
    if spec.needs_data {
        sum += data_leg(head);
    }
    let mut prev = head;
    for &next in &spec.chain {
        let host = sol.host(e2, Component::XApp(next));
        sum += seg(prev, host);
        if inst.xapps[next].needs_data {
            sum += data_leg(host);
        }
        prev = host;
    }
    sum
}
