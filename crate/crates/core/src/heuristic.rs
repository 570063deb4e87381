//! Two-phase greedy placement.
//!
//! Phase 1 places every loop component of every E2 node on the closest CN
//! with room for it (E2T measured from the E2 node, later components from
//! their upstream component). RIC_Man starts on the cloud node. Phase 2 walks
//! the same components again and moves each one to the cheapest CN that still
//! has room and keeps the E2 node's control loops within threshold.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::model::{
    check_feasible, control_loop_latency, total_cost, Component, Instance, Occupancy, Solution, Violation,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HeuristicError {
    #[error("no CN has room for {component} of E2 node #{e2}")]
    NoFeasibleCn { e2: usize, component: Component },
    #[error("initial placement breaks {} constraint(s)", violations.len())]
    Infeasible { violations: Vec<Violation> },
    #[error("instance has no cloud node")]
    NoCloud,
    #[error("cancelled")]
    Cancelled,
}

/// One line of the phase log.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseEvent {
    Placed {
        e2: usize,
        component: Component,
        cn: usize,
    },
    Moved {
        e2: usize,
        component: Component,
        from: usize,
        to: usize,
    },
    /// Phase 2 ended more expensive than phase 1; the phase-1 placement is returned.
    KeptInitial,
}

#[derive(Clone, Debug)]
pub struct HeuristicRun {
    pub solution: Solution,
    /// Placement after phase 1 (with RIC_Man on the cloud node).
    pub initial: Solution,
    pub log: Vec<PhaseEvent>,
    /// Capacity probes plus loop evaluations performed.
    pub probes: u64,
}

/// Component order along the control loop: E2T, xApps, SDL/STSL, NIBs.
pub fn ordered_components(instance: &Instance) -> Vec<Component> {
    let mut out = Vec::with_capacity(3 + instance.n_xapps());
    out.push(Component::E2T);
    out.extend((0..instance.n_xapps()).map(Component::XApp));
    out.push(Component::Sdl);
    out.push(Component::Nib);
    out
}

/// Placement under construction plus its capacity bookkeeping.
#[derive(Clone, Debug)]
pub struct PartialPlacement {
    pub solution: Solution,
    pub occupancy: Occupancy,
    pub probes: u64,
}

impl PartialPlacement {
    pub fn new(instance: &Instance) -> Self {
        Self { solution: Solution::for_instance(instance), occupancy: Occupancy::new(instance), probes: 0 }
    }

    pub fn from_solution(instance: &Instance, solution: Solution) -> Self {
        let occupancy = Occupancy::from_solution(instance, &solution);
        Self { solution, occupancy, probes: 0 }
    }

    fn place(&mut self, instance: &Instance, e2: usize, component: Component, cn: usize) {
        self.occupancy.add(instance, cn, component);
        self.solution.set_host(e2, component, Some(cn));
    }
}

/// Host the distance to `component` is measured from, if already placed.
fn upstream(instance: &Instance, e2: usize, component: Component, sol: &Solution) -> Option<usize> {
    match component {
        Component::E2T | Component::RicMan => None,
        Component::XApp(_) => sol.host(e2, Component::E2T),
        Component::Sdl => {
            let reader = (0..instance.n_xapps()).find(|&a| instance.xapps[a].needs_data).unwrap_or(0);
            sol.xapp_host(e2, reader)
        }
        Component::Nib => sol.host(e2, Component::Sdl),
    }
}

/// Nearest CN with room for `component`; ties go to the lower fixed cost, then
/// the lower position.
pub fn closest_cn(
    instance: &Instance,
    e2: usize,
    component: Component,
    partial: &mut PartialPlacement,
) -> Result<usize, HeuristicError> {
    let from = upstream(instance, e2, component, &partial.solution);
    let mut best: Option<(f64, f64, usize)> = None;
    for m in 0..instance.n_cn() {
        partial.probes += 1;
        if !partial.occupancy.fits(instance, m, component) {
            continue;
        }
        let latency = match from {
            Some(h) => instance.latency_cn(h, m),
            None => instance.latency_e2_cn(e2, m),
        };
        let key = (latency, instance.compute_nodes[m].fixed_cost, m);
        let better = match best {
            None => true,
            Some(b) => key.0 < b.0 || (key.0 == b.0 && key.1 < b.1),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|(_, _, m)| m).ok_or(HeuristicError::NoFeasibleCn { e2, component })
}

/// CNs by descending `fixed_cost + running cost of component`; ties by
/// descending position. The cheapest CN is last.
pub fn sort_by_decreasing_cost(component: Component, instance: &Instance) -> Vec<usize> {
    let price = |m: usize| instance.compute_nodes[m].fixed_cost + instance.var_cost(m, component);
    let mut order: Vec<usize> = (0..instance.n_cn()).collect();
    order.sort_by(|&a, &b| price(b).total_cmp(&price(a)).then(b.cmp(&a)));
    order
}

fn loops_hold(instance: &Instance, e2: usize, partial: &mut PartialPlacement) -> bool {
    (0..instance.n_xapps()).all(|a| {
        partial.probes += 1;
        match control_loop_latency(instance, &partial.solution, e2, a) {
            Ok(l) => l <= instance.xapps[a].rho_ms,
            Err(_) => false,
        }
    })
}

/// Moves `component` of `e2` to the first CN, scanning `cost_ordered` from its
/// cheapest end, that has room for it and keeps every loop of `e2` within
/// threshold (RIC_Man is checked for room only). Returns the resulting host.
pub fn re_place(
    instance: &Instance,
    e2: usize,
    component: Component,
    cost_ordered: &[usize],
    working: &mut PartialPlacement,
) -> usize {
    let current = working.solution.host(e2, component).expect("re_place needs a component that is already placed");
    for &m in cost_ordered.iter().rev() {
        working.probes += 1;
        if m == current {
            return current;
        }
        working.occupancy.remove(instance, current, component);
        if working.occupancy.fits(instance, m, component) {
            working.place(instance, e2, component, m);
            if component == Component::RicMan || loops_hold(instance, e2, working) {
                return m;
            }
            working.occupancy.remove(instance, m, component);
            working.solution.set_host(e2, component, Some(current));
        }
        working.occupancy.add(instance, current, component);
    }
    current
}

pub fn solve_heuristic(instance: &Instance) -> Result<Solution, HeuristicError> {
    run_heuristic(instance, None).map(|run| run.solution)
}

/// Full run with the phase log, the phase-1 placement and the probe counter.
/// `cancel` is checked between E2 nodes.
pub fn run_heuristic(instance: &Instance, cancel: Option<&AtomicBool>) -> Result<HeuristicRun, HeuristicError> {
    let cancelled = || cancel.is_some_and(|f| f.load(Ordering::Relaxed));
    let cloud = instance.cloud().ok_or(HeuristicError::NoCloud)?;
    let loop_components = ordered_components(instance);
    let mut working = PartialPlacement::new(instance);
    let mut log = Vec::new();

    for e2 in 0..instance.n_e2() {
        if cancelled() {
            return Err(HeuristicError::Cancelled);
        }
        for &component in &loop_components {
            let cn = closest_cn(instance, e2, component, &mut working)?;
            working.place(instance, e2, component, cn);
            log.push(PhaseEvent::Placed { e2, component, cn });
        }
    }
    for e2 in 0..instance.n_e2() {
        working.place(instance, e2, Component::RicMan, cloud);
        log.push(PhaseEvent::Placed { e2, component: Component::RicMan, cn: cloud });
    }

    for e2 in 0..instance.n_e2() {
        if !loops_hold(instance, e2, &mut working) {
            let violations = check_feasible(instance, &working.solution);
            return Err(HeuristicError::Infeasible { violations });
        }
    }
    let initial = working.solution.clone();

    let mut cost_orders: Vec<(Component, Vec<usize>)> = Vec::with_capacity(instance.n_slots());
    cost_orders.push((Component::RicMan, sort_by_decreasing_cost(Component::RicMan, instance)));
    for &c in &loop_components {
        cost_orders.push((c, sort_by_decreasing_cost(c, instance)));
    }

    for e2 in 0..instance.n_e2() {
        if cancelled() {
            return Err(HeuristicError::Cancelled);
        }
        for (component, order) in &cost_orders {
            let before = working.solution.host(e2, *component).unwrap_or(usize::MAX);
            let after = re_place(instance, e2, *component, order, &mut working);
            if after != before {
                log.push(PhaseEvent::Moved { e2, component: *component, from: before, to: after });
            }
        }
    }

    let solution = if total_cost(instance, &working.solution) <= total_cost(instance, &initial) {
        working.solution
    } else {
        log.push(PhaseEvent::KeptInitial);
        initial.clone()
    };
    Ok(HeuristicRun { solution, initial, log, probes: working.probes })
}

/// `(comp + |A|)^2 * |N| * |V_C|` with `comp = 4`.
pub fn complexity_bound(instance: &Instance) -> u64 {
    let k = instance.n_slots() as u64;
    k * k * instance.n_e2() as u64 * instance.n_cn() as u64
}
