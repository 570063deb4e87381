use alloc::vec::Vec;

use super::{Component, Indicators, Instance, Solution, Subject, Violation, ViolationKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("E2 node #{e2} has no host for {component}")]
    MissingAssignment { e2: usize, component: Component },
}

fn require(solution: &Solution, e2: usize, component: Component) -> Result<usize, EvalError> {
    solution.host(e2, component).ok_or(EvalError::MissingAssignment { e2, component })
}

/// Round-trip latency (ms) of the control loop between `e2` and `xapp`.
///
/// One-way segments: E2 node to E2T, E2T to the xApp, xApp to SDL/STSL to NIB
/// when the xApp reads data, then every hop along the xApp's chain (with the
/// same data detour for chain members that read data). The sum is scaled by
/// the instance's round-trip factor. RIC_Man is not on the loop.
pub fn control_loop_latency(
    instance: &Instance,
    solution: &Solution,
    e2: usize,
    xapp: usize,
) -> Result<f64, EvalError> {
    let t = require(solution, e2, Component::E2T)?;
    let head = require(solution, e2, Component::XApp(xapp))?;
    let spec = &instance.xapps[xapp];

    let needs_data = spec.needs_data || spec.chain.iter().any(|&x| instance.xapps[x].needs_data);
    let data_path = if needs_data {
        let s = require(solution, e2, Component::Sdl)?;
        let d = require(solution, e2, Component::Nib)?;
        Some((s, d))
    } else {
        None
    };
    let data_leg = |from: usize| match data_path {
        Some((s, d)) => instance.latency_cn(from, s) + instance.latency_cn(s, d),
        None => 0.0,
    };

    let mut one_way = instance.latency_e2_cn(e2, t) + instance.latency_cn(t, head);
    if spec.needs_data {
        one_way += data_leg(head);
    }
    let mut prev = head;
    for &next in &spec.chain {
        let host = require(solution, e2, Component::XApp(next))?;
        one_way += instance.latency_cn(prev, host);
        if instance.xapps[next].needs_data {
            one_way += data_leg(host);
        }
        prev = host;
    }
    Ok(instance.round_trip_factor * one_way)
}

/// CNs traversed by the `(e2, xapp)` loop, in path order (may repeat).
pub fn loop_participants(
    instance: &Instance,
    solution: &Solution,
    e2: usize,
    xapp: usize,
) -> Result<Vec<usize>, EvalError> {
    let spec = &instance.xapps[xapp];
    let mut hosts = Vec::with_capacity(4 + spec.chain.len());
    hosts.push(require(solution, e2, Component::E2T)?);
    hosts.push(require(solution, e2, Component::XApp(xapp))?);
    for &next in &spec.chain {
        hosts.push(require(solution, e2, Component::XApp(next))?);
    }
    if spec.needs_data || spec.chain.iter().any(|&x| instance.xapps[x].needs_data) {
        hosts.push(require(solution, e2, Component::Sdl)?);
        hosts.push(require(solution, e2, Component::Nib)?);
    }
    Ok(hosts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostBreakdown {
    pub fixed: f64,
    pub variable: f64,
    pub total: f64,
}

fn fixed_from(instance: &Instance, ind: &Indicators) -> f64 {
    ind.used.iter().zip(&instance.compute_nodes).filter(|(used, _)| **used).map(|(_, cn)| cn.fixed_cost).sum()
}

fn variable_from(instance: &Instance, ind: &Indicators) -> f64 {
    let mut total = 0.0;
    for (cn, row) in instance.compute_nodes.iter().zip(&ind.on) {
        for (slot, &on) in row.iter().enumerate() {
            if on {
                total += cn.var_cost(Component::from_slot(slot));
            }
        }
    }
    total
}

/// Activation cost of every CN hosting at least one component.
pub fn fixed_cost(instance: &Instance, solution: &Solution) -> f64 {
    fixed_from(instance, &solution.indicators(instance))
}

/// Running cost: each component class is billed once per CN it runs on.
pub fn variable_cost(instance: &Instance, solution: &Solution) -> f64 {
    variable_from(instance, &solution.indicators(instance))
}

pub fn total_cost(instance: &Instance, solution: &Solution) -> f64 {
    cost_breakdown(instance, solution).total
}

pub fn cost_breakdown(instance: &Instance, solution: &Solution) -> CostBreakdown {
    let ind = solution.indicators(instance);
    let fixed = fixed_from(instance, &ind);
    let variable = variable_from(instance, &ind);
    CostBreakdown { fixed, variable, total: fixed + variable }
}

/// Every constraint the solution breaks: missing hosts, loops over their
/// threshold, and CNs whose bounded capacity is exceeded.
pub fn check_feasible(instance: &Instance, solution: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();

    for e2 in 0..instance.n_e2() {
        if solution.config(e2).is_none() {
            out.push(Violation {
                kind: ViolationKind::IncompleteAssignment,
                subject: Subject::E2(e2),
                measured: 0.0,
                limit: 1.0,
            });
        }
        for xapp in 0..instance.n_xapps() {
            if solution.xapp_host(e2, xapp).is_none() {
                out.push(Violation {
                    kind: ViolationKind::IncompleteAssignment,
                    subject: Subject::Pair { e2, xapp },
                    measured: 0.0,
                    limit: 1.0,
                });
            }
        }
    }

    for e2 in 0..instance.n_e2() {
        for (xapp, spec) in instance.xapps.iter().enumerate() {
            if let Ok(latency) = control_loop_latency(instance, solution, e2, xapp) {
                if latency > spec.rho_ms {
                    out.push(Violation {
                        kind: ViolationKind::LatencyExceeded,
                        subject: Subject::Pair { e2, xapp },
                        measured: latency,
                        limit: spec.rho_ms,
                    });
                }
            }
        }
    }

    let ind = solution.indicators(instance);
    for (m, cn) in instance.compute_nodes.iter().enumerate() {
        let usage = ind.usage(instance, m);
        let dims = [
            (ViolationKind::ProcOverflow, usage.proc, cn.proc_capacity),
            (ViolationKind::MemOverflow, usage.mem, cn.mem_capacity),
            (ViolationKind::StoOverflow, usage.sto, cn.sto_capacity),
        ];
        for (kind, used, cap) in dims {
            if let Some(limit) = cap.limit() {
                if used > limit {
                    out.push(Violation { kind, subject: Subject::Cn(m), measured: used, limit });
                }
            }
        }
    }
    out
}
