use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Capacity, Instance};

/// A broken structural invariant of an [`Instance`].
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ValidationError {
    #[error("compute_nodes: empty")]
    NoComputeNodes,
    #[error("e2_nodes: empty")]
    NoE2Nodes,
    #[error("xapps: empty")]
    NoXApps,
    #[error("compute_nodes: no tier-0 cloud node")]
    MissingCloud,
    #[error("compute_nodes: duplicate cloud node ({count} tier-0 nodes)")]
    DuplicateCloud { count: usize },
    #[error("compute_nodes[{cn}].{field}: cloud capacity must be unbounded")]
    CloudNotUnbounded { cn: usize, field: &'static str },
    #[error("compute_nodes[{cn}].{field}: bounded capacity must be > 0")]
    NonPositiveCapacity { cn: usize, field: &'static str },
    #[error("compute_nodes[{cn}].{field}: cost must be >= 0")]
    NegativeCost { cn: usize, field: &'static str },
    #[error("compute_nodes[{cn}].var_cost_xapp: expected {expected} entries, found {found}")]
    XAppCostArity { cn: usize, expected: usize, found: usize },
    #[error("demands.{field}: demand must be >= 0")]
    NegativeDemand { field: &'static str },
    #[error("id {id:?} used more than once")]
    DuplicateId { id: String },
    #[error("graph: expected {expected} vertices, found {found}")]
    GraphSizeMismatch { expected: usize, found: usize },
    #[error("graph.latency[{vertex}][{vertex}]: nonzero diagonal")]
    NonzeroDiagonal { vertex: usize },
    #[error("graph.latency[{i}][{j}]: not symmetric")]
    AsymmetricLatency { i: usize, j: usize },
    #[error("graph.latency[{i}][{j}]: must be finite and >= 0")]
    InvalidLatency { i: usize, j: usize },
    #[error("xapps[{xapp}].rho_ms: must be > 0")]
    NonPositiveRho { xapp: usize },
    #[error("xapps[{xapp}].demands.{field}: demand must be >= 0")]
    NegativeXAppDemand { xapp: usize, field: &'static str },
    #[error("xapps[{xapp}].chain: contains its own id")]
    ChainSelfReference { xapp: usize },
    #[error("xapps[{xapp}].chain: duplicate member #{member}")]
    ChainDuplicate { xapp: usize, member: usize },
    #[error("xapps[{xapp}].chain: unknown member #{member}")]
    ChainUnknown { xapp: usize, member: usize },
    #[error("xapps[{xapp}].chain: cycle through this xApp")]
    ChainCycle { xapp: usize },
    #[error("round_trip_factor: must be > 0")]
    NonPositiveRoundTripFactor,
}

fn nonneg(x: f64) -> bool {
    x >= 0.0 && x.is_finite()
}

/// Checks every structural invariant. Empty result means the instance is valid.
pub fn validate_instance(instance: &Instance) -> Vec<ValidationError> {
    let mut errors = Vec::new();
    let n_x = instance.n_xapps();

    if instance.compute_nodes.is_empty() {
        errors.push(ValidationError::NoComputeNodes);
    }
    if instance.e2_nodes.is_empty() {
        errors.push(ValidationError::NoE2Nodes);
    }
    if instance.xapps.is_empty() {
        errors.push(ValidationError::NoXApps);
    }
    if !(instance.round_trip_factor > 0.0 && instance.round_trip_factor.is_finite()) {
        errors.push(ValidationError::NonPositiveRoundTripFactor);
    }

    let clouds = instance.compute_nodes.iter().filter(|c| c.is_cloud()).count();
    match clouds {
        0 if !instance.compute_nodes.is_empty() => errors.push(ValidationError::MissingCloud),
        0 | 1 => {}
        count => errors.push(ValidationError::DuplicateCloud { count }),
    }

    for (m, cn) in instance.compute_nodes.iter().enumerate() {
        let caps =
            [("proc_capacity", cn.proc_capacity), ("mem_capacity", cn.mem_capacity), ("sto_capacity", cn.sto_capacity)];
        for (field, cap) in caps {
            match cap {
                Capacity::Unbounded => {}
                Capacity::Bounded(_) if cn.is_cloud() => {
                    errors.push(ValidationError::CloudNotUnbounded { cn: m, field })
                }
                Capacity::Bounded(v) if !(v > 0.0) => {
                    errors.push(ValidationError::NonPositiveCapacity { cn: m, field })
                }
                Capacity::Bounded(_) => {}
            }
        }
        let costs = [
            ("fixed_cost", cn.fixed_cost),
            ("var_cost_ricman", cn.var_cost_ricman),
            ("var_cost_e2t", cn.var_cost_e2t),
            ("var_cost_sdl", cn.var_cost_sdl),
            ("var_cost_nib", cn.var_cost_nib),
        ];
        for (field, v) in costs {
            if !nonneg(v) {
                errors.push(ValidationError::NegativeCost { cn: m, field });
            }
        }
        if cn.var_cost_xapp.len() != n_x {
            errors.push(ValidationError::XAppCostArity { cn: m, expected: n_x, found: cn.var_cost_xapp.len() });
        }
        if cn.var_cost_xapp.iter().any(|&v| !nonneg(v)) {
            errors.push(ValidationError::NegativeCost { cn: m, field: "var_cost_xapp" });
        }
    }

    let d = &instance.demands;
    for (field, r) in [("ricman", d.ricman), ("e2t", d.e2t), ("sdl", d.sdl), ("nib", d.nib)] {
        if !(nonneg(r.proc) && nonneg(r.mem) && nonneg(r.sto)) {
            errors.push(ValidationError::NegativeDemand { field });
        }
    }

    let mut seen = BTreeSet::new();
    let ids = instance.compute_nodes.iter().map(|c| &c.id).chain(instance.e2_nodes.iter().map(|e| &e.id));
    for id in ids {
        if !seen.insert(id.as_str()) {
            errors.push(ValidationError::DuplicateId { id: id.clone() });
        }
    }
    let mut xapp_ids = BTreeSet::new();
    for x in &instance.xapps {
        if !xapp_ids.insert(x.id.as_str()) {
            errors.push(ValidationError::DuplicateId { id: x.id.clone() });
        }
    }

    let expected = instance.n_cn() + instance.n_e2();
    let g = &instance.graph;
    if g.len() != expected {
        errors.push(ValidationError::GraphSizeMismatch { expected, found: g.len() });
    } else {
        for i in 0..expected {
            if g.get(i, i) != 0.0 {
                errors.push(ValidationError::NonzeroDiagonal { vertex: i });
            }
            for j in (i + 1)..expected {
                let (a, b) = (g.get(i, j), g.get(j, i));
                if !nonneg(a) || !nonneg(b) {
                    errors.push(ValidationError::InvalidLatency { i, j });
                } else if a != b {
                    errors.push(ValidationError::AsymmetricLatency { i, j });
                }
            }
        }
    }

    for (a, x) in instance.xapps.iter().enumerate() {
        if !(x.rho_ms > 0.0) {
            errors.push(ValidationError::NonPositiveRho { xapp: a });
        }
        let dm = x.demands;
        for (field, v) in [("proc", dm.proc), ("mem", dm.mem), ("sto", dm.sto)] {
            if !nonneg(v) {
                errors.push(ValidationError::NegativeXAppDemand { xapp: a, field });
            }
        }
        let mut members = BTreeSet::new();
        for &member in &x.chain {
            if member == a {
                errors.push(ValidationError::ChainSelfReference { xapp: a });
            } else if member >= n_x {
                errors.push(ValidationError::ChainUnknown { xapp: a, member });
            } else if !members.insert(member) {
                errors.push(ValidationError::ChainDuplicate { xapp: a, member });
            }
        }
    }
    errors.extend(chain_cycles(instance));
    errors
}

/// Reports every xApp sitting on a cycle of the call graph (self-loops excluded,
/// they are reported separately).
fn chain_cycles(instance: &Instance) -> Vec<ValidationError> {
    let n = instance.n_xapps();
    let edges = |a: usize| instance.xapps[a].chain.iter().copied().filter(move |&b| b < n && b != a);
    // on_cycle[a] <=> a can reach itself through at least one edge.
    let mut out = Vec::new();
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = edges(start).collect();
        let mut cyclic = false;
        while let Some(v) = stack.pop() {
            if v == start {
                cyclic = true;
                break;
            }
            if !seen[v] {
                seen[v] = true;
                stack.extend(edges(v));
            }
        }
        if cyclic {
            out.push(ValidationError::ChainCycle { xapp: start });
        }
    }
    out
}
