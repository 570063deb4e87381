//! Brute-force reference implementations used by the test suites.
//!
//! Nothing here shares code with the optimizer's evaluation paths: costs are
//! rebuilt from scratch out of the raw host table, and optima come from plain
//! enumeration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rico_core::model::{
    Capacity, Component, ComponentDemands, ComputeNode, E2Node, Instance, OverlayGraph, Resources, Solution, XAppSpec,
};

/// Slot layout shared with the core crate's `Solution`: r, t, s, d, xApps.
const R: usize = 0;
const T: usize = 1;
const S: usize = 2;
const D: usize = 3;

fn slots(inst: &Instance) -> usize {
    4 + inst.xapps.len()
}

fn demand(inst: &Instance, slot: usize) -> Resources {
    match slot {
        R => inst.demands.ricman,
        T => inst.demands.e2t,
        S => inst.demands.sdl,
        D => inst.demands.nib,
        x => inst.xapps[x - 4].demands,
    }
}

fn price(node: &ComputeNode, slot: usize) -> f64 {
    match slot {
        R => node.var_cost_ricman,
        T => node.var_cost_e2t,
        S => node.var_cost_sdl,
        D => node.var_cost_nib,
        x => node.var_cost_xapp[x - 4],
    }
}

/// `active[cn][slot]`: some E2 node places that class there.
pub fn activation(inst: &Instance, sol: &Solution) -> Vec<Vec<bool>> {
    let mut active = vec![vec![false; slots(inst)]; inst.compute_nodes.len()];
    for e2 in 0..inst.e2_nodes.len() {
        for (slot, host) in sol.slots(e2).iter().enumerate() {
            if let Some(m) = host {
                active[*m][slot] = true;
            }
        }
    }
    active
}

/// (fixed, variable) cost recomputed from the host table.
pub fn cost_parts(inst: &Instance, sol: &Solution) -> (f64, f64) {
    let active = activation(inst, sol);
    let mut fixed = 0.0;
    let mut variable = 0.0;
    for (m, row) in active.iter().enumerate() {
        let node = &inst.compute_nodes[m];
        if row.iter().any(|&b| b) {
            fixed += node.fixed_cost;
        }
        for (slot, &on) in row.iter().enumerate() {
            if on {
                variable += price(node, slot);
            }
        }
    }
    (fixed, variable)
}

pub fn cost(inst: &Instance, sol: &Solution) -> f64 {
    let (f, v) = cost_parts(inst, sol);
    f + v
}

fn lat(inst: &Instance, a: usize, b: usize) -> f64 {
    inst.graph.get(a, b)
}

/// Round-trip loop latency written as an explicit list of one-way segments.
pub fn loop_latency(inst: &Instance, sol: &Solution, e2: usize, xapp: usize) -> Option<f64> {
    let n_cn = inst.compute_nodes.len();
    let h = |slot: usize| sol.slots(e2)[slot];
    let t = h(T)?;
    let mut segments: Vec<(usize, usize)> = vec![(n_cn + e2, t)];
    let head = h(4 + xapp)?;
    segments.push((t, head));
    let data = |segs: &mut Vec<(usize, usize)>, from: usize| -> Option<()> {
        let (s, d) = (h(S)?, h(D)?);
        segs.push((from, s));
        segs.push((s, d));
        Some(())
    };
    if inst.xapps[xapp].needs_data {
        data(&mut segments, head)?;
    }
    let mut at = head;
    for &next in &inst.xapps[xapp].chain {
        let host = h(4 + next)?;
        segments.push((at, host));
        if inst.xapps[next].needs_data {
            data(&mut segments, host)?;
        }
        at = host;
    }
    let one_way: f64 = segments.iter().map(|&(a, b)| lat(inst, a, b)).sum();
    Some(inst.round_trip_factor * one_way)
}

/// A broken constraint as `(kind, first index, second index)`:
/// `("missing", e2, slot)`, `("latency", e2, xapp)`, `("proc" | "mem" | "sto", cn, 0)`.
pub type OracleViolation = (&'static str, usize, usize);

/// Every constraint, checked directly.
pub fn violations(inst: &Instance, sol: &Solution) -> Vec<OracleViolation> {
    let mut out = Vec::new();
    for e2 in 0..inst.e2_nodes.len() {
        for (slot, h) in sol.slots(e2).iter().enumerate() {
            if h.is_none() {
                out.push(("missing", e2, slot));
            }
        }
        for a in 0..inst.xapps.len() {
            if let Some(l) = loop_latency(inst, sol, e2, a) {
                if l > inst.xapps[a].rho_ms {
                    out.push(("latency", e2, a));
                }
            }
        }
    }
    let active = activation(inst, sol);
    for (m, row) in active.iter().enumerate() {
        let node = &inst.compute_nodes[m];
        let mut use_ = [0.0f64; 3];
        for (slot, &on) in row.iter().enumerate() {
            if on {
                let r = demand(inst, slot);
                use_[0] += r.proc;
                use_[1] += r.mem;
                use_[2] += r.sto;
            }
        }
        let caps = [node.proc_capacity, node.mem_capacity, node.sto_capacity];
        for ((cap, u), name) in caps.iter().zip(use_).zip(["proc", "mem", "sto"]) {
            if let Capacity::Bounded(c) = cap {
                if u > *c {
                    out.push((name, m, 0));
                }
            }
        }
    }
    out
}

/// `true` only for complete placements breaking nothing.
pub fn feasible(inst: &Instance, sol: &Solution) -> bool {
    violations(inst, sol).is_empty()
}

/// Calls `f` on every complete placement, in lexicographic order: E2 nodes in
/// order, per E2 node r, t, s, d, then xApps; CNs ascending.
pub fn for_each_placement(inst: &Instance, mut f: impl FnMut(&Solution)) {
    let n_cn = inst.compute_nodes.len();
    let k = slots(inst);
    let n_e2 = inst.e2_nodes.len();
    let total = n_e2 * k;
    let mut digits = vec![0usize; total];
    let mut sol = Solution::empty(n_e2, inst.xapps.len());
    loop {
        for (i, &d) in digits.iter().enumerate() {
            sol.set_host(i / k, Component::from_slot(i % k), Some(d));
        }
        f(&sol);
        // Odometer: the last digit moves fastest.
        let mut i = total;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n_cn {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Cheapest feasible placement by full enumeration; the first one met in
/// lexicographic order among equals.
pub fn naive_optimum(inst: &Instance) -> Option<(f64, Solution)> {
    let mut best: Option<(f64, Solution)> = None;
    for_each_placement(inst, |sol| {
        if !feasible(inst, sol) {
            return;
        }
        let c = cost(inst, sol);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, sol.clone()));
        }
    });
    best
}

/// Minimum cost and every feasible placement attaining it.
pub fn argmin_set(inst: &Instance) -> Option<(f64, Vec<Solution>)> {
    let mut best: Option<(f64, Vec<Solution>)> = None;
    for_each_placement(inst, |sol| {
        if !feasible(inst, sol) {
            return;
        }
        let c = cost(inst, sol);
        match &mut best {
            Some((b, set)) if c == *b => set.push(sol.clone()),
            Some((b, _)) if c > *b => {}
            _ => best = Some((c, vec![sol.clone()])),
        }
    });
    best
}

/// Optimal cost by enumerating which component classes run on which CN.
///
/// Per E2 node the loop-feasible local assignments are listed once and
/// reduced to the (CN, class) pairs they need. A set of active pairs is
/// feasible when every class runs somewhere, every CN fits its classes, and
/// every E2 node has a local assignment inside the set. Its cost is exactly
/// the fixed cost of the touched CNs plus one running cost per pair.
pub fn activation_set_optimum(inst: &Instance) -> Option<f64> {
    let n_cn = inst.compute_nodes.len();
    let k = slots(inst);
    let bits = n_cn * k;
    assert!(bits <= 24, "activation enumeration is for small instances only");
    let bit = |m: usize, slot: usize| 1u32 << (m * k + slot);

    // Loop slots: everything but RIC_Man.
    let loop_slots: Vec<usize> = (1..k).collect();
    let mut masks_per_e2: Vec<Vec<u32>> = Vec::new();
    for e2 in 0..inst.e2_nodes.len() {
        let mut masks = Vec::new();
        let mut digits = vec![0usize; loop_slots.len()];
        let mut sol = Solution::empty(inst.e2_nodes.len(), inst.xapps.len());
        'outer: loop {
            for (i, &slot) in loop_slots.iter().enumerate() {
                sol.set_host(e2, Component::from_slot(slot), Some(digits[i]));
            }
            let ok = (0..inst.xapps.len())
                .all(|a| loop_latency(inst, &sol, e2, a).is_some_and(|l| l <= inst.xapps[a].rho_ms));
            if ok {
                let mask = loop_slots.iter().enumerate().fold(0u32, |acc, (i, &s)| acc | bit(digits[i], s));
                masks.push(mask);
            }
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < n_cn {
                    break;
                }
                digits[i] = 0;
            }
        }
        masks.sort_unstable();
        masks.dedup();
        let minimal: Vec<u32> =
            masks.iter().copied().filter(|&m| !masks.iter().any(|&o| o != m && o & m == o)).collect();
        if minimal.is_empty() {
            return None;
        }
        masks_per_e2.push(minimal);
    }

    let mut best: Option<f64> = None;
    for set in 0u32..(1u32 << bits) {
        // Every class must run somewhere.
        if (0..k).any(|slot| (0..n_cn).all(|m| set & bit(m, slot) == 0)) {
            continue;
        }
        let mut c = 0.0;
        let mut fits = true;
        for m in 0..n_cn {
            let node = &inst.compute_nodes[m];
            let mut used = false;
            let mut u = Resources::ZERO;
            for slot in 0..k {
                if set & bit(m, slot) != 0 {
                    used = true;
                    c += price(node, slot);
                    u += demand(inst, slot);
                }
            }
            if used {
                c += node.fixed_cost;
                fits &= node.admits(u);
            }
        }
        if !fits || best.is_some_and(|b| c >= b) {
            continue;
        }
        if masks_per_e2.iter().all(|ms| ms.iter().any(|&m| m & !set == 0)) {
            best = Some(c);
        }
    }
    best
}

/// Random instance with `n_cn` CNs (CN 0 is the cloud), small integer costs
/// and latencies, tight capacities and acyclic xApp chains.
pub fn random_small_instance(seed: u64, n_e2: usize, n_cn: usize, n_x: usize) -> Instance {
    assert!(n_cn >= 1 && n_e2 >= 1 && n_x >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_cn + n_e2;
    let mut graph = OverlayGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let both_e2 = i >= n_cn;
            let v = if both_e2 {
                rng.gen_range(1..=6)
            } else if j >= n_cn {
                // E2 to CN; the cloud is farther away.
                if i == 0 {
                    rng.gen_range(2..=5)
                } else {
                    rng.gen_range(0..=3)
                }
            } else if i == 0 {
                rng.gen_range(1..=4)
            } else {
                rng.gen_range(0..=2)
            };
            graph.set(i, j, v as f64);
        }
    }
    let compute_nodes = (0..n_cn)
        .map(|m| {
            let cloud = m == 0;
            let cap = |rng: &mut ChaCha8Rng, lo: u32, hi: u32| {
                if cloud {
                    Capacity::Unbounded
                } else {
                    Capacity::Bounded(rng.gen_range(lo..=hi) as f64)
                }
            };
            ComputeNode {
                id: format!("c{m}"),
                tier: if cloud { 0 } else { rng.gen_range(1..=3) },
                proc_capacity: cap(&mut rng, 2, 9),
                mem_capacity: cap(&mut rng, 4, 18),
                sto_capacity: cap(&mut rng, 10, 70),
                fixed_cost: if cloud { 0.0 } else { rng.gen_range(1..=20) as f64 },
                var_cost_ricman: rng.gen_range(1..=8) as f64,
                var_cost_e2t: rng.gen_range(1..=8) as f64,
                var_cost_sdl: rng.gen_range(1..=4) as f64,
                var_cost_nib: rng.gen_range(1..=4) as f64,
                var_cost_xapp: (0..n_x).map(|_| rng.gen_range(1..=4) as f64).collect(),
            }
        })
        .collect();
    let rhos = [6.0, 8.0, 10.0, 12.0, 16.0];
    let xapps = (0..n_x)
        .map(|a| {
            let chain = ((a + 1)..n_x).filter(|_| rng.gen_bool(0.3)).collect();
            XAppSpec {
                id: format!("x{a}"),
                rho_ms: *rhos.choose(&mut rng).unwrap(),
                needs_data: rng.gen_bool(0.6),
                chain,
                demands: Resources::new(1.0, 2.0, rng.gen_range(1..=3) as f64),
            }
        })
        .collect();
    Instance {
        graph,
        compute_nodes,
        e2_nodes: (0..n_e2).map(|i| E2Node { id: format!("e{i}"), tier: 3 }).collect(),
        demands: ComponentDemands {
            ricman: Resources::new(2.0, 4.0, 4.0),
            e2t: Resources::new(2.0, 4.0, 2.0),
            sdl: Resources::new(1.0, 2.0, 1.0),
            nib: Resources::new(1.0, 2.0, 40.0),
        },
        xapps,
        round_trip_factor: 2.0,
    }
}

/// The 50 seeded instances used for solver cross-checks: 1 to 4 E2 nodes, 1 to
/// 3 CNs, 1 or 2 xApps.
pub fn small_instance_suite() -> Vec<Instance> {
    (0..50).map(|i| random_small_instance(1000 + i as u64, 1 + i % 4, 1 + (i / 4) % 3, 1 + (i / 12) % 2)).collect()
}

/// Copy with `node` appended after the existing CNs. `latency(v)` gives its
/// one-way latency to vertex `v` of the original graph.
pub fn with_extra_cn(inst: &Instance, node: ComputeNode, latency: impl Fn(usize) -> f64) -> Instance {
    let old_n = inst.compute_nodes.len();
    let n = inst.graph.len() + 1;
    let old_vertex = |v: usize| if v < old_n { v } else { v - 1 };
    let mut graph = OverlayGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = if i == old_n {
                latency(old_vertex(j))
            } else if j == old_n {
                latency(old_vertex(i))
            } else {
                inst.graph.get(old_vertex(i), old_vertex(j))
            };
            graph.set(i, j, value);
        }
    }
    let mut out = inst.clone();
    out.graph = graph;
    out.compute_nodes.push(node);
    out
}

/// Copy with every fixed and running cost multiplied by `factor`.
pub fn scale_costs(inst: &Instance, factor: f64) -> Instance {
    let mut out = inst.clone();
    for node in &mut out.compute_nodes {
        node.fixed_cost *= factor;
        node.var_cost_ricman *= factor;
        node.var_cost_e2t *= factor;
        node.var_cost_sdl *= factor;
        node.var_cost_nib *= factor;
        node.var_cost_xapp.iter_mut().for_each(|v| *v *= factor);
    }
    out
}

/// A random, possibly infeasible, complete placement.
pub fn random_solution(inst: &Instance, rng: &mut impl Rng) -> Solution {
    let mut sol = Solution::empty(inst.e2_nodes.len(), inst.xapps.len());
    for e2 in 0..inst.e2_nodes.len() {
        for slot in 0..slots(inst) {
            sol.set_host(e2, Component::from_slot(slot), Some(rng.gen_range(0..inst.compute_nodes.len())));
        }
    }
    sol
}
