//! Hierarchical evaluation topologies and fault schedules.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Capacity, ComponentDemands, ComputeNode, E2Node, Instance, OverlayGraph, Resources, XAppSpec,
    DEFAULT_ROUND_TRIP_FACTOR,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{requested} edge CNs requested but the topology has only {sites} sites")]
    TooManyCns { requested: usize, sites: usize },
    #[error("topology has no E2 nodes")]
    NoE2Nodes,
    #[error("link latency choices are empty or contain a negative value")]
    BadLatencyChoices,
    #[error("the cloud node cannot crash")]
    CloudCrashUnsupported,
    #[error("no E2 node #{0}")]
    UnknownE2(usize),
    #[error("no compute node #{0}")]
    UnknownCn(usize),
    #[error("fault time {0} s is negative")]
    NegativeTime(f64),
}

/// One RAN tier: its E2 node count and the price and size of a CN placed there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TierSpec {
    pub e2_count: usize,
    pub cn_fixed_cost: f64,
    /// Running cost of (RIC_Man and E2T), (SDL/STSL and NIBs), (each xApp).
    pub cn_variable_costs: [f64; 3],
    pub proc: f64,
    pub mem: f64,
    pub sto: f64,
}

/// Everything the generator needs. `Default` is the 512-E2-node setting.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologySpec {
    /// Tier 1 (next to the cloud), tier 2, tier 3.
    pub tiers: [TierSpec; 3],
    pub cloud_variable_costs: [f64; 3],
    /// Each inter-tier and CN access link draws its one-way latency from here.
    pub link_latency_choices: Vec<f64>,
    pub cloud_link_ms: f64,
    pub n_xapps: usize,
    pub rho_ms: f64,
    pub xapps_need_data: bool,
    pub demands: ComponentDemands,
    pub xapp_demands: Resources,
    pub round_trip_factor: f64,
}

pub const DEFAULT_COMPONENT_DEMANDS: ComponentDemands = ComponentDemands {
    ricman: Resources::new(4.0, 8.0, 4.0),
    e2t: Resources::new(2.0, 4.0, 2.0),
    sdl: Resources::new(2.0, 4.0, 1.0),
    nib: Resources::new(1.0, 2.0, 50.0),
};

pub const DEFAULT_XAPP_DEMANDS: Resources = Resources::new(1.0, 2.0, 1.0);

impl Default for TopologySpec {
    fn default() -> Self {
        let tier = |e2_count, fixed, v: [f64; 3], proc, mem| TierSpec {
            e2_count,
            cn_fixed_cost: fixed,
            cn_variable_costs: v,
            proc,
            mem,
            sto: 256.0,
        };
        Self {
            tiers: [
                tier(5, 10.0, [4.0, 2.0, 1.0], 32.0, 64.0),
                tier(20, 20.0, [8.0, 4.0, 2.0], 16.0, 32.0),
                tier(487, 30.0, [16.0, 8.0, 4.0], 8.0, 16.0),
            ],
            cloud_variable_costs: [2.0, 1.0, 1.0],
            link_latency_choices: vec![1.0, 2.0, 2.0, 3.0, 3.0],
            cloud_link_ms: 4.0,
            n_xapps: 2,
            rho_ms: 10.0,
            xapps_need_data: true,
            demands: DEFAULT_COMPONENT_DEMANDS,
            xapp_demands: DEFAULT_XAPP_DEMANDS,
            round_trip_factor: DEFAULT_ROUND_TRIP_FACTOR,
        }
    }
}

impl TopologySpec {
    /// Same prices and sizes with other per-tier E2 node counts.
    pub fn with_e2_counts(mut self, counts: [usize; 3]) -> Self {
        for (tier, n) in self.tiers.iter_mut().zip(counts) {
            tier.e2_count = n;
        }
        self
    }

    pub fn n_e2(&self) -> usize {
        self.tiers.iter().map(|t| t.e2_count).sum()
    }
}

fn compute_node(id: usize, tier: u8, n_xapps: usize, fixed: f64, v: [f64; 3], cap: [Capacity; 3]) -> ComputeNode {
    ComputeNode {
        id: format!("c{id}"),
        tier,
        proc_capacity: cap[0],
        mem_capacity: cap[1],
        sto_capacity: cap[2],
        fixed_cost: fixed,
        var_cost_ricman: v[0],
        var_cost_e2t: v[0],
        var_cost_sdl: v[1],
        var_cost_nib: v[1],
        var_cost_xapp: vec![v[2]; n_xapps],
    }
}

fn xapps(n: usize, rho_ms: f64, needs_data: bool, demands: Resources) -> Vec<XAppSpec> {
    (0..n).map(|a| XAppSpec { id: format!("xapp-{a}"), rho_ms, needs_data, chain: Vec::new(), demands }).collect()
}

/// Builds the tiered RAN: the cloud node at the root, tier-1 sites 4 ms below
/// it, tier-2 and tier-3 sites attached in even blocks to the tier above.
/// Every E2 node is a site. `n_cns` edge CNs are attached to sites tier 3
/// first, then tier 2, then tier 1, each through its own access link. Overlay
/// latencies are path sums through the tree.
pub fn generate_hierarchical_topology(spec: &TopologySpec, n_cns: usize, seed: u64) -> Result<Instance, ScenarioError> {
    let n_e2 = spec.n_e2();
    if n_e2 == 0 {
        return Err(ScenarioError::NoE2Nodes);
    }
    if n_cns > n_e2 {
        return Err(ScenarioError::TooManyCns { requested: n_cns, sites: n_e2 });
    }
    if spec.link_latency_choices.is_empty() || spec.link_latency_choices.iter().any(|&l| !(l >= 0.0)) {
        return Err(ScenarioError::BadLatencyChoices);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || *spec.link_latency_choices.choose(&mut rng).expect("non-empty");

    // Tree over: vertex 0 = cloud, 1..=n_e2 = sites (E2 nodes, tier 1 first),
    // then edge CNs.
    let counts = [spec.tiers[0].e2_count, spec.tiers[1].e2_count, spec.tiers[2].e2_count];
    let first = [1, 1 + counts[0], 1 + counts[0] + counts[1]];
    let site_tier = |s: usize| -> usize { (0..3).rev().find(|&k| s >= first[k] && counts[k] > 0).unwrap() };
    let total = 1 + n_e2 + n_cns;
    let mut parent = vec![(0usize, 0.0f64); total];
    for k in 0..3 {
        for j in 0..counts[k] {
            let v = first[k] + j;
            // A tier with no sites above it hangs off the nearest populated tier.
            let upper = (0..k).rev().find(|&u| counts[u] > 0);
            parent[v] = match upper {
                None => (0, spec.cloud_link_ms),
                Some(u) => (first[u] + j * counts[u] / counts[k], draw()),
            };
        }
    }
    let mut site_order: Vec<usize> = Vec::with_capacity(n_e2);
    for k in (0..3).rev() {
        site_order.extend(first[k]..first[k] + counts[k]);
    }
    for c in 0..n_cns {
        parent[1 + n_e2 + c] = (site_order[c], draw());
    }

    // Distance to the root along the tree, then pairwise sums via the LCA.
    let mut depth = vec![0usize; total];
    let mut dist = vec![0.0f64; total];
    for v in 1..total {
        // Parents always precede children in vertex order.
        let (p, l) = parent[v];
        depth[v] = depth[p] + 1;
        dist[v] = dist[p] + l;
    }
    let path = |mut a: usize, mut b: usize| -> f64 {
        let (da, db) = (dist[a], dist[b]);
        while depth[a] > depth[b] {
            a = parent[a].0;
        }
        while depth[b] > depth[a] {
            b = parent[b].0;
        }
        while a != b {
            a = parent[a].0;
            b = parent[b].0;
        }
        da + db - 2.0 * dist[a]
    };

    // Instance vertex order: cloud, edge CNs, then E2 nodes.
    let mut tree_of: Vec<usize> = Vec::with_capacity(total);
    tree_of.push(0);
    tree_of.extend((0..n_cns).map(|c| 1 + n_e2 + c));
    tree_of.extend(1..=n_e2);
    let mut graph = OverlayGraph::new(total);
    for i in 0..total {
        for j in (i + 1)..total {
            graph.set(i, j, path(tree_of[i], tree_of[j]));
        }
    }

    let unbounded = [Capacity::Unbounded; 3];
    let mut compute_nodes = vec![compute_node(0, 0, spec.n_xapps, 0.0, spec.cloud_variable_costs, unbounded)];
    for (c, &site) in site_order.iter().enumerate().take(n_cns) {
        let k = site_tier(site);
        let t = &spec.tiers[k];
        let cap = [Capacity::Bounded(t.proc), Capacity::Bounded(t.mem), Capacity::Bounded(t.sto)];
        compute_nodes.push(compute_node(c + 1, k as u8 + 1, spec.n_xapps, t.cn_fixed_cost, t.cn_variable_costs, cap));
    }
    let e2_nodes = (0..n_e2).map(|i| E2Node { id: format!("e2-{i}"), tier: site_tier(1 + i) as u8 + 1 }).collect();

    Ok(Instance {
        graph,
        compute_nodes,
        e2_nodes,
        demands: spec.demands,
        xapps: xapps(spec.n_xapps, spec.rho_ms, spec.xapps_need_data, spec.xapp_demands),
        round_trip_factor: spec.round_trip_factor,
    })
}

/// Small replica of the lab setup: a cloud node, four edge CNs sized like the
/// 4-vCPU/8-GB/50-GB VMs, four E2 nodes. E2 node `i` sits 1 ms from edge CN
/// `i + 1` and 2 ms from the other edge CNs; edge CNs are 1 ms apart and 4 ms
/// from the cloud, so no loop can be served from the cloud alone.
pub fn testbed_instance() -> Instance {
    const EDGES: usize = 4;
    let n_cn = EDGES + 1;
    let mut graph = OverlayGraph::new(n_cn + EDGES);
    for a in 1..n_cn {
        graph.set(0, a, 4.0);
        for b in (a + 1)..n_cn {
            graph.set(a, b, 1.0);
        }
    }
    for i in 0..EDGES {
        let v = n_cn + i;
        graph.set(v, 0, 6.0);
        for m in 1..n_cn {
            graph.set(v, m, if m == i + 1 { 1.0 } else { 2.0 });
        }
        for j in (i + 1)..EDGES {
            graph.set(v, n_cn + j, 3.0);
        }
    }
    let vm = [Capacity::Bounded(4.0), Capacity::Bounded(8.0), Capacity::Bounded(50.0)];
    let mut compute_nodes = vec![compute_node(0, 0, 2, 0.0, [2.0, 1.0, 1.0], [Capacity::Unbounded; 3])];
    compute_nodes.extend((1..n_cn).map(|m| compute_node(m, 1, 2, 10.0, [4.0, 2.0, 1.0], vm)));
    Instance {
        graph,
        compute_nodes,
        e2_nodes: (0..EDGES).map(|i| E2Node { id: format!("e2-{}", i + 1), tier: 1 }).collect(),
        demands: DEFAULT_COMPONENT_DEMANDS,
        xapps: xapps(2, 10.0, true, DEFAULT_XAPP_DEMANDS),
        round_trip_factor: DEFAULT_ROUND_TRIP_FACTOR,
    }
}

/// Redeploy time that puts the replica milestones at 150/160/165/200 s.
pub const TESTBED_REDEPLOY_S: f64 = 35.0;
pub const DEFAULT_SPIKE_AT_S: f64 = 150.0;
pub const DEFAULT_SPIKE_MS: f64 = 10.0;
/// Crash instant that puts the replica's loop recovery at 130 s.
pub const TESTBED_CRASH_AT_S: f64 = 40.0;

/// A link whose latency a fault changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkTarget {
    /// The link from an E2 node to whichever CN hosts its E2T when the fault hits.
    E2ToE2T { e2: usize },
    /// Two overlay vertices.
    Between { a: usize, b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fault {
    /// Adds `added_ms` one-way; `duration` of `None` means until the end.
    LatencyDelta { link: LinkTarget, added_ms: f64, duration: Option<f64> },
    /// The CN stops; `downtime` of `None` means it never comes back.
    CnCrash { cn: usize, downtime: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledFault {
    /// Seconds.
    pub time: f64,
    pub fault: Fault,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FaultSchedule {
    pub faults: Vec<ScheduledFault>,
}

impl FaultSchedule {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.faults.is_empty()
    }
}

/// A permanent latency increase on the E2-to-E2T link of `e2` from `at` on.
pub fn scenario_latency_spike(
    instance: &Instance,
    e2: usize,
    added_ms: f64,
    at: f64,
) -> Result<FaultSchedule, ScenarioError> {
    if e2 >= instance.n_e2() {
        return Err(ScenarioError::UnknownE2(e2));
    }
    if !(at >= 0.0) {
        return Err(ScenarioError::NegativeTime(at));
    }
    Ok(FaultSchedule {
        faults: vec![ScheduledFault {
            time: at,
            fault: Fault::LatencyDelta { link: LinkTarget::E2ToE2T { e2 }, added_ms, duration: None },
        }],
    })
}

/// A permanent crash of edge CN `cn` at `at`.
pub fn scenario_cn_crash(instance: &Instance, cn: usize, at: f64) -> Result<FaultSchedule, ScenarioError> {
    let node = instance.compute_nodes.get(cn).ok_or(ScenarioError::UnknownCn(cn))?;
    if node.is_cloud() {
        return Err(ScenarioError::CloudCrashUnsupported);
    }
    if !(at >= 0.0) {
        return Err(ScenarioError::NegativeTime(at));
    }
    Ok(FaultSchedule { faults: vec![ScheduledFault { time: at, fault: Fault::CnCrash { cn, downtime: None } }] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    #[test]
    fn default_spec_is_table_one() {
        let s = TopologySpec::default();
        assert_eq!(s.n_e2(), 512);
        assert_eq!([s.tiers[0].e2_count, s.tiers[1].e2_count, s.tiers[2].e2_count], [5, 20, 487]);
        assert_eq!((s.tiers[0].proc, s.tiers[0].mem, s.tiers[0].sto), (32.0, 64.0, 256.0));
        assert_eq!(s.tiers[2].cn_variable_costs, [16.0, 8.0, 4.0]);
    }

    #[test]
    fn cloud_only_topology() {
        let inst = generate_hierarchical_topology(&TopologySpec::default(), 0, 1).unwrap();
        assert_eq!(inst.n_cn(), 1);
        assert_eq!(inst.n_e2(), 512);
        assert!(validate_instance(&inst).is_empty());
        // Tier-1 E2 nodes sit exactly on the 4 ms cloud link.
        assert_eq!(inst.latency_e2_cn(0, 0), 4.0);
        assert!((5..25).all(|i| inst.latency_e2_cn(i, 0) >= 5.0));
        assert!((25..512).all(|i| inst.latency_e2_cn(i, 0) >= 6.0));
    }

    #[test]
    fn bottom_tier_filled_first() {
        let inst = generate_hierarchical_topology(&TopologySpec::default(), 490, 3).unwrap();
        let tiers: Vec<u8> = inst.compute_nodes.iter().map(|c| c.tier).collect();
        assert_eq!(tiers[0], 0);
        assert!(tiers[1..488].iter().all(|&t| t == 3));
        assert!(tiers[488..].iter().all(|&t| t == 2));
    }

    #[test]
    fn too_many_cns() {
        assert_eq!(
            generate_hierarchical_topology(&TopologySpec::default(), 513, 0),
            Err(ScenarioError::TooManyCns { requested: 513, sites: 512 })
        );
    }

    #[test]
    fn crash_of_cloud_rejected() {
        let inst = testbed_instance();
        assert_eq!(scenario_cn_crash(&inst, 0, 10.0), Err(ScenarioError::CloudCrashUnsupported));
        assert!(scenario_cn_crash(&inst, 2, 10.0).is_ok());
        assert_eq!(scenario_latency_spike(&inst, 9, 10.0, 1.0), Err(ScenarioError::UnknownE2(9)));
    }

    #[test]
    fn testbed_is_valid() {
        assert!(validate_instance(&testbed_instance()).is_empty());
    }
}
