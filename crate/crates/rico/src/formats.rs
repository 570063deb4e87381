//! JSON documents for instances, solutions, solver results, fault schedules
//! and simulator configuration.
//!
//! The core works on positional indices; documents refer to nodes and xApps
//! by id. Latencies are stored row-major in the order given by `node_order`,
//! which may list CNs and E2 nodes in any order.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use rico_core::exact::{ExactResult, ExactStatus};
use rico_core::model::{
    cost_breakdown, Capacity, Component, ComponentDemands, ComputeNode, E2Node, Indicators, Instance, OverlayGraph,
    Resources, Solution, XAppSpec, DEFAULT_ROUND_TRIP_FACTOR,
};
use rico_core::orchestrator::SimConfig;
use rico_core::scenarios::{Fault, FaultSchedule, LinkTarget, ScheduledFault, TierSpec, TopologySpec};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("id `{0}` is used more than once")]
    DuplicateId(String),
    #[error("graph: {0}")]
    Graph(String),
    #[error("compute node `{cn}` has no cost for xApp `{xapp}`")]
    MissingXAppCost { cn: String, xapp: String },
    #[error("solution does not assign {0}")]
    Incomplete(String),
}

/// A capacity is a number or the string `"unbounded"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapacityDoc {
    Bounded(f64),
    Unbounded(UnboundedTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnboundedTag {
    Unbounded,
}

impl From<Capacity> for CapacityDoc {
    fn from(c: Capacity) -> Self {
        match c {
            Capacity::Bounded(v) => CapacityDoc::Bounded(v),
            Capacity::Unbounded => CapacityDoc::Unbounded(UnboundedTag::Unbounded),
        }
    }
}

impl From<CapacityDoc> for Capacity {
    fn from(c: CapacityDoc) -> Self {
        match c {
            CapacityDoc::Bounded(v) => Capacity::Bounded(v),
            CapacityDoc::Unbounded(_) => Capacity::Unbounded,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcesDoc {
    pub proc: f64,
    pub mem: f64,
    pub sto: f64,
}

impl From<Resources> for ResourcesDoc {
    fn from(r: Resources) -> Self {
        Self { proc: r.proc, mem: r.mem, sto: r.sto }
    }
}

impl From<ResourcesDoc> for Resources {
    fn from(r: ResourcesDoc) -> Self {
        Resources::new(r.proc, r.mem, r.sto)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeNodeDoc {
    pub id: String,
    pub tier: u8,
    pub proc_capacity: CapacityDoc,
    pub mem_capacity: CapacityDoc,
    pub sto_capacity: CapacityDoc,
    pub fixed_cost: f64,
    pub var_cost_ricman: f64,
    pub var_cost_e2t: f64,
    pub var_cost_sdl: f64,
    pub var_cost_nib: f64,
    /// xApp id to running cost.
    pub var_cost_xapp: IndexMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct E2NodeDoc {
    pub id: String,
    #[serde(default)]
    pub tier: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub node_order: Vec<String>,
    /// One-way latencies in ms, row-major over `node_order`.
    pub latency: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandsDoc {
    pub ricman: ResourcesDoc,
    pub e2t: ResourcesDoc,
    pub sdl: ResourcesDoc,
    pub nib: ResourcesDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XAppDoc {
    pub id: String,
    pub rho_ms: f64,
    pub needs_data: bool,
    #[serde(default)]
    pub chain: Vec<String>,
    pub demands: ResourcesDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub graph: GraphDoc,
    pub compute_nodes: Vec<ComputeNodeDoc>,
    pub e2_nodes: Vec<E2NodeDoc>,
    pub demands: DemandsDoc,
    pub xapps: Vec<XAppDoc>,
    #[serde(default = "default_rtf")]
    pub round_trip_factor: f64,
}

fn default_rtf() -> f64 {
    DEFAULT_ROUND_TRIP_FACTOR
}

/// Id lookups for one instance.
#[derive(Clone, Debug)]
pub struct Ids {
    pub cns: Vec<String>,
    pub e2s: Vec<String>,
    pub xapps: Vec<String>,
    cn_index: HashMap<String, usize>,
    e2_index: HashMap<String, usize>,
    xapp_index: HashMap<String, usize>,
}

impl Ids {
    pub fn of(instance: &Instance) -> Self {
        let cns: Vec<String> = instance.compute_nodes.iter().map(|c| c.id.clone()).collect();
        let e2s: Vec<String> = instance.e2_nodes.iter().map(|e| e.id.clone()).collect();
        let xapps: Vec<String> = instance.xapps.iter().map(|x| x.id.clone()).collect();
        let index = |v: &[String]| v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { cn_index: index(&cns), e2_index: index(&e2s), xapp_index: index(&xapps), cns, e2s, xapps }
    }

    pub fn cn(&self, id: &str) -> Result<usize, FormatError> {
        lookup(&self.cn_index, "compute node", id)
    }

    pub fn e2(&self, id: &str) -> Result<usize, FormatError> {
        lookup(&self.e2_index, "E2 node", id)
    }

    pub fn xapp(&self, id: &str) -> Result<usize, FormatError> {
        lookup(&self.xapp_index, "xApp", id)
    }

    /// Overlay vertex of a CN or E2 node id.
    pub fn vertex(&self, id: &str) -> Result<usize, FormatError> {
        if let Some(&m) = self.cn_index.get(id) {
            return Ok(m);
        }
        match self.e2_index.get(id) {
            Some(&i) => Ok(self.cns.len() + i),
            None => Err(FormatError::UnknownId { kind: "node", id: id.to_string() }),
        }
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        if v < self.cns.len() {
            &self.cns[v]
        } else {
            &self.e2s[v - self.cns.len()]
        }
    }
}

fn lookup(map: &HashMap<String, usize>, kind: &'static str, id: &str) -> Result<usize, FormatError> {
    map.get(id).copied().ok_or_else(|| FormatError::UnknownId { kind, id: id.to_string() })
}

fn index_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<HashMap<String, usize>, FormatError> {
    let mut out = HashMap::new();
    for (i, id) in ids.enumerate() {
        if out.insert(id.to_string(), i).is_some() {
            return Err(FormatError::DuplicateId(id.to_string()));
        }
    }
    Ok(out)
}

impl InstanceDoc {
    pub fn from_instance(instance: &Instance) -> Self {
        let ids = Ids::of(instance);
        let compute_nodes = instance
            .compute_nodes
            .iter()
            .map(|c| ComputeNodeDoc {
                id: c.id.clone(),
                tier: c.tier,
                proc_capacity: c.proc_capacity.into(),
                mem_capacity: c.mem_capacity.into(),
                sto_capacity: c.sto_capacity.into(),
                fixed_cost: c.fixed_cost,
                var_cost_ricman: c.var_cost_ricman,
                var_cost_e2t: c.var_cost_e2t,
                var_cost_sdl: c.var_cost_sdl,
                var_cost_nib: c.var_cost_nib,
                var_cost_xapp: ids.xapps.iter().cloned().zip(c.var_cost_xapp.iter().copied()).collect(),
            })
            .collect();
        let xapps = instance
            .xapps
            .iter()
            .map(|x| XAppDoc {
                id: x.id.clone(),
                rho_ms: x.rho_ms,
                needs_data: x.needs_data,
                chain: x.chain.iter().map(|&a| ids.xapps[a].clone()).collect(),
                demands: x.demands.into(),
            })
            .collect();
        let d = instance.demands;
        Self {
            graph: GraphDoc {
                node_order: ids.cns.iter().chain(&ids.e2s).cloned().collect(),
                latency: instance.graph.row_major().to_vec(),
            },
            compute_nodes,
            e2_nodes: instance.e2_nodes.iter().map(|e| E2NodeDoc { id: e.id.clone(), tier: e.tier }).collect(),
            demands: DemandsDoc { ricman: d.ricman.into(), e2t: d.e2t.into(), sdl: d.sdl.into(), nib: d.nib.into() },
            xapps,
            round_trip_factor: instance.round_trip_factor,
        }
    }

    /// Maps ids to positions. Structural checks beyond id resolution are left
    /// to `validate_instance`.
    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let xapp_index = index_unique(self.xapps.iter().map(|x| x.id.as_str()))?;
        let vertex_ids =
            self.compute_nodes.iter().map(|c| c.id.as_str()).chain(self.e2_nodes.iter().map(|e| e.id.as_str()));
        let vertex_index = index_unique(vertex_ids)?;
        let n = vertex_index.len();

        let compute_nodes = self
            .compute_nodes
            .iter()
            .map(|c| {
                let mut costs = vec![0.0; self.xapps.len()];
                for (id, &cost) in &c.var_cost_xapp {
                    costs[lookup(&xapp_index, "xApp", id)?] = cost;
                }
                if let Some(x) = self.xapps.iter().find(|x| !c.var_cost_xapp.contains_key(&x.id)) {
                    return Err(FormatError::MissingXAppCost { cn: c.id.clone(), xapp: x.id.clone() });
                }
                Ok(ComputeNode {
                    id: c.id.clone(),
                    tier: c.tier,
                    proc_capacity: c.proc_capacity.into(),
                    mem_capacity: c.mem_capacity.into(),
                    sto_capacity: c.sto_capacity.into(),
                    fixed_cost: c.fixed_cost,
                    var_cost_ricman: c.var_cost_ricman,
                    var_cost_e2t: c.var_cost_e2t,
                    var_cost_sdl: c.var_cost_sdl,
                    var_cost_nib: c.var_cost_nib,
                    var_cost_xapp: costs,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let xapps = self
            .xapps
            .iter()
            .map(|x| {
                let chain = x.chain.iter().map(|id| lookup(&xapp_index, "xApp", id)).collect::<Result<_, _>>()?;
                Ok(XAppSpec {
                    id: x.id.clone(),
                    rho_ms: x.rho_ms,
                    needs_data: x.needs_data,
                    chain,
                    demands: x.demands.into(),
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;

        let order = &self.graph.node_order;
        if order.len() != n {
            return Err(FormatError::Graph(format!("node_order lists {} nodes, instance has {n}", order.len())));
        }
        if self.graph.latency.len() != n * n {
            return Err(FormatError::Graph(format!(
                "expected {} latencies, found {}",
                n * n,
                self.graph.latency.len()
            )));
        }
        // Position in node_order -> canonical vertex.
        let mut perm = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for id in order {
            let v = lookup(&vertex_index, "node", id)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(FormatError::DuplicateId(id.clone()));
            }
            perm.push(v);
        }
        let mut graph = OverlayGraph::new(n);
        for (p, &vi) in perm.iter().enumerate() {
            for (q, &vj) in perm.iter().enumerate() {
                graph.set_directed(vi, vj, self.graph.latency[p * n + q]);
            }
        }

        Ok(Instance {
            graph,
            compute_nodes,
            e2_nodes: self.e2_nodes.iter().map(|e| E2Node { id: e.id.clone(), tier: e.tier }).collect(),
            demands: ComponentDemands {
                ricman: self.demands.ricman.into(),
                e2t: self.demands.e2t.into(),
                sdl: self.demands.sdl.into(),
                nib: self.demands.nib.into(),
            },
            xapps,
            round_trip_factor: self.round_trip_factor,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationDoc {
    pub r: Option<String>,
    pub t: Option<String>,
    pub s: Option<String>,
    pub d: Option<String>,
}

/// Placement plus the indicators and costs derived from it. Derived fields
/// are written for readers and ignored on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub config: IndexMap<String, ConfigurationDoc>,
    /// E2 node id to (xApp id to CN id).
    pub xapp_host: IndexMap<String, IndexMap<String, Option<String>>>,
    #[serde(default)]
    pub used: Vec<String>,
    #[serde(default)]
    pub ricman_on: Vec<String>,
    #[serde(default)]
    pub e2t_on: Vec<String>,
    #[serde(default)]
    pub sdl_on: Vec<String>,
    #[serde(default)]
    pub nib_on: Vec<String>,
    #[serde(default)]
    pub xapp_on: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub fixed_cost: f64,
    #[serde(default)]
    pub variable_cost: f64,
    #[serde(default)]
    pub total_cost: f64,
}

impl SolutionDoc {
    pub fn from_solution(instance: &Instance, solution: &Solution) -> Self {
        let ids = Ids::of(instance);
        let name = |h: Option<usize>| h.map(|m| ids.cns[m].clone());
        let mut config = IndexMap::new();
        let mut xapp_host = IndexMap::new();
        for (i, e2) in ids.e2s.iter().enumerate() {
            config.insert(
                e2.clone(),
                ConfigurationDoc {
                    r: name(solution.host(i, Component::RicMan)),
                    t: name(solution.host(i, Component::E2T)),
                    s: name(solution.host(i, Component::Sdl)),
                    d: name(solution.host(i, Component::Nib)),
                },
            );
            let hosts =
                ids.xapps.iter().enumerate().map(|(a, x)| (x.clone(), name(solution.xapp_host(i, a)))).collect();
            xapp_host.insert(e2.clone(), hosts);
        }
        let ind = Indicators::derive(instance, solution);
        let on =
            |f: &dyn Fn(usize) -> bool| (0..instance.n_cn()).filter(|&m| f(m)).map(|m| ids.cns[m].clone()).collect();
        let costs = cost_breakdown(instance, solution);
        Self {
            config,
            xapp_host,
            used: on(&|m| ind.used[m]),
            ricman_on: on(&|m| ind.ricman_on(m)),
            e2t_on: on(&|m| ind.e2t_on(m)),
            sdl_on: on(&|m| ind.sdl_on(m)),
            nib_on: on(&|m| ind.nib_on(m)),
            xapp_on: ids.xapps.iter().enumerate().map(|(a, x)| (x.clone(), on(&|m| ind.xapp_on(m, a)))).collect(),
            fixed_cost: costs.fixed,
            variable_cost: costs.variable,
            total_cost: costs.total,
        }
    }

    /// Reads the assignment back; every E2 node must appear in `config`.
    pub fn to_solution(&self, instance: &Instance) -> Result<Solution, FormatError> {
        let ids = Ids::of(instance);
        let mut sol = Solution::for_instance(instance);
        let host = |h: &Option<String>| h.as_deref().map(|id| ids.cn(id)).transpose();
        for (e2, c) in &self.config {
            let i = ids.e2(e2)?;
            sol.set_host(i, Component::RicMan, host(&c.r)?);
            sol.set_host(i, Component::E2T, host(&c.t)?);
            sol.set_host(i, Component::Sdl, host(&c.s)?);
            sol.set_host(i, Component::Nib, host(&c.d)?);
        }
        for (e2, row) in &self.xapp_host {
            let i = ids.e2(e2)?;
            for (x, h) in row {
                sol.set_host(i, Component::XApp(ids.xapp(x)?), host(h)?);
            }
        }
        if let Some(missing) = ids.e2s.iter().find(|e| !self.config.contains_key(*e)) {
            return Err(FormatError::Incomplete(format!("E2 node `{missing}`")));
        }
        Ok(sol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusDoc {
    Optimal,
    Timeout,
    Infeasible,
}

impl From<ExactStatus> for StatusDoc {
    fn from(s: ExactStatus) -> Self {
        match s {
            ExactStatus::Optimal => StatusDoc::Optimal,
            ExactStatus::Timeout => StatusDoc::Timeout,
            ExactStatus::Infeasible => StatusDoc::Infeasible,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResultDoc {
    pub status: StatusDoc,
    pub cost: Option<f64>,
    pub elapsed: f64,
    pub explored_nodes: u64,
    pub solution: Option<SolutionDoc>,
}

impl ExactResultDoc {
    pub fn from_result(instance: &Instance, result: &ExactResult) -> Self {
        Self {
            status: result.status.into(),
            cost: result.best_cost,
            elapsed: result.elapsed,
            explored_nodes: result.explored_nodes,
            solution: result.best.as_ref().map(|s| SolutionDoc::from_solution(instance, s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LinkDoc {
    /// Whichever CN hosts the E2 node's E2T when the fault hits.
    E2ToE2t {
        e2: String,
    },
    Between {
        a: String,
        b: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FaultDoc {
    LatencyDelta {
        link: LinkDoc,
        added_ms: f64,
        #[serde(default)]
        duration: Option<f64>,
    },
    CnCrash {
        cn: String,
        #[serde(default)]
        downtime: Option<f64>,
    },
}

impl FaultDoc {
    pub fn from_fault(ids: &Ids, fault: &Fault) -> Self {
        match *fault {
            Fault::LatencyDelta { link, added_ms, duration } => FaultDoc::LatencyDelta {
                link: match link {
                    LinkTarget::E2ToE2T { e2 } => LinkDoc::E2ToE2t { e2: ids.e2s[e2].clone() },
                    LinkTarget::Between { a, b } => {
                        LinkDoc::Between { a: ids.vertex_id(a).to_string(), b: ids.vertex_id(b).to_string() }
                    }
                },
                added_ms,
                duration,
            },
            Fault::CnCrash { cn, downtime } => FaultDoc::CnCrash { cn: ids.cns[cn].clone(), downtime },
        }
    }

    pub fn to_fault(&self, ids: &Ids) -> Result<Fault, FormatError> {
        Ok(match self {
            FaultDoc::LatencyDelta { link, added_ms, duration } => Fault::LatencyDelta {
                link: match link {
                    LinkDoc::E2ToE2t { e2 } => LinkTarget::E2ToE2T { e2: ids.e2(e2)? },
                    LinkDoc::Between { a, b } => LinkTarget::Between { a: ids.vertex(a)?, b: ids.vertex(b)? },
                },
                added_ms: *added_ms,
                duration: *duration,
            },
            FaultDoc::CnCrash { cn, downtime } => Fault::CnCrash { cn: ids.cn(cn)?, downtime: *downtime },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduledFaultDoc {
    pub time: f64,
    pub fault: FaultDoc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultScheduleDoc {
    pub faults: Vec<ScheduledFaultDoc>,
}

impl FaultScheduleDoc {
    pub fn from_schedule(instance: &Instance, schedule: &FaultSchedule) -> Self {
        let ids = Ids::of(instance);
        let faults = schedule
            .faults
            .iter()
            .map(|f| ScheduledFaultDoc { time: f.time, fault: FaultDoc::from_fault(&ids, &f.fault) })
            .collect();
        Self { faults }
    }

    pub fn to_schedule(&self, instance: &Instance) -> Result<FaultSchedule, FormatError> {
        let ids = Ids::of(instance);
        let faults = self
            .faults
            .iter()
            .map(|f| Ok(ScheduledFault { time: f.time, fault: f.fault.to_fault(&ids)? }))
            .collect::<Result<_, FormatError>>()?;
        Ok(FaultSchedule { faults })
    }
}

/// Simulator settings; absent fields take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfigDoc {
    pub monitor_period: f64,
    pub latency_persistence_window: f64,
    pub node_down_timeout: f64,
    pub heuristic_solver_delay: f64,
    pub redeploy_duration: f64,
    pub sim_horizon: f64,
    pub rng_seed: u64,
    pub exact_solver_delay: f64,
    pub exact_budget: f64,
    pub exact_node_limit: Option<u64>,
    pub noise_spike_probability: f64,
    pub noise_spike_ms: f64,
}

impl Default for SimConfigDoc {
    fn default() -> Self {
        SimConfig::default().into()
    }
}

impl From<SimConfig> for SimConfigDoc {
    fn from(c: SimConfig) -> Self {
        Self {
            monitor_period: c.monitor_period,
            latency_persistence_window: c.latency_persistence_window,
            node_down_timeout: c.node_down_timeout,
            heuristic_solver_delay: c.heuristic_solver_delay,
            redeploy_duration: c.redeploy_duration,
            sim_horizon: c.sim_horizon,
            rng_seed: c.rng_seed,
            exact_solver_delay: c.exact_solver_delay,
            exact_budget: c.exact_budget,
            exact_node_limit: c.exact_node_limit,
            noise_spike_probability: c.noise_spike_probability,
            noise_spike_ms: c.noise_spike_ms,
        }
    }
}

impl From<SimConfigDoc> for SimConfig {
    fn from(c: SimConfigDoc) -> Self {
        Self {
            monitor_period: c.monitor_period,
            latency_persistence_window: c.latency_persistence_window,
            node_down_timeout: c.node_down_timeout,
            heuristic_solver_delay: c.heuristic_solver_delay,
            redeploy_duration: c.redeploy_duration,
            sim_horizon: c.sim_horizon,
            rng_seed: c.rng_seed,
            exact_solver_delay: c.exact_solver_delay,
            exact_budget: c.exact_budget,
            exact_node_limit: c.exact_node_limit,
            noise_spike_probability: c.noise_spike_probability,
            noise_spike_ms: c.noise_spike_ms,
        }
    }
}

/// Everything needed to replay one simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioManifest {
    /// Path to the instance file, relative to the manifest's directory unless absolute.
    pub instance: String,
    pub faults: FaultScheduleDoc,
    pub config: SimConfigDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TierSpecDoc {
    pub e2_count: usize,
    pub cn_fixed_cost: f64,
    /// (RIC_Man & E2T, SDL & NIB, xApp).
    pub cn_variable_costs: [f64; 3],
    pub proc: f64,
    pub mem: f64,
    pub sto: f64,
}

impl Default for TierSpecDoc {
    fn default() -> Self {
        TopologySpec::default().tiers[0].into()
    }
}

impl From<TierSpec> for TierSpecDoc {
    fn from(t: TierSpec) -> Self {
        Self {
            e2_count: t.e2_count,
            cn_fixed_cost: t.cn_fixed_cost,
            cn_variable_costs: t.cn_variable_costs,
            proc: t.proc,
            mem: t.mem,
            sto: t.sto,
        }
    }
}

impl From<TierSpecDoc> for TierSpec {
    fn from(t: TierSpecDoc) -> Self {
        Self {
            e2_count: t.e2_count,
            cn_fixed_cost: t.cn_fixed_cost,
            cn_variable_costs: t.cn_variable_costs,
            proc: t.proc,
            mem: t.mem,
            sto: t.sto,
        }
    }
}

/// Generator parameters for `gen --tiers`; absent fields keep the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologySpecDoc {
    pub tiers: [TierSpecDoc; 3],
    pub cloud_variable_costs: [f64; 3],
    pub link_latency_choices: Vec<f64>,
    pub cloud_link_ms: f64,
    pub n_xapps: usize,
    pub rho_ms: f64,
    pub xapps_need_data: bool,
    pub demands: DemandsDoc,
    pub xapp_demands: ResourcesDoc,
    pub round_trip_factor: f64,
}

impl Default for TopologySpecDoc {
    fn default() -> Self {
        TopologySpec::default().into()
    }
}

impl From<TopologySpec> for TopologySpecDoc {
    fn from(s: TopologySpec) -> Self {
        Self {
            tiers: s.tiers.map(Into::into),
            cloud_variable_costs: s.cloud_variable_costs,
            link_latency_choices: s.link_latency_choices,
            cloud_link_ms: s.cloud_link_ms,
            n_xapps: s.n_xapps,
            rho_ms: s.rho_ms,
            xapps_need_data: s.xapps_need_data,
            demands: DemandsDoc {
                ricman: s.demands.ricman.into(),
                e2t: s.demands.e2t.into(),
                sdl: s.demands.sdl.into(),
                nib: s.demands.nib.into(),
            },
            xapp_demands: s.xapp_demands.into(),
            round_trip_factor: s.round_trip_factor,
        }
    }
}

impl From<TopologySpecDoc> for TopologySpec {
    fn from(s: TopologySpecDoc) -> Self {
        Self {
            tiers: s.tiers.map(Into::into),
            cloud_variable_costs: s.cloud_variable_costs,
            link_latency_choices: s.link_latency_choices,
            cloud_link_ms: s.cloud_link_ms,
            n_xapps: s.n_xapps,
            rho_ms: s.rho_ms,
            xapps_need_data: s.xapps_need_data,
            demands: ComponentDemands {
                ricman: s.demands.ricman.into(),
                e2t: s.demands.e2t.into(),
                sdl: s.demands.sdl.into(),
                nib: s.demands.nib.into(),
            },
            xapp_demands: s.xapp_demands.into(),
            round_trip_factor: s.round_trip_factor,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn read_instance(text: &str) -> Result<Instance, FormatError> {
    serde_json::from_str::<InstanceDoc>(text)?.to_instance()
}

pub fn write_instance(instance: &Instance) -> String {
    to_json(&InstanceDoc::from_instance(instance))
}

pub fn read_solution(instance: &Instance, text: &str) -> Result<Solution, FormatError> {
    serde_json::from_str::<SolutionDoc>(text)?.to_solution(instance)
}

pub fn write_solution(instance: &Instance, solution: &Solution) -> String {
    to_json(&SolutionDoc::from_solution(instance, solution))
}
