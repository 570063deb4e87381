//! Domain types of the placement problem.
//!
//! Compute nodes, E2 nodes and xApps are addressed by their position in the
//! owning [`Instance`]. The overlay graph uses one vertex per node: compute
//! nodes first (in declaration order), then E2 nodes.

mod eval;
mod occupancy;
mod validate;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Sub, SubAssign};

pub use eval::{
    check_feasible, control_loop_latency, cost_breakdown, fixed_cost, loop_participants, total_cost, variable_cost,
    CostBreakdown, EvalError,
};
pub use occupancy::Occupancy;
pub use validate::{validate_instance, ValidationError};

/// Capacity of one resource dimension on a compute node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Capacity {
    Bounded(f64),
    /// The cloud node never runs out of resources.
    Unbounded,
}

impl Capacity {
    pub fn admits(&self, amount: f64) -> bool {
        match *self {
            Capacity::Bounded(limit) => amount <= limit,
            Capacity::Unbounded => true,
        }
    }

    pub fn limit(&self) -> Option<f64> {
        match *self {
            Capacity::Bounded(limit) => Some(limit),
            Capacity::Unbounded => None,
        }
    }
}

/// Processing (cores), memory (GB) and storage (GB).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Resources {
    pub proc: f64,
    pub mem: f64,
    pub sto: f64,
}

impl Resources {
    pub const ZERO: Resources = Resources { proc: 0.0, mem: 0.0, sto: 0.0 };

    pub const fn new(proc: f64, mem: f64, sto: f64) -> Self {
        Self { proc, mem, sto }
    }
}

impl Add for Resources {
    type Output = Resources;
    fn add(self, rhs: Resources) -> Resources {
        Resources::new(self.proc + rhs.proc, self.mem + rhs.mem, self.sto + rhs.sto)
    }
}

impl AddAssign for Resources {
    fn add_assign(&mut self, rhs: Resources) {
        *self = *self + rhs;
    }
}

impl Sub for Resources {
    type Output = Resources;
    fn sub(self, rhs: Resources) -> Resources {
        Resources::new(self.proc - rhs.proc, self.mem - rhs.mem, self.sto - rhs.sto)
    }
}

impl SubAssign for Resources {
    fn sub_assign(&mut self, rhs: Resources) {
        *self = *self - rhs;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComputeNode {
    pub id: String,
    /// 0 is the cloud node, 1..=3 are edge tiers.
    pub tier: u8,
    pub proc_capacity: Capacity,
    pub mem_capacity: Capacity,
    pub sto_capacity: Capacity,
    pub fixed_cost: f64,
    pub var_cost_ricman: f64,
    pub var_cost_e2t: f64,
    pub var_cost_sdl: f64,
    pub var_cost_nib: f64,
    /// Indexed by xApp position in the instance.
    pub var_cost_xapp: Vec<f64>,
}

impl ComputeNode {
    pub fn is_cloud(&self) -> bool {
        self.tier == 0
    }

    pub fn admits(&self, usage: Resources) -> bool {
        self.proc_capacity.admits(usage.proc)
            && self.mem_capacity.admits(usage.mem)
            && self.sto_capacity.admits(usage.sto)
    }

    pub fn var_cost(&self, component: Component) -> f64 {
        match component {
            Component::RicMan => self.var_cost_ricman,
            Component::E2T => self.var_cost_e2t,
            Component::Sdl => self.var_cost_sdl,
            Component::Nib => self.var_cost_nib,
            Component::XApp(a) => self.var_cost_xapp.get(a).copied().unwrap_or(0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Node {
    pub id: String,
    pub tier: u8,
}

/// Dense symmetric matrix of one-way latencies in milliseconds.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlayGraph {
    n: usize,
    latency: Vec<f64>,
}

impl OverlayGraph {
    /// All-zero matrix over `n` vertices.
    pub fn new(n: usize) -> Self {
        Self { n, latency: vec![0.0; n * n] }
    }

    /// Builds from a row-major `n * n` array. Returns `None` on a size mismatch.
    pub fn from_row_major(n: usize, latency: Vec<f64>) -> Option<Self> {
        (latency.len() == n * n).then_some(Self { n, latency })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.latency[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.latency[i * self.n + j] = value;
        self.latency[j * self.n + i] = value;
    }

    /// Sets only `(i, j)`; used to build deliberately malformed graphs.
    pub fn set_directed(&mut self, i: usize, j: usize, value: f64) {
        self.latency[i * self.n + j] = value;
    }

    pub fn row_major(&self) -> &[f64] {
        &self.latency
    }
}

/// Resource demands of one instance of each shared RIC component class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentDemands {
    pub ricman: Resources,
    pub e2t: Resources,
    pub sdl: Resources,
    pub nib: Resources,
}

#[derive(Clone, Debug, PartialEq)]
pub struct XAppSpec {
    pub id: String,
    /// Control-loop threshold in ms.
    pub rho_ms: f64,
    /// Whether the xApp reads through SDL/STSL into the NIBs.
    pub needs_data: bool,
    /// xApps called in order from this one, by position.
    pub chain: Vec<usize>,
    pub demands: Resources,
}

/// A placeable component class. `XApp` carries the xApp position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    RicMan,
    E2T,
    Sdl,
    Nib,
    XApp(usize),
}

impl Component {
    /// Dense index used by [`Solution`] and [`Occupancy`]: r, t, s, d, then xApps.
    #[inline]
    pub fn slot(self) -> usize {
        match self {
            Component::RicMan => 0,
            Component::E2T => 1,
            Component::Sdl => 2,
            Component::Nib => 3,
            Component::XApp(a) => 4 + a,
        }
    }

    pub fn from_slot(slot: usize) -> Component {
        match slot {
            0 => Component::RicMan,
            1 => Component::E2T,
            2 => Component::Sdl,
            3 => Component::Nib,
            s => Component::XApp(s - 4),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::RicMan => f.write_str("ric_man"),
            Component::E2T => f.write_str("e2t"),
            Component::Sdl => f.write_str("sdl"),
            Component::Nib => f.write_str("nib"),
            Component::XApp(a) => write!(f, "xapp#{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: OverlayGraph,
    pub compute_nodes: Vec<ComputeNode>,
    pub e2_nodes: Vec<E2Node>,
    pub demands: ComponentDemands,
    pub xapps: Vec<XAppSpec>,
    /// Multiplier applied to the summed one-way path (2.0 = there and back).
    pub round_trip_factor: f64,
}

pub const DEFAULT_ROUND_TRIP_FACTOR: f64 = 2.0;

impl Instance {
    pub fn n_cn(&self) -> usize {
        self.compute_nodes.len()
    }

    pub fn n_e2(&self) -> usize {
        self.e2_nodes.len()
    }

    pub fn n_xapps(&self) -> usize {
        self.xapps.len()
    }

    /// Number of component slots per E2 node.
    pub fn n_slots(&self) -> usize {
        4 + self.xapps.len()
    }

    /// Position of the cloud node (first tier-0 compute node).
    pub fn cloud(&self) -> Option<usize> {
        self.compute_nodes.iter().position(ComputeNode::is_cloud)
    }

    #[inline]
    pub fn cn_vertex(&self, cn: usize) -> usize {
        cn
    }

    #[inline]
    pub fn e2_vertex(&self, e2: usize) -> usize {
        self.compute_nodes.len() + e2
    }

    #[inline]
    pub fn latency_e2_cn(&self, e2: usize, cn: usize) -> f64 {
        self.graph.get(self.e2_vertex(e2), cn)
    }

    #[inline]
    pub fn latency_cn(&self, a: usize, b: usize) -> f64 {
        self.graph.get(a, b)
    }

    pub fn demand(&self, component: Component) -> Resources {
        match component {
            Component::RicMan => self.demands.ricman,
            Component::E2T => self.demands.e2t,
            Component::Sdl => self.demands.sdl,
            Component::Nib => self.demands.nib,
            Component::XApp(a) => self.xapps[a].demands,
        }
    }

    pub fn var_cost(&self, cn: usize, component: Component) -> f64 {
        self.compute_nodes[cn].var_cost(component)
    }

    /// Every component slot in dense order.
    pub fn components(&self) -> impl Iterator<Item = Component> + '_ {
        (0..self.n_slots()).map(Component::from_slot)
    }

    pub fn min_rho(&self) -> f64 {
        self.xapps.iter().map(|x| x.rho_ms).fold(f64::INFINITY, f64::min)
    }

    /// Copy restricted to the compute nodes flagged in `keep`, plus the map from
    /// new CN positions to original ones.
    pub fn restrict_compute_nodes(&self, keep: &[bool]) -> (Instance, Vec<usize>) {
        let kept: Vec<usize> = (0..self.n_cn()).filter(|&m| keep[m]).collect();
        let mut vertices: Vec<usize> = kept.clone();
        vertices.extend((0..self.n_e2()).map(|i| self.e2_vertex(i)));
        let mut graph = OverlayGraph::new(vertices.len());
        for (a, &va) in vertices.iter().enumerate() {
            for (b, &vb) in vertices.iter().enumerate() {
                graph.set_directed(a, b, self.graph.get(va, vb));
            }
        }
        let instance = Instance {
            graph,
            compute_nodes: kept.iter().map(|&m| self.compute_nodes[m].clone()).collect(),
            e2_nodes: self.e2_nodes.clone(),
            demands: self.demands,
            xapps: self.xapps.clone(),
            round_trip_factor: self.round_trip_factor,
        };
        (instance, kept)
    }
}

/// Hosts of RIC_Man, E2T, SDL/STSL and NIBs for one E2 node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub r: usize,
    pub t: usize,
    pub s: usize,
    pub d: usize,
}

/// Placement of every component slot of every E2 node. Slots may be unset
/// while a solver is working or when a placement file is incomplete.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    hosts: Vec<Vec<Option<usize>>>,
}

impl Solution {
    pub fn empty(n_e2: usize, n_xapps: usize) -> Self {
        Self { hosts: vec![vec![None; 4 + n_xapps]; n_e2] }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        Self::empty(instance.n_e2(), instance.n_xapps())
    }

    /// Every component of every E2 node on the same CN.
    pub fn uniform(instance: &Instance, cn: usize) -> Self {
        Self { hosts: vec![vec![Some(cn); instance.n_slots()]; instance.n_e2()] }
    }

    pub fn from_parts(configs: &[Configuration], xapp_hosts: &[Vec<usize>]) -> Self {
        let hosts = configs
            .iter()
            .zip(xapp_hosts)
            .map(|(c, xs)| {
                let mut row = vec![Some(c.r), Some(c.t), Some(c.s), Some(c.d)];
                row.extend(xs.iter().map(|&h| Some(h)));
                row
            })
            .collect();
        Self { hosts }
    }

    pub fn n_e2(&self) -> usize {
        self.hosts.len()
    }

    #[inline]
    pub fn host(&self, e2: usize, component: Component) -> Option<usize> {
        self.hosts[e2][component.slot()]
    }

    #[inline]
    pub fn set_host(&mut self, e2: usize, component: Component, cn: Option<usize>) {
        self.hosts[e2][component.slot()] = cn;
    }

    pub fn config(&self, e2: usize) -> Option<Configuration> {
        let row = &self.hosts[e2];
        Some(Configuration { r: row[0]?, t: row[1]?, s: row[2]?, d: row[3]? })
    }

    pub fn xapp_host(&self, e2: usize, xapp: usize) -> Option<usize> {
        self.hosts[e2].get(4 + xapp).copied().flatten()
    }

    /// Slots of one E2 node in dense order (r, t, s, d, xApps).
    pub fn slots(&self, e2: usize) -> &[Option<usize>] {
        &self.hosts[e2]
    }

    pub fn is_complete(&self) -> bool {
        self.hosts.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// Rewrites every host through `map` (e.g. from a restricted instance back
    /// to the original CN positions).
    pub fn remap_hosts(&self, map: &[usize]) -> Solution {
        Solution { hosts: self.hosts.iter().map(|row| row.iter().map(|h| h.map(|m| map[m])).collect()).collect() }
    }

    /// Inverse of [`Solution::remap_hosts`]; `None` if a host is not in `map`.
    pub fn restrict_hosts(&self, map: &[usize]) -> Option<Solution> {
        let mut hosts = Vec::with_capacity(self.hosts.len());
        for row in &self.hosts {
            let mut out = Vec::with_capacity(row.len());
            for h in row {
                out.push(match h {
                    Some(m) => Some(map.iter().position(|x| x == m)?),
                    None => None,
                });
            }
            hosts.push(out);
        }
        Some(Solution { hosts })
    }

    /// Derived per-CN indicators.
    pub fn indicators(&self, instance: &Instance) -> Indicators {
        Indicators::derive(instance, self)
    }

    /// 64-bit FNV-1a digest over the assignment, stable across runs.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for row in &self.hosts {
            for slot in row {
                feed(slot.map_or(u64::MAX, |m| m as u64));
            }
        }
        h
    }
}

/// Which component classes each CN runs, derived from a [`Solution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indicators {
    /// `used[m]`: CN `m` hosts at least one component.
    pub used: Vec<bool>,
    /// `on[m][slot]`: CN `m` runs at least one instance of that class.
    pub on: Vec<Vec<bool>>,
}

impl Indicators {
    pub fn derive(instance: &Instance, solution: &Solution) -> Self {
        let slots = instance.n_slots();
        let mut on = vec![vec![false; slots]; instance.n_cn()];
        for e2 in 0..solution.n_e2() {
            for (slot, host) in solution.slots(e2).iter().enumerate() {
                if let Some(m) = *host {
                    on[m][slot] = true;
                }
            }
        }
        let used = on.iter().map(|row| row.iter().any(|&b| b)).collect();
        Self { used, on }
    }

    pub fn ricman_on(&self, cn: usize) -> bool {
        self.on[cn][Component::RicMan.slot()]
    }

    pub fn e2t_on(&self, cn: usize) -> bool {
        self.on[cn][Component::E2T.slot()]
    }

    pub fn sdl_on(&self, cn: usize) -> bool {
        self.on[cn][Component::Sdl.slot()]
    }

    pub fn nib_on(&self, cn: usize) -> bool {
        self.on[cn][Component::Nib.slot()]
    }

    pub fn xapp_on(&self, cn: usize, xapp: usize) -> bool {
        self.on[cn][Component::XApp(xapp).slot()]
    }

    /// Number of CNs running an E2T.
    pub fn e2t_instances(&self) -> usize {
        self.on.iter().filter(|row| row[Component::E2T.slot()]).count()
    }

    /// Number of (CN, xApp) pairs with a running instance.
    pub fn xapp_instances(&self) -> usize {
        self.on.iter().map(|row| row[4..].iter().filter(|&&b| b).count()).sum()
    }

    /// Aggregate demand placed on CN `m` (each class counted once).
    pub fn usage(&self, instance: &Instance, cn: usize) -> Resources {
        let mut total = Resources::ZERO;
        for (slot, &on) in self.on[cn].iter().enumerate() {
            if on {
                total += instance.demand(Component::from_slot(slot));
            }
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    LatencyExceeded,
    ProcOverflow,
    MemOverflow,
    StoOverflow,
    IncompleteAssignment,
}

/// What a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    E2(usize),
    Cn(usize),
    Pair { e2: usize, xapp: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: Subject,
    pub measured: f64,
    pub limit: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}: measured {} > limit {}", self.kind, self.subject, self.measured, self.limit)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;

    /// One E2 node, one CN per entry of `e2_to_cn` (CN 0 is the cloud), all
    /// CN-CN latencies zero, `n_xapps` data-reading xApps with a 10 ms threshold.
    pub fn line_instance(e2_to_cn: &[f64], n_xapps: usize) -> Instance {
        let n_cn = e2_to_cn.len();
        let mut graph = OverlayGraph::new(n_cn + 1);
        for (m, &l) in e2_to_cn.iter().enumerate() {
            graph.set(n_cn, m, l);
        }
        let compute_nodes = (0..n_cn)
            .map(|m| {
                let cloud = m == 0;
                let cap = |v| if cloud { Capacity::Unbounded } else { Capacity::Bounded(v) };
                ComputeNode {
                    id: format!("c{m}"),
                    tier: if cloud { 0 } else { 1 },
                    proc_capacity: cap(32.0),
                    mem_capacity: cap(64.0),
                    sto_capacity: cap(256.0),
                    fixed_cost: if cloud { 0.0 } else { 10.0 },
                    var_cost_ricman: if cloud { 2.0 } else { 4.0 },
                    var_cost_e2t: if cloud { 2.0 } else { 4.0 },
                    var_cost_sdl: if cloud { 1.0 } else { 2.0 },
                    var_cost_nib: if cloud { 1.0 } else { 2.0 },
                    var_cost_xapp: vec![1.0; n_xapps],
                }
            })
            .collect();
        Instance {
            graph,
            compute_nodes,
            e2_nodes: vec![E2Node { id: "e2-0".to_string(), tier: 3 }],
            demands: ComponentDemands {
                ricman: Resources::new(4.0, 8.0, 4.0),
                e2t: Resources::new(2.0, 4.0, 2.0),
                sdl: Resources::new(2.0, 4.0, 1.0),
                nib: Resources::new(1.0, 2.0, 50.0),
            },
            xapps: (0..n_xapps)
                .map(|a| XAppSpec {
                    id: format!("x{a}"),
                    rho_ms: 10.0,
                    needs_data: true,
                    chain: Vec::new(),
                    demands: Resources::new(1.0, 2.0, 1.0),
                })
                .collect(),
            round_trip_factor: DEFAULT_ROUND_TRIP_FACTOR,
        }
    }
}
