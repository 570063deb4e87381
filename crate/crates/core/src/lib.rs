//! Placement optimizer and orchestration simulator for a disaggregated
//! Near-Real-Time RAN Intelligent Controller.
//!
//! The crate is `no_std` (with `alloc`). Wall clocks, files and threads live in
//! the companion `rico` crate; everything here is deterministic computation.
//!
//! * [`model`]: domain types, cost and latency evaluation, feasibility checks.
//! * [`exact`]: branch-and-bound optimal solver and the search-space estimate.
//! * [`heuristic`]: latency-first placement followed by greedy cost consolidation.
//! * [`scenarios`]: hierarchical evaluation topology and fault schedules.
//! * [`orchestrator`]: discrete-event simulation of the monitor/trigger/redeploy cycle.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod exact;
pub mod heuristic;
pub mod model;
pub mod orchestrator;
pub mod scenarios;

pub use exact::{estimate_search_space, solve_exact, ExactResult, ExactStatus, SolverBudget};
pub use heuristic::{solve_heuristic, HeuristicError};
pub use model::{
    check_feasible, control_loop_latency, fixed_cost, total_cost, validate_instance, variable_cost, Capacity,
    Component, ComponentDemands, ComputeNode, Configuration, E2Node, Instance, OverlayGraph, Resources, Solution,
    Violation, ViolationKind, XAppSpec,
};
