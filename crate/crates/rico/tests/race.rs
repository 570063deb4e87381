use std::sync::Arc;
use std::time::{Duration, Instant};

use rico::race::{pick_applied, solve_heuristic_timed};
use rico::{race, spawn_race, Applied};
use rico_core::scenarios::{generate_hierarchical_topology, TopologySpec};
use rico_core::{solve_exact, total_cost, ExactResult, ExactStatus, SolverBudget};

fn slice(counts: [usize; 3], n: usize, seed: u64) -> rico_core::Instance {
    generate_hierarchical_topology(&TopologySpec::default().with_e2_counts(counts), n, seed).unwrap()
}

fn exact(status: ExactStatus, cost: Option<f64>) -> ExactResult {
    ExactResult { status, best: None, best_cost: cost, elapsed: 0.0, explored_nodes: 0 }
}

#[test]
fn cancel_stops_the_exact_leg() {
    let inst = Arc::new(slice([3, 4, 5], 12, 1));
    let handle = spawn_race(Arc::clone(&inst), SolverBudget::seconds(120.0));
    std::thread::sleep(Duration::from_millis(300));
    let t = Instant::now();
    handle.cancel();
    let report = handle.join();
    assert!(t.elapsed() < Duration::from_secs(5), "join took {:?}", t.elapsed());
    assert_eq!(report.exact.status, ExactStatus::Timeout);
    assert!(report.heuristic.result.is_ok());
    // A cancelled leg never displaces the heuristic.
    assert_eq!(report.applied, Some(Applied::Heuristic));
    assert_eq!(report.applied_cost(), report.heuristic.cost);
}

#[test]
fn race_matches_separate_solves() {
    let inst = slice([2, 2, 2], 4, 7);
    let report = race(&inst, SolverBudget::nodes(2_000_000));
    let alone = solve_exact(&inst, SolverBudget::nodes(2_000_000));
    assert_eq!(report.exact.status, alone.status);
    assert_eq!(report.exact.best_cost, alone.best_cost);
    assert_eq!(report.heuristic.cost, solve_heuristic_timed(&inst).cost);
    let applied = report.applied_solution().unwrap();
    assert_eq!(Some(total_cost(&inst, applied)), report.applied_cost());
    assert!(report.applied_cost().unwrap() <= report.heuristic.cost.unwrap());
}

#[test]
fn applied_leg_rules() {
    let h = |c: Option<f64>| rico::race::HeuristicOutcome {
        result: Err(rico_core::HeuristicError::NoCloud),
        cost: c,
        elapsed: 0.0,
    };
    use ExactStatus::*;
    assert_eq!(pick_applied(&h(Some(10.0)), &exact(Optimal, Some(8.0))), Some(Applied::Exact));
    assert_eq!(pick_applied(&h(Some(10.0)), &exact(Optimal, Some(10.0))), Some(Applied::Heuristic));
    assert_eq!(pick_applied(&h(Some(10.0)), &exact(Timeout, Some(8.0))), Some(Applied::Heuristic));
    assert_eq!(pick_applied(&h(Some(10.0)), &exact(Infeasible, None)), Some(Applied::Heuristic));
    assert_eq!(pick_applied(&h(None), &exact(Timeout, Some(8.0))), Some(Applied::Exact));
    assert_eq!(pick_applied(&h(None), &exact(Infeasible, None)), None);
}
