use proptest::prelude::*;

use rico_core::heuristic::solve_heuristic;
use rico_core::model::{total_cost, Capacity, Component, ComputeNode, Instance};
use rico_core::orchestrator::{run_simulation, EventKind, EventTrace, SimConfig};
use rico_core::scenarios::{
    generate_hierarchical_topology, scenario_cn_crash, scenario_latency_spike, testbed_instance, FaultSchedule,
    TopologySpec,
};
use rico_oracle as oracle;

fn times_ms(trace: &EventTrace, kind: EventKind) -> Vec<u64> {
    trace.of_kind(kind).map(|e| e.time_ms).collect()
}

/// Samples above threshold, as (time_ms, e2, xapp).
fn over_threshold(inst: &Instance, trace: &EventTrace) -> Vec<(u64, usize, usize)> {
    trace
        .of_kind(EventKind::MetricSample)
        .filter_map(|e| {
            let (e2, x) = (e.payload.e2?, e.payload.xapp?);
            match e.payload.latency_ms {
                Some(l) if l <= inst.xapps[x].rho_ms => None,
                _ => Some((e.time_ms, e2, x)),
            }
        })
        .collect()
}

/// Unused, expensive and far away: the heuristic never picks it.
fn far_cn(inst: &Instance) -> Instance {
    let node = ComputeNode {
        id: "far".into(),
        tier: 2,
        fixed_cost: 1000.0,
        proc_capacity: Capacity::Bounded(64.0),
        mem_capacity: Capacity::Bounded(128.0),
        sto_capacity: Capacity::Bounded(512.0),
        ..inst.compute_nodes[inst.n_cn() - 1].clone()
    };
    oracle::with_extra_cn(inst, node, |_| 100.0)
}

#[test]
fn no_faults_only_samples() {
    let spec = TopologySpec::default().with_e2_counts([1, 2, 3]);
    let inst = generate_hierarchical_topology(&spec, 6, 2).unwrap();
    let cfg = SimConfig { sim_horizon: 60.0, ..SimConfig::default() };
    let trace = run_simulation(&inst, &FaultSchedule::none(), &cfg).unwrap();
    assert_eq!(trace.events[0].kind, EventKind::HeuristicSolution);
    assert!(trace.events[1..].iter().all(|e| e.kind == EventKind::MetricSample));
    assert!(over_threshold(&inst, &trace).is_empty());
    assert_eq!(trace.final_solution, solve_heuristic(&inst).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Loops hold outside the window between a fault and the end of the
    /// redeploy it causes, and recovery happens within the fixed bound.
    #[test]
    fn safety_and_liveness_after_spike(
        seed in 0u64..400,
        n_e2 in 1usize..=3,
        n_cn in 2usize..=4,
        at in 5u64..40,
        added in 1u32..20,
    ) {
        let inst = oracle::random_small_instance(seed, n_e2, n_cn, 2);
        prop_assume!(solve_heuristic(&inst).is_ok());
        let cfg = SimConfig { sim_horizon: 120.0, exact_node_limit: Some(50_000), ..SimConfig::default() };
        let e2 = seed as usize % n_e2;
        let faults = scenario_latency_spike(&inst, e2, added as f64, at as f64).unwrap();
        let Ok(trace) = run_simulation(&inst, &faults, &cfg) else {
            // Only an unrecoverable spike may end the run.
            return Ok(());
        };
        let at_ms = at * 1000;
        let bad = over_threshold(&inst, &trace);
        prop_assert!(bad.iter().all(|&(t, _, _)| t >= at_ms));
        if let Some(&(first, _, _)) = bad.first() {
            let window = 10_000;
            let trig = times_ms(&trace, EventKind::OptimizationTrigger);
            prop_assert_eq!(trig.first().copied(), Some(first + window));
            let ok = times_ms(&trace, EventKind::LoopSatisfied);
            let bound = first + window + 5_000 + 35_000 + 1_000;
            prop_assert!(ok.first().is_some_and(|&t| t <= bound), "satisfied {:?} bound {}", ok, bound);
            // After the last redeploy completes, nothing is over threshold again.
            let last_finish = *times_ms(&trace, EventKind::RedeployFinished).last().unwrap();
            prop_assert!(bad.iter().all(|&(t, _, _)| t < last_finish));
        } else {
            prop_assert!(trace.first(EventKind::OptimizationTrigger).is_none());
        }
    }

    #[test]
    fn crash_is_detected_after_timeout(seed in 0u64..200, at in 1u64..40) {
        let inst = oracle::random_small_instance(seed, 2, 3, 1);
        let live = solve_heuristic(&inst);
        prop_assume!(live.is_ok());
        let Some(cn) = (1..inst.n_cn()).next() else { return Ok(()) };
        let cfg = SimConfig { sim_horizon: 150.0, exact_node_limit: Some(50_000), ..SimConfig::default() };
        let faults = scenario_cn_crash(&inst, cn, at as f64).unwrap();
        if let Ok(trace) = run_simulation(&inst, &faults, &cfg) {
            prop_assert_eq!(times_ms(&trace, EventKind::NodeDownDetected), vec![(at + 50) * 1000]);
            prop_assert!(trace.final_solution.slots(0).iter().chain(trace.final_solution.slots(1)).all(|&h| h != Some(cn)));
        }
    }
}

#[test]
fn crash_at_thirty_detected_at_eighty() {
    let inst = testbed_instance();
    let cn = solve_heuristic(&inst).unwrap().host(0, Component::E2T).unwrap();
    let faults = scenario_cn_crash(&inst, cn, 30.0).unwrap();
    let trace = run_simulation(&inst, &faults, &SimConfig::default()).unwrap();
    assert_eq!(times_ms(&trace, EventKind::NodeDownDetected), vec![80_000]);
    assert_eq!(times_ms(&trace, EventKind::OptimizationTrigger), vec![80_000]);
}

#[test]
fn runs_with_noise_are_reproducible() {
    let inst = testbed_instance();
    let cfg = SimConfig { noise_spike_probability: 0.3, noise_spike_ms: 8.0, rng_seed: 17, ..SimConfig::default() };
    let faults = scenario_latency_spike(&inst, 1, 10.0, 60.0).unwrap();
    let a = run_simulation(&inst, &faults, &cfg).unwrap();
    let b = run_simulation(&inst, &faults, &cfg).unwrap();
    assert_eq!(a, b);
    let other = SimConfig { rng_seed: 18, ..cfg };
    assert_ne!(a, run_simulation(&inst, &faults, &other).unwrap());
}

#[test]
fn isolated_noise_spikes_never_trigger() {
    let inst = testbed_instance();
    let cfg = SimConfig { noise_spike_probability: 0.1, noise_spike_ms: 50.0, ..SimConfig::default() };
    let trace = run_simulation(&inst, &FaultSchedule::none(), &cfg).unwrap();
    assert!(trace.of_kind(EventKind::ControlLoopViolation).count() > 10);
    assert!(trace.first(EventKind::OptimizationTrigger).is_none());
    assert!(trace.first(EventKind::RedeployStarted).is_none());
}

#[test]
fn crash_of_unused_cn_keeps_loops() {
    let spec = TopologySpec::default().with_e2_counts([2, 2, 2]);
    let inst = far_cn(&generate_hierarchical_topology(&spec, 3, 0).unwrap());
    let initial = solve_heuristic(&inst).unwrap();
    let far = inst.n_cn() - 1;
    assert!((0..inst.n_e2()).all(|e| initial.slots(e).iter().all(|&h| h != Some(far))));
    let cfg = SimConfig { sim_horizon: 150.0, ..SimConfig::default() };
    let trace = run_simulation(&inst, &scenario_cn_crash(&inst, far, 20.0).unwrap(), &cfg).unwrap();
    assert_eq!(times_ms(&trace, EventKind::NodeDownDetected), vec![70_000]);
    assert!(over_threshold(&inst, &trace).is_empty());
    assert!(trace.first(EventKind::ControlLoopViolation).is_none());
    assert!(trace.first(EventKind::OptimizationTrigger).is_none());
    assert!(trace.first(EventKind::RedeployStarted).is_none());
    assert_eq!(trace.final_solution, initial);
}

/// Runs a persistent +100 ms spike on the first E2 access link over small
/// slices and returns the first run whose race result satisfies `want`.
fn spiked_race(want: impl Fn(&EventTrace) -> bool) -> (Instance, EventTrace) {
    let cfg = SimConfig { sim_horizon: 200.0, ..SimConfig::default() };
    for counts in [[5, 0, 0], [2, 2, 2], [1, 2, 3], [2, 3, 0]] {
        for n in 2..=6 {
            for seed in 0..3 {
                let spec = TopologySpec::default().with_e2_counts(counts);
                let Ok(inst) = generate_hierarchical_topology(&spec, n, seed) else { continue };
                let Ok(faults) = scenario_latency_spike(&inst, 0, 100.0, 10.0) else { continue };
                let Ok(trace) = run_simulation(&inst, &faults, &cfg) else { continue };
                if trace.first(EventKind::OptimalSolution).is_some() && want(&trace) {
                    return (inst, trace);
                }
            }
        }
    }
    panic!("no slice gives the wanted race outcome");
}

fn applied(trace: &EventTrace) -> Option<bool> {
    trace.first(EventKind::OptimalSolution)?.payload.applied
}

#[test]
fn strictly_cheaper_optimum_is_redeployed() {
    let (inst, trace) = spiked_race(|t| applied(t) == Some(true));
    let trigger = trace.first(EventKind::OptimizationTrigger).unwrap().time_ms;
    assert_eq!(trigger, 20_000);
    let heuristic = trace.of_kind(EventKind::HeuristicSolution).find(|e| e.time_ms > 0).unwrap();
    assert_eq!(heuristic.time_ms, trigger + 5_000);
    let opt = trace.first(EventKind::OptimalSolution).unwrap();
    assert_eq!(opt.time_ms, trigger + 30_000);
    let ec = opt.payload.cost.unwrap();
    assert!(ec < heuristic.payload.cost.unwrap());

    // Queued behind the heuristic redeploy when one is in flight.
    let last = trace.of_kind(EventKind::RedeployStarted).last().unwrap();
    assert_eq!(last.payload.cost, Some(ec));
    assert!(last.time_ms >= opt.time_ms);
    assert_eq!(last.payload.solution_digest, opt.payload.solution_digest);
    assert_eq!(total_cost(&inst, &trace.final_solution), ec);
}

#[test]
fn equal_cost_optimum_is_not_redeployed() {
    let (_, trace) = spiked_race(|t| applied(t) == Some(false));
    let opt = trace.first(EventKind::OptimalSolution).unwrap();
    let heuristic = trace.of_kind(EventKind::HeuristicSolution).find(|e| e.time_ms > 0).unwrap();
    assert!(opt.payload.cost.unwrap() >= heuristic.payload.cost.unwrap());
    assert!(trace.of_kind(EventKind::RedeployStarted).all(|e| e.time_ms < opt.time_ms));
    assert_eq!(trace.final_solution.digest(), heuristic.payload.solution_digest.unwrap());
}

#[test]
fn exhausted_exact_leg_reports_nothing() {
    let inst = testbed_instance();
    let cfg = SimConfig { exact_node_limit: Some(1), ..SimConfig::default() };
    let faults = scenario_latency_spike(&inst, 3, 10.0, 150.0).unwrap();
    let trace = run_simulation(&inst, &faults, &cfg).unwrap();
    assert!(trace.first(EventKind::OptimizationTrigger).is_some());
    assert!(trace.first(EventKind::OptimalSolution).is_none());
}

#[test]
fn optimum_later_than_budget_is_dropped() {
    let inst = testbed_instance();
    let cfg = SimConfig { exact_solver_delay: 61.0, sim_horizon: 260.0, ..SimConfig::default() };
    let faults = scenario_latency_spike(&inst, 3, 10.0, 150.0).unwrap();
    let trace = run_simulation(&inst, &faults, &cfg).unwrap();
    assert!(trace.first(EventKind::OptimalSolution).is_none());
}

#[test]
fn spikes_within_margin_do_not_trigger() {
    let inst = testbed_instance();
    let live = solve_heuristic(&inst).unwrap();
    let rtf = inst.round_trip_factor;
    for e2 in 0..inst.n_e2() {
        let worst = (0..inst.n_xapps())
            .map(|a| rico_core::control_loop_latency(&inst, &live, e2, a).unwrap())
            .fold(0.0, f64::max);
        let margin = inst.xapps[0].rho_ms - worst;
        for added in [0.0, margin / rtf - 0.25] {
            let faults = scenario_latency_spike(&inst, e2, added, 20.0).unwrap();
            let cfg = SimConfig { sim_horizon: 80.0, ..SimConfig::default() };
            let trace = run_simulation(&inst, &faults, &cfg).unwrap();
            assert!(trace.first(EventKind::ControlLoopViolation).is_none(), "e2 {e2} +{added}");
            assert!(trace.first(EventKind::OptimizationTrigger).is_none(), "e2 {e2} +{added}");
        }
    }
}
