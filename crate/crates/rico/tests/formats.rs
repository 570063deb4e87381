use rico::formats::{FaultScheduleDoc, SimConfigDoc};
use rico::trace::{write_events_jsonl, write_samples_csv};
use rico::{read_instance, read_solution, write_instance, write_solution, FormatError};
use rico_core::orchestrator::{run_simulation, EventKind, SimConfig};
use rico_core::scenarios::{
    generate_hierarchical_topology, scenario_cn_crash, scenario_latency_spike, testbed_instance, TopologySpec,
};
use rico_core::{solve_exact, solve_heuristic, total_cost, SolverBudget};
use serde_json::{json, Value};

fn small() -> rico_core::Instance {
    let spec = TopologySpec::default().with_e2_counts([1, 2, 1]);
    generate_hierarchical_topology(&spec, 3, 4).unwrap()
}

fn doc(inst: &rico_core::Instance) -> Value {
    serde_json::from_str(&write_instance(inst)).unwrap()
}

fn read_value(v: &Value) -> Result<rico_core::Instance, FormatError> {
    read_instance(&v.to_string())
}

#[test]
fn instance_round_trip() {
    for inst in [small(), testbed_instance()] {
        let text = write_instance(&inst);
        let back = read_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back), text);
    }
}

#[test]
fn cloud_capacity_is_written_as_unbounded() {
    let v = doc(&small());
    let c0 = &v["compute_nodes"][0];
    assert_eq!(c0["id"], "c0");
    assert_eq!(c0["proc_capacity"], "unbounded");
    assert!(v["compute_nodes"][1]["proc_capacity"].is_number());
}

#[test]
fn node_order_may_be_permuted() {
    let inst = small();
    let mut v = doc(&inst);
    let order: Vec<String> = serde_json::from_value(v["graph"]["node_order"].clone()).unwrap();
    let lat: Vec<f64> = serde_json::from_value(v["graph"]["latency"].clone()).unwrap();
    let n = order.len();
    let perm: Vec<usize> = (0..n).rev().collect();
    let new_order: Vec<&String> = perm.iter().map(|&i| &order[i]).collect();
    let mut new_lat = vec![0.0; n * n];
    for (a, &pa) in perm.iter().enumerate() {
        for (b, &pb) in perm.iter().enumerate() {
            new_lat[a * n + b] = lat[pa * n + pb];
        }
    }
    v["graph"]["node_order"] = json!(new_order);
    v["graph"]["latency"] = json!(new_lat);
    assert_eq!(read_value(&v).unwrap(), inst);
}

#[test]
fn round_trip_factor_defaults_to_two() {
    let mut v = doc(&small());
    v.as_object_mut().unwrap().remove("round_trip_factor");
    assert_eq!(read_value(&v).unwrap().round_trip_factor, 2.0);
}

#[test]
fn malformed_instances_are_rejected() {
    let base = doc(&small());

    let mut v = base.clone();
    v["compute_nodes"][2]["id"] = v["compute_nodes"][1]["id"].clone();
    assert!(matches!(read_value(&v), Err(FormatError::DuplicateId(_))));

    let mut v = base.clone();
    v["xapps"][0]["chain"] = json!(["nope"]);
    assert!(matches!(read_value(&v), Err(FormatError::UnknownId { .. })));

    let mut v = base.clone();
    v["compute_nodes"][1]["var_cost_xapp"].as_object_mut().unwrap().remove("xapp-1");
    assert!(matches!(read_value(&v), Err(FormatError::MissingXAppCost { .. })));

    let mut v = base.clone();
    v["graph"]["latency"].as_array_mut().unwrap().pop();
    assert!(matches!(read_value(&v), Err(FormatError::Graph(_))));

    let mut v = base.clone();
    v["surprise"] = json!(1);
    assert!(matches!(read_value(&v), Err(FormatError::Json(_))));

    assert!(read_instance("{").is_err());
}

#[test]
fn solution_round_trip_and_derived_fields() {
    let inst = small();
    for sol in [solve_heuristic(&inst).unwrap(), solve_exact(&inst, SolverBudget::nodes(500_000)).best.unwrap()] {
        let text = write_solution(&inst, &sol);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["total_cost"].as_f64().unwrap(), total_cost(&inst, &sol));
        let parts = v["fixed_cost"].as_f64().unwrap() + v["variable_cost"].as_f64().unwrap();
        assert_eq!(parts, v["total_cost"].as_f64().unwrap());
        assert_eq!(read_solution(&inst, &text).unwrap(), sol);

        // Derived fields are informational only.
        let mut stripped = v.clone();
        for k in
            ["used", "ricman_on", "e2t_on", "sdl_on", "nib_on", "xapp_on", "fixed_cost", "variable_cost", "total_cost"]
        {
            stripped.as_object_mut().unwrap().remove(k);
        }
        assert_eq!(read_solution(&inst, &stripped.to_string()).unwrap(), sol);
    }
}

#[test]
fn solution_errors() {
    let inst = small();
    let sol = solve_heuristic(&inst).unwrap();
    let v: Value = serde_json::from_str(&write_solution(&inst, &sol)).unwrap();

    let mut w = v.clone();
    w["config"]["e2-1"]["t"] = json!("c99");
    assert!(matches!(read_solution(&inst, &w.to_string()), Err(FormatError::UnknownId { .. })));

    let mut w = v.clone();
    w["config"].as_object_mut().unwrap().remove("e2-1");
    assert!(matches!(read_solution(&inst, &w.to_string()), Err(FormatError::Incomplete(_))));
}

#[test]
fn fault_schedule_round_trip() {
    let inst = testbed_instance();
    let mut sched = scenario_latency_spike(&inst, 2, 7.5, 100.0).unwrap();
    sched.faults.extend(scenario_cn_crash(&inst, 1, 40.0).unwrap().faults);
    let d = FaultScheduleDoc::from_schedule(&inst, &sched);
    let text = serde_json::to_string(&d).unwrap();
    let back: FaultScheduleDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_schedule(&inst).unwrap(), sched);
    assert!(text.contains(r#""kind":"latency_delta""#));
    assert!(text.contains(r#""kind":"cn_crash""#));
}

#[test]
fn sim_config_fields_default_individually() {
    let c: SimConfig = serde_json::from_str::<SimConfigDoc>("{}").unwrap().into();
    assert_eq!(c, SimConfig::default());
    let c: SimConfig = serde_json::from_str::<SimConfigDoc>(r#"{"node_down_timeout": 20}"#).unwrap().into();
    assert_eq!(c.node_down_timeout, 20.0);
    assert_eq!(c.monitor_period, 1.0);
    assert!(serde_json::from_str::<SimConfigDoc>(r#"{"bogus": 1}"#).is_err());
}

#[test]
fn trace_files() {
    let inst = testbed_instance();
    let faults = scenario_cn_crash(&inst, 1, 40.0).unwrap();
    let cfg = SimConfig { sim_horizon: 150.0, ..SimConfig::default() };
    let trace = run_simulation(&inst, &faults, &cfg).unwrap();

    let mut events = Vec::new();
    write_events_jsonl(&inst, &trace, &mut events).unwrap();
    let lines: Vec<Value> =
        String::from_utf8(events).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), trace.events.len());
    let down = lines.iter().find(|l| l["kind"] == "NodeDownDetected").unwrap();
    assert_eq!(down["time"], 90.0);
    assert_eq!(down["cn"], "c1");
    let trig = lines.iter().find(|l| l["kind"] == "OptimizationTrigger").unwrap();
    assert_eq!(trig["cause"], "node_down");
    let h = lines.iter().find(|l| l["kind"] == "HeuristicSolution").unwrap();
    assert_eq!(h["solution_hash"].as_str().unwrap().len(), 16);

    let mut samples = Vec::new();
    write_samples_csv(&inst, &trace, &mut samples).unwrap();
    let text = String::from_utf8(samples).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("time,e2,xapp,loop_latency_ms"));
    let rows: Vec<Vec<&str>> = rows.map(|r| r.split(',').collect()).collect();
    assert_eq!(rows.len(), trace.of_kind(EventKind::MetricSample).count());
    assert!(rows.iter().all(|r| r.len() == 4));
    assert_eq!(rows[0][0], "0.000");
    // The crashed CN hosts loop components, so some samples go missing.
    assert!(rows.iter().any(|r| r[3].is_empty()));
    assert!(rows.iter().filter(|r| !r[3].is_empty()).all(|r| r[3].parse::<f64>().is_ok()));
}
