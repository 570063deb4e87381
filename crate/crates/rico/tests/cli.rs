use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rico(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rico")).args(args).output().expect("spawn rico")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = p(dir, name);
    let mut args = vec!["gen", "--out", &out];
    args.extend_from_slice(extra);
    let o = rico(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn events(dir: &str) -> Vec<Value> {
    std::fs::read_to_string(Path::new(dir).join("events.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn times(ev: &[Value], kind: &str) -> Vec<f64> {
    ev.iter().filter(|e| e["kind"] == kind).map(|e| e["time"].as_f64().unwrap()).collect()
}

#[test]
fn gen_is_deterministic_per_seed() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), "a.json", &["--cns", "6", "--seed", "3", "--e2-counts", "2,2,2"]);
    let b = gen(d.path(), "b.json", &["--cns", "6", "--seed", "3", "--e2-counts", "2,2,2"]);
    let c = gen(d.path(), "c.json", &["--cns", "6", "--seed", "4", "--e2-counts", "2,2,2"]);
    let read = |f: &str| std::fs::read(f).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let v: Value = serde_json::from_slice(&read(&a)).unwrap();
    assert_eq!(v["compute_nodes"].as_array().unwrap().len(), 7);
    assert_eq!(v["e2_nodes"].as_array().unwrap().len(), 6);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&rico(&["gen", "--cns", "600"])), 2);
    assert_eq!(code(&rico(&["gen", "--cns", "3", "--e2-counts", "1,2"])), 2);
    assert_eq!(code(&rico(&["solve", "--strategy", "magic", "--in", "x.json"])), 2);
    assert_eq!(code(&rico(&["compare", "--cns-list", ""])), 2);
    assert_eq!(code(&rico(&["frobnicate"])), 2);
}

#[test]
fn unreadable_input_exits_one() {
    let d = TempDir::new().unwrap();
    let bad = p(d.path(), "bad.json");
    std::fs::write(&bad, "{}").unwrap();
    assert_eq!(code(&rico(&["solve", "--strategy", "heuristic", "--in", &bad])), 1);
    assert_eq!(code(&rico(&["solve", "--strategy", "heuristic", "--in", &p(d.path(), "missing.json")])), 1);
}

#[test]
fn solve_reports_and_writes_solutions() {
    let d = TempDir::new().unwrap();
    let inst = gen(d.path(), "i.json", &["--cns", "4", "--seed", "7", "--e2-counts", "2,2,2"]);
    let parse = |o: &Output| -> Vec<Vec<String>> {
        stdout(o).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
    };

    let out = p(d.path(), "h.json");
    let o = rico(&["solve", "--strategy", "heuristic", "--in", &inst, "--out", &out]);
    assert_eq!(code(&o), 0);
    let h = parse(&o);
    assert_eq!(h[0][0], "heuristic");
    assert_eq!(h[0][2], "true");
    let sol: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sol["total_cost"].as_f64().unwrap().to_string(), h[0][1]);

    let o = rico(&["solve", "--strategy", "exact", "--in", &inst, "--node-limit", "2000000"]);
    assert_eq!(code(&o), 0);
    let e = parse(&o);
    let (hc, ec): (f64, f64) = (h[0][1].parse().unwrap(), e[0][1].parse().unwrap());
    assert!(ec <= hc);

    let out = p(d.path(), "r.json");
    let o = rico(&["solve", "--strategy", "race", "--in", &inst, "--node-limit", "2000000", "--out", &out]);
    assert_eq!(code(&o), 0);
    let r = parse(&o);
    assert_eq!(r.len(), 3);
    assert_eq!(r[0][0], "heuristic");
    assert_eq!(r[1][0], "exact");
    let want = if ec < hc { "race:exact" } else { "race:heuristic" };
    assert_eq!(r[2][0], want);
    assert_eq!(r[2][1].parse::<f64>().unwrap(), ec.min(hc));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["exact"]["status"], "optimal");
    assert_eq!(doc["solution"]["total_cost"], doc["cost"]);
}

#[test]
fn verbose_heuristic_logs_phases() {
    let d = TempDir::new().unwrap();
    let inst = gen(d.path(), "i.json", &["--cns", "4", "--seed", "7", "--e2-counts", "2,2,2"]);
    let o = rico(&["solve", "--strategy", "heuristic", "--in", &inst, "--verbose"]);
    assert_eq!(code(&o), 0);
    let log = String::from_utf8(o.stderr).unwrap();
    assert!(!log.is_empty());
    assert!(log.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[test]
fn infeasible_and_exhausted_exit_codes() {
    let d = TempDir::new().unwrap();
    // The full E2 population cannot fit on three edge CNs within the loop bound.
    let full = gen(d.path(), "full.json", &["--cns", "3"]);
    assert_eq!(code(&rico(&["solve", "--strategy", "heuristic", "--in", &full])), 3);
    assert_eq!(code(&rico(&["solve", "--strategy", "exact", "--in", &full, "--budget", "5"])), 3);
    assert_eq!(code(&rico(&["solve", "--strategy", "race", "--in", &full, "--budget", "5"])), 3);

    let mid = gen(d.path(), "mid.json", &["--cns", "12", "--seed", "1", "--e2-counts", "3,4,5"]);
    assert_eq!(code(&rico(&["solve", "--strategy", "exact", "--in", &mid, "--node-limit", "1"])), 4);
}

#[test]
fn compare_rows_are_ordered_and_reproducible() {
    let d = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = p(d.path(), name);
        let o = rico(&[
            "compare",
            "--cns-list",
            "4,2,3",
            "--e2-counts",
            "2,2,2",
            "--timing",
            "off",
            "--jobs",
            "3",
            "--out",
            &out,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("n_cns,strategy,status,cost,elapsed_s,e2t_instances,xapp_instances"));
    let keys: Vec<(usize, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7);
            assert!(f[4].is_empty());
            (f[0].parse().unwrap(), f[1].to_string())
        })
        .collect();
    let want: Vec<(usize, String)> =
        [2, 3, 4].iter().flat_map(|&n| [(n, "exact".to_string()), (n, "heuristic".to_string())]).collect();
    assert_eq!(keys, want);
}

#[test]
fn simulate_spike_timeline() {
    let d = TempDir::new().unwrap();
    let tb = gen(d.path(), "tb.json", &["--testbed"]);
    let out = p(d.path(), "spike");
    let o = rico(&["simulate", "--scenario", "spike", "--in", &tb, "--out-dir", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ev = events(&out);
    assert_eq!(times(&ev, "FaultInjected"), vec![150.0]);
    assert_eq!(times(&ev, "OptimizationTrigger"), vec![160.0]);
    assert_eq!(times(&ev, "RedeployStarted")[0], 165.0);
    assert_eq!(times(&ev, "RedeployFinished")[0], 200.0);
    assert_eq!(times(&ev, "LoopSatisfied")[0], 200.0);

    // Replaying the manifest gives the same files.
    let replay = p(d.path(), "replay");
    let manifest = p(Path::new(&out), "manifest.json");
    assert_eq!(code(&rico(&["simulate", "--manifest", &manifest, "--out-dir", &replay])), 0);
    for f in ["events.jsonl", "samples.csv", "manifest.json"] {
        assert_eq!(std::fs::read(Path::new(&out).join(f)).unwrap(), std::fs::read(Path::new(&replay).join(f)).unwrap());
    }
}

#[test]
fn simulate_crash_and_quiet_runs() {
    let d = TempDir::new().unwrap();
    let tb = gen(d.path(), "tb.json", &["--testbed"]);
    let out = p(d.path(), "crash");
    assert_eq!(code(&rico(&["simulate", "--scenario", "crash", "--in", &tb, "--out-dir", &out])), 0);
    let ev = events(&out);
    assert_eq!(times(&ev, "FaultInjected"), vec![40.0]);
    assert_eq!(times(&ev, "NodeDownDetected"), vec![90.0]);

    let out = p(d.path(), "none");
    assert_eq!(code(&rico(&["simulate", "--scenario", "none", "--in", &tb, "--out-dir", &out])), 0);
    let ev = events(&out);
    assert!(times(&ev, "OptimizationTrigger").is_empty());
    assert!(ev.iter().all(|e| e["kind"] == "HeuristicSolution" || e["kind"] == "MetricSample"));
}

#[test]
fn simulate_without_a_placement_exits_five() {
    let d = TempDir::new().unwrap();
    let tb = gen(d.path(), "tb.json", &["--testbed"]);
    let faults = p(d.path(), "faults.json");
    let all: Vec<Value> = ["c1", "c2", "c3", "c4"]
        .iter()
        .map(|cn| serde_json::json!({"time": 40.0, "fault": {"kind": "cn_crash", "cn": cn, "downtime": null}}))
        .collect();
    std::fs::write(&faults, serde_json::json!({ "faults": all }).to_string()).unwrap();
    let out = p(d.path(), "out");
    let o = rico(&["simulate", "--in", &tb, "--faults", &faults, "--out-dir", &out]);
    assert_eq!(code(&o), 5);
    // The partial trace is kept.
    assert_eq!(times(&events(&out), "NodeDownDetected").len(), 4);

    // The cloud is assumed always up.
    let o = rico(&["simulate", "--scenario", "crash", "--cn", "c0", "--in", &tb, "--out-dir", &out]);
    assert_eq!(code(&o), 2);
}
