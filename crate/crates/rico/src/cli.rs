//! `rico` command line.
//!
//! Exit codes: 0 success, 1 unreadable or invalid input, 2 bad flags,
//! 3 no feasible placement, 4 exact budget exhausted without an incumbent,
//! 5 the simulated optimizer found no placement after a fault.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rico_core::exact::{ExactStatus, SolverBudget};
use rico_core::heuristic::{run_heuristic, PhaseEvent};
use rico_core::model::{check_feasible, total_cost, validate_instance, Component, Instance, Solution};
use rico_core::orchestrator::{run_simulation, SimConfig, SimError};
use rico_core::scenarios::{
    generate_hierarchical_topology, scenario_cn_crash, scenario_latency_spike, testbed_instance, FaultSchedule,
    TopologySpec, DEFAULT_SPIKE_AT_S, DEFAULT_SPIKE_MS, TESTBED_CRASH_AT_S,
};

use crate::compare::{e2t_increases, run_sweep, write_sweep_csv, SweepOptions};
use crate::formats::{
    read_instance, to_json, write_instance, ExactResultDoc, FaultScheduleDoc, Ids, ScenarioManifest, SimConfigDoc,
    SolutionDoc, TopologySpecDoc,
};
use crate::race::{race, solve_exact_timed, Applied};
use crate::trace::{write_events_jsonl, write_samples_csv};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NO_INCUMBENT: i32 = 4;
pub const EXIT_SIM_INFEASIBLE: i32 = 5;

const EXIT_CODES: &str = "Exit codes: 0 ok, 1 unreadable or invalid input, 2 bad flags, \
3 infeasible, 4 timeout without incumbent, 5 no placement after a simulated fault.\n\
Set RICO_LOG (error, warn, info, debug) for log output on stderr.";

#[derive(Parser, Debug)]
#[command(name = "rico", version, about = "Near-RT RIC component placement and orchestration simulator", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a tiered evaluation topology as instance JSON.
    Gen(GenArgs),
    /// Solve an instance.
    #[command(after_help = "Prints `strategy,cost,feasible,elapsed_s` per solver run. \
A race prints the heuristic line, the exact line, then `race:<applied>` for the placement it keeps.")]
    Solve(SolveArgs),
    /// Sweep the number of edge CNs and compare both strategies.
    #[command(after_help = "CSV columns: n_cns,strategy,status,cost,elapsed_s,e2t_instances,xapp_instances. \
Rows are ordered by (n_cns, strategy). Empty cells mean not available.")]
    Compare(CompareArgs),
    /// Simulate the monitoring and re-optimization cycle under a fault.
    #[command(after_help = "Writes events.jsonl, samples.csv (time,e2,xapp,loop_latency_ms) and manifest.json.")]
    Simulate(SimulateArgs),
}

#[derive(clap::Args, Debug)]
struct TopologyArgs {
    /// JSON file overriding generator parameters.
    #[arg(long, value_name = "FILE")]
    tiers: Option<PathBuf>,
    /// E2 nodes per tier, top tier first (e.g. 2,2,2).
    #[arg(long, value_delimiter = ',', value_name = "T1,T2,T3")]
    e2_counts: Option<Vec<usize>>,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    /// Number of edge CNs (the cloud node is always added).
    #[arg(long, required_unless_present = "testbed")]
    cns: Option<usize>,
    /// Write the small fault-scenario testbed instead: 4 edge CNs, 4 E2 nodes.
    #[arg(long, conflicts_with_all = ["cns", "tiers", "e2_counts"])]
    testbed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    topology: TopologyArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Exact,
    Heuristic,
    Race,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    strategy: Strategy,
    /// Wall-clock seconds for the exact solver.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Branch-and-bound node limit for the exact solver.
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the heuristic phase log as JSON lines on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args, Debug)]
struct CompareArgs {
    /// Edge CN counts to sweep, comma separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    cns_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock seconds for the exact solver at each point.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    /// `off` leaves elapsed_s empty and bounds the exact solver by nodes only.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    timing: Switch,
    /// Parallel sweep workers.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    topology: TopologyArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Scenario {
    Spike,
    Crash,
    None,
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum, required_unless_present_any = ["faults", "manifest"])]
    scenario: Option<Scenario>,
    #[arg(long = "in", value_name = "PATH", required_unless_present = "manifest")]
    input: Option<PathBuf>,
    /// Simulator settings JSON; defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Fault schedule JSON, instead of a built-in scenario.
    #[arg(long, conflicts_with = "scenario")]
    faults: Option<PathBuf>,
    /// Replay a manifest written by an earlier run.
    #[arg(long, conflicts_with_all = ["scenario", "faults", "input", "config"])]
    manifest: Option<PathBuf>,
    /// E2 node whose E2T link spikes (default: the last one).
    #[arg(long)]
    e2: Option<String>,
    /// CN to crash (default: the E2T host of the last E2 node).
    #[arg(long)]
    cn: Option<String>,
    /// Fault time in seconds.
    #[arg(long)]
    at: Option<f64>,
    /// Spike size in ms, one way.
    #[arg(long, default_value_t = DEFAULT_SPIKE_MS)]
    added_ms: f64,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    NoIncumbent(String),
    #[error("{0}")]
    SimInfeasible(String),
    #[error(transparent)]
    Input(#[from] anyhow::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::NoIncumbent(_) => EXIT_NO_INCUMBENT,
            CliError::SimInfeasible(_) => EXIT_SIM_INFEASIBLE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("RICO_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rico: {e:#}");
            e.code()
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let inst = read_instance(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let problems = validate_instance(&inst);
    if let Some(first) = problems.first() {
        anyhow::bail!("{}: {} structural problem(s), first: {first:?}", path.display(), problems.len());
    }
    Ok(inst)
}

fn topology_spec(args: &TopologyArgs) -> Result<TopologySpec, CliError> {
    let mut spec = match &args.tiers {
        Some(path) => {
            let doc: TopologySpecDoc =
                serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
            TopologySpec::from(doc)
        }
        None => TopologySpec::default(),
    };
    if let Some(c) = &args.e2_counts {
        let &[t1, t2, t3] = c.as_slice() else {
            return Err(CliError::Usage(format!("--e2-counts takes three values, got {}", c.len())));
        };
        spec = spec.with_e2_counts([t1, t2, t3]);
    }
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => write_text(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let inst = match a.cns {
        _ if a.testbed => testbed_instance(),
        Some(n) => {
            let spec = topology_spec(&a.topology)?;
            generate_hierarchical_topology(&spec, n, a.seed).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => unreachable!("clap requires --cns without --testbed"),
    };
    emit(a.out.as_deref(), &write_instance(&inst))
}

fn csv_line(strategy: &str, cost: Option<f64>, feasible: bool, elapsed: f64) -> String {
    let cost = cost.map(|c| c.to_string()).unwrap_or_default();
    format!("{strategy},{cost},{feasible},{elapsed:.6}")
}

fn feasible(inst: &Instance, sol: Option<&Solution>) -> bool {
    sol.is_some_and(|s| check_feasible(inst, s).is_empty())
}

#[derive(Serialize)]
struct PhaseLine {
    phase: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    e2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    component: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    from: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    to: Option<String>,
}

fn component_name(ids: &Ids, c: Component) -> String {
    match c {
        Component::XApp(a) => ids.xapps[a].clone(),
        other => other.to_string(),
    }
}

fn phase_line(ids: &Ids, ev: &PhaseEvent) -> PhaseLine {
    match *ev {
        PhaseEvent::Placed { e2, component, cn } => PhaseLine {
            phase: "placed",
            e2: Some(ids.e2s[e2].clone()),
            component: Some(component_name(ids, component)),
            from: None,
            to: Some(ids.cns[cn].clone()),
        },
        PhaseEvent::Moved { e2, component, from, to } => PhaseLine {
            phase: "moved",
            e2: Some(ids.e2s[e2].clone()),
            component: Some(component_name(ids, component)),
            from: Some(ids.cns[from].clone()),
            to: Some(ids.cns[to].clone()),
        },
        PhaseEvent::KeptInitial => PhaseLine { phase: "kept_initial", e2: None, component: None, from: None, to: None },
    }
}

#[derive(Serialize)]
struct HeuristicDoc {
    feasible: bool,
    cost: Option<f64>,
    elapsed: f64,
    error: Option<String>,
    solution: Option<SolutionDoc>,
}

#[derive(Serialize)]
struct RaceDoc {
    applied: Option<&'static str>,
    cost: Option<f64>,
    solution: Option<SolutionDoc>,
    heuristic: HeuristicDoc,
    exact: ExactResultDoc,
}

fn budget_of(a: &SolveArgs) -> Result<SolverBudget, CliError> {
    if a.budget.is_nan() || a.budget <= 0.0 {
        return Err(CliError::Usage(format!("--budget must be positive, got {}", a.budget)));
    }
    Ok(SolverBudget { wall_time_limit: a.budget, node_limit: a.node_limit })
}

fn cmd_solve(a: SolveArgs) -> CliResult {
    let budget = budget_of(&a)?;
    let inst = load_instance(&a.input)?;
    let out = a.out.as_deref();
    match a.strategy {
        Strategy::Heuristic => {
            let t = std::time::Instant::now();
            let run = run_heuristic(&inst, None);
            let elapsed = t.elapsed().as_secs_f64();
            match run {
                Ok(run) => {
                    if a.verbose {
                        let ids = Ids::of(&inst);
                        let mut err = std::io::stderr().lock();
                        for ev in &run.log {
                            let line = serde_json::to_string(&phase_line(&ids, ev)).context("phase log")?;
                            writeln!(err, "{line}").context("writing stderr")?;
                        }
                    }
                    let cost = total_cost(&inst, &run.solution);
                    println!("{}", csv_line("heuristic", Some(cost), feasible(&inst, Some(&run.solution)), elapsed));
                    if let Some(path) = out {
                        write_text(path, &to_json(&SolutionDoc::from_solution(&inst, &run.solution)))?;
                    }
                    Ok(())
                }
                Err(e) => {
                    println!("{}", csv_line("heuristic", None, false, elapsed));
                    Err(CliError::Infeasible(format!("heuristic: {e}")))
                }
            }
        }
        Strategy::Exact => {
            let r = solve_exact_timed(&inst, budget, None);
            println!("{}", csv_line("exact", r.best_cost, feasible(&inst, r.best.as_ref()), r.elapsed));
            if let Some(path) = out {
                write_text(path, &to_json(&ExactResultDoc::from_result(&inst, &r)))?;
            }
            match (r.status, &r.best) {
                (ExactStatus::Infeasible, _) => Err(CliError::Infeasible("exact: no feasible placement".into())),
                (ExactStatus::Timeout, None) => {
                    Err(CliError::NoIncumbent(format!("exact: budget exhausted after {} nodes", r.explored_nodes)))
                }
                _ => Ok(()),
            }
        }
        Strategy::Race => {
            let t = std::time::Instant::now();
            let report = race(&inst, budget);
            let elapsed = t.elapsed().as_secs_f64();
            let h = &report.heuristic;
            let e = &report.exact;
            println!("{}", csv_line("heuristic", h.cost, feasible(&inst, h.result.as_ref().ok()), h.elapsed));
            println!("{}", csv_line("exact", e.best_cost, feasible(&inst, e.best.as_ref()), e.elapsed));
            let applied = report.applied.map(Applied::name);
            let label = format!("race:{}", applied.unwrap_or("none"));
            println!(
                "{}",
                csv_line(&label, report.applied_cost(), feasible(&inst, report.applied_solution()), elapsed)
            );
            if let Some(path) = out {
                let doc = RaceDoc {
                    applied,
                    cost: report.applied_cost(),
                    solution: report.applied_solution().map(|s| SolutionDoc::from_solution(&inst, s)),
                    heuristic: HeuristicDoc {
                        feasible: h.result.is_ok(),
                        cost: h.cost,
                        elapsed: h.elapsed,
                        error: h.result.as_ref().err().map(|e| e.to_string()),
                        solution: h.result.as_ref().ok().map(|s| SolutionDoc::from_solution(&inst, s)),
                    },
                    exact: ExactResultDoc::from_result(&inst, e),
                };
                write_text(path, &to_json(&doc))?;
            }
            match report.applied {
                Some(_) => Ok(()),
                None if e.status == ExactStatus::Timeout => {
                    Err(CliError::NoIncumbent("race: heuristic failed and the exact budget ran out".into()))
                }
                None => Err(CliError::Infeasible("race: no feasible placement".into())),
            }
        }
    }
}

fn cmd_compare(a: CompareArgs) -> CliResult {
    if a.cns_list.is_empty() {
        return Err(CliError::Usage("--cns-list needs at least one value".into()));
    }
    if a.budget.is_nan() || a.budget <= 0.0 || a.jobs == 0 {
        return Err(CliError::Usage("--budget and --jobs must be positive".into()));
    }
    let opts = SweepOptions {
        cns: a.cns_list,
        seed: a.seed,
        budget: a.budget,
        node_limit: a.node_limit,
        timing: a.timing == Switch::On,
        spec: topology_spec(&a.topology)?,
        jobs: a.jobs,
    };
    let rows = run_sweep(&opts);
    for n in e2t_increases(&rows) {
        log::warn!("heuristic E2T instance count rises at n_cns={n}");
    }
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).context("formatting CSV")?;
    emit(a.out.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
}

/// Manifests name the instance by absolute path so they replay from anywhere.
fn absolute(path: &Path) -> String {
    std::fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf()).display().to_string()
}

/// Resolved inputs of one simulation.
struct SimSetup {
    instance: Instance,
    instance_ref: String,
    faults: FaultSchedule,
    config: SimConfig,
}

fn default_e2(inst: &Instance, ids: &Ids, flag: &Option<String>) -> Result<usize, CliError> {
    match flag {
        Some(id) => ids.e2(id).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(inst.n_e2() - 1),
    }
}

fn simulation_setup(a: &SimulateArgs) -> Result<SimSetup, CliError> {
    if let Some(path) = &a.manifest {
        let m: ScenarioManifest =
            serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let instance = load_instance(&base.join(&m.instance))?;
        let faults = m.faults.to_schedule(&instance).context("manifest faults")?;
        let instance_ref = absolute(&base.join(&m.instance));
        return Ok(SimSetup { instance, instance_ref, faults, config: m.config.into() });
    }
    let input = a.input.as_ref().expect("clap requires --in without --manifest");
    let instance = load_instance(input)?;
    let config: SimConfig = match &a.config {
        Some(path) => serde_json::from_str::<SimConfigDoc>(&read_text(path)?)
            .with_context(|| format!("parsing {}", path.display()))?
            .into(),
        None => SimConfig::default(),
    };
    let ids = Ids::of(&instance);
    let faults = match (&a.faults, a.scenario) {
        (Some(path), _) => serde_json::from_str::<FaultScheduleDoc>(&read_text(path)?)
            .with_context(|| format!("parsing {}", path.display()))?
            .to_schedule(&instance)
            .context("fault schedule")?,
        (None, Some(Scenario::Spike)) => {
            let e2 = default_e2(&instance, &ids, &a.e2)?;
            let at = a.at.unwrap_or(DEFAULT_SPIKE_AT_S);
            scenario_latency_spike(&instance, e2, a.added_ms, at).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(Scenario::Crash)) => {
            let cn = match &a.cn {
                Some(id) => ids.cn(id).map_err(|e| CliError::Usage(e.to_string()))?,
                None => {
                    let e2 = default_e2(&instance, &ids, &a.e2)?;
                    let initial = rico_core::solve_heuristic(&instance)
                        .map_err(|e| CliError::SimInfeasible(format!("no initial placement: {e}")))?;
                    initial.host(e2, Component::E2T).expect("heuristic placements are complete")
                }
            };
            let at = a.at.unwrap_or(TESTBED_CRASH_AT_S);
            scenario_cn_crash(&instance, cn, at).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(Scenario::None) | None) => FaultSchedule::none(),
    };
    Ok(SimSetup { instance, instance_ref: absolute(input), faults, config })
}

fn write_trace_files(dir: &Path, setup: &SimSetup, trace: &rico_core::orchestrator::EventTrace) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut events = Vec::new();
    write_events_jsonl(&setup.instance, trace, &mut events)?;
    write_text(&dir.join("events.jsonl"), &String::from_utf8(events).expect("JSON is UTF-8"))?;
    let mut samples = Vec::new();
    write_samples_csv(&setup.instance, trace, &mut samples)?;
    write_text(&dir.join("samples.csv"), &String::from_utf8(samples).expect("CSV is UTF-8"))?;
    let manifest = ScenarioManifest {
        instance: setup.instance_ref.clone(),
        faults: FaultScheduleDoc::from_schedule(&setup.instance, &setup.faults),
        config: setup.config.into(),
    };
    write_text(&dir.join("manifest.json"), &to_json(&manifest))?;
    log::info!("{} events written to {}", trace.events.len(), dir.display());
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> CliResult {
    let setup = simulation_setup(&a)?;
    match run_simulation(&setup.instance, &setup.faults, &setup.config) {
        Ok(trace) => {
            write_trace_files(&a.out_dir, &setup, &trace)?;
            Ok(())
        }
        Err(SimError::SimInfeasible { time_ms, cause, trace }) => {
            write_trace_files(&a.out_dir, &setup, &trace)?;
            Err(CliError::SimInfeasible(format!("no feasible placement at {} s: {cause}", time_ms as f64 / 1000.0)))
        }
        Err(
            e @ (SimError::InvalidConfig { .. } | SimError::FaultOutsideHorizon { .. } | SimError::UnknownFaultTarget),
        ) => Err(CliError::Usage(e.to_string())),
        Err(e) => Err(CliError::Input(e.into())),
    }
}
