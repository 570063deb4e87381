//! Strategy comparison sweep over the number of edge CNs.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use rico_core::exact::{solve_exact, ExactStatus, SolverBudget};
use rico_core::model::Instance;
use rico_core::scenarios::{generate_hierarchical_topology, TopologySpec};

use crate::race::{solve_exact_timed, solve_heuristic_timed};

/// Column order of the sweep CSV.
pub const COLUMNS: [&str; 7] = ["n_cns", "strategy", "status", "cost", "elapsed_s", "e2t_instances", "xapp_instances"];

/// Node limit for the exact leg when wall-clock timing is off.
pub const UNTIMED_NODE_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub cns: Vec<usize>,
    pub seed: u64,
    /// Seconds for the exact leg of each point.
    pub budget: f64,
    pub node_limit: Option<u64>,
    /// When off, elapsed times are left out and the exact leg is bounded by
    /// nodes only, so the output is reproducible byte for byte.
    pub timing: bool,
    pub spec: TopologySpec,
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n_cns: usize,
    pub strategy: &'static str,
    pub status: String,
    pub cost: Option<f64>,
    pub elapsed_s: Option<f64>,
    pub e2t_instances: Option<usize>,
    pub xapp_instances: Option<usize>,
}

fn status_name(s: ExactStatus) -> &'static str {
    match s {
        ExactStatus::Optimal => "optimal",
        ExactStatus::Timeout => "timeout",
        ExactStatus::Infeasible => "infeasible",
    }
}

fn error_rows(n_cns: usize, message: &str) -> Vec<SweepRow> {
    ["exact", "heuristic"]
        .into_iter()
        .map(|strategy| SweepRow {
            n_cns,
            strategy,
            status: format!("error: {message}"),
            cost: None,
            elapsed_s: None,
            e2t_instances: None,
            xapp_instances: None,
        })
        .collect()
}

fn run_point(opts: &SweepOptions, n_cns: usize) -> Vec<SweepRow> {
    let inst: Instance = match generate_hierarchical_topology(&opts.spec, n_cns, opts.seed) {
        Ok(i) => i,
        Err(e) => return error_rows(n_cns, &e.to_string()),
    };
    let counts = |s: &rico_core::Solution| {
        let ind = s.indicators(&inst);
        (Some(ind.e2t_instances()), Some(ind.xapp_instances()))
    };
    let elapsed = |t: f64| opts.timing.then_some(t);

    let h = solve_heuristic_timed(&inst);
    let (he, hx) = h.result.as_ref().map(counts).unwrap_or((None, None));
    let heuristic = SweepRow {
        n_cns,
        strategy: "heuristic",
        status: if h.result.is_ok() { "feasible" } else { "infeasible" }.to_string(),
        cost: h.cost,
        elapsed_s: elapsed(h.elapsed),
        e2t_instances: he,
        xapp_instances: hx,
    };

    let e = if opts.timing {
        solve_exact_timed(&inst, SolverBudget { wall_time_limit: opts.budget, node_limit: opts.node_limit }, None)
    } else {
        solve_exact(&inst, SolverBudget::nodes(opts.node_limit.unwrap_or(UNTIMED_NODE_LIMIT)))
    };
    let (ee, ex) = e.best.as_ref().map(counts).unwrap_or((None, None));
    let exact = SweepRow {
        n_cns,
        strategy: "exact",
        status: status_name(e.status).to_string(),
        cost: e.best_cost,
        elapsed_s: elapsed(e.elapsed),
        e2t_instances: ee,
        xapp_instances: ex,
    };
    log::info!("n_cns={n_cns}: heuristic {:?}, exact {:?} {:?}", h.cost, e.status, e.best_cost);
    vec![exact, heuristic]
}

/// Runs every point, on up to `opts.jobs` threads. Rows come back ordered
/// by `(n_cns, strategy)` whatever the completion order.
pub fn run_sweep(opts: &SweepOptions) -> Vec<SweepRow> {
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::new());
    let workers = opts.jobs.clamp(1, opts.cns.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&n) = opts.cns.get(k) else { break };
                let rows = run_point(opts, n);
                done.lock().expect("sweep worker panicked").push((k, rows));
            });
        }
    });
    let mut points = done.into_inner().expect("sweep worker panicked");
    points.sort_by_key(|(k, _)| *k);
    let mut rows: Vec<SweepRow> = points.into_iter().flat_map(|(_, r)| r).collect();
    rows.sort_by(|a, b| (a.n_cns, a.strategy).cmp(&(b.n_cns, b.strategy)));
    rows
}

/// Sweep points where the heuristic E2T count went up from the previous
/// point, in `n_cns` order.
pub fn e2t_increases(rows: &[SweepRow]) -> Vec<usize> {
    let counts: Vec<(usize, usize)> =
        rows.iter().filter(|r| r.strategy == "heuristic").filter_map(|r| Some((r.n_cns, r.e2t_instances?))).collect();
    counts.windows(2).filter(|w| w[1].1 > w[0].1).map(|w| w[1].0).collect()
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.n_cns.to_string(),
            r.strategy.to_string(),
            r.status.clone(),
            cell(r.cost),
            cell(r.elapsed_s),
            cell(r.e2t_instances),
            cell(r.xapp_instances),
        ])?;
    }
    w.flush()?;
    Ok(())
}
