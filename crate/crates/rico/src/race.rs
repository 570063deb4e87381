//! Wall-clock solving: the heuristic and the exact solver run on separate
//! threads, and the exact leg can be abandoned through a shared flag.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Instant;

use rico_core::exact::{solve_exact_with, Clock, ExactResult, ExactStatus, SolverBudget};
use rico_core::heuristic::{run_heuristic, HeuristicError};
use rico_core::model::{total_cost, Instance, Solution};

#[derive(Clone, Copy, Debug)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Exact solve against real time.
pub fn solve_exact_timed(instance: &Instance, budget: SolverBudget, cancel: Option<&AtomicBool>) -> ExactResult {
    solve_exact_with(instance, budget, &WallClock::start(), cancel)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicOutcome {
    pub result: Result<Solution, HeuristicError>,
    pub cost: Option<f64>,
    pub elapsed: f64,
}

pub fn solve_heuristic_timed(instance: &Instance) -> HeuristicOutcome {
    let t = Instant::now();
    let result = run_heuristic(instance, None).map(|r| r.solution);
    let elapsed = t.elapsed().as_secs_f64();
    let cost = result.as_ref().ok().map(|s| total_cost(instance, s));
    HeuristicOutcome { result, cost, elapsed }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applied {
    Heuristic,
    Exact,
}

impl Applied {
    pub fn name(self) -> &'static str {
        match self {
            Applied::Heuristic => "heuristic",
            Applied::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RaceReport {
    pub heuristic: HeuristicOutcome,
    pub exact: ExactResult,
    pub applied: Option<Applied>,
}

impl RaceReport {
    pub fn applied_solution(&self) -> Option<&Solution> {
        match self.applied? {
            Applied::Heuristic => self.heuristic.result.as_ref().ok(),
            Applied::Exact => self.exact.best.as_ref(),
        }
    }

    pub fn applied_cost(&self) -> Option<f64> {
        match self.applied? {
            Applied::Heuristic => self.heuristic.cost,
            Applied::Exact => self.exact.best_cost,
        }
    }
}

/// The heuristic placement is applied; a proven optimum replaces it only when
/// strictly cheaper. Without a heuristic placement, any exact incumbent is used.
pub fn pick_applied(heuristic: &HeuristicOutcome, exact: &ExactResult) -> Option<Applied> {
    match (heuristic.cost, exact.best_cost) {
        (Some(h), Some(e)) if exact.status == ExactStatus::Optimal && e < h => Some(Applied::Exact),
        (Some(_), _) => Some(Applied::Heuristic),
        (None, Some(_)) => Some(Applied::Exact),
        (None, None) => None,
    }
}

/// Both solvers running in the background.
pub struct RaceHandle {
    cancel: Arc<AtomicBool>,
    heuristic: JoinHandle<HeuristicOutcome>,
    exact: JoinHandle<ExactResult>,
}

impl RaceHandle {
    /// Asks the exact leg to stop at its next node; it then reports its
    /// incumbent as a timeout.
    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn join(self) -> RaceReport {
        let heuristic = self.heuristic.join().expect("heuristic thread panicked");
        let exact = self.exact.join().expect("exact thread panicked");
        let applied = pick_applied(&heuristic, &exact);
        RaceReport { heuristic, exact, applied }
    }
}

pub fn spawn_race(instance: Arc<Instance>, budget: SolverBudget) -> RaceHandle {
    let cancel = Arc::new(AtomicBool::new(false));
    let exact = {
        let (instance, cancel) = (Arc::clone(&instance), Arc::clone(&cancel));
        thread::spawn(move || solve_exact_timed(&instance, budget, Some(&cancel)))
    };
    let heuristic = thread::spawn(move || solve_heuristic_timed(&instance));
    RaceHandle { cancel, heuristic, exact }
}

/// Runs both legs to completion (the exact one within `budget`).
pub fn race(instance: &Instance, budget: SolverBudget) -> RaceReport {
    spawn_race(Arc::new(instance.clone()), budget).join()
}
