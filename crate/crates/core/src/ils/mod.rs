//! Iterated local search: random round-robin construction, a descent that
//! alternates relocate and 2-opt*, acceptance against the incumbent, and
//! the p-relocate perturbation with a stagnation-driven `p`.

mod search;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{evaluate_weighted_latency, Instance, Solution};
use crate::scalar::Scalar;

pub use search::{build_initial_solution, p_relocate, relocate, two_opt_star, LocalSearch};

#[derive(Debug, Clone, PartialEq)]
pub struct IlsParams {
    /// Seed of the ChaCha8 stream driving every random choice.
    pub seed: u64,
    /// Outer-loop iterations.
    pub max_iterations: u64,
    /// Optional wall-clock limit, checked before each outer iteration.
    pub time_limit: Option<Duration>,
    /// The current solution is replaced by the incumbent when
    /// `cost(curr) * acceptance_factor > cost(best)`.
    pub acceptance_factor: f64,
    /// Probability of running 2-opt* after an improving relocate.
    pub two_opt_probability: f64,
    /// Record `(iteration, current, best)` after every outer iteration.
    pub record_trace: bool,
}

impl Default for IlsParams {
    fn default() -> Self {
        Self {
            seed: 0,
            max_iterations: 10_000,
            time_limit: None,
            acceptance_factor: 0.95,
            two_opt_probability: 0.5,
            record_trace: false,
        }
    }
}

impl IlsParams {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidInstance("max_iterations must be at least 1".into()));
        }
        if !(self.acceptance_factor > 0.0 && self.acceptance_factor <= 1.0) {
            return Err(Error::InvalidInstance(format!(
                "acceptance factor {} must lie in (0, 1]",
                self.acceptance_factor
            )));
        }
        if !(0.0..=1.0).contains(&self.two_opt_probability) {
            return Err(Error::InvalidInstance(format!(
                "2-opt* probability {} must lie in [0, 1]",
                self.two_opt_probability
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub iteration: u64,
    pub current: T,
    pub best: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlsStats<T> {
    pub iterations: u64,
    /// Iteration (1-based) at which the returned solution was found; 0 for
    /// the initial solution.
    pub best_iteration: u64,
    pub elapsed: Duration,
    pub trace: Vec<TraceRow<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlsOutcome<T> {
    pub solution: Solution,
    /// Weighted latency of `solution` (`+infinity` if it uses a forbidden arc).
    pub cost: T,
    /// Excess over finite duration limits or deadlines plus forbidden arcs
    /// used; zero for a feasible solution.
    pub violation: T,
    pub stats: IlsStats<T>,
}

/// Runs the iterated local search on `instance`.
pub fn ils_run<T: Scalar>(instance: &Instance<T>, params: &IlsParams) -> Result<IlsOutcome<T>> {
    params.validate()?;
    let start = Instant::now();
    let n = instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let initial = build_initial_solution(instance, &mut rng)?;
    let mut curr = LocalSearch::new(instance, &initial)?;
    let mut best = initial;
    let mut best_score = curr.score();
    let mut best_cost = curr.cost();
    let mut best_iteration = 0;
    let mut p = n / instance.k();
    let p_cap = n.saturating_sub(2);
    let mut last_curr: Option<Solution> = None;
    let factor = T::of(params.acceptance_factor);
    let mut trace = Vec::new();
    let mut iterations = 0;

    while iterations < params.max_iterations {
        if params.time_limit.is_some_and(|limit| start.elapsed() >= limit) {
            break;
        }
        iterations += 1;

        loop {
            let mut improved = curr.relocate(&mut rng);
            if !improved || rng.gen_bool(params.two_opt_probability) {
                improved = curr.two_opt_star(&mut rng);
            }
            if !improved {
                break;
            }
        }

        let score = curr.score();
        if score.compare(&best_score) == Ordering::Less {
            best = curr.solution();
            best_score = score;
            best_cost = curr.cost();
            best_iteration = iterations;
        } else {
            let worse_violation = score.violation > best_score.violation + T::of(1e-9);
            let equal_violation = !worse_violation && score.violation + T::of(1e-9) >= best_score.violation;
            if worse_violation || (equal_violation && score.cost * factor > best_score.cost) {
                curr.set_solution(&best);
            }
        }

        let now = curr.solution();
        if p < p_cap && last_curr.as_ref().is_some_and(|last| last.same_routes(&now)) {
            p += 1;
        }
        if params.record_trace {
            trace.push(TraceRow {
                iteration: iterations,
                current: curr.cost(),
                best: best_cost,
            });
        }
        last_curr = Some(now);
        curr.p_relocate(p, &mut rng);
    }

    let cost = evaluate_weighted_latency(instance, &best)?.total;
    Ok(IlsOutcome {
        solution: best,
        cost,
        violation: best_score.violation,
        stats: IlsStats {
            iterations,
            best_iteration,
            elapsed: start.elapsed(),
            trace,
        },
    })
}

/// Runs `runs` independent searches with seeds `params.seed + r` on separate
/// threads. Results are returned in seed order.
pub fn ils_multi_run<T: Scalar>(
    instance: &Instance<T>,
    params: &IlsParams,
    runs: usize,
) -> Result<Vec<IlsOutcome<T>>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(runs.max(1));
    let seeds: Vec<u64> = (0..runs as u64).map(|r| params.seed.wrapping_add(r)).collect();
    let mut results: Vec<Option<Result<IlsOutcome<T>>>> = (0..runs).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<_> = results
            .chunks_mut(runs.div_ceil(threads).max(1))
            .zip(seeds.chunks(runs.div_ceil(threads).max(1)))
            .collect();
        for (slots, seeds) in chunks {
            scope.spawn(move || {
                for (slot, &seed) in slots.iter_mut().zip(seeds) {
                    let p = IlsParams {
                        seed,
                        ..params.clone()
                    };
                    *slot = Some(ils_run(instance, &p));
                }
            });
        }
    });
    results.into_iter().map(|r| r.expect("every run completes")).collect()
}

/// CSV run log with header `iteration,current_cost,best_cost`.
pub fn trace_csv<T: Scalar>(trace: &[TraceRow<T>]) -> String {
    let mut out = String::from("iteration,current_cost,best_cost\n");
    for row in trace {
        out.push_str(&format!("{},{},{}\n", row.iteration, row.current, row.best));
    }
    out
}
