use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use wktrp::bench::{bench_csv, bench_instance};
use wktrp::cuts::{cut_violation, separate_all, DEFAULT_EPSILON};
use wktrp::ils::trace_csv;
use wktrp::io::{parse_any, parse_solution, write_instance, write_solution};
use wktrp::milp::parse_point;
use wktrp::model::{check_feasibility, make_ktrp};
use wktrp::{evaluate_weighted_latency, exact_solve, ils_multi_run, IlsParams, InstanceF64, Solution};

#[derive(Parser)]
#[command(name = "wktrp", version, about = "Weighted k-traveling repairman solver toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Ils,
    Exact,
}

/// Problem variant the parsed instance is adapted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// Unit weights, no service times.
    Ktrp,
    /// kTRP with a route-duration limit (requires --d).
    Ktrpdc,
    /// The instance as given.
    Wktrp,
    /// Rig-start instance (file must define rig starts).
    Wrrp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Csv,
}

#[derive(clap::Args)]
struct InstanceArgs {
    /// Instance file (canonical, TSPLIB/CVRP or rig layout).
    instance: PathBuf,
    /// Number of repairmen; overrides the file or the `-kN` name suffix.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Variant::Wktrp)]
    variant: Variant,
    /// Route-duration limit.
    #[arg(long)]
    d: Option<f64>,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Base seed; run r uses seed + r.
    #[arg(long, env = "WKTRP_SEED", default_value_t = 0)]
    seed: u64,
    /// Independent ILS runs.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// ILS outer iterations per run.
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the best solution.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Algo::Ils)]
        algo: Algo,
        /// Node limit of the exact search.
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
        /// Write the best solution here, one route per line.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Write the iteration trace of the best ILS run here as CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Validate a solution file against an instance.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        solution: PathBuf,
    },
    /// Convert any supported instance format to the canonical format.
    Convert {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Separate the valid inequalities violated by a fractional point dump.
    Cuts {
        point: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Run the ILS on every instance of a directory and print a CSV summary.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Wktrp)]
        variant: Variant,
        #[arg(long)]
        d: Option<f64>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, k: Option<usize>, variant: Variant, d: Option<f64>) -> Result<InstanceF64> {
    let text = read(path)?;
    let mut inst: InstanceF64 = parse_any(&text, k).with_context(|| format!("cannot parse {}", path.display()))?;
    if inst.name().is_empty() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        inst = inst.with_name(stem);
    }
    inst = match variant {
        Variant::Wktrp => inst,
        Variant::Ktrp | Variant::Ktrpdc => {
            ensure!(
                inst.rig_starts() == 0,
                "variant {variant:?} cannot be applied to an instance with rig starts"
            );
            make_ktrp(&inst)
        }
        Variant::Wrrp => {
            ensure!(inst.rig_starts() > 0, "variant wrrp needs an instance with rig starts");
            inst
        }
    };
    match (variant, d) {
        (Variant::Ktrpdc, None) => bail!("variant ktrpdc requires --d"),
        (_, Some(d)) => Ok(inst.with_duration_limit(d)?),
        (_, None) => Ok(inst),
    }
}

fn ils_params(search: &SearchArgs, record_trace: bool) -> Result<IlsParams> {
    ensure!(search.runs >= 1, "--runs must be at least 1");
    let time_limit = search
        .time_limit
        .map(|s| {
            ensure!(s.is_finite() && s > 0.0, "--time-limit must be a positive number of seconds");
            Ok(Duration::from_secs_f64(s))
        })
        .transpose()?;
    Ok(IlsParams {
        max_iterations: search.iters,
        time_limit,
        record_trace,
        ..IlsParams::with_seed(search.seed)
    })
}

fn route_lines(solution: &Solution) -> String {
    solution
        .routes()
        .iter()
        .enumerate()
        .map(|(r, route)| {
            let ids: Vec<String> = route.iter().map(usize::to_string).collect();
            format!("route {}: {}\n", r + 1, ids.join(" "))
        })
        .collect()
}

const SOLVE_HEADER: &str = "instance,n,k,algo,seed,cost,feasible,proven,time_s";

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve {
            instance,
            search,
            algo,
            node_limit,
            report,
            output,
            log,
        } => {
            let inst = load(&instance.instance, instance.k, instance.variant, instance.d)?;
            let (best, rows) = match algo {
                Algo::Exact => {
                    let start = Instant::now();
                    let out = exact_solve(&inst, node_limit)?;
                    let feasible = check_feasibility(&inst, &out.solution).is_feasible();
                    let row = format!(
                        "{},{},{},exact,,{:.2},{feasible},{},{:.3}",
                        inst.name(),
                        inst.n(),
                        inst.k(),
                        out.cost,
                        out.proven,
                        start.elapsed().as_secs_f64()
                    );
                    let note = if out.proven { "proven optimal" } else { "node limit reached, not proven" };
                    (out.solution, vec![(row, note.to_string())])
                }
                Algo::Ils => {
                    let params = ils_params(&search, log.is_some())?;
                    let outcomes = ils_multi_run(&inst, &params, search.runs)?;
                    let best = outcomes
                        .iter()
                        .min_by(|a, b| {
                            a.violation
                                .total_cmp(&b.violation)
                                .then(a.cost.total_cmp(&b.cost))
                        })
                        .expect("at least one run");
                    if let Some(path) = &log {
                        write_or_print(Some(path), &trace_csv(&best.stats.trace))?;
                    }
                    let rows = outcomes
                        .iter()
                        .enumerate()
                        .map(|(r, o)| {
                            let seed = search.seed.wrapping_add(r as u64);
                            let row = format!(
                                "{},{},{},ils,{seed},{:.2},{},,{:.3}",
                                inst.name(),
                                inst.n(),
                                inst.k(),
                                o.cost,
                                o.violation == 0.0,
                                o.stats.elapsed.as_secs_f64()
                            );
                            let note = format!(
                                "seed {seed}: cost {:.2} after {} iterations (best at {})",
                                o.cost, o.stats.iterations, o.stats.best_iteration
                            );
                            (row, note)
                        })
                        .collect();
                    (best.solution.clone(), rows)
                }
            };
            let cost = evaluate_weighted_latency(&inst, &best)?.total;
            if let Some(path) = &output {
                write_or_print(Some(path), &write_solution(&best))?;
            }
            match report {
                Report::Csv => {
                    println!("{SOLVE_HEADER}");
                    for (row, _) in &rows {
                        println!("{row}");
                    }
                }
                Report::Text => {
                    println!("instance {} (n = {}, K = {})", inst.name(), inst.n(), inst.k());
                    for (_, note) in &rows {
                        println!("{note}");
                    }
                    println!("best cost {cost:.2} ({cost})");
                    let report = check_feasibility(&inst, &best);
                    println!("feasible {}", report.is_feasible());
                    print!("{}", route_lines(&best));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { instance, solution } => {
            let inst = load(&instance.instance, instance.k, instance.variant, instance.d)?;
            let sol = parse_solution(&read(&solution)?)
                .with_context(|| format!("cannot parse {}", solution.display()))?;
            let report = check_feasibility(&inst, &sol);
            if let Some(problem) = &report.structure {
                println!("invalid: {problem}");
                return Ok(ExitCode::FAILURE);
            }
            let cost = evaluate_weighted_latency(&inst, &sol)?.total;
            println!("cost {cost:.2} ({cost})");
            for v in &report.duration_violations {
                println!(
                    "route {} lasts {} beyond the limit {}",
                    v.route + 1,
                    v.duration,
                    v.limit
                );
            }
            for v in &report.deadline_violations {
                println!(
                    "client {} completes at {} after its deadline {}",
                    v.client, v.latency, v.deadline
                );
            }
            if cost.is_infinite() {
                println!("infeasible: a forbidden arc is used");
                return Ok(ExitCode::FAILURE);
            }
            if !report.is_feasible() {
                println!("infeasible");
                return Ok(ExitCode::FAILURE);
            }
            println!("feasible");
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { instance, output } => {
            let inst = load(&instance.instance, instance.k, instance.variant, instance.d)?;
            write_or_print(output.as_deref(), &write_instance(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cuts { point, epsilon } => {
            let file = parse_point::<f64>(&read(&point)?)
                .with_context(|| format!("cannot parse {}", point.display()))?;
            let cuts = separate_all(&file.point, file.k, epsilon);
            for cut in &cuts {
                println!("{cut}  violation {}", cut_violation(cut, &file.point));
            }
            eprintln!("{} cuts", cuts.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            dir,
            k,
            variant,
            d,
            search,
            output,
        } => {
            let params = ils_params(&search, false)?;
            let mut files: Vec<PathBuf> = fs::read_dir(&dir)
                .with_context(|| format!("cannot list {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .is_some_and(|e| matches!(e.to_str(), Some("vrp" | "wktrp" | "rig")))
                })
                .collect();
            files.sort();
            ensure!(!files.is_empty(), "no .vrp, .wktrp or .rig files in {}", dir.display());
            let mut rows = Vec::with_capacity(files.len());
            for path in &files {
                let inst = load(path, k, variant, d)?;
                rows.push(bench_instance(&inst, &params, search.runs)?);
            }
            write_or_print(output.as_deref(), &bench_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
