//! Multi-seed benchmark rows in the min/avg/max reporting shape.

use crate::error::Result;
use crate::ils::{ils_multi_run, IlsParams};
use crate::model::Instance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub runs: usize,
    pub min_cost: f64,
    pub avg_cost: f64,
    pub max_cost: f64,
    /// Wall-clock seconds per run.
    pub min_time: f64,
    pub avg_time: f64,
    pub max_time: f64,
}

pub const BENCH_HEADER: &str =
    "instance,n,k,runs,min_cost,avg_cost,max_cost,min_time_s,avg_time_s,max_time_s";

impl BenchRow {
    /// CSV line; costs with two decimals, times with three.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.2},{:.2},{:.2},{:.3},{:.3},{:.3}",
            self.instance,
            self.n,
            self.k,
            self.runs,
            self.min_cost,
            self.avg_cost,
            self.max_cost,
            self.min_time,
            self.avg_time,
            self.max_time
        )
    }
}

fn min_avg_max(values: &[f64]) -> (f64, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = values.iter().sum::<f64>() / values.len() as f64;
    (min, avg, max)
}

/// Runs the ILS `runs` times with seeds `params.seed + r`.
pub fn bench_instance<T: Scalar>(instance: &Instance<T>, params: &IlsParams, runs: usize) -> Result<BenchRow> {
    let runs = runs.max(1);
    let outcomes = ils_multi_run(instance, params, runs)?;
    let costs: Vec<f64> = outcomes.iter().map(|o| o.cost.as_f64()).collect();
    let times: Vec<f64> = outcomes.iter().map(|o| o.stats.elapsed.as_secs_f64()).collect();
    let (min_cost, avg_cost, max_cost) = min_avg_max(&costs);
    let (min_time, avg_time, max_time) = min_avg_max(&times);
    Ok(BenchRow {
        instance: instance.name().to_string(),
        n: instance.n(),
        k: instance.k(),
        runs,
        min_cost,
        avg_cost,
        max_cost,
        min_time,
        avg_time,
        max_time,
    })
}

/// Header plus one line per row, in the given order.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}
