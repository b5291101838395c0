//! File formats: the canonical instance format, TSPLIB/CVRP coordinate
//! files, the rig-network layout and solution files.

mod canonical;
mod rig;
mod tsplib;

pub use canonical::{parse_instance, write_instance};
pub use rig::parse_rig;
pub use tsplib::{k_from_name, parse_cvrp, parse_tsplib_coords, Coordinates};

use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Instance file formats recognised by [`parse_any`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Canonical,
    Cvrp,
    Rig,
}

/// Guesses the format from the section keywords present in `text`.
pub fn detect_format(text: &str) -> Format {
    let has = |kw: &str| text.lines().any(|l| l.trim_start().starts_with(kw));
    if has("NODE_COORD_SECTION") {
        Format::Cvrp
    } else if has("RIG_COORDS") {
        Format::Rig
    } else {
        Format::Canonical
    }
}

/// Parses any supported instance format. `k` overrides the number of
/// repairmen for CVRP files.
pub fn parse_any<T: Scalar>(text: &str, k: Option<usize>) -> Result<Instance<T>> {
    match detect_format(text) {
        Format::Canonical => {
            let inst = parse_instance(text)?;
            match k {
                Some(k) if k != inst.k() => inst.with_k(k),
                _ => Ok(inst),
            }
        }
        Format::Cvrp => parse_cvrp(text, k),
        Format::Rig => parse_rig(text),
    }
}

/// One route per line as space-separated client ids. Blank lines and `#`
/// comments are ignored.
pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut routes = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let route = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::parse(idx + 1, format!("client id expected, found {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        routes.push(route);
    }
    Ok(Solution::new(routes))
}

pub fn write_solution(solution: &Solution) -> String {
    let mut out = String::new();
    for route in solution.routes() {
        let ids: Vec<String> = route.iter().map(usize::to_string).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

/// Formats a value for the canonical format: shortest round-trip decimal,
/// `INF` for a forbidden arc.
pub(crate) fn format_value<T: Scalar>(v: T) -> String {
    if v.is_infinite() && v > T::zero() {
        "INF".to_string()
    } else {
        v.to_string()
    }
}

pub(crate) fn parse_value<T: Scalar>(tok: &str, line: usize) -> Result<T> {
    if tok.eq_ignore_ascii_case("inf") {
        return Ok(T::infinity());
    }
    let v: T = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("number expected, found {tok:?}")))?;
    if v.is_nan() {
        return Err(Error::parse(line, "NaN is not a valid value"));
    }
    Ok(v)
}
