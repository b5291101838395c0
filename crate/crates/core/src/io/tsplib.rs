//! TSPLIB coordinate files and the CVRP benchmark sets built on them.
//!
//! Travel times are unrounded Euclidean distances. The classic CVRP
//! convention rounds them to integers; the latency optima reported for these
//! sets are fractional, so rounding is deliberately not applied.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;

/// Points of a `NODE_COORD_SECTION`, sorted by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct Coordinates<T> {
    pub name: String,
    pub ids: Vec<usize>,
    pub points: Vec<(f64, f64)>,
    /// First id of the `DEPOT_SECTION`, if any.
    pub depot: Option<usize>,
    /// Symmetric Euclidean distances between `points`.
    pub travel: Vec<Vec<T>>,
}

impl<T: Scalar> Coordinates<T> {
    fn position(&self, id: usize) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }
}

pub(crate) fn euclidean<T: Scalar>(points: &[(f64, f64)]) -> Vec<Vec<T>> {
    points
        .iter()
        .map(|a| points.iter().map(|b| T::of((a.0 - b.0).hypot(a.1 - b.1))).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Coords,
    Depot,
    Skip,
}

/// Reads the node coordinates and depot of a TSPLIB file. Other sections
/// (demands, capacity) are ignored.
pub fn parse_tsplib_coords<T: Scalar>(text: &str) -> Result<Coordinates<T>> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut coords: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    let mut depot: Option<usize> = None;
    let mut depot_done = false;
    let mut seen_coords = false;
    let mut section = Section::Header;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let keyword = line.split([' ', ':', '\t']).next().unwrap_or("");
        if keyword.ends_with("_SECTION") {
            section = match keyword {
                "NODE_COORD_SECTION" => {
                    if seen_coords {
                        return Err(Error::parse(line_no, "duplicate NODE_COORD_SECTION"));
                    }
                    seen_coords = true;
                    Section::Coords
                }
                "DEPOT_SECTION" => Section::Depot,
                _ => Section::Skip,
            };
            continue;
        }
        let starts_numeric = line.starts_with(|c: char| c.is_ascii_digit() || c == '-');
        if !starts_numeric {
            // header entry `KEY : value`
            section = Section::Header;
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => line.split_once(char::is_whitespace).map_or((line, ""), |(k, v)| (k.trim(), v.trim())),
            };
            match key {
                "NAME" => name = value.to_string(),
                "DIMENSION" => {
                    dimension = Some(value.parse().map_err(|_| {
                        Error::parse(line_no, format!("DIMENSION expects an integer, found {value:?}"))
                    })?)
                }
                "EDGE_WEIGHT_TYPE" if !matches!(value, "EUC_2D" | "EXACT_2D" | "") => {
                    return Err(Error::parse(
                        line_no,
                        format!("edge weight type {value} is not supported; coordinates must be 2-D Euclidean"),
                    ));
                }
                _ => {}
            }
            continue;
        }
        match section {
            Section::Coords => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(Error::parse(line_no, format!("expected `id x y`, found {line:?}")));
                }
                let id: usize = toks[0]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("node id expected, found {:?}", toks[0])))?;
                let coord = |tok: &str| -> Result<f64> {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(line_no, format!("coordinate expected, found {tok:?}")))
                };
                let point = (coord(toks[1])?, coord(toks[2])?);
                if coords.insert(id, point).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate node id {id}")));
                }
            }
            Section::Depot => {
                for tok in line.split_whitespace() {
                    let v: i64 = tok
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("depot id expected, found {tok:?}")))?;
                    if v == -1 {
                        depot_done = true;
                    } else if !depot_done && depot.is_none() {
                        depot = Some(v as usize);
                    }
                }
            }
            Section::Skip => {}
            Section::Header => {
                return Err(Error::parse(line_no, format!("data outside a section: {line:?}")));
            }
        }
    }
    if !seen_coords || coords.is_empty() {
        return Err(Error::parse(last_line, "missing or empty NODE_COORD_SECTION"));
    }
    if let Some(d) = dimension {
        if d != coords.len() {
            return Err(Error::parse(
                last_line,
                format!("DIMENSION is {d} but {} nodes were listed", coords.len()),
            ));
        }
    }
    let ids: Vec<usize> = coords.keys().copied().collect();
    let points: Vec<(f64, f64)> = coords.values().copied().collect();
    let travel = euclidean(&points);
    let out = Coordinates {
        name,
        ids,
        points,
        depot,
        travel,
    };
    if let Some(d) = depot {
        if out.position(d).is_none() {
            return Err(Error::parse(last_line, format!("depot {d} is not a listed node")));
        }
    }
    Ok(out)
}

/// Number of vehicles encoded as a `-kN` suffix in a benchmark name, e.g.
/// `E-n22-k4` gives 4.
pub fn k_from_name(name: &str) -> Option<usize> {
    name.rsplit('-').find_map(|part| {
        let digits = part.strip_prefix(['k', 'K'])?;
        let digits: String = digits.chars().take_while(char::is_ascii_digit).collect();
        digits.parse().ok().filter(|&k| k > 0)
    })
}

/// A CVRP file as a kTRP instance: capacity and demands are dropped,
/// every client has weight 1 and no service time. `k` overrides the
/// vehicle count taken from the name.
pub fn parse_cvrp<T: Scalar>(text: &str, k: Option<usize>) -> Result<Instance<T>> {
    let coords: Coordinates<T> = parse_tsplib_coords(text)?;
    let depot_id = coords
        .depot
        .ok_or_else(|| Error::InvalidInstance("CVRP file has no DEPOT_SECTION entry".into()))?;
    let k = match k.or_else(|| k_from_name(&coords.name)) {
        Some(k) => k,
        None => {
            return Err(Error::InvalidInstance(format!(
                "cannot read the number of vehicles from name {:?}; pass it explicitly",
                coords.name
            )))
        }
    };
    let depot = coords.position(depot_id).expect("depot was checked");
    let order: Vec<usize> = std::iter::once(depot)
        .chain((0..coords.ids.len()).filter(|&p| p != depot))
        .collect();
    let rows = order
        .iter()
        .map(|&a| order.iter().map(|&b| coords.travel[a][b]).collect())
        .collect();
    let n = order.len() - 1;
    Ok(Instance::from_rows(k, rows, vec![T::one(); n], vec![T::zero(); n])?.with_name(coords.name))
}
