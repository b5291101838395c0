//! Workover-rig networks.
//!
//! Layout (one record per line, `#` comments allowed):
//!
//! ```text
//! NAME field-a
//! RIGS 2
//! CLIENTS 3
//! RIG_COORDS
//! x y                            (RIGS lines)
//! CLIENT_DATA
//! x y weight service deadline    (CLIENTS lines; deadline may be INF)
//! EOF
//! ```
//!
//! Travel times are Euclidean distances between locations. The result is
//! the single-depot instance built by [`wrrp_transform`] with `K = RIGS`.

use super::parse_value;
use super::tsplib::euclidean;
use crate::error::{Error, Result};
use crate::model::{wrrp_transform, Instance, RigClient};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Rigs,
    Clients,
}

pub fn parse_rig<T: Scalar>(text: &str) -> Result<Instance<T>> {
    let mut name = String::new();
    let mut rigs: Option<usize> = None;
    let mut client_count: Option<usize> = None;
    let mut rig_points: Vec<(f64, f64)> = Vec::new();
    let mut client_points: Vec<(f64, f64)> = Vec::new();
    let mut clients: Vec<RigClient<T>> = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;
    let mut terminated = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let count = |tok: Option<&&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(line_no, format!("{} expects an integer", toks[0])))
        };
        match toks[0] {
            "NAME" => name = line["NAME".len()..].trim().to_string(),
            "RIGS" => rigs = Some(count(toks.get(1))?),
            "CLIENTS" => client_count = Some(count(toks.get(1))?),
            "RIG_COORDS" => section = Section::Rigs,
            "CLIENT_DATA" => section = Section::Clients,
            "EOF" => {
                terminated = true;
                break;
            }
            _ => {
                let coord = |tok: &str| -> Result<f64> {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(line_no, format!("coordinate expected, found {tok:?}")))
                };
                match section {
                    Section::Rigs => {
                        if toks.len() != 2 {
                            return Err(Error::parse(line_no, "rig record must be `x y`"));
                        }
                        rig_points.push((coord(toks[0])?, coord(toks[1])?));
                    }
                    Section::Clients => {
                        if toks.len() != 5 {
                            return Err(Error::parse(
                                line_no,
                                "client record must be `x y weight service deadline`",
                            ));
                        }
                        client_points.push((coord(toks[0])?, coord(toks[1])?));
                        clients.push(RigClient {
                            weight: parse_value(toks[2], line_no)?,
                            service: parse_value(toks[3], line_no)?,
                            deadline: parse_value(toks[4], line_no)?,
                        });
                    }
                    Section::Header => {
                        return Err(Error::parse(line_no, format!("unknown keyword {:?}", toks[0])));
                    }
                }
            }
        }
    }
    if !terminated {
        return Err(Error::parse(last_line, "missing EOF"));
    }
    let rigs = rigs.ok_or_else(|| Error::parse(last_line, "missing RIGS"))?;
    let expected = client_count.ok_or_else(|| Error::parse(last_line, "missing CLIENTS"))?;
    if rig_points.len() != rigs {
        return Err(Error::parse(
            last_line,
            format!("RIGS is {rigs} but {} rig records were given", rig_points.len()),
        ));
    }
    if clients.len() != expected {
        return Err(Error::parse(
            last_line,
            format!("CLIENTS is {expected} but {} client records were given", clients.len()),
        ));
    }
    let locations: Vec<(f64, f64)> = rig_points.into_iter().chain(client_points).collect();
    let travel = euclidean::<T>(&locations);
    Ok(wrrp_transform(rigs, &clients, &travel)?.with_name(name))
}
