//! Plain-text dump of a fractional point.
//!
//! ```text
//! # comment
//! N 5
//! K 2
//! s 1 2 0.5
//! z 1 2 0.25
//! f 3 0 1 0.75
//! ```
//!
//! `N` and `K` come first; each remaining line is one nonzero variable:
//! family, indices (`z i j`, `s i j` with `i < j`, `f k i j`), value.

use std::fmt::Write as _;

use super::variables::{Family, FractionalPoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A fractional point together with the repairman count it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFile<T> {
    pub k: usize,
    pub point: FractionalPoint<T>,
}

pub fn write_point<T: Scalar>(k: usize, point: &FractionalPoint<T>) -> String {
    let mut out = String::new();
    writeln!(out, "N {}", point.n()).unwrap();
    writeln!(out, "K {k}").unwrap();
    for (family, idx, v) in point.entries() {
        if v == T::zero() {
            continue;
        }
        let idx: Vec<String> = idx.iter().map(usize::to_string).collect();
        writeln!(out, "{} {} {v}", family.symbol(), idx.join(" ")).unwrap();
    }
    out
}

pub fn parse_point<T: Scalar>(text: &str) -> Result<PointFile<T>> {
    let mut n = None;
    let mut k = None;
    let mut point: Option<FractionalPoint<T>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let header_value = |tokens: &[&str]| -> Result<usize> {
            match tokens {
                [_, v] => v
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad count '{v}'"))),
                _ => Err(Error::parse(line_no, "expected '<KEY> <count>'")),
            }
        };
        match tokens[0] {
            "N" => {
                let v = header_value(&tokens)?;
                if v == 0 {
                    return Err(Error::parse(line_no, "N must be positive"));
                }
                n = Some(v);
                point = Some(FractionalPoint::zeros(v));
            }
            "K" => k = Some(header_value(&tokens)?),
            sym @ ("z" | "s" | "f") => {
                let p = point
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, "variable before N header"))?;
                let (family, arity) = match sym {
                    "z" => (Family::Z, 2),
                    "s" => (Family::S, 2),
                    _ => (Family::F, 3),
                };
                if tokens.len() != arity + 2 {
                    return Err(Error::parse(
                        line_no,
                        format!("'{sym}' takes {arity} indices and a value"),
                    ));
                }
                let n = p.n();
                let mut idx = Vec::with_capacity(arity);
                for t in &tokens[1..=arity] {
                    let v: usize = t
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad index '{t}'")))?;
                    if v > n {
                        return Err(Error::parse(line_no, format!("index {v} exceeds N = {n}")));
                    }
                    idx.push(v);
                }
                let value: T = tokens[arity + 1]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad value '{}'", tokens[arity + 1])))?;
                *p.entry_mut(family, &idx) = value;
            }
            other => return Err(Error::parse(line_no, format!("unknown record '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing N header"))?;
    let k = k.ok_or_else(|| Error::parse(0, "missing K header"))?;
    if k == 0 || k > n {
        return Err(Error::parse(0, format!("K = {k} must be in 1..={n}")));
    }
    let point = point.expect("set together with N");
    point.check_bounds()?;
    Ok(PointFile { k, point })
}
