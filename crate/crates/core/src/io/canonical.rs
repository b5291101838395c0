//! The canonical plain-text instance format:
//!
//! ```text
//! NAME example
//! N 2
//! K 1
//! D 100          (optional route-duration limit)
//! DELTA 0        (optional number of rig starts)
//! WEIGHTS
//! 1 1
//! SERVICE
//! 0 0
//! DEADLINES      (optional, n values)
//! 10 INF
//! MATRIX
//! 0 3 4
//! 3 0 5
//! 4 5 0
//! EOF
//! ```
//!
//! Values are written in shortest round-trip form, so parsing a written
//! instance reproduces it exactly. Lines starting with `#` are comments.

use super::{format_value, parse_value};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;

pub fn write_instance<T: Scalar>(instance: &Instance<T>) -> String {
    let n = instance.n();
    let mut out = String::new();
    let row = |values: &mut dyn Iterator<Item = T>| values.map(format_value).collect::<Vec<_>>().join(" ");
    if instance.name().is_empty() {
        out.push_str("NAME\n");
    } else {
        out.push_str(&format!("NAME {}\n", instance.name()));
    }
    out.push_str(&format!("N {n}\nK {}\n", instance.k()));
    if let Some(d) = instance.duration_limit() {
        out.push_str(&format!("D {}\n", format_value(d)));
    }
    if instance.rig_starts() > 0 {
        out.push_str(&format!("DELTA {}\n", instance.rig_starts()));
    }
    out.push_str("WEIGHTS\n");
    out.push_str(&row(&mut instance.weights().iter().copied()));
    out.push_str("\nSERVICE\n");
    out.push_str(&row(&mut instance.service_times().iter().copied()));
    out.push('\n');
    if let Some(deadlines) = instance.deadlines() {
        out.push_str("DEADLINES\n");
        out.push_str(&row(&mut deadlines.iter().copied()));
        out.push('\n');
    }
    out.push_str("MATRIX\n");
    for i in 0..=n {
        out.push_str(&row(&mut (0..=n).map(|j| instance.travel(i, j))));
        out.push('\n');
    }
    out.push_str("EOF\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Weights,
    Service,
    Deadlines,
    Matrix,
}

impl Section {
    fn keyword(self) -> &'static str {
        match self {
            Section::Weights => "WEIGHTS",
            Section::Service => "SERVICE",
            Section::Deadlines => "DEADLINES",
            Section::Matrix => "MATRIX",
        }
    }
}

pub fn parse_instance<T: Scalar>(text: &str) -> Result<Instance<T>> {
    let mut name: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut k: Option<usize> = None;
    let mut d: Option<T> = None;
    let mut delta: Option<usize> = None;
    let mut sections: Vec<(Section, usize, Vec<T>)> = Vec::new();
    let mut current: Option<usize> = None;
    let mut terminated = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if terminated {
            return Err(Error::parse(line_no, "content after EOF"));
        }
        let mut parts = line.splitn(2, char::is_whitespace);
        let head = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("").trim();
        let count = |rest: &str| -> Result<usize> {
            rest.parse()
                .map_err(|_| Error::parse(line_no, format!("{head} expects a non-negative integer, found {rest:?}")))
        };
        let section = match head {
            "WEIGHTS" => Some(Section::Weights),
            "SERVICE" => Some(Section::Service),
            "DEADLINES" => Some(Section::Deadlines),
            "MATRIX" => Some(Section::Matrix),
            _ => None,
        };
        if let Some(section) = section {
            if !rest.is_empty() {
                return Err(Error::parse(line_no, format!("{head} takes no value on its line")));
            }
            if sections.iter().any(|(s, _, _)| *s == section) {
                return Err(Error::parse(line_no, format!("duplicate {head} section")));
            }
            sections.push((section, line_no, Vec::new()));
            current = Some(sections.len() - 1);
            continue;
        }
        let header_seen = |seen: bool| -> Result<()> {
            if seen {
                Err(Error::parse(line_no, format!("duplicate {head} line")))
            } else if current.is_some() {
                Err(Error::parse(line_no, format!("{head} must precede the data sections")))
            } else {
                Ok(())
            }
        };
        match head {
            "NAME" => {
                header_seen(name.is_some())?;
                name = Some(rest.to_string());
            }
            "N" => {
                header_seen(n.is_some())?;
                n = Some(count(rest)?);
            }
            "K" => {
                header_seen(k.is_some())?;
                k = Some(count(rest)?);
            }
            "D" => {
                header_seen(d.is_some())?;
                d = Some(parse_value(rest, line_no)?);
            }
            "DELTA" => {
                header_seen(delta.is_some())?;
                delta = Some(count(rest)?);
            }
            "EOF" => terminated = true,
            _ => {
                let Some(cur) = current else {
                    return Err(Error::parse(line_no, format!("unknown keyword {head:?}")));
                };
                for tok in line.split_whitespace() {
                    sections[cur].2.push(parse_value(tok, line_no)?);
                }
            }
        }
    }
    if !terminated {
        return Err(Error::parse(last_line, "missing EOF"));
    }
    let n = n.ok_or_else(|| Error::parse(last_line, "missing N"))?;
    let k = k.ok_or_else(|| Error::parse(last_line, "missing K"))?;
    let mut take = |section: Section, expected: usize, required: bool| -> Result<Option<Vec<T>>> {
        let Some(pos) = sections.iter().position(|(s, _, _)| *s == section) else {
            return if required {
                Err(Error::parse(last_line, format!("missing {} section", section.keyword())))
            } else {
                Ok(None)
            };
        };
        let (_, line, values) = sections.swap_remove(pos);
        if values.len() != expected {
            return Err(Error::parse(
                line,
                format!("{} has {} values, expected {expected}", section.keyword(), values.len()),
            ));
        }
        Ok(Some(values))
    };
    let weights = take(Section::Weights, n, true)?.unwrap_or_default();
    let service = take(Section::Service, n, true)?.unwrap_or_default();
    let deadlines = take(Section::Deadlines, n, false)?;
    let matrix = take(Section::Matrix, (n + 1) * (n + 1), true)?.unwrap_or_default();

    let mut inst = Instance::new(k, matrix, weights, service)?.with_name(name.unwrap_or_default());
    if let Some(d) = d {
        inst = inst.with_duration_limit(d)?;
    }
    if let Some(deadlines) = deadlines {
        inst = inst.with_deadlines(deadlines)?;
    }
    if let Some(delta) = delta {
        inst = inst.with_rig_starts(delta)?;
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{wrrp_transform, RigClient};

    const SAMPLE: &str = "NAME example
N 2
K 1
D 100
WEIGHTS
1 2.5
SERVICE
0 1
DEADLINES
10 INF
MATRIX
0 3 4
3 0 INF
4 5 0
EOF
";

    #[test]
    fn parse_sample() {
        let inst: Instance<f64> = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.name(), "example");
        assert_eq!((inst.n(), inst.k()), (2, 1));
        assert_eq!(inst.duration_limit(), Some(100.0));
        assert_eq!(inst.weight(2), 2.5);
        assert_eq!(inst.service(2), 1.0);
        assert_eq!(inst.deadline(1), 10.0);
        assert!(inst.deadline(2).is_infinite());
        assert!(inst.travel(1, 2).is_infinite());
        assert_eq!(inst.travel(2, 1), 5.0);
    }

    #[test]
    fn write_is_inverse_of_parse() {
        let inst: Instance<f64> = parse_instance(SAMPLE).unwrap();
        assert_eq!(write_instance(&inst), SAMPLE);
        let f32_inst: Instance<f32> = parse_instance(SAMPLE).unwrap();
        assert_eq!(write_instance(&f32_inst), SAMPLE);
    }

    #[test]
    fn round_trip_preserves_bits() {
        let rows = vec![
            vec![0.0, 0.1 + 0.2, 1.0 / 3.0],
            vec![std::f64::consts::PI, 0.0, 1e-300],
            vec![2.0f64.sqrt(), 123456789.12345679, 0.0],
        ];
        let inst = Instance::from_rows(2, rows, vec![0.7, 1e10], vec![0.0, 5e-7])
            .unwrap()
            .with_name("bits");
        let back: Instance<f64> = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn rig_instances_round_trip() {
        let clients = vec![
            RigClient { weight: 2.0, service: 1.0, deadline: 50.0 },
            RigClient { weight: 1.0, service: 2.0, deadline: f64::INFINITY },
        ];
        let travel = vec![
            vec![0.0, 4.0, 9.0],
            vec![4.0, 0.0, 3.0],
            vec![9.0, 3.0, 0.0],
        ];
        let inst = wrrp_transform(1, &clients, &travel).unwrap();
        let text = write_instance(&inst);
        assert!(text.contains("DELTA 1\n"));
        assert_eq!(parse_instance::<f64>(&text).unwrap(), inst);
    }

    #[test]
    fn errors_name_the_line() {
        let short = SAMPLE.replace("1 2.5\n", "1\n");
        assert!(matches!(parse_instance::<f64>(&short), Err(Error::Parse { line: 5, .. })));
        let bad = SAMPLE.replace("0 3 4", "0 x 4");
        assert!(matches!(parse_instance::<f64>(&bad), Err(Error::Parse { line: 12, .. })));
        assert!(parse_instance::<f64>(&SAMPLE.replace("EOF\n", "")).is_err());
        assert!(parse_instance::<f64>(&SAMPLE.replace("K 1\n", "")).is_err());
        assert!(parse_instance::<f64>(&SAMPLE.replace("K 1\n", "K 3\n")).is_err());
        assert!(parse_instance::<f64>(&format!("{SAMPLE}1 2\n")).is_err());
        assert!(parse_instance::<f64>(&SAMPLE.replace("D 100\n", "FOO 1\n")).is_err());
    }
}
