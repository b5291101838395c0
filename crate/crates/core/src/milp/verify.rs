use std::fmt;

use super::variables::{f_in_domain, s_in_domain, z_in_domain, VariableAssignment};
use crate::model::Instance;
use crate::scalar::Scalar;

/// Rows of the formulation, named after what they enforce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    /// `z(i, j) + z(j, i) = s(i, j)`: two clients share a route exactly
    /// when one precedes the other.
    Pairing,
    /// `z(j, k)` equals the number of arcs entering `j` on the path to `k`.
    PathIn,
    /// `z(j, k)` equals the number of arcs leaving `j` on the path to `k`.
    PathOut,
    /// Every path leaves the depot exactly once.
    PathStart,
    /// `K` routes leave the depot.
    Departures,
    /// `K` routes return to the depot.
    Returns,
    /// Every client has one incoming arc.
    OneIn,
    /// Every client has one outgoing arc (the return arc included).
    OneOut,
    /// An arc carries at most `n - K` other paths, and only when selected.
    Activation,
    /// `s` entries outside the index set must be zero.
    SDomain,
    /// `z` entries outside the index set must be zero.
    ZDomain,
    /// `f` entries outside the index set must be zero.
    FDomain,
}

impl Row {
    pub fn name(self) -> &'static str {
        match self {
            Row::Pairing => "pairing",
            Row::PathIn => "path_in",
            Row::PathOut => "path_out",
            Row::PathStart => "path_start",
            Row::Departures => "departures",
            Row::Returns => "returns",
            Row::OneIn => "one_in",
            Row::OneOut => "one_out",
            Row::Activation => "activation",
            Row::SDomain => "s_domain",
            Row::ZDomain => "z_domain",
            Row::FDomain => "f_domain",
        }
    }
}

/// A violated row with its indices, printed as `name[indices]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintId {
    pub row: Row,
    pub indices: Vec<usize>,
}

impl ConstraintId {
    fn new(row: Row, indices: &[usize]) -> Self {
        Self {
            row,
            indices: indices.to_vec(),
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.row.name())?;
        if !self.indices.is_empty() {
            let idx: Vec<String> = self.indices.iter().map(usize::to_string).collect();
            write!(f, "[{}]", idx.join(","))?;
        }
        Ok(())
    }
}

/// Evaluates every row of the formulation at a binary assignment and returns
/// the violated ones; an empty list means the assignment is feasible.
pub fn verify_constraints<T: Scalar>(
    instance: &Instance<T>,
    a: &VariableAssignment,
) -> Vec<ConstraintId> {
    let n = instance.n();
    let k_count = instance.k() as i64;
    assert_eq!(a.n(), n, "assignment and instance sizes differ");
    let b = |v: bool| v as i64;
    let mut out = Vec::new();

    for i in 1..=n {
        for j in i + 1..=n {
            if b(a.z(i, j)) + b(a.z(j, i)) != b(a.s(i, j)) {
                out.push(ConstraintId::new(Row::Pairing, &[i, j]));
            }
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            if j == k {
                continue;
            }
            let incoming: i64 = (0..=n)
                .filter(|&i| i != j && i != k)
                .map(|i| b(a.f(k, i, j)))
                .sum();
            if b(a.z(j, k)) != incoming {
                out.push(ConstraintId::new(Row::PathIn, &[j, k]));
            }
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            if j == k {
                continue;
            }
            let outgoing: i64 = (1..=n).filter(|&i| i != j).map(|i| b(a.f(k, j, i))).sum();
            if b(a.z(j, k)) != outgoing {
                out.push(ConstraintId::new(Row::PathOut, &[j, k]));
            }
        }
    }
    for j in 1..=n {
        let starts: i64 = (1..=n).map(|i| b(a.f(j, 0, i))).sum();
        if starts != 1 {
            out.push(ConstraintId::new(Row::PathStart, &[j]));
        }
    }
    let departures: i64 = (1..=n).map(|j| b(a.f(j, 0, j))).sum();
    if departures != k_count {
        out.push(ConstraintId::new(Row::Departures, &[]));
    }
    let returns: i64 = (1..=n).map(|j| b(a.f(0, j, 0))).sum();
    if returns != k_count {
        out.push(ConstraintId::new(Row::Returns, &[]));
    }
    for j in 1..=n {
        let into: i64 = (0..=n).filter(|&i| i != j).map(|i| b(a.f(j, i, j))).sum();
        if into != 1 {
            out.push(ConstraintId::new(Row::OneIn, &[j]));
        }
    }
    for i in 1..=n {
        let leaving: i64 = (0..=n).filter(|&j| j != i).map(|j| b(a.f(j, i, j))).sum();
        if leaving != 1 {
            out.push(ConstraintId::new(Row::OneOut, &[i]));
        }
    }
    let coefficient = n as i64 - k_count;
    for i in 0..=n {
        for j in 1..=n {
            if j == i {
                continue;
            }
            let uses: i64 = (1..=n)
                .filter(|&k| k != i && k != j)
                .map(|k| b(a.f(k, i, j)))
                .sum();
            if uses > coefficient * b(a.f(j, i, j)) {
                out.push(ConstraintId::new(Row::Activation, &[i, j]));
            }
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            if a.s(i, j) && !s_in_domain(n, i, j) {
                out.push(ConstraintId::new(Row::SDomain, &[i, j]));
            }
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            if a.z(i, j) && !z_in_domain(n, i, j) {
                out.push(ConstraintId::new(Row::ZDomain, &[i, j]));
            }
        }
    }
    for k in 0..=n {
        for i in 0..=n {
            for j in 0..=n {
                if a.f(k, i, j) && !f_in_domain(n, k, i, j) {
                    out.push(ConstraintId::new(Row::FDomain, &[k, i, j]));
                }
            }
        }
    }
    out
}

/// `sum_{i, j} (c_ij + r_j) sum_k w_k f(k, i, j)` computed directly from the
/// variables. Selecting a forbidden arc yields `+infinity`.
pub fn objective_from_assignment<T: Scalar>(instance: &Instance<T>, a: &VariableAssignment) -> T {
    let n = instance.n();
    let mut total = T::zero();
    for i in 0..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut load = T::zero();
            let mut used = false;
            for k in (1..=n).filter(|&k| k != i) {
                if a.f(k, i, j) {
                    load = load + instance.weight(k);
                    used = true;
                }
            }
            if !used {
                continue;
            }
            let arc = instance.travel(i, j) + instance.service(j);
            total = total + T::weighted(load, arc);
        }
    }
    total
}
