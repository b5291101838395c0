//! Valid inequalities of the formulation and their separation.
//!
//! * pigeonhole: `sum_{i<j in V} s_ij >= omega(|V|, K)` for `|V| > K`;
//! * f-activation: `f(k, i, j) <= f(j, i, j)`;
//! * z-activation: `f(k, i, j) + f(j, k, i) + f(j, i, k) <= z(i, j)`.

mod omega;

use std::fmt;

pub use omega::{omega, tau};

use crate::milp::FractionalPoint;
use crate::scalar::Scalar;

/// Default separation tolerance.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cut {
    /// Vertex set in insertion order, and its right-hand side.
    Pigeonhole { vertices: Vec<usize>, rhs: u64 },
    FActivation { i: usize, j: usize, k: usize },
    ZActivation { i: usize, j: usize, k: usize },
}

impl Cut {
    pub fn pigeonhole(vertices: Vec<usize>, k: usize) -> Self {
        let rhs = omega(vertices.len() as u64, k as u64);
        Cut::Pigeonhole { vertices, rhs }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Cut::Pigeonhole { .. } => "pigeonhole",
            Cut::FActivation { .. } => "f_activation",
            Cut::ZActivation { .. } => "z_activation",
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Pigeonhole { vertices, rhs } => {
                let v: Vec<String> = vertices.iter().map(usize::to_string).collect();
                write!(f, "pigeonhole sum s[{{{}}}] >= {rhs}", v.join(","))
            }
            Cut::FActivation { i, j, k } => write!(f, "f_activation f^{k}_{i},{j} <= f^{j}_{i},{j}"),
            Cut::ZActivation { i, j, k } => write!(
                f,
                "z_activation f^{k}_{i},{j} + f^{j}_{k},{i} + f^{j}_{i},{k} <= z_{i},{j}"
            ),
        }
    }
}

/// `lhs - rhs` of the inequality written in `>=`-violation form: a positive
/// value means the point violates the cut by that much.
pub fn cut_violation<T: Scalar>(cut: &Cut, point: &FractionalPoint<T>) -> T {
    match cut {
        Cut::Pigeonhole { vertices, rhs } => T::of(*rhs as f64) - pair_sum(point, vertices),
        Cut::FActivation { i, j, k } => point.f(*k, *i, *j) - point.f(*j, *i, *j),
        Cut::ZActivation { i, j, k } => {
            point.f(*k, *i, *j) + point.f(*j, *k, *i) + point.f(*j, *i, *k) - point.z(*i, *j)
        }
    }
}

fn pair_sum<T: Scalar>(point: &FractionalPoint<T>, vertices: &[usize]) -> T {
    let mut sum = T::zero();
    for (a, &u) in vertices.iter().enumerate() {
        for &v in &vertices[a + 1..] {
            sum = sum + point.same(u, v);
        }
    }
    sum
}

/// Greedy pigeonhole separation.
///
/// From every seed client the set grows by the client that adds the least
/// `s` mass (ties to the smallest index). A cut is emitted for the current
/// set whenever its pair sum plus the violation already separated from this
/// seed, plus `epsilon`, stays below `omega`; the separated violation is then
/// remembered so supersets that are only violated because of the same
/// subset are skipped.
pub fn separate_pigeonhole<T: Scalar>(point: &FractionalPoint<T>, k: usize, epsilon: T) -> Vec<Cut> {
    let n = point.n();
    let mut cuts = Vec::new();
    for seed in 1..=n {
        let mut in_set = vec![false; n + 1];
        in_set[seed] = true;
        let mut members = vec![seed];
        // gain[v] = sum of s(v, u) over current members u
        let mut gain: Vec<T> = (0..=n).map(|v| if v == 0 { T::zero() } else { point.same(seed, v) }).collect();
        let mut zeta = T::zero();
        let mut delta = T::zero();
        while members.len() < n {
            let mut best: Option<(usize, T)> = None;
            for v in (1..=n).filter(|&v| !in_set[v]) {
                if best.is_none_or(|(_, g)| gain[v] < g) {
                    best = Some((v, gain[v]));
                }
            }
            let (chosen, added) = best.expect("a vertex remains outside the set");
            in_set[chosen] = true;
            members.push(chosen);
            zeta = zeta + added;
            for v in (1..=n).filter(|&v| !in_set[v]) {
                gain[v] = gain[v] + point.same(chosen, v);
            }
            let bound = T::of(omega(members.len() as u64, k as u64) as f64);
            if zeta + delta + epsilon < bound {
                cuts.push(Cut::Pigeonhole {
                    vertices: members.clone(),
                    rhs: omega(members.len() as u64, k as u64),
                });
                delta = bound - zeta;
            }
        }
    }
    cuts
}

/// Every f-activation cut violated by more than `epsilon`.
pub fn separate_f_activation<T: Scalar>(point: &FractionalPoint<T>, epsilon: T) -> Vec<Cut> {
    let n = point.n();
    let mut cuts = Vec::new();
    for i in 0..=n {
        for j in 1..=n {
            if j == i {
                continue;
            }
            let selected = point.f(j, i, j);
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                if point.f(k, i, j) > selected + epsilon {
                    cuts.push(Cut::FActivation { i, j, k });
                }
            }
        }
    }
    cuts
}

/// Every z-activation cut violated by more than `epsilon`.
pub fn separate_z_activation<T: Scalar>(point: &FractionalPoint<T>, epsilon: T) -> Vec<Cut> {
    let n = point.n();
    let mut cuts = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if j == i {
                continue;
            }
            let rhs = point.z(i, j) + epsilon;
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                if point.f(k, i, j) + point.f(j, k, i) + point.f(j, i, k) > rhs {
                    cuts.push(Cut::ZActivation { i, j, k });
                }
            }
        }
    }
    cuts
}

/// All three separations, pigeonhole cuts first.
pub fn separate_all<T: Scalar>(point: &FractionalPoint<T>, k: usize, epsilon: T) -> Vec<Cut> {
    let mut cuts = separate_pigeonhole(point, k, epsilon);
    cuts.extend(separate_f_activation(point, epsilon));
    cuts.extend(separate_z_activation(point, epsilon));
    cuts
}
