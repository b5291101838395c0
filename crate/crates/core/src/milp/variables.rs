use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Dense storage for the three variable families over `n` clients.
///
/// * `z(i, j)`: client `i` is visited before client `j` on the same route.
/// * `f(k, i, j)`: arc `(i, j)` lies on the depot-to-`k` path. The entries
///   `f(0, j, 0)` carry the return arcs of the last clients.
/// * `s(i, j)` with `i < j`: clients `i` and `j` share a route.
///
/// Entries outside the index sets are stored too, so checkers can report a
/// value set where no variable exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Variables<V> {
    n: usize,
    z: Vec<V>,
    s: Vec<V>,
    f: Vec<V>,
}

/// Binary assignment induced by an integer solution.
pub type VariableAssignment = Variables<bool>;

/// Real-valued point, the input to separation routines.
pub type FractionalPoint<T = f64> = Variables<T>;

impl<V: Copy + Default> Variables<V> {
    pub fn zeros(n: usize) -> Self {
        let d = n + 1;
        Self {
            n,
            z: vec![V::default(); d * d],
            s: vec![V::default(); d * d],
            f: vec![V::default(); d * d * d],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn pair(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }

    #[inline]
    fn triple(&self, k: usize, i: usize, j: usize) -> usize {
        (k * (self.n + 1) + i) * (self.n + 1) + j
    }

    #[inline]
    pub fn z(&self, i: usize, j: usize) -> V {
        self.z[self.pair(i, j)]
    }

    pub fn set_z(&mut self, i: usize, j: usize, v: V) {
        let idx = self.pair(i, j);
        self.z[idx] = v;
    }

    /// Raw `s` entry at `(i, j)`; only `i < j` is a model variable.
    #[inline]
    pub fn s(&self, i: usize, j: usize) -> V {
        self.s[self.pair(i, j)]
    }

    /// `s` for an unordered pair.
    #[inline]
    pub fn same(&self, i: usize, j: usize) -> V {
        self.s(i.min(j), i.max(j))
    }

    pub fn set_s(&mut self, i: usize, j: usize, v: V) {
        let idx = self.pair(i, j);
        self.s[idx] = v;
    }

    #[inline]
    pub fn f(&self, k: usize, i: usize, j: usize) -> V {
        self.f[self.triple(k, i, j)]
    }

    pub fn set_f(&mut self, k: usize, i: usize, j: usize, v: V) {
        let idx = self.triple(k, i, j);
        self.f[idx] = v;
    }

    /// All stored entries (in and out of the index sets), as
    /// `(family, indices, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (Family, Vec<usize>, V)> + '_ {
        let d = self.n + 1;
        let z = (0..d * d).map(move |x| (Family::Z, vec![x / d, x % d], self.z[x]));
        let s = (0..d * d).map(move |x| (Family::S, vec![x / d, x % d], self.s[x]));
        let f = (0..d * d * d).map(move |x| {
            (Family::F, vec![x / (d * d), (x / d) % d, x % d], self.f[x])
        });
        z.chain(s).chain(f)
    }

    pub(crate) fn entry_mut(&mut self, family: Family, idx: &[usize]) -> &mut V {
        match family {
            Family::Z => {
                let p = self.pair(idx[0], idx[1]);
                &mut self.z[p]
            }
            Family::S => {
                let p = self.pair(idx[0], idx[1]);
                &mut self.s[p]
            }
            Family::F => {
                let p = self.triple(idx[0], idx[1], idx[2]);
                &mut self.f[p]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Z,
    S,
    F,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Z => "z",
            Family::S => "s",
            Family::F => "f",
        }
    }
}

/// `z(i, j)` is a variable.
pub fn z_in_domain(n: usize, i: usize, j: usize) -> bool {
    (1..=n).contains(&i) && (1..=n).contains(&j) && i != j
}

/// `s(i, j)` is a variable.
pub fn s_in_domain(n: usize, i: usize, j: usize) -> bool {
    i >= 1 && i < j && j <= n
}

/// `f(k, i, j)` is a variable: either an arc on a client path
/// (`j != i != k`, `j, k > 0`) or a return arc `f(0, i, 0)`.
pub fn f_in_domain(n: usize, k: usize, i: usize, j: usize) -> bool {
    if i > n || j > n || k > n {
        return false;
    }
    if k == 0 {
        return j == 0 && i >= 1;
    }
    j >= 1 && i != j && i != k
}

impl VariableAssignment {
    /// Converts the binary assignment into a real-valued point.
    pub fn to_point<T: Scalar>(&self) -> FractionalPoint<T> {
        let b = |v: bool| if v { T::one() } else { T::zero() };
        FractionalPoint {
            n: self.n,
            z: self.z.iter().copied().map(b).collect(),
            s: self.s.iter().copied().map(b).collect(),
            f: self.f.iter().copied().map(b).collect(),
        }
    }
}

impl<T: Scalar> FractionalPoint<T> {
    /// Every stored value lies in `[-1e-9, 1 + 1e-9]`.
    pub fn check_bounds(&self) -> Result<()> {
        let tol = T::of(1e-9);
        let lo = -tol;
        let hi = T::one() + tol;
        for (family, idx, v) in self.entries() {
            if v.is_nan() || v < lo || v > hi {
                return Err(Error::InvalidInstance(format!(
                    "{}{:?} = {v} is outside [0, 1]",
                    family.symbol(),
                    idx
                )));
            }
        }
        Ok(())
    }
}

/// Binary values of `z`, `f` and `s` induced by a valid solution.
pub fn assignment_from_solution<T: Scalar>(
    instance: &Instance<T>,
    solution: &Solution,
) -> Result<VariableAssignment> {
    let n = instance.n();
    solution.validate(n, instance.k())?;
    let mut a = VariableAssignment::zeros(n);
    for route in solution.routes() {
        for (t, &k) in route.iter().enumerate() {
            let mut prev = 0;
            for &v in &route[..=t] {
                a.set_f(k, prev, v, true);
                prev = v;
            }
            for &later in &route[t + 1..] {
                a.set_z(k, later, true);
                a.set_s(k.min(later), k.max(later), true);
            }
        }
        if let Some(&last) = route.last() {
            a.set_f(0, last, 0, true);
        }
    }
    Ok(a)
}

/// Reads routes off the selected arcs `f(j, i, j)` and checks that the
/// assignment is exactly the one the decoded solution induces.
pub fn decode_assignment<T: Scalar>(
    instance: &Instance<T>,
    assignment: &VariableAssignment,
) -> Result<Solution> {
    let n = instance.n();
    if assignment.n() != n {
        return Err(Error::InvalidSolution(format!(
            "assignment over {} clients, instance has {n}",
            assignment.n()
        )));
    }
    let mut routes = Vec::new();
    for start in 1..=n {
        if !assignment.f(start, 0, start) {
            continue;
        }
        let mut route = vec![start];
        let mut cur = start;
        loop {
            if route.len() > n {
                return Err(Error::InvalidSolution("selected arcs contain a cycle".into()));
            }
            let next: Vec<usize> = (1..=n)
                .filter(|&j| j != cur && assignment.f(j, cur, j))
                .collect();
            match (next.as_slice(), assignment.f(0, cur, 0)) {
                ([], true) => break,
                ([j], false) => {
                    route.push(*j);
                    cur = *j;
                }
                _ => {
                    return Err(Error::InvalidSolution(format!(
                        "client {cur} does not have exactly one successor"
                    )))
                }
            }
        }
        routes.push(route);
    }
    let solution = Solution::new(routes);
    let induced = assignment_from_solution(instance, &solution)?;
    if &induced != assignment {
        return Err(Error::InvalidSolution(
            "assignment differs from the one induced by its routes".into(),
        ));
    }
    Ok(solution)
}
