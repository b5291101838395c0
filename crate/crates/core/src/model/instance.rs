use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A wkTRP instance on the complete directed graph over `{0, 1, ..., n}`.
///
/// Vertex 0 is the depot and vertices `1..=n` are clients. Travel times are
/// stored row-major; `+infinity` marks a forbidden arc. Per-vertex vectors
/// are indexed by vertex, with the depot entry fixed to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T = f64> {
    name: String,
    n: usize,
    k: usize,
    travel: Vec<T>,
    service: Vec<T>,
    weight: Vec<T>,
    duration_limit: Option<T>,
    deadlines: Option<Vec<T>>,
    rig_starts: usize,
}

impl<T: Scalar> Instance<T> {
    /// Builds an instance from a row-major `(n+1) x (n+1)` travel matrix and
    /// client-indexed weights and service times (`n` values each, client 1
    /// first).
    pub fn new(k: usize, travel: Vec<T>, weights: Vec<T>, service: Vec<T>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one client is required".into()));
        }
        if service.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} service times for {n} clients",
                service.len()
            )));
        }
        if travel.len() != (n + 1) * (n + 1) {
            return Err(Error::InvalidInstance(format!(
                "travel matrix has {} entries, expected {}",
                travel.len(),
                (n + 1) * (n + 1)
            )));
        }
        check_repairmen(n, k)?;
        for (idx, &c) in travel.iter().enumerate() {
            if c.is_nan() || c < T::zero() {
                return Err(Error::InvalidInstance(format!(
                    "travel time c[{}][{}] = {c} is not a non-negative time",
                    idx / (n + 1),
                    idx % (n + 1)
                )));
            }
        }
        for (label, values) in [("weight", &weights), ("service time", &service)] {
            if let Some((i, v)) = values
                .iter()
                .enumerate()
                .find(|(_, v)| !v.is_finite() || **v < T::zero())
            {
                return Err(Error::InvalidInstance(format!(
                    "{label} of client {} is {v}",
                    i + 1
                )));
            }
        }
        let mut weight = Vec::with_capacity(n + 1);
        weight.push(T::zero());
        weight.extend(weights);
        let mut service_full = Vec::with_capacity(n + 1);
        service_full.push(T::zero());
        service_full.extend(service);
        Ok(Self {
            name: String::from("unnamed"),
            n,
            k,
            travel,
            service: service_full,
            weight,
            duration_limit: None,
            deadlines: None,
            rig_starts: 0,
        })
    }

    pub fn from_rows(k: usize, rows: Vec<Vec<T>>, weights: Vec<T>, service: Vec<T>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidInstance(format!(
                "travel row {bad} has {} entries, expected {dim}",
                rows[bad].len()
            )));
        }
        Self::new(k, rows.into_iter().flatten().collect(), weights, service)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_k(mut self, k: usize) -> Result<Self> {
        check_repairmen(self.n, k)?;
        if self.rig_starts > 0 && k != self.rig_starts {
            return Err(Error::InvalidInstance(format!(
                "rig-start instance needs K = {} repairmen, got {k}",
                self.rig_starts
            )));
        }
        self.k = k;
        Ok(self)
    }

    /// Route-duration limit `D` (kTRPDC). `+infinity` is accepted and means
    /// unbounded.
    pub fn with_duration_limit(mut self, limit: T) -> Result<Self> {
        if limit.is_nan() || limit < T::zero() {
            return Err(Error::InvalidInstance(format!("duration limit {limit} is negative")));
        }
        self.duration_limit = Some(limit);
        Ok(self)
    }

    /// Per-client completion deadlines (`n` values, client 1 first).
    pub fn with_deadlines(mut self, deadlines: Vec<T>) -> Result<Self> {
        if deadlines.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "{} deadlines for {} clients",
                deadlines.len(),
                self.n
            )));
        }
        if let Some(d) = deadlines.iter().find(|d| d.is_nan() || **d < T::zero()) {
            return Err(Error::InvalidInstance(format!("deadline {d} is negative")));
        }
        let mut full = Vec::with_capacity(self.n + 1);
        full.push(T::infinity());
        full.extend(deadlines);
        self.deadlines = Some(full);
        Ok(self)
    }

    /// Declares vertices `1..=delta` as artificial rig starts and checks the
    /// multi-depot matrix structure.
    pub fn with_rig_starts(mut self, delta: usize) -> Result<Self> {
        if delta == 0 {
            self.rig_starts = 0;
            return Ok(self);
        }
        if delta > self.n {
            return Err(Error::InvalidInstance(format!(
                "{delta} rig starts but only {} vertices",
                self.n
            )));
        }
        if self.k != delta {
            return Err(Error::InvalidInstance(format!(
                "rig-start instance needs K = {delta}, got {}",
                self.k
            )));
        }
        for v in 1..=delta {
            if self.weight[v] != T::zero() || self.service[v] != T::zero() {
                return Err(Error::InvalidInstance(format!(
                    "rig start {v} must have zero weight and zero service time"
                )));
            }
        }
        let inf = T::infinity();
        for i in 0..=self.n {
            for j in 0..=self.n {
                if i == j {
                    continue;
                }
                let expected = match rig_case(i, j, delta) {
                    RigArc::Zero => Some(T::zero()),
                    RigArc::Forbidden => Some(inf),
                    RigArc::Travel => None,
                };
                if let Some(e) = expected {
                    if self.travel(i, j) != e {
                        return Err(Error::InvalidInstance(format!(
                            "rig-start matrix entry c[{i}][{j}] = {} but must be {e}",
                            self.travel(i, j)
                        )));
                    }
                }
            }
        }
        self.rig_starts = delta;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of clients.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of repairmen (routes).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of vertices including the depot.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn travel(&self, i: usize, j: usize) -> T {
        self.travel[i * (self.n + 1) + j]
    }

    pub fn travel_matrix(&self) -> &[T] {
        &self.travel
    }

    #[inline]
    pub fn service(&self, i: usize) -> T {
        self.service[i]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> T {
        self.weight[i]
    }

    /// Client weights, client 1 first.
    pub fn weights(&self) -> &[T] {
        &self.weight[1..]
    }

    /// Client service times, client 1 first.
    pub fn service_times(&self) -> &[T] {
        &self.service[1..]
    }

    pub fn duration_limit(&self) -> Option<T> {
        self.duration_limit
    }

    /// Client deadlines, client 1 first, if the instance has any.
    pub fn deadlines(&self) -> Option<&[T]> {
        self.deadlines.as_deref().map(|d| &d[1..])
    }

    /// Deadline of vertex `i` (`+infinity` when none is set).
    #[inline]
    pub fn deadline(&self, i: usize) -> T {
        self.deadlines.as_ref().map_or(T::infinity(), |d| d[i])
    }

    pub fn rig_starts(&self) -> usize {
        self.rig_starts
    }

    /// True when a finite duration limit or a finite deadline can bind.
    pub fn has_side_limits(&self) -> bool {
        self.duration_limit.is_some_and(|d| d.is_finite())
            || self
                .deadlines
                .as_ref()
                .is_some_and(|d| d.iter().any(|x| x.is_finite()))
    }

    pub fn clients(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Replaces client weights (`n` values).
    pub fn with_weights(mut self, weights: Vec<T>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "{} weights for {} clients",
                weights.len(),
                self.n
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidInstance("weights must be finite and non-negative".into()));
        }
        self.weight[1..].copy_from_slice(&weights);
        Ok(self)
    }

    /// Replaces client service times (`n` values).
    pub fn with_service(mut self, service: Vec<T>) -> Result<Self> {
        if service.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "{} service times for {} clients",
                service.len(),
                self.n
            )));
        }
        if service.iter().any(|r| !r.is_finite() || *r < T::zero()) {
            return Err(Error::InvalidInstance(
                "service times must be finite and non-negative".into(),
            ));
        }
        self.service[1..].copy_from_slice(&service);
        Ok(self)
    }

    pub(crate) fn travel_mut(&mut self) -> &mut [T] {
        &mut self.travel
    }

    pub(crate) fn clear_service(&mut self) {
        self.service.iter_mut().for_each(|r| *r = T::zero());
    }
}

fn check_repairmen(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidInstance(format!(
            "repairman count K = {k} must satisfy 1 <= K <= n = {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RigArc {
    Zero,
    Travel,
    Forbidden,
}

/// Classifies arc `(i, j)` of a rig-start instance with `delta` starts.
/// Cases are tested in the order they are listed for the transformation.
#[allow(clippy::if_same_then_else)]
pub(crate) fn rig_case(i: usize, j: usize, delta: usize) -> RigArc {
    if i == 0 && j <= delta {
        RigArc::Zero
    } else if i > delta && j == 0 {
        RigArc::Zero
    } else if i >= 1 && j > delta {
        RigArc::Travel
    } else {
        // (0, j > delta), (i <= delta, j <= delta), (i > delta, 1 <= j <= delta)
        RigArc::Forbidden
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Instance<f64> {
        Instance::from_rows(
            1,
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_repairman_counts() {
        let inst = tiny();
        assert!(inst.clone().with_k(0).is_err());
        assert!(inst.clone().with_k(3).is_err());
        assert_eq!(inst.with_k(2).unwrap().k(), 2);
    }

    #[test]
    fn rejects_negative_data() {
        let rows = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        assert!(Instance::from_rows(1, rows, vec![1.0], vec![0.0]).is_err());
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(Instance::from_rows(1, rows.clone(), vec![-1.0], vec![0.0]).is_err());
        assert!(Instance::from_rows(1, rows, vec![1.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn infinite_arcs_are_allowed() {
        let rows = vec![vec![0.0, f64::INFINITY], vec![1.0, 0.0]];
        let inst = Instance::from_rows(1, rows, vec![1.0], vec![0.0]).unwrap();
        assert!(inst.travel(0, 1).is_infinite());
    }

    #[test]
    fn depot_entries_are_zero() {
        let inst = tiny();
        assert_eq!(inst.weight(0), 0.0);
        assert_eq!(inst.service(0), 0.0);
        assert!(inst.deadline(1).is_infinite());
        assert!(!inst.has_side_limits());
    }

    #[test]
    fn rig_start_structure_is_checked() {
        // depot, one rig start, one client; matrix does not follow the rules
        let inst = Instance::from_rows(
            1,
            vec![vec![0.0, 0.0, 5.0], vec![1.0, 0.0, 3.0], vec![0.0, 2.0, 0.0]],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        )
        .unwrap();
        assert!(inst.with_rig_starts(1).is_err());
    }
}
