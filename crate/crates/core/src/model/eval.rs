use crate::error::Result;
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Objective value together with the per-vertex completion times it was
/// computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    /// Total weighted latency; `+infinity` if a forbidden arc is used.
    pub total: T,
    /// Completion time (latency) per vertex, index 0 is the depot.
    pub completion: Vec<T>,
}

impl<T: Scalar> Evaluation<T> {
    pub fn latency(&self, client: usize) -> T {
        self.completion[client]
    }
}

/// Total weighted latency `sum_i w_i L_i` of a structurally valid solution.
///
/// A client's latency runs from the common departure at the depot until its
/// service completes. The closing arc back to the depot adds nothing to any
/// latency, but a route whose closing arc is forbidden makes the cost
/// infinite.
pub fn evaluate_weighted_latency<T: Scalar>(
    instance: &Instance<T>,
    solution: &Solution,
) -> Result<Evaluation<T>> {
    solution.validate(instance.n(), instance.k())?;
    let mut completion = vec![T::zero(); instance.dim()];
    let mut total = T::zero();
    for route in solution.routes() {
        total = total + accumulate_route(instance, route, &mut completion);
    }
    Ok(Evaluation { total, completion })
}

/// Weighted latency of a single route without structural checks.
pub fn route_cost<T: Scalar>(instance: &Instance<T>, route: &[usize]) -> T {
    let mut time = T::zero();
    let mut prev = 0;
    let mut cost = T::zero();
    for &v in route {
        time = time + instance.travel(prev, v) + instance.service(v);
        cost = cost + T::weighted(instance.weight(v), time);
        prev = v;
    }
    if !route.is_empty() && instance.travel(prev, 0).is_infinite() {
        return T::infinity();
    }
    cost
}

fn accumulate_route<T: Scalar>(instance: &Instance<T>, route: &[usize], completion: &mut [T]) -> T {
    let mut time = T::zero();
    let mut prev = 0;
    let mut cost = T::zero();
    for &v in route {
        time = time + instance.travel(prev, v) + instance.service(v);
        completion[v] = time;
        cost = cost + T::weighted(instance.weight(v), time);
        prev = v;
    }
    if !route.is_empty() && instance.travel(prev, 0).is_infinite() {
        return T::infinity();
    }
    cost
}

/// Duration of a route: completion of its last client plus the closing arc
/// to the depot when that arc is finite.
pub fn route_duration<T: Scalar>(instance: &Instance<T>, route: &[usize]) -> T {
    let mut time = T::zero();
    let mut prev = 0;
    for &v in route {
        time = time + instance.travel(prev, v) + instance.service(v);
        prev = v;
    }
    let back = instance.travel(prev, 0);
    if !route.is_empty() && back.is_finite() {
        time = time + back;
    }
    time
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationViolation<T> {
    pub route: usize,
    pub duration: T,
    pub limit: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeadlineViolation<T> {
    pub client: usize,
    pub latency: T,
    pub deadline: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport<T> {
    /// `None` when the solution is structurally valid.
    pub structure: Option<String>,
    pub duration_violations: Vec<DurationViolation<T>>,
    pub deadline_violations: Vec<DeadlineViolation<T>>,
}

impl<T> FeasibilityReport<T> {
    pub fn is_structurally_valid(&self) -> bool {
        self.structure.is_none()
    }

    pub fn is_feasible(&self) -> bool {
        self.structure.is_none()
            && self.duration_violations.is_empty()
            && self.deadline_violations.is_empty()
    }
}

/// Reports structural problems, route-duration violations and deadline
/// violations separately. Routes mentioning out-of-range vertices are
/// skipped by the variant checks.
pub fn check_feasibility<T: Scalar>(
    instance: &Instance<T>,
    solution: &Solution,
) -> FeasibilityReport<T> {
    let structure = solution
        .validate(instance.n(), instance.k())
        .err()
        .map(|e| e.to_string());
    let mut report = FeasibilityReport {
        structure,
        duration_violations: Vec::new(),
        deadline_violations: Vec::new(),
    };
    let limit = instance.duration_limit();
    let with_deadlines = instance.deadlines().is_some();
    for (r, route) in solution.routes().iter().enumerate() {
        if route.iter().any(|&v| v == 0 || v > instance.n()) {
            continue;
        }
        if let Some(limit) = limit {
            let duration = route_duration(instance, route);
            if duration > limit {
                report.duration_violations.push(DurationViolation {
                    route: r,
                    duration,
                    limit,
                });
            }
        }
        if with_deadlines {
            let mut time = T::zero();
            let mut prev = 0;
            for &v in route {
                time = time + instance.travel(prev, v) + instance.service(v);
                if time > instance.deadline(v) {
                    report.deadline_violations.push(DeadlineViolation {
                        client: v,
                        latency: time,
                        deadline: instance.deadline(v),
                    });
                }
                prev = v;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    /// Single route whose successive arcs and services add up to the
    /// increments (2, 2, 1, 1, 2, 1).
    fn increment_chain() -> Instance<f64> {
        let steps = [2.0, 2.0, 1.0, 1.0, 2.0, 1.0];
        let n = steps.len();
        let mut rows = vec![vec![10.0; n + 1]; n + 1];
        for (idx, s) in steps.iter().enumerate() {
            rows[idx][idx + 1] = *s;
        }
        Instance::from_rows(1, rows, vec![1.0; n], vec![0.0; n]).unwrap()
    }

    fn three_clients() -> Instance<f64> {
        let rows = vec![
            vec![0.0, 1.0, 9.0, 9.0],
            vec![9.0, 0.0, 2.0, 9.0],
            vec![9.0, 9.0, 0.0, 3.0],
            vec![9.0, 9.0, 9.0, 0.0],
        ];
        Instance::from_rows(1, rows, vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn chain_latencies_add_up_to_34() {
        let inst = increment_chain();
        let eval = evaluate_weighted_latency(&inst, &Solution::new(vec![vec![1, 2, 3, 4, 5, 6]])).unwrap();
        assert_eq!(&eval.completion[1..], &[2.0, 4.0, 5.0, 6.0, 8.0, 9.0]);
        assert_eq!(eval.total, 34.0);
    }

    #[test]
    fn weighted_three_client_route() {
        let inst = three_clients();
        let eval = evaluate_weighted_latency(&inst, &Solution::new(vec![vec![1, 2, 3]])).unwrap();
        assert_eq!(&eval.completion[1..], &[2.0, 5.0, 9.0]);
        assert_eq!(eval.total, 39.0);
    }

    #[test]
    fn zero_weights_give_zero() {
        let inst = three_clients().with_weights(vec![0.0; 3]).unwrap();
        let eval = evaluate_weighted_latency(&inst, &Solution::new(vec![vec![3, 1, 2]])).unwrap();
        assert_eq!(eval.total, 0.0);
    }

    #[test]
    fn structural_violation_is_an_error() {
        let inst = three_clients();
        let err = evaluate_weighted_latency(&inst, &Solution::new(vec![vec![1, 2, 2]])).unwrap_err();
        assert!(matches!(err, Error::InvalidSolution(_)));
    }

    #[test]
    fn forbidden_closing_arc_makes_cost_infinite() {
        let rows = vec![vec![0.0, 1.0], vec![f64::INFINITY, 0.0]];
        let inst = Instance::from_rows(1, rows, vec![0.0], vec![0.0]).unwrap();
        let eval = evaluate_weighted_latency(&inst, &Solution::new(vec![vec![1]])).unwrap();
        assert!(eval.total.is_infinite());
        assert_eq!(eval.completion[1], 1.0);
    }

    #[test]
    fn unbounded_duration_never_violates() {
        let inst = three_clients().with_duration_limit(f64::INFINITY).unwrap();
        let report = check_feasibility(&inst, &Solution::new(vec![vec![1, 2, 3]]));
        assert!(report.is_feasible());
    }

    #[test]
    fn only_the_long_route_is_flagged() {
        // route [1] lasts 1 + 1 = 2, route [2] lasts 50 + 50 = 100
        let rows = vec![
            vec![0.0, 1.0, 50.0],
            vec![1.0, 0.0, 1.0],
            vec![50.0, 1.0, 0.0],
        ];
        let inst = Instance::from_rows(2, rows, vec![1.0, 1.0], vec![0.0, 0.0])
            .unwrap()
            .with_duration_limit(10.0)
            .unwrap();
        let report = check_feasibility(&inst, &Solution::new(vec![vec![1], vec![2]]));
        assert!(report.is_structurally_valid());
        assert_eq!(report.duration_violations.len(), 1);
        assert_eq!(report.duration_violations[0].route, 1);
        assert_eq!(report.duration_violations[0].duration, 100.0);
    }

    #[test]
    fn closing_arc_counts_towards_duration_only_when_finite() {
        let rows = vec![vec![0.0, 3.0], vec![f64::INFINITY, 0.0]];
        let inst = Instance::from_rows(1, rows, vec![1.0], vec![2.0]).unwrap();
        assert_eq!(route_duration(&inst, &[1]), 5.0);
        let rows = vec![vec![0.0, 3.0], vec![4.0, 0.0]];
        let inst = Instance::from_rows(1, rows, vec![1.0], vec![2.0]).unwrap();
        assert_eq!(route_duration(&inst, &[1]), 9.0);
    }

    #[test]
    fn deadline_violations_are_reported_per_client() {
        let inst = three_clients()
            .with_deadlines(vec![f64::INFINITY, 4.0, 100.0])
            .unwrap();
        let report = check_feasibility(&inst, &Solution::new(vec![vec![1, 2, 3]]));
        assert_eq!(report.deadline_violations.len(), 1);
        assert_eq!(report.deadline_violations[0].client, 2);
        assert_eq!(report.deadline_violations[0].latency, 5.0);

        let relaxed = three_clients().with_deadlines(vec![f64::INFINITY; 3]).unwrap();
        assert!(check_feasibility(&relaxed, &Solution::new(vec![vec![1, 2, 3]])).is_feasible());
    }

    #[test]
    fn structure_is_reported_not_thrown() {
        let report = check_feasibility(&three_clients(), &Solution::new(vec![vec![1, 1, 2]]));
        assert!(!report.is_structurally_valid());
        assert!(!report.is_feasible());
    }
}
