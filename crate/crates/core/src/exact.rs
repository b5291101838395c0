//! Ground-truth solvers for small instances.
//!
//! [`exact_solve`] is a depth-first branch-and-bound that builds the routes
//! one after another: it either appends an unassigned client to the open
//! route or closes it and opens the next one. Routes are unlabeled, so the
//! route opened when `c` is the smallest unassigned client must contain `c`;
//! this gives every solution exactly one search path. [`brute_force_solve`]
//! enumerates every solution and evaluates it with the model evaluator.

use crate::error::{Error, Result};
use crate::model::{evaluate_weighted_latency, Instance, Solution};
use crate::scalar::Scalar;

/// Largest `n` accepted by [`exact_solve`] (the unassigned set is a `u64`).
pub const EXACT_LIMIT: usize = 63;
/// Largest `n` accepted by [`brute_force_solve`].
pub const BRUTE_FORCE_LIMIT: usize = 9;

const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome<T> {
    pub solution: Solution,
    pub cost: T,
    /// False when the node limit stopped the search before it was complete.
    pub proven: bool,
    pub nodes: u64,
}

/// Search state: closed routes plus the route being extended.
#[derive(Debug, Clone)]
pub(crate) struct Node<T> {
    routes: Vec<Vec<usize>>,
    time: T,
    cost: T,
    unassigned: u64,
    /// Client the open route must contain before it may be closed.
    required: usize,
}

pub(crate) struct Context<'a, T> {
    instance: &'a Instance<T>,
    /// Cheapest finite arc into each vertex.
    min_in: Vec<T>,
}

impl<'a, T: Scalar> Context<'a, T> {
    pub(crate) fn new(instance: &'a Instance<T>) -> Self {
        let n = instance.n();
        let min_in = (0..=n)
            .map(|j| {
                (0..=n)
                    .filter(|&i| i != j)
                    .map(|i| instance.travel(i, j))
                    .filter(|c| c.is_finite())
                    .fold(T::infinity(), T::min)
            })
            .collect();
        Self { instance, min_in }
    }

    pub(crate) fn root(&self) -> Node<T> {
        let n = self.instance.n();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Node {
            routes: vec![Vec::new()],
            time: T::zero(),
            cost: T::zero(),
            unassigned: all,
            required: 1,
        }
    }
}

fn bit(client: usize) -> u64 {
    1u64 << (client - 1)
}

fn clients(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| mask & (1u64 << b) != 0).map(|b| b + 1)
}

impl<T: Scalar> Node<T> {
    fn open(&self) -> &[usize] {
        self.routes.last().expect("an open route exists")
    }

    fn routes_left(&self, ctx: &Context<'_, T>) -> usize {
        ctx.instance.k() - self.routes.len()
    }

    pub(crate) fn is_leaf(&self) -> bool {
        self.unassigned == 0
    }

    /// Cost of a complete node, infinite if a forbidden closing arc is used.
    pub(crate) fn leaf_cost(&self, ctx: &Context<'_, T>) -> T {
        let last = *self.open().last().expect("leaves have a non-empty open route");
        if ctx.instance.travel(last, 0).is_infinite() {
            T::infinity()
        } else {
            self.cost
        }
    }

    /// `cost + sum_j w_j (T_min + min_i c_ij + r_j)` over unassigned `j`,
    /// where `T_min` is the earliest time any route can still be extended
    /// (zero while routes remain to be opened).
    pub(crate) fn lower_bound(&self, ctx: &Context<'_, T>) -> T {
        let t_min = if self.routes_left(ctx) > 0 {
            T::zero()
        } else {
            self.time
        };
        let inst = ctx.instance;
        clients(self.unassigned).fold(self.cost, |acc, j| {
            acc + T::weighted(inst.weight(j), t_min + ctx.min_in[j] + inst.service(j))
        })
    }

    pub(crate) fn children(&self, ctx: &Context<'_, T>) -> Vec<Node<T>> {
        let inst = ctx.instance;
        let remaining = self.unassigned.count_ones() as usize;
        let routes_left = self.routes_left(ctx);
        let open = self.open();
        let last = open.last().copied().unwrap_or(0);
        let mut out = Vec::new();
        if remaining > routes_left {
            let mut candidates: Vec<usize> = clients(self.unassigned).collect();
            candidates.sort_by(|&a, &b| {
                let ca = inst.travel(last, a) + inst.service(a);
                let cb = inst.travel(last, b) + inst.service(b);
                ca.partial_cmp(&cb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
            });
            for j in candidates {
                let time = self.time + inst.travel(last, j) + inst.service(j);
                let mut child = self.clone();
                child.routes.last_mut().unwrap().push(j);
                child.time = time;
                child.cost = self.cost + T::weighted(inst.weight(j), time);
                child.unassigned &= !bit(j);
                out.push(child);
            }
        }
        let may_close = routes_left > 0 && !open.is_empty() && open.contains(&self.required);
        if may_close {
            let mut child = self.clone();
            if inst.travel(last, 0).is_infinite() {
                child.cost = T::infinity();
            }
            child.routes.push(Vec::new());
            child.time = T::zero();
            child.required = clients(self.unassigned).next().expect("clients remain for the new route");
            out.push(child);
        }
        out
    }
}

/// Proven-optimal solution by branch-and-bound, or the best found when
/// `node_limit` nodes have been expanded.
pub fn exact_solve<T: Scalar>(instance: &Instance<T>, node_limit: Option<u64>) -> Result<ExactOutcome<T>> {
    let (n, k) = (instance.n(), instance.k());
    if n < k {
        return Err(Error::InvalidInstance(format!("{n} clients cannot fill {k} routes")));
    }
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            solver: "exact_solve",
            n,
            limit: EXACT_LIMIT,
        });
    }
    let ctx = Context::new(instance);
    let mut search = Dfs {
        ctx: &ctx,
        best: None,
        best_cost: T::infinity(),
        nodes: 0,
        limit: node_limit.unwrap_or(u64::MAX),
        aborted: false,
    };
    search.visit(ctx.root());
    let proven = !search.aborted;
    let nodes = search.nodes;
    let solution = search.best.map(Solution::new).unwrap_or_else(|| {
        // node limit hit before any leaf: deal clients round robin
        let mut routes = vec![Vec::new(); k];
        for c in 1..=n {
            routes[(c - 1) % k].push(c);
        }
        Solution::new(routes)
    });
    let cost = evaluate_weighted_latency(instance, &solution)?.total;
    Ok(ExactOutcome {
        solution,
        cost,
        proven,
        nodes,
    })
}

struct Dfs<'c, 'a, T> {
    ctx: &'c Context<'a, T>,
    best: Option<Vec<Vec<usize>>>,
    best_cost: T,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl<T: Scalar> Dfs<'_, '_, T> {
    fn visit(&mut self, node: Node<T>) {
        if self.aborted {
            return;
        }
        if self.nodes >= self.limit {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        if node.is_leaf() {
            if node.routes.len() == self.ctx.instance.k() {
                let cost = node.leaf_cost(self.ctx);
                if self.best.is_none() || cost < self.best_cost - T::of(TIE_TOLERANCE) {
                    self.best_cost = cost;
                    self.best = Some(node.routes);
                }
            }
            return;
        }
        if self.best.is_some() && node.lower_bound(self.ctx) >= self.best_cost - T::of(TIE_TOLERANCE) {
            return;
        }
        for child in node.children(self.ctx) {
            self.visit(child);
        }
    }
}

/// Enumerates every solution with exactly `K` non-empty routes and returns
/// the cheapest; ties are broken by the lexicographically smallest sorted
/// route list.
pub fn brute_force_solve<T: Scalar>(instance: &Instance<T>) -> Result<(Solution, T)> {
    let (n, k) = (instance.n(), instance.k());
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            solver: "brute_force_solve",
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best: Option<(Vec<Vec<usize>>, T)> = None;
    let mut routes: Vec<Vec<usize>> = Vec::with_capacity(k);
    enumerate(instance, 1, &mut routes, &mut best);
    let (routes, cost) = best.ok_or_else(|| Error::InvalidInstance("no solution exists".into()))?;
    Ok((Solution::new(routes), cost))
}

/// Places clients `next..=n` in turn, each at any position of an existing
/// route or as a new route; every ordered partition arises exactly once.
fn enumerate<T: Scalar>(
    instance: &Instance<T>,
    next: usize,
    routes: &mut Vec<Vec<usize>>,
    best: &mut Option<(Vec<Vec<usize>>, T)>,
) {
    let (n, k) = (instance.n(), instance.k());
    if next > n {
        if routes.len() != k {
            return;
        }
        let solution = Solution::new(routes.clone());
        let cost = evaluate_weighted_latency(instance, &solution)
            .expect("enumerated solutions are valid")
            .total;
        let canonical = solution.canonical();
        let tol = T::of(TIE_TOLERANCE);
        let better = match best {
            None => true,
            Some((b, bc)) => cost < *bc - tol || ((cost - *bc).abs() <= tol && canonical < *b) || (bc.is_infinite() && cost.is_finite()),
        };
        if better {
            *best = Some((canonical, cost));
        }
        return;
    }
    // routes that must still be opened cannot outnumber the clients left
    if k - routes.len() > n - next + 1 {
        return;
    }
    for r in 0..routes.len() {
        for pos in 0..=routes[r].len() {
            routes[r].insert(pos, next);
            enumerate(instance, next + 1, routes, best);
            routes[r].remove(pos);
        }
    }
    if routes.len() < k {
        routes.push(vec![next]);
        enumerate(instance, next + 1, routes, best);
        routes.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Instance<f64> {
        let pts: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
        let rows = pts
            .iter()
            .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
            .collect();
        let w = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let r = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
        Instance::from_rows(k, rows, w, r).unwrap()
    }

    fn count_solutions(n: usize, k: usize) -> usize {
        // n! * C(n-1, k-1) / k!
        let fact = |x: usize| (1..=x).product::<usize>();
        let binom = fact(n - 1) / (fact(k - 1) * fact(n - k));
        fact(n) * binom / fact(k)
    }

    #[test]
    fn two_clients_one_route() {
        let rows = vec![vec![0.0, 3.0, 1.0], vec![3.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]];
        let inst = Instance::from_rows(1, rows, vec![1.0, 4.0], vec![0.0, 0.0]).unwrap();
        // (1, 2): 3 + 4 * 5 = 23; (2, 1): 4 * 1 + 3 = 7
        let out = exact_solve(&inst, None).unwrap();
        assert!(out.proven);
        assert_eq!(out.cost, 7.0);
        assert_eq!(out.solution, Solution::new(vec![vec![2, 1]]));
    }

    #[test]
    fn enumeration_counts() {
        for (n, k) in [(4, 1), (4, 2), (5, 3), (6, 2)] {
            let rows = vec![vec![1.0; n + 1]; n + 1];
            let inst = Instance::from_rows(k, rows, vec![1.0; n], vec![0.0; n]).unwrap();
            let mut count = 0usize;
            let mut routes = Vec::new();
            fn walk(inst: &Instance<f64>, next: usize, routes: &mut Vec<Vec<usize>>, count: &mut usize) {
                if next > inst.n() {
                    if routes.len() == inst.k() {
                        *count += 1;
                    }
                    return;
                }
                for r in 0..routes.len() {
                    for pos in 0..=routes[r].len() {
                        routes[r].insert(pos, next);
                        walk(inst, next + 1, routes, count);
                        routes[r].remove(pos);
                    }
                }
                if routes.len() < inst.k() {
                    routes.push(vec![next]);
                    walk(inst, next + 1, routes, count);
                    routes.pop();
                }
            }
            walk(&inst, 1, &mut routes, &mut count);
            assert_eq!(count, count_solutions(n, k), "n={n} k={k}");
        }
    }

    #[test]
    fn one_client_per_route_picks_best_assignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 4, 4);
        let (sol, cost) = brute_force_solve(&inst).unwrap();
        assert!(sol.routes().iter().all(|r| r.len() == 1));
        let direct: f64 = (1..=4).map(|c| inst.weight(c) * (inst.travel(0, c) + inst.service(c))).sum();
        assert!((cost - direct).abs() < 1e-9);
        assert!((exact_solve(&inst, None).unwrap().cost - direct).abs() < 1e-9);
    }

    #[test]
    fn exact_matches_brute_force_n6_k2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let inst = random_instance(&mut rng, 6, 2);
            let (_, brute) = brute_force_solve(&inst).unwrap();
            let exact = exact_solve(&inst, None).unwrap();
            assert!(exact.proven);
            assert!((exact.cost - brute).abs() <= 1e-9, "{} vs {brute}", exact.cost);
        }
    }

    /// Minimum leaf cost below `node`, checking the bound on the way.
    fn audit(ctx: &Context<'_, f64>, node: Node<f64>, checked: &mut usize) -> f64 {
        if node.is_leaf() {
            return if node.routes.len() == ctx.instance.k() {
                node.leaf_cost(ctx)
            } else {
                f64::INFINITY
            };
        }
        let lb = node.lower_bound(ctx);
        let best = node
            .children(ctx)
            .into_iter()
            .map(|c| audit(ctx, c, checked))
            .fold(f64::INFINITY, f64::min);
        assert!(lb <= best + 1e-9, "bound {lb} exceeds best completion {best}");
        *checked += 1;
        best
    }

    #[test]
    fn lower_bound_is_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, k) in [(5, 1), (5, 2), (6, 3)] {
            let inst = random_instance(&mut rng, n, k);
            let ctx = Context::new(&inst);
            let mut checked = 0;
            let best = audit(&ctx, ctx.root(), &mut checked);
            assert!(checked > 100);
            let (_, brute) = brute_force_solve(&inst).unwrap();
            assert!((best - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn node_limit_reports_unproven() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inst = random_instance(&mut rng, 8, 2);
        let out = exact_solve(&inst, Some(10)).unwrap();
        assert!(!out.proven);
        assert!(out.solution.validate(8, 2).is_ok());
    }

    fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permutations(items, k + 1, out);
            items.swap(k, i);
        }
    }

    #[test]
    fn chain_optimum_is_best_ordering() {
        // successive arcs 2, 2, 1, 1, 2, 1 along 1..=6, every other arc 10
        let steps = [2.0, 2.0, 1.0, 1.0, 2.0, 1.0];
        let mut rows = vec![vec![10.0; 7]; 7];
        for (idx, s) in steps.iter().enumerate() {
            rows[idx][idx + 1] = *s;
        }
        let inst = Instance::from_rows(1, rows, vec![1.0; 6], vec![0.0; 6]).unwrap();
        let mut orders = Vec::new();
        permutations(&mut (1..=6).collect(), 0, &mut orders);
        assert_eq!(orders.len(), 720);
        let best = orders
            .into_iter()
            .map(|o| evaluate_weighted_latency(&inst, &Solution::new(vec![o])).unwrap().total)
            .fold(f64::INFINITY, f64::min);
        let (_, brute) = brute_force_solve(&inst).unwrap();
        assert!(brute <= 34.0);
        assert_eq!(brute, best);
        assert_eq!(exact_solve(&inst, None).unwrap().cost, best);
    }

    #[test]
    fn unit_weight_single_route_matches_ils() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let inst = crate::model::make_ktrp(&random_instance(&mut rng, 5, 1));
        let exact = exact_solve(&inst, None).unwrap();
        let ils = crate::ils::ils_run(&inst, &crate::ils::IlsParams::with_seed(0)).unwrap();
        assert!(exact.cost <= ils.cost + 1e-9);
        assert!((exact.cost - ils.cost).abs() < 1e-9);
    }

    #[test]
    fn size_guards() {
        let n = 10;
        let rows = vec![vec![1.0; n + 1]; n + 1];
        let inst = Instance::from_rows(2, rows, vec![1.0; n], vec![0.0; n]).unwrap();
        assert!(matches!(brute_force_solve(&inst), Err(Error::TooLarge { .. })));
    }
}
