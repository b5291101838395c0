//! Working solution with per-route caches and the three move operators.
//!
//! Each route caches the completion time at every position and the weight
//! of every suffix, so shifting a suffix by `d` time units changes the cost
//! by `d * suffix_weight`. Forbidden arcs are priced at zero in the latency
//! part and counted separately; together with any excess over finite
//! duration limits or deadlines they form a violation measure that is
//! compared before cost.

use std::cmp::Ordering;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Violation first, then weighted latency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Score<T> {
    pub violation: T,
    pub cost: T,
}

impl<T: Scalar> Score<T> {
    fn zero() -> Self {
        Self {
            violation: T::zero(),
            cost: T::zero(),
        }
    }

    fn add(self, other: Self) -> Self {
        Self {
            violation: self.violation + other.violation,
            cost: self.cost + other.cost,
        }
    }

    fn violation_tolerance() -> T {
        T::of(1e-9)
    }

    /// Lexicographic comparison with a small tolerance on the violation.
    pub fn compare(&self, other: &Self) -> Ordering {
        let tv = Self::violation_tolerance();
        if self.violation < other.violation - tv {
            Ordering::Less
        } else if self.violation > other.violation + tv {
            Ordering::Greater
        } else {
            self.cost.partial_cmp(&other.cost).unwrap_or(Ordering::Equal)
        }
    }

    /// Whether a move with this delta improves a solution of cost
    /// `reference` by more than rounding noise.
    fn improves(&self, reference: T) -> bool {
        let tv = Self::violation_tolerance();
        self.violation < -tv
            || (self.violation <= tv && self.cost < -T::improvement_tolerance(reference))
    }
}

/// Instance data rearranged for move evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Costs<T> {
    dim: usize,
    arc: Vec<T>,
    forbidden: Vec<bool>,
    weight: Vec<T>,
    service: Vec<T>,
    deadline: Vec<T>,
    limit: T,
    has_limits: bool,
}

impl<T: Scalar> Costs<T> {
    pub fn new(instance: &Instance<T>) -> Self {
        let dim = instance.dim();
        let raw = instance.travel_matrix();
        Self {
            dim,
            arc: raw
                .iter()
                .map(|&c| if c.is_finite() { c } else { T::zero() })
                .collect(),
            forbidden: raw.iter().map(|c| c.is_infinite()).collect(),
            weight: (0..dim).map(|v| instance.weight(v)).collect(),
            service: (0..dim).map(|v| instance.service(v)).collect(),
            deadline: (0..dim).map(|v| instance.deadline(v)).collect(),
            limit: instance.duration_limit().unwrap_or(T::infinity()),
            has_limits: instance.has_side_limits(),
        }
    }

    /// Travel plus service at the head: the time added by visiting `j`
    /// right after `i`.
    #[inline]
    fn step(&self, i: usize, j: usize) -> T {
        self.arc[i * self.dim + j] + self.service[j]
    }

    #[inline]
    fn arc(&self, i: usize, j: usize) -> T {
        self.arc[i * self.dim + j]
    }

    #[inline]
    fn forbidden(&self, i: usize, j: usize) -> T {
        if self.forbidden[i * self.dim + j] {
            T::one()
        } else {
            T::zero()
        }
    }

    /// Total excess over the duration limit and the deadlines along a
    /// vertex sequence.
    fn excess<I: IntoIterator<Item = usize>>(&self, seq: I) -> T {
        let mut time = T::zero();
        let mut prev = 0;
        let mut excess = T::zero();
        for v in seq {
            time = time + self.step(prev, v);
            if time > self.deadline[v] {
                excess = excess + (time - self.deadline[v]);
            }
            prev = v;
        }
        if prev != 0 {
            let back = self.arc(prev, 0);
            if !self.forbidden[prev * self.dim] {
                time = time + back;
            }
        }
        if time > self.limit {
            excess = excess + (time - self.limit);
        }
        excess
    }
}

/// Cached data of one route. Position 0 is the depot; client positions
/// run `1..=len`.
#[derive(Debug, Clone)]
struct RouteCache<T> {
    /// Completion time at each position, `time[0] = 0`.
    time: Vec<T>,
    /// `suffix[t]` = total weight at positions `t..=len`; `suffix[len + 1] = 0`.
    suffix: Vec<T>,
    score: Score<T>,
}

impl<T: Scalar> RouteCache<T> {
    fn build(costs: &Costs<T>, route: &[usize]) -> Self {
        let m = route.len();
        let mut time = Vec::with_capacity(m + 1);
        time.push(T::zero());
        let mut cost = T::zero();
        let mut violation = T::zero();
        let mut prev = 0;
        for &v in route {
            let t = *time.last().unwrap() + costs.step(prev, v);
            time.push(t);
            cost = cost + costs.weight[v] * t;
            violation = violation + costs.forbidden(prev, v);
            prev = v;
        }
        if m > 0 {
            violation = violation + costs.forbidden(prev, 0);
        }
        let mut suffix = vec![T::zero(); m + 2];
        for t in (1..=m).rev() {
            suffix[t] = suffix[t + 1] + costs.weight[route[t - 1]];
        }
        if costs.has_limits && m > 0 {
            violation = violation + costs.excess(route.iter().copied());
        }
        Self {
            time,
            suffix,
            score: Score { violation, cost },
        }
    }
}

/// Vertex at position `t` of `route`, with the depot at both ends.
#[inline]
fn node(route: &[usize], t: usize) -> usize {
    if t == 0 || t > route.len() {
        0
    } else {
        route[t - 1]
    }
}

/// A mutable solution with cached route data, supporting the local-search
/// moves of the ILS.
#[derive(Debug, Clone)]
pub struct LocalSearch<'a, T> {
    instance: &'a Instance<T>,
    costs: Costs<T>,
    routes: Vec<Vec<usize>>,
    cache: Vec<RouteCache<T>>,
    /// `(route, position)` of each client, positions 1-based.
    location: Vec<(usize, usize)>,
}

impl<'a, T: Scalar> LocalSearch<'a, T> {
    pub fn new(instance: &'a Instance<T>, solution: &Solution) -> Result<Self> {
        solution.validate(instance.n(), instance.k())?;
        let costs = Costs::new(instance);
        let mut search = Self {
            instance,
            costs,
            routes: solution.routes().to_vec(),
            cache: Vec::new(),
            location: vec![(usize::MAX, 0); instance.dim()],
        };
        search.rebuild_all();
        Ok(search)
    }

    pub fn instance(&self) -> &'a Instance<T> {
        self.instance
    }

    pub fn solution(&self) -> Solution {
        Solution::new(self.routes.clone())
    }

    pub fn routes(&self) -> &[Vec<usize>] {
        &self.routes
    }

    /// Replaces the working solution (same instance).
    pub fn set_solution(&mut self, solution: &Solution) {
        debug_assert!(solution.validate(self.instance.n(), self.instance.k()).is_ok());
        self.routes = solution.routes().to_vec();
        self.rebuild_all();
    }

    pub(crate) fn score(&self) -> Score<T> {
        self.cache.iter().fold(Score::zero(), |acc, c| acc.add(c.score))
    }

    /// Weighted latency, `+infinity` when a forbidden arc is used.
    pub fn cost(&self) -> T {
        let forbidden = self.routes.iter().any(|r| {
            let mut prev = 0;
            for &v in r {
                if self.costs.forbidden[prev * self.costs.dim + v] {
                    return true;
                }
                prev = v;
            }
            !r.is_empty() && self.costs.forbidden[prev * self.costs.dim]
        });
        if forbidden {
            T::infinity()
        } else {
            self.score().cost
        }
    }

    /// Total violation: forbidden arcs used plus excess over finite limits.
    pub fn violation(&self) -> T {
        self.score().violation
    }

    fn rebuild_all(&mut self) {
        self.cache = self
            .routes
            .iter()
            .map(|r| RouteCache::build(&self.costs, r))
            .collect();
        for r in 0..self.routes.len() {
            self.relocate_index(r);
        }
    }

    fn rebuild(&mut self, r: usize) {
        self.cache[r] = RouteCache::build(&self.costs, &self.routes[r]);
        self.relocate_index(r);
    }

    fn relocate_index(&mut self, r: usize) {
        for (t, &v) in self.routes[r].iter().enumerate() {
            self.location[v] = (r, t + 1);
        }
    }

    /// Score change of inserting `x` between positions `a` and `a + 1` of a
    /// route with the given cache. Excess is not included.
    fn insertion_delta(&self, route: &[usize], cache: &RouteCache<T>, a: usize, x: usize) -> Score<T> {
        let c = &self.costs;
        let prev = node(route, a);
        let next = node(route, a + 1);
        let latency = cache.time[a] + c.step(prev, x);
        let mut cost = c.weight[x] * latency;
        if a < route.len() {
            let shift = c.step(prev, x) + c.step(x, next) - c.step(prev, next);
            cost = cost + shift * cache.suffix[a + 1];
        }
        let violation = c.forbidden(prev, x) + c.forbidden(x, next) - c.forbidden(prev, next);
        Score { violation, cost }
    }

    /// Score change of removing the client at position `t`. Excess is not
    /// included.
    fn removal_delta(&self, r: usize, t: usize) -> Score<T> {
        let c = &self.costs;
        let route = &self.routes[r];
        let cache = &self.cache[r];
        let prev = node(route, t - 1);
        let v = node(route, t);
        let next = node(route, t + 1);
        let mut cost = -(c.weight[v] * cache.time[t]);
        if t < route.len() {
            let shift = c.step(prev, next) - c.step(prev, v) - c.step(v, next);
            cost = cost + shift * cache.suffix[t + 1];
        }
        let violation = c.forbidden(prev, next) - c.forbidden(prev, v) - c.forbidden(v, next);
        Score { violation, cost }
    }

    fn excess_part(&self, r: usize) -> T {
        if self.costs.has_limits {
            self.costs.excess(self.routes[r].iter().copied())
        } else {
            T::zero()
        }
    }

    /// Best position for `x` (not currently routed) over the given routes, as
    /// `(route, insertion index, delta)`.
    fn best_insertion(&self, x: usize, candidates: &[usize]) -> Option<(usize, usize, Score<T>)> {
        let mut best: Option<(usize, usize, Score<T>)> = None;
        for &r in candidates {
            let route = &self.routes[r];
            let cache = &self.cache[r];
            let old_excess = self.excess_part(r);
            for a in 0..=route.len() {
                let mut delta = self.insertion_delta(route, cache, a, x);
                if self.costs.has_limits {
                    let seq = route[..a].iter().copied().chain([x]).chain(route[a..].iter().copied());
                    delta.violation = delta.violation + self.costs.excess(seq) - old_excess;
                }
                if best.is_none_or(|(_, _, b)| delta.compare(&b) == Ordering::Less) {
                    best = Some((r, a, delta));
                }
            }
        }
        best
    }

    fn check_delta(&self, before: Score<T>, delta: Score<T>) {
        if cfg!(debug_assertions) {
            let after = self.score();
            let expected = before.add(delta);
            let tol = T::of(1e-6) * (T::one() + before.cost.abs());
            debug_assert!(
                (after.cost - expected.cost).abs() <= tol
                    && (after.violation - expected.violation).abs() <= tol,
                "incremental delta {delta:?} from {before:?} disagrees with recomputed {after:?}"
            );
        }
    }

    /// Scans clients in random order; for each, finds its lowest-cost
    /// reinsertion over all routes and positions and applies the first one
    /// that strictly improves the solution.
    pub fn relocate<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let n = self.instance.n();
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(rng);
        let reference = self.score().cost;
        for &v in &order {
            let (r, t) = self.location[v];
            if self.routes[r].len() == 1 {
                continue;
            }
            let removal = self.removal_delta(r, t);
            let mut reduced = self.routes[r].clone();
            reduced.remove(t - 1);
            let reduced_cache = RouteCache::build(&self.costs, &reduced);
            let source_excess_old = self.excess_part(r);
            let source_excess_new = if self.costs.has_limits {
                self.costs.excess(reduced.iter().copied())
            } else {
                T::zero()
            };

            let mut best: Option<(usize, usize, Score<T>)> = None;
            for target in 0..self.routes.len() {
                let same = target == r;
                let (route, cache) = if same {
                    (&reduced, &reduced_cache)
                } else {
                    (&self.routes[target], &self.cache[target])
                };
                let target_excess_old = if same { T::zero() } else { self.excess_part(target) };
                for a in 0..=route.len() {
                    if same && a == t - 1 {
                        continue;
                    }
                    let mut delta = removal.add(self.insertion_delta(route, cache, a, v));
                    if self.costs.has_limits {
                        let seq = route[..a].iter().copied().chain([v]).chain(route[a..].iter().copied());
                        let inserted = self.costs.excess(seq);
                        delta.violation = delta.violation + inserted - target_excess_old - source_excess_old;
                        if !same {
                            delta.violation = delta.violation + source_excess_new;
                        }
                    }
                    if best.is_none_or(|(_, _, b)| delta.compare(&b) == Ordering::Less) {
                        best = Some((target, a, delta));
                    }
                }
            }
            let Some((target, a, delta)) = best else { continue };
            if !delta.improves(reference) {
                continue;
            }
            let before = self.score();
            if target == r {
                reduced.insert(a, v);
                self.routes[r] = reduced;
                self.rebuild(r);
            } else {
                self.routes[r] = reduced;
                self.routes[target].insert(a, v);
                self.rebuild(r);
                self.rebuild(target);
            }
            self.check_delta(before, delta);
            return true;
        }
        false
    }

    /// Inter-route tail exchange: replaces arcs `(a_i, a_i+1)` and
    /// `(b_j, b_j+1)` of two routes with `(a_i, b_j+1)` and `(b_j, a_i+1)`.
    /// Depot-adjacent arcs are included; exchanges that would empty a route
    /// or merely swap or keep whole routes are skipped. Applies the first
    /// strictly improving exchange.
    pub fn two_opt_star<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let k = self.routes.len();
        if k < 2 {
            return false;
        }
        let mut pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .collect();
        pairs.shuffle(rng);
        let reference = self.score().cost;
        let c = &self.costs;
        for (ra, rb) in pairs {
            let (route_a, route_b) = (&self.routes[ra], &self.routes[rb]);
            let (cache_a, cache_b) = (&self.cache[ra], &self.cache[rb]);
            let (ma, mb) = (route_a.len(), route_b.len());
            let old_excess = self.excess_part(ra) + self.excess_part(rb);
            for i in 0..=ma {
                let ai = node(route_a, i);
                let ai_next = node(route_a, i + 1);
                for j in 0..=mb {
                    let whole_swap = i == 0 && j == 0;
                    let no_op = i == ma && j == mb;
                    let empties = (i == 0 && j == mb) || (j == 0 && i == ma);
                    if whole_swap || no_op || empties {
                        continue;
                    }
                    let bj = node(route_b, j);
                    let bj_next = node(route_b, j + 1);
                    let mut cost = T::zero();
                    if j < mb {
                        // tail of b now follows a_i
                        let shift = cache_a.time[i] + c.step(ai, bj_next) - cache_b.time[j + 1];
                        cost = cost + shift * cache_b.suffix[j + 1];
                    }
                    if i < ma {
                        let shift = cache_b.time[j] + c.step(bj, ai_next) - cache_a.time[i + 1];
                        cost = cost + shift * cache_a.suffix[i + 1];
                    }
                    let mut violation = c.forbidden(ai, bj_next) + c.forbidden(bj, ai_next)
                        - c.forbidden(ai, ai_next)
                        - c.forbidden(bj, bj_next);
                    if c.has_limits {
                        let new_a = route_a[..i].iter().chain(&route_b[j..]).copied();
                        let new_b = route_b[..j].iter().chain(&route_a[i..]).copied();
                        violation = violation + c.excess(new_a) + c.excess(new_b) - old_excess;
                    }
                    let delta = Score { violation, cost };
                    if !delta.improves(reference) {
                        continue;
                    }
                    let before = self.score();
                    let tail_a = self.routes[ra].split_off(i);
                    let tail_b = self.routes[rb].split_off(j);
                    self.routes[ra].extend(tail_b);
                    self.routes[rb].extend(tail_a);
                    self.rebuild(ra);
                    self.rebuild(rb);
                    self.check_delta(before, delta);
                    return true;
                }
            }
        }
        false
    }

    /// Removes `p` random clients at once (clamped to `n - 1`) and reinserts
    /// them one at a time, in removal order, at their lowest-cost position.
    /// When the clients still to place are exactly as many as the empty
    /// routes, each goes to the best empty route so all routes stay
    /// non-empty.
    pub fn p_relocate<R: Rng + ?Sized>(&mut self, p: usize, rng: &mut R) {
        let n = self.instance.n();
        let p = p.min(n.saturating_sub(1));
        if p == 0 {
            return;
        }
        let removed: Vec<usize> = index::sample(rng, n, p).into_iter().map(|i| i + 1).collect();
        let mut out = vec![false; n + 1];
        for &v in &removed {
            out[v] = true;
        }
        for route in &mut self.routes {
            route.retain(|v| !out[*v]);
        }
        self.rebuild_all();

        let all: Vec<usize> = (0..self.routes.len()).collect();
        for (idx, &x) in removed.iter().enumerate() {
            let remaining = p - idx;
            let empty: Vec<usize> = all.iter().copied().filter(|&r| self.routes[r].is_empty()).collect();
            let candidates = if remaining == empty.len() { &empty } else { &all };
            let (r, a, _) = self
                .best_insertion(x, candidates)
                .expect("at least one route is available");
            self.routes[r].insert(a, x);
            self.rebuild(r);
        }
        debug_assert!(self.solution().validate(n, self.instance.k()).is_ok());
    }
}

/// Random round-robin construction: shuffle the clients, then deal the t-th
/// one to route `t mod K`.
pub fn build_initial_solution<T: Scalar, R: Rng + ?Sized>(
    instance: &Instance<T>,
    rng: &mut R,
) -> Result<Solution> {
    let (n, k) = (instance.n(), instance.k());
    if n < k {
        return Err(Error::InvalidInstance(format!("{n} clients cannot fill {k} routes")));
    }
    let mut clients: Vec<usize> = (1..=n).collect();
    clients.shuffle(rng);
    let mut routes = vec![Vec::with_capacity(n / k + 1); k];
    for (t, v) in clients.into_iter().enumerate() {
        routes[t % k].push(v);
    }
    Ok(Solution::new(routes))
}

/// One relocate pass on `solution`; see [`LocalSearch::relocate`].
pub fn relocate<T: Scalar, R: Rng + ?Sized>(
    instance: &Instance<T>,
    solution: &mut Solution,
    rng: &mut R,
) -> Result<bool> {
    let mut search = LocalSearch::new(instance, solution)?;
    let improved = search.relocate(rng);
    *solution = search.solution();
    Ok(improved)
}

/// One 2-opt* pass on `solution`; see [`LocalSearch::two_opt_star`].
pub fn two_opt_star<T: Scalar, R: Rng + ?Sized>(
    instance: &Instance<T>,
    solution: &mut Solution,
    rng: &mut R,
) -> Result<bool> {
    let mut search = LocalSearch::new(instance, solution)?;
    let improved = search.two_opt_star(rng);
    *solution = search.solution();
    Ok(improved)
}

/// Perturbation; see [`LocalSearch::p_relocate`].
pub fn p_relocate<T: Scalar, R: Rng + ?Sized>(
    instance: &Instance<T>,
    solution: &mut Solution,
    p: usize,
    rng: &mut R,
) -> Result<()> {
    let mut search = LocalSearch::new(instance, solution)?;
    search.p_relocate(p, rng);
    *solution = search.solution();
    Ok(())
}
