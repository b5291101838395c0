use crate::error::{Error, Result};

/// `K` ordered client sequences; each route implicitly starts and ends at
/// the depot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Solution {
    routes: Vec<Vec<usize>>,
}

impl Solution {
    pub fn new(routes: Vec<Vec<usize>>) -> Self {
        Self { routes }
    }

    pub fn routes(&self) -> &[Vec<usize>] {
        &self.routes
    }

    pub fn routes_mut(&mut self) -> &mut Vec<Vec<usize>> {
        &mut self.routes
    }

    pub fn into_routes(self) -> Vec<Vec<usize>> {
        self.routes
    }

    /// Checks that there are exactly `k` non-empty routes covering every
    /// client `1..=n` exactly once.
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        if self.routes.len() != k {
            return Err(Error::InvalidSolution(format!(
                "{} routes, expected exactly {k}",
                self.routes.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for (r, route) in self.routes.iter().enumerate() {
            if route.is_empty() {
                return Err(Error::InvalidSolution(format!("route {r} is empty")));
            }
            for &c in route {
                if c == 0 || c > n {
                    return Err(Error::InvalidSolution(format!(
                        "route {r} visits {c}, which is not a client in 1..={n}"
                    )));
                }
                if seen[c] {
                    return Err(Error::InvalidSolution(format!("client {c} is visited twice")));
                }
                seen[c] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&c| !seen[c]) {
            return Err(Error::InvalidSolution(format!("client {missing} is not visited")));
        }
        Ok(())
    }

    /// Routes sorted lexicographically; equal for solutions that differ only
    /// in route order.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut routes = self.routes.clone();
        routes.sort();
        routes
    }

    /// Equality as a multiset of routes (route indexing ignored).
    pub fn same_routes(&self, other: &Solution) -> bool {
        self.routes.len() == other.routes.len() && self.canonical() == other.canonical()
    }

    pub fn client_count(&self) -> usize {
        self.routes.iter().map(Vec::len).sum()
    }
}

impl From<Vec<Vec<usize>>> for Solution {
    fn from(routes: Vec<Vec<usize>>) -> Self {
        Self::new(routes)
    }
}
