//! Problem-variant adapters: service-time folding, the rig-start
//! (multi-depot) construction, the unweighted reduction and random weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::instance::{rig_case, RigArc};
use crate::model::Instance;
use crate::scalar::Scalar;

/// Where a folded service time is moved to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldDirection {
    /// `c[h][i] += r_i` for every arc entering client `i`. Objective values
    /// are preserved.
    Incoming,
    /// `c[i][j] += r_i` for every arc leaving client `i`. A client's own
    /// service no longer counts towards its latency.
    Outgoing,
}

/// Moves every service time into the travel matrix and zeroes `r`.
pub fn fold_service_times<T: Scalar>(instance: &Instance<T>, direction: FoldDirection) -> Instance<T> {
    let mut out = instance.clone();
    let dim = instance.dim();
    let service: Vec<T> = (0..dim).map(|i| instance.service(i)).collect();
    let travel = out.travel_mut();
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let extra = match direction {
                FoldDirection::Incoming => service[j],
                FoldDirection::Outgoing => service[i],
            };
            travel[i * dim + j] = travel[i * dim + j] + extra;
        }
    }
    out.clear_service();
    out
}

/// Unweighted, zero-service reduction (kTRP / kTRPDC form).
pub fn make_ktrp<T: Scalar>(instance: &Instance<T>) -> Instance<T> {
    let n = instance.n();
    instance
        .clone()
        .with_weights(vec![T::one(); n])
        .and_then(|i| i.with_service(vec![T::zero(); n]))
        .expect("unit weights and zero service are always valid")
}

/// Draws every client weight i.i.d. uniform on `[0.5, 2.0]` from a ChaCha8
/// stream seeded with `seed` (via `SeedableRng::seed_from_u64`). Rig starts
/// keep their zero weight.
pub fn generate_wlql_weights<T: Scalar>(instance: &Instance<T>, seed: u64) -> Instance<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = instance.rig_starts();
    let weights = instance
        .clients()
        .map(|v| {
            let w: f64 = rng.gen_range(0.5..=2.0);
            if v <= delta {
                T::zero()
            } else {
                T::of(w)
            }
        })
        .collect();
    instance
        .clone()
        .with_weights(weights)
        .expect("generated weights are positive")
}

/// A well (client) of a workover-rig network.
#[derive(Debug, Clone, PartialEq)]
pub struct RigClient<T> {
    pub weight: T,
    pub service: T,
    pub deadline: T,
}

/// Builds the single-depot instance for a network with `rigs` starting
/// locations.
///
/// `travel` is the square matrix over the real locations, the `rigs` rig
/// positions first and the clients after them. The result has the depot,
/// then one zero-weight vertex per rig start, then the clients, and
/// `K = rigs`.
pub fn wrrp_transform<T: Scalar>(
    rigs: usize,
    clients: &[RigClient<T>],
    travel: &[Vec<T>],
) -> Result<Instance<T>> {
    let m = clients.len();
    if rigs == 0 {
        return Err(Error::InvalidTransform("at least one rig is required".into()));
    }
    if rigs > m {
        return Err(Error::InvalidTransform(format!(
            "{rigs} rigs cannot each serve one of {m} clients"
        )));
    }
    let locations = rigs + m;
    if travel.len() != locations || travel.iter().any(|row| row.len() != locations) {
        return Err(Error::InvalidTransform(format!(
            "travel matrix must be {locations} x {locations}"
        )));
    }
    let dim = locations + 1;
    let mut matrix = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            matrix[i * dim + j] = match rig_case(i, j, rigs) {
                RigArc::Zero => T::zero(),
                RigArc::Forbidden => T::infinity(),
                RigArc::Travel => travel[i - 1][j - 1],
            };
        }
    }
    let zeros = std::iter::repeat_n(T::zero(), rigs);
    let weights = zeros.clone().chain(clients.iter().map(|c| c.weight)).collect();
    let service = zeros.chain(clients.iter().map(|c| c.service)).collect();
    let deadlines = std::iter::repeat_n(T::infinity(), rigs)
        .chain(clients.iter().map(|c| c.deadline))
        .collect();
    Instance::new(rigs, matrix, weights, service)?
        .with_deadlines(deadlines)?
        .with_rig_starts(rigs)
}
