#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wktrp::{InstanceF64, Solution};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Euclidean instance on random points with random weights and service.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize) -> InstanceF64 {
    let pts: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
    let rows = pts
        .iter()
        .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
        .collect();
    let weights = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let service = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
    InstanceF64::from_rows(k, rows, weights, service).unwrap()
}

/// Uniformly shuffled clients cut into `k` non-empty routes.
pub fn random_solution(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Solution {
    let mut clients: Vec<usize> = (1..=n).collect();
    clients.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut routes = Vec::with_capacity(k);
    let mut start = 0;
    for c in cuts.into_iter().chain([n]) {
        routes.push(clients[start..c].to_vec());
        start = c;
    }
    Solution::new(routes)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}
