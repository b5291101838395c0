/// Number of edges in a clique on `x` vertices, `(x^2 - x) / 2`.
pub fn tau(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Minimum number of same-route pairs among `gamma` clients spread over at
/// most `k` routes: the clients are split as evenly as possible, so
/// `gamma mod k` routes get `ceil(gamma / k)` clients and the rest get
/// `floor(gamma / k)`.
pub fn omega(gamma: u64, k: u64) -> u64 {
    assert!(k >= 1, "omega needs at least one route");
    let rem = gamma % k;
    let floor = gamma / k;
    let ceil = gamma.div_ceil(k);
    rem * tau(ceil) + (k - rem) * tau(floor)
}
