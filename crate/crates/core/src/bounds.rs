//! Closed-form approximation bounds and device sizing.
//!
//! With a quantum ratio `α` on the `V₀` part and a classical ratio `β` on
//! OPT-REM, the coupled ratio is at least `α(1 + (β−1)·max_b/max_ab)`. If
//! `V₀` is at least as dense as a random subset, the coupled ratio beats `β`
//! whenever `n₀(n₀−1)/(n(n−1))` exceeds [`lemma2_threshold`].

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BoundsError {
    #[error("alpha {0} outside (0, 1]")]
    Alpha(f64),
    #[error("beta {0} outside (0, 1]")]
    Beta(f64),
    #[error("n0 = {n0} exceeds n = {n}")]
    Sizes { n: usize, n0: usize },
    #[error("max_ab is zero")]
    ZeroOptimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub n0: usize,
    pub gamma0: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, beta: f64, n: usize, n0: usize, gamma0: f64) -> Result<Self, BoundsError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(BoundsError::Alpha(alpha));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(BoundsError::Beta(beta));
        }
        if n0 > n {
            return Err(BoundsError::Sizes { n, n0 });
        }
        Ok(Self {
            alpha,
            beta,
            n,
            n0,
            gamma0,
        })
    }
}

/// `max_b = max_s OPT-REM(s)` and `max_ab = MAX-CUT(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceStats {
    pub max_b: usize,
    pub max_ab: usize,
}

/// `α·(1 + (β−1)·max_b/max_ab)`.
pub fn lemma1_bound(alpha: f64, beta: f64, stats: InstanceStats) -> Result<f64, BoundsError> {
    if stats.max_ab == 0 {
        return Err(BoundsError::ZeroOptimum);
    }
    Ok(alpha * (1.0 + (beta - 1.0) * stats.max_b as f64 / stats.max_ab as f64))
}

/// `1 − ½(1/α + 1/(1−β) − 1/(α(1−β)))`, or 1.0 when `α ≤ β`.
pub fn lemma2_threshold(alpha: f64, beta: f64) -> f64 {
    if alpha <= beta {
        return 1.0;
    }
    1.0 - 0.5 * (1.0 / alpha + 1.0 / (1.0 - beta) - 1.0 / (alpha * (1.0 - beta)))
}

fn pair_fraction(n0: usize, n: usize) -> f64 {
    (n0 * n0.saturating_sub(1)) as f64 / (n * n.saturating_sub(1)) as f64
}

/// `n₀(n₀−1)/(n(n−1))` is decreasing in `n`, so scan upward while the
/// predicate holds.
fn scan(n0: usize, holds: impl Fn(f64) -> bool) -> usize {
    let mut n = n0;
    while holds(pair_fraction(n0, n + 1)) {
        n += 1;
    }
    n
}

/// Largest `n ≥ n₀` with `n₀(n₀−1)/(n(n−1)) > lemma2_threshold(α, β)`.
pub fn max_n_lemma2(n0: usize, alpha: f64, beta: f64) -> usize {
    let t = lemma2_threshold(alpha, beta);
    if t >= 1.0 || n0 < 2 {
        return n0;
    }
    scan(n0, |f| f > t)
}

/// `|E|·n₀(n₀−1)/(n(n−1))`, the mean of `|E₀|` over uniform `n₀`-subsets.
pub fn expected_subgraph_edges(num_edges: usize, n: usize, n0: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    num_edges as f64 * pair_fraction(n0, n)
}

/// Largest `n` with `n₀(n₀−1)/(n(n−1)) ≥ γ₀/α`, for the uniform random
/// completion of `V₁`. `None` when `γ₀ > α`.
pub fn max_n_trivial_half(n0: usize, gamma0: f64, alpha: f64) -> Option<usize> {
    if gamma0 > alpha {
        return None;
    }
    let t = gamma0 / alpha;
    if n0 < 2 {
        return Some(n0);
    }
    Some(scan(n0, |f| f >= t))
}

/// `α·n₀(n₀−1)/(n(n−1))`.
pub fn trivial_half_bound(alpha: f64, n: usize, n0: usize) -> f64 {
    if n < 2 {
        return alpha;
    }
    alpha * pair_fraction(n0, n)
}

/// Device labels and qubit counts for the sizing tables.
pub const DEVICES: [(&str, usize); 7] = [
    ("Tianmu-1", 36),
    ("Maryland", 40),
    ("Sycamore", 53),
    ("Zuchongzhi2", 66),
    ("IonQ", 79),
    ("Aspen-M", 80),
    ("Eagle", 127),
];

/// Extra row of the `β = ½` table.
pub const LARGE_DEVICE: (&str, usize) = ("delusional device", 1024);

/// `α` and `β` values of the threshold grid.
pub const GRID: [f64; 8] = [0.85, 0.87, 0.89, 0.91, 0.93, 0.95, 0.97, 0.99];

/// `(α, β)` pairs used for device sizing.
pub const SIZING_PAIRS: [(f64, f64); 2] = [(0.95, 0.89), (0.97, 0.91)];

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceRow {
    pub device: &'static str,
    pub n0: usize,
    pub max_n: usize,
}

impl DeviceRow {
    pub fn delta(&self) -> usize {
        self.max_n - self.n0
    }
}

/// `(α, β, threshold)` for every grid pair, α-major.
pub fn threshold_grid() -> Vec<(f64, f64, f64)> {
    GRID.iter()
        .flat_map(|&a| GRID.iter().map(move |&b| (a, b, lemma2_threshold(a, b))))
        .collect()
}

pub fn device_table_lemma2(alpha: f64, beta: f64) -> Vec<DeviceRow> {
    DEVICES
        .iter()
        .map(|&(device, n0)| DeviceRow {
            device,
            n0,
            max_n: max_n_lemma2(n0, alpha, beta),
        })
        .collect()
}

/// Sizing at `α = 1`, `β = ½` for target ratio `γ₀`.
pub fn device_table_trivial_half(gamma0: f64) -> Vec<DeviceRow> {
    DEVICES
        .iter()
        .chain(std::iter::once(&LARGE_DEVICE))
        .map(|&(device, n0)| DeviceRow {
            device,
            n0,
            max_n: max_n_trivial_half(n0, gamma0, 1.0).unwrap_or(n0),
        })
        .collect()
}
