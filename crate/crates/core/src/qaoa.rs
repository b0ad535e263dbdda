//! QAOA parameters, cost-table construction, TQA initialisation and the
//! BFGS training loop.

use thiserror::Error;

use crate::bfgs::{self, BfgsOptions};
use crate::graph::{cut_size_packed, Graph};
use crate::simulator::{run_ansatz, CostTable, SimError, MAX_QUBITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QaoaError {
    #[error("beta has {beta} entries but gamma has {gamma}")]
    LayerMismatch { beta: usize, gamma: usize },
    #[error("objective became non-finite during optimisation")]
    NonFiniteObjective,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Layer angles; `beta[k]` and `gamma[k]` belong to layer `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

impl QaoaParams {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self, QaoaError> {
        if beta.len() != gamma.len() {
            return Err(QaoaError::LayerMismatch {
                beta: beta.len(),
                gamma: gamma.len(),
            });
        }
        Ok(Self { beta, gamma })
    }

    pub fn layers(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Flat `[γ_1..γ_p, β_1..β_p]`, the optimiser's coordinate layout.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        let p = flat.len() / 2;
        Self {
            gamma: flat[..p].to_vec(),
            beta: flat[p..2 * p].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaConfig {
    /// Layer count; `None` means one layer per simulated qubit.
    pub p: Option<usize>,
    /// TQA time step.
    pub dt: f64,
    pub max_iters: usize,
    /// Base forward-difference step, scaled by `max(1, |θ_i|)`.
    pub fd_step: f64,
    pub grad_tol: f64,
    pub shots: usize,
    pub seed: u64,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        Self {
            p: None,
            dt: 0.56,
            max_iters: 100,
            fd_step: f64::EPSILON.sqrt(),
            grad_tol: 1e-6,
            shots: 1024,
            seed: 0,
        }
    }
}

impl QaoaConfig {
    pub fn layers_for(&self, m: usize) -> usize {
        self.p.unwrap_or(m).max(1)
    }

    pub fn validate(&self) -> Result<(), QaoaError> {
        if self.p == Some(0) {
            return Err(QaoaError::InvalidConfig("p must be at least 1"));
        }
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(QaoaError::InvalidConfig("dt must be positive"));
        }
        if self.max_iters == 0 {
            return Err(QaoaError::InvalidConfig("max_iters must be at least 1"));
        }
        if self.shots == 0 {
            return Err(QaoaError::InvalidConfig("shots must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaResult {
    pub params: QaoaParams,
    pub expectation: f64,
    /// Expectation at the TQA starting point.
    pub initial_expectation: f64,
    pub iterations: usize,
    /// Highest-cost sampled basis index (ties to the smaller index) and its cost.
    pub best_sampled: (usize, u32),
}

/// `costs[k] = cost_fn(k)` over `2^m` basis states.
pub fn build_cost_table<F>(m: usize, cost_fn: F) -> Result<CostTable, QaoaError>
where
    F: Fn(usize) -> u32,
{
    if m > MAX_QUBITS {
        return Err(SimError::TooManyQubits {
            m,
            limit: MAX_QUBITS,
        }
        .into());
    }
    Ok(CostTable::new((0..1usize << m).map(cost_fn).collect())?)
}

/// Max-Cut table of `g` with qubit `v` = vertex `v`.
pub fn maxcut_cost_table(g: &Graph) -> Result<CostTable, QaoaError> {
    build_cost_table(g.n(), |k| cut_size_packed(g, k as u64) as u32)
}

/// Midpoint-annealing schedule: `γ_k = ((k−½)/p)·dt`, `β_k = (1 − (k−½)/p)·dt`.
pub fn tqa_init(p: usize, dt: f64) -> QaoaParams {
    let frac = |k: usize| (k as f64 + 0.5) / p as f64;
    QaoaParams {
        gamma: (0..p).map(|k| frac(k) * dt).collect(),
        beta: (0..p).map(|k| (1.0 - frac(k)) * dt).collect(),
    }
}

/// `⟨β,γ|H_C|β,γ⟩` for the given angles.
pub fn ansatz_expectation(costs: &CostTable, params: &QaoaParams) -> f64 {
    run_ansatz(costs, params)
        .expectation(costs)
        .expect("ansatz state matches its table")
}

/// Maximise the ansatz expectation with BFGS from the TQA point, then sample
/// the final state.
pub fn optimize(costs: &CostTable, config: &QaoaConfig) -> Result<QaoaResult, QaoaError> {
    config.validate()?;
    let p = config.layers_for(costs.num_qubits());
    let start = tqa_init(p, config.dt);
    let initial_expectation = ansatz_expectation(costs, &start);
    if !initial_expectation.is_finite() {
        return Err(QaoaError::NonFiniteObjective);
    }

    let opts = BfgsOptions {
        max_iters: config.max_iters,
        grad_tol: config.grad_tol,
        fd_step: config.fd_step,
        ..BfgsOptions::default()
    };
    let objective = |flat: &[f64]| -ansatz_expectation(costs, &QaoaParams::from_flat(flat));
    let outcome = bfgs::minimize(objective, &start.to_flat(), &opts)
        .map_err(|_| QaoaError::NonFiniteObjective)?;

    let params = QaoaParams::from_flat(&outcome.x);
    let state = run_ansatz(costs, &params);
    let expectation = state.expectation(costs)?;
    let table = costs.costs();
    let best_sampled = state
        .sample(config.shots, config.seed)
        .into_iter()
        .map(|k| (k, table[k]))
        .fold((usize::MAX, 0u32), |best, cand| {
            if best.0 == usize::MAX || cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
                cand
            } else {
                best
            }
        });
    Ok(QaoaResult {
        params,
        expectation,
        initial_expectation,
        iterations: outcome.iterations,
        best_sampled,
    })
}

/// `achieved / optimum`, with a degenerate optimum of zero scoring 1.
pub fn approx_ratio(achieved: f64, optimum: f64) -> f64 {
    if optimum == 0.0 {
        1.0
    } else {
        achieved / optimum
    }
}
