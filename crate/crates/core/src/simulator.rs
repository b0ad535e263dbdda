//! Statevector engine for QAOA circuits with diagonal cost Hamiltonians.
//!
//! Mixer layers `exp(-iβ ΣX)` are diagonal in the Hadamard basis, so they are
//! applied as `H^{⊗m}` (fast Walsh-Hadamard transform), a popcount-indexed
//! phase, and `H^{⊗m}` again. Cost layers are element-wise phases. Basis index
//! `k` encodes qubit `i` in bit `i`.
//!
//! Everything here runs on a single worker; reductions are plain left-to-right
//! sums so results are bit-reproducible.

use num_complex::Complex64;
use rand::Rng as _;
use thiserror::Error;

use crate::qaoa::QaoaParams;
use crate::rng::rng_from_seed;

/// Largest register the simulator allocates.
pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("state has {state} qubits but cost table has {costs}")]
    SizeMismatch { state: usize, costs: usize },
    #[error("{m} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { m: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    m: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|+⟩^{⊗m}`.
    pub fn uniform(m: usize) -> Self {
        let len = 1usize << m;
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self {
            m,
            amplitudes: vec![a; len],
        }
    }

    pub fn basis(m: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << m];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { m, amplitudes }
    }

    /// Wrap raw amplitudes; the length must be a power of two. No
    /// normalisation is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo { len });
        }
        Ok(Self {
            m: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Diagonal of a cost Hamiltonian: `costs[k] = C(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTable {
    m: usize,
    costs: Vec<u32>,
    max_cost: u32,
}

impl CostTable {
    pub fn new(costs: Vec<u32>) -> Result<Self, SimError> {
        let len = costs.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo { len });
        }
        let m = len.trailing_zeros() as usize;
        if m > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                m,
                limit: MAX_QUBITS,
            });
        }
        let max_cost = costs.iter().copied().max().unwrap_or(0);
        Ok(Self { m, costs, max_cost })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn costs(&self) -> &[u32] {
        &self.costs
    }

    pub fn max_cost(&self) -> u32 {
        self.max_cost
    }

    /// Smallest index attaining `max_cost`.
    pub fn argmax(&self) -> usize {
        self.costs
            .iter()
            .position(|&c| c == self.max_cost)
            .unwrap_or(0)
    }
}

/// Orthonormal Walsh-Hadamard transform, `1/√2` folded into every stage.
pub fn fwht_inplace(data: &mut [Complex64]) -> Result<(), SimError> {
    let len = data.len();
    if !len.is_power_of_two() {
        return Err(SimError::NotPowerOfTwo { len });
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * scale;
                *b = (x - y) * scale;
            }
        }
        half *= 2;
    }
    Ok(())
}

impl StateVector {
    pub fn fwht(&mut self) {
        fwht_inplace(&mut self.amplitudes).expect("state length is a power of two");
    }

    /// `exp(-iβX)` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let m = self.m;
        // exp(-iβ(m - 2·popcount(k))) for popcount 0..=m
        let phases: Vec<Complex64> = (0..=m)
            .map(|pc| Complex64::from_polar(1.0, -beta * (m as f64 - 2.0 * pc as f64)))
            .collect();
        self.fwht();
        for (k, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= phases[k.count_ones() as usize];
        }
        self.fwht();
    }

    /// `|k⟩ ↦ exp(-iγ·C(k))|k⟩`.
    pub fn apply_diagonal_phase(&mut self, costs: &CostTable, gamma: f64) -> Result<(), SimError> {
        self.check(costs)?;
        // Integer costs: one phase per distinct value.
        let phases: Vec<Complex64> = (0..=costs.max_cost)
            .map(|c| Complex64::from_polar(1.0, -gamma * c as f64))
            .collect();
        for (a, &c) in self.amplitudes.iter_mut().zip(&costs.costs) {
            *a *= phases[c as usize];
        }
        Ok(())
    }

    /// `Σ_k |a_k|² C(k)`.
    pub fn expectation(&self, costs: &CostTable) -> Result<f64, SimError> {
        self.check(costs)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&costs.costs)
            .map(|(a, &c)| a.norm_sqr() * c as f64)
            .sum())
    }

    /// Draw `shots` basis indices i.i.d. from `|a_k|²`.
    pub fn sample(&self, shots: usize, seed: u64) -> Vec<usize> {
        let mut cumulative = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for a in &self.amplitudes {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        let last = self.amplitudes.len() - 1;
        let mut rng = rng_from_seed(seed);
        (0..shots)
            .map(|_| {
                let u = rng.random::<f64>() * total;
                // First index whose cumulative mass exceeds u; zero-probability
                // entries never satisfy the strict comparison.
                cumulative.partition_point(|&c| c <= u).min(last)
            })
            .collect()
    }

    fn check(&self, costs: &CostTable) -> Result<(), SimError> {
        if costs.m != self.m {
            return Err(SimError::SizeMismatch {
                state: self.m,
                costs: costs.m,
            });
        }
        Ok(())
    }
}

/// `Π_k exp(-iβ_k H_B) exp(-iγ_k H_C) |+⟩^{⊗m}`, layer 1 applied first.
pub fn run_ansatz(costs: &CostTable, params: &QaoaParams) -> StateVector {
    let mut state = StateVector::uniform(costs.num_qubits());
    for (&gamma, &beta) in params.gamma().iter().zip(params.beta()) {
        state
            .apply_diagonal_phase(costs, gamma)
            .expect("state built from the same table");
        state.apply_mixer(beta);
    }
    state
}

/// Free-function forms of the [`StateVector`] methods.
pub fn apply_mixer(state: &mut StateVector, beta: f64) {
    state.apply_mixer(beta);
}

pub fn apply_diagonal_phase(
    state: &mut StateVector,
    costs: &CostTable,
    gamma: f64,
) -> Result<(), SimError> {
    state.apply_diagonal_phase(costs, gamma)
}

pub fn expectation(state: &StateVector, costs: &CostTable) -> Result<f64, SimError> {
    state.expectation(costs)
}

pub fn sample_colorings(state: &StateVector, shots: usize, seed: u64) -> Vec<usize> {
    state.sample(shots, seed)
}
