//! Max-Cut with a qubit-limited QAOA coupled to classical solvers.
//!
//! A dense `n₀`-vertex subgraph is optimised on a simulated QAOA register
//! while the remaining vertices are fixed classically. The crate provides
//! the statevector simulator, the partition and OPT-REM machinery, guarantee
//! sets, classical baselines, closed-form bounds and the experiment drivers.

pub mod baselines;
pub mod bfgs;
pub mod bounds;
pub mod coupling;
pub mod experiment;
pub mod graph;
pub mod guarantee;
pub mod qaoa;
pub mod rng;
pub mod simulator;

pub use baselines::{gw_max_cut, local_search, naive_random_cut, GwConfig, UnitVectors};
pub use coupling::{
    algorithm4, max_cut_via_reformulation, opt_rem_exact, select_dense_subgraph, Partition, Side,
    SubColoring,
};
pub use experiment::ExperimentConfig;
pub use graph::{brute_force_max_cut, cut_size, gen_erdos_renyi, parse_graph, Coloring, Graph};
pub use guarantee::GuaranteeSet;
pub use qaoa::{QaoaConfig, QaoaParams};
pub use simulator::{CostTable, StateVector};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Sim(#[from] simulator::SimError),
    #[error(transparent)]
    Qaoa(#[from] qaoa::QaoaError),
    #[error(transparent)]
    Coupling(#[from] coupling::CouplingError),
    #[error(transparent)]
    Guarantee(#[from] guarantee::GuaranteeError),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
}
