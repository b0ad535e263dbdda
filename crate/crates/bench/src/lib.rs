//! Shared inputs for the kernel benchmarks.

use cutcouple_core::coupling::{select_dense_subgraph, Side, SubColoring};
use cutcouple_core::graph::{gen_erdos_renyi, Graph};
use cutcouple_core::qaoa::{maxcut_cost_table, tqa_init, QaoaParams};
use cutcouple_core::simulator::CostTable;

/// Dense random graph, the regime the coupled experiments run in.
pub fn dense_graph(n: usize, seed: u64) -> Graph {
    gen_erdos_renyi(n, 0.8, seed)
}

/// Max-Cut table of an `m`-vertex dense graph plus `p`-layer TQA angles.
pub fn ansatz_inputs(m: usize, p: usize) -> (CostTable, QaoaParams) {
    let g = dense_graph(m, 7);
    (maxcut_cost_table(&g).expect("m within simulator limit"), tqa_init(p, 0.56))
}

/// Partition of a dense `n`-vertex graph with an alternating `V₁` coloring.
pub fn coupled_inputs(n: usize, n0: usize) -> (Graph, Vec<usize>, SubColoring) {
    let g = dense_graph(n, 3);
    let v0 = select_dense_subgraph(&g, n0).expect("valid n0").v0().to_vec();
    let s1 = SubColoring::new(Side::V1, (0..n - n0).map(|i| i % 2 == 1).collect());
    (g, v0, s1)
}
