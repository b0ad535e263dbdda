//! The qubit-saving coupling framework.
//!
//! A graph is split into a dense part `V₀`, simulated on qubits, and the
//! remainder `V₁`, handled classically. Edges fall into three classes:
//! `E₀` inside `V₀`, `E₁` inside `V₁` and the cross edges `E₀₁`. For a fixed
//! coloring `s₀` of `V₀`, the best achievable cut on the remaining edges is
//! OPT-REM(s₀), and
//!
//! ```text
//! MAX-CUT(G) = max_{s₀} CUT₀(s₀) + OPT-REM(s₀).
//! ```
//!
//! Fixing instead a coloring `s₁` of `V₁` linearises the cross edges into
//! per-qubit phases (the Γ table), so `max_{s₀} CUT₀ + CUT₀₁` is an ordinary
//! `n₀`-qubit QAOA problem. Multi-QAOA runs that inner problem for every `s₁`
//! of a guarantee set; [`algorithm4`] walks `s₁` by single-vertex flips.
//!
//! Sub-colorings pack into integers with bit `i` holding the color of the
//! `i`-th smallest vertex of the side. On the `V₀` side that bit is also the
//! qubit index.

use std::collections::HashMap;

use rand::seq::index::sample;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Coloring, Graph, GraphError};
use crate::guarantee::GuaranteeSet;
use crate::qaoa::{optimize, QaoaConfig, QaoaError, QaoaResult};
use crate::rng::{derive_seed, rng_from_seed};
use crate::simulator::{CostTable, SimError, MAX_QUBITS};

/// Limit on either side for exhaustive enumeration.
pub const EXHAUSTIVE_SIDE_LIMIT: usize = 26;

const DENSE_FALLBACK_SAMPLES: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("subgraph size {n0} outside 1..={n}")]
    SubgraphSize { n0: usize, n: usize },
    #[error("vertex {vertex} is not in the graph")]
    VertexOutOfRange { vertex: usize },
    #[error("expected a {expected:?} coloring, got {got:?}")]
    SideMismatch { expected: Side, got: Side },
    #[error("{side:?} coloring has length {got}, side has {expected} vertices")]
    LengthMismatch {
        side: Side,
        expected: usize,
        got: usize,
    },
    #[error("{side:?} has {size} vertices, exhaustive limit is {limit}")]
    TooLarge { side: Side, size: usize, limit: usize },
    #[error("no {n0}-vertex subset met the average-density bound")]
    DensityUnmet { n0: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    V0,
    V1,
}

/// Coloring of one side of a partition, ordered by sorted vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubColoring {
    side: Side,
    bits: Vec<bool>,
}

impl SubColoring {
    pub fn new(side: Side, bits: Vec<bool>) -> Self {
        Self { side, bits }
    }

    pub fn zeros(side: Side, len: usize) -> Self {
        Self {
            side,
            bits: vec![false; len],
        }
    }

    pub fn from_index(side: Side, len: usize, index: u64) -> Self {
        Self {
            side,
            bits: (0..len).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.bits[i] = !out.bits[i];
        out
    }

    pub fn complement(&self) -> Self {
        Self {
            side: self.side,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

/// `(V₀, V₁)` split with classified edges.
#[derive(Debug, Clone)]
pub struct Partition<'g> {
    graph: &'g Graph,
    v0: Vec<usize>,
    v1: Vec<usize>,
    e0: Vec<(usize, usize)>,
    e1: Vec<(usize, usize)>,
    /// Cross edges stored as `(x ∈ V₀, y ∈ V₁)`.
    e01: Vec<(usize, usize)>,
    /// Vertex → (side, position within the side).
    position: Vec<(Side, usize)>,
}

impl<'g> Partition<'g> {
    pub fn new(graph: &'g Graph, v0: &[usize]) -> Result<Self, CouplingError> {
        let n = graph.n();
        let mut in_v0 = vec![false; n];
        for &v in v0 {
            if v >= n {
                return Err(CouplingError::VertexOutOfRange { vertex: v });
            }
            in_v0[v] = true;
        }
        let v0: Vec<usize> = (0..n).filter(|&v| in_v0[v]).collect();
        let v1: Vec<usize> = (0..n).filter(|&v| !in_v0[v]).collect();
        let mut position = vec![(Side::V0, 0); n];
        for (i, &v) in v0.iter().enumerate() {
            position[v] = (Side::V0, i);
        }
        for (i, &v) in v1.iter().enumerate() {
            position[v] = (Side::V1, i);
        }
        let (mut e0, mut e1, mut e01) = (Vec::new(), Vec::new(), Vec::new());
        for &(u, v) in graph.edges() {
            match (in_v0[u], in_v0[v]) {
                (true, true) => e0.push((u, v)),
                (false, false) => e1.push((u, v)),
                (true, false) => e01.push((u, v)),
                (false, true) => e01.push((v, u)),
            }
        }
        Ok(Self {
            graph,
            v0,
            v1,
            e0,
            e1,
            e01,
            position,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn v0(&self) -> &[usize] {
        &self.v0
    }

    pub fn v1(&self) -> &[usize] {
        &self.v1
    }

    pub fn n0(&self) -> usize {
        self.v0.len()
    }

    pub fn n1(&self) -> usize {
        self.v1.len()
    }

    pub fn e0(&self) -> &[(usize, usize)] {
        &self.e0
    }

    pub fn e1(&self) -> &[(usize, usize)] {
        &self.e1
    }

    pub fn e01(&self) -> &[(usize, usize)] {
        &self.e01
    }

    /// `|E − E₀|`.
    pub fn remaining_edges(&self) -> usize {
        self.e1.len() + self.e01.len()
    }

    /// Qubit index of a `V₀` vertex.
    pub fn qubit_of(&self, v: usize) -> Option<usize> {
        match self.position.get(v) {
            Some(&(Side::V0, i)) => Some(i),
            _ => None,
        }
    }

    fn side_len(&self, side: Side) -> usize {
        match side {
            Side::V0 => self.n0(),
            Side::V1 => self.n1(),
        }
    }

    pub(crate) fn check(&self, s: &SubColoring, side: Side) -> Result<(), CouplingError> {
        if s.side != side {
            return Err(CouplingError::SideMismatch {
                expected: side,
                got: s.side,
            });
        }
        let expected = self.side_len(side);
        if s.len() != expected {
            return Err(CouplingError::LengthMismatch {
                side,
                expected,
                got: s.len(),
            });
        }
        Ok(())
    }

    fn guard(&self, side: Side, limit: usize) -> Result<(), CouplingError> {
        let size = self.side_len(side);
        if size > limit {
            return Err(CouplingError::TooLarge { side, size, limit });
        }
        Ok(())
    }

    /// Full-graph coloring from the two halves.
    pub fn combine(&self, s0: &SubColoring, s1: &SubColoring) -> Result<Coloring, CouplingError> {
        self.check(s0, Side::V0)?;
        self.check(s1, Side::V1)?;
        Ok(Coloring::new(
            self.position
                .iter()
                .map(|&(side, i)| match side {
                    Side::V0 => s0.get(i),
                    Side::V1 => s1.get(i),
                })
                .collect(),
        ))
    }

    pub fn split(&self, s: &Coloring) -> Result<(SubColoring, SubColoring), CouplingError> {
        if s.len() != self.graph.n() {
            return Err(GraphError::LengthMismatch {
                expected: self.graph.n(),
                got: s.len(),
            }
            .into());
        }
        let s0 = self.v0.iter().map(|&v| s.get(v)).collect();
        let s1 = self.v1.iter().map(|&v| s.get(v)).collect();
        Ok((SubColoring::new(Side::V0, s0), SubColoring::new(Side::V1, s1)))
    }

    fn color(&self, v: usize, s0: &SubColoring, s1: &SubColoring) -> bool {
        match self.position[v] {
            (Side::V0, i) => s0.get(i),
            (Side::V1, i) => s1.get(i),
        }
    }

    /// `CUT₁(s₁)`.
    pub fn cut1(&self, s1: &SubColoring) -> usize {
        self.e1
            .iter()
            .filter(|&&(u, v)| s1.get(self.position[u].1) != s1.get(self.position[v].1))
            .count()
    }

    pub(crate) fn packed(&self) -> Result<PackedPartition, CouplingError> {
        self.guard(Side::V0, 63)?;
        self.guard(Side::V1, 63)?;
        let pos = |v: usize| self.position[v].1 as u32;
        let mut cross = vec![0u64; self.n0()];
        for &(x, y) in &self.e01 {
            cross[pos(x) as usize] |= 1 << pos(y);
        }
        Ok(PackedPartition {
            n1: self.n1(),
            e0: self.e0.iter().map(|&(u, v)| (pos(u), pos(v))).collect(),
            e1: self.e1.iter().map(|&(u, v)| (pos(u), pos(v))).collect(),
            cross,
        })
    }
}

/// Bitmask form of a partition for exhaustive loops.
#[derive(Debug, Clone)]
pub(crate) struct PackedPartition {
    pub n1: usize,
    e0: Vec<(u32, u32)>,
    e1: Vec<(u32, u32)>,
    /// Per `V₀` position: mask of cross-edge neighbours in `V₁`.
    cross: Vec<u64>,
}

impl PackedPartition {
    pub fn cut0(&self, s0: u64) -> u32 {
        self.e0
            .iter()
            .filter(|&&(a, b)| ((s0 >> a) ^ (s0 >> b)) & 1 == 1)
            .count() as u32
    }

    pub fn cut1(&self, s1: u64) -> u32 {
        self.e1
            .iter()
            .filter(|&&(a, b)| ((s1 >> a) ^ (s1 >> b)) & 1 == 1)
            .count() as u32
    }

    pub fn cut01(&self, s0: u64, s1: u64) -> u32 {
        self.cross
            .iter()
            .enumerate()
            .map(|(x, &mask)| {
                if (s0 >> x) & 1 == 0 {
                    (mask & s1).count_ones()
                } else {
                    (mask & !s1).count_ones()
                }
            })
            .sum()
    }

    /// `CUT₁` for every `s₁`.
    pub fn cut1_table(&self) -> Vec<u32> {
        (0..1u64 << self.n1).map(|s1| self.cut1(s1)).collect()
    }

    /// OPT-REM(s₀) and its smallest maximiser.
    pub fn opt_rem(&self, s0: u64, cut1: &[u32]) -> (u32, u64) {
        let mut best = (0u32, 0u64);
        for (s1, &c1) in cut1.iter().enumerate() {
            let rem = c1 + self.cut01(s0, s1 as u64);
            if rem > best.0 {
                best = (rem, s1 as u64);
            }
        }
        best
    }
}

/// Greedy densest-`n₀` selection with the average-density postcondition
/// `|E₀|·n(n−1) ≥ |E|·n₀(n₀−1)`; see [`select_dense_subgraph_seeded`].
pub fn select_dense_subgraph(g: &Graph, n0: usize) -> Result<Partition<'_>, CouplingError> {
    select_dense_subgraph_seeded(g, n0, 0)
}

/// Seed with a maximum-degree vertex, then repeatedly add the outside vertex
/// with the most edges into the current set (smallest index on ties). If the
/// result is sparser than a uniformly random `n₀`-subset on average, random
/// subsets drawn with `seed` are tried until one meets the average.
pub fn select_dense_subgraph_seeded(
    g: &Graph,
    n0: usize,
    seed: u64,
) -> Result<Partition<'_>, CouplingError> {
    let n = g.n();
    if n0 == 0 || n0 > n {
        return Err(CouplingError::SubgraphSize { n0, n });
    }
    let mut in_set = vec![false; n];
    let mut into = vec![0usize; n];
    let first = (0..n)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .expect("n >= 1");
    let mut chosen = vec![first];
    in_set[first] = true;
    for &w in g.neighbors(first) {
        into[w] += 1;
    }
    while chosen.len() < n0 {
        let next = (0..n)
            .filter(|&v| !in_set[v])
            .max_by_key(|&v| (into[v], std::cmp::Reverse(v)))
            .expect("fewer than n vertices chosen");
        in_set[next] = true;
        chosen.push(next);
        for &w in g.neighbors(next) {
            into[w] += 1;
        }
    }

    let meets = |e0: usize| e0 * n * n.saturating_sub(1) >= g.num_edges() * n0 * (n0 - 1);
    let greedy = Partition::new(g, &chosen)?;
    if meets(greedy.e0.len()) {
        return Ok(greedy);
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..DENSE_FALLBACK_SAMPLES {
        let subset = sample(&mut rng, n, n0).into_vec();
        let part = Partition::new(g, &subset)?;
        if meets(part.e0.len()) {
            return Ok(part);
        }
    }
    Err(CouplingError::DensityUnmet { n0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemComponents {
    pub cut0: usize,
    pub cut01: usize,
    pub cut1: usize,
}

impl RemComponents {
    /// `REM = CUT₀₁ + CUT₁`.
    pub fn rem(&self) -> usize {
        self.cut01 + self.cut1
    }

    pub fn total(&self) -> usize {
        self.cut0 + self.cut01 + self.cut1
    }
}

/// Cut counts per edge class.
pub fn rem_components(
    part: &Partition<'_>,
    s0: &SubColoring,
    s1: &SubColoring,
) -> Result<RemComponents, CouplingError> {
    part.check(s0, Side::V0)?;
    part.check(s1, Side::V1)?;
    let count = |edges: &[(usize, usize)]| {
        edges
            .iter()
            .filter(|&&(u, v)| part.color(u, s0, s1) != part.color(v, s0, s1))
            .count()
    };
    Ok(RemComponents {
        cut0: count(&part.e0),
        cut01: count(&part.e01),
        cut1: count(&part.e1),
    })
}

/// OPT-REM(s₀) by enumerating every `s₁`; ties go to the smallest `s₁`.
pub fn opt_rem_exact(
    part: &Partition<'_>,
    s0: &SubColoring,
) -> Result<(usize, SubColoring), CouplingError> {
    part.check(s0, Side::V0)?;
    part.guard(Side::V1, EXHAUSTIVE_SIDE_LIMIT)?;
    let packed = part.packed()?;
    let (value, s1) = packed.opt_rem(s0.to_index(), &packed.cut1_table());
    Ok((
        value as usize,
        SubColoring::from_index(Side::V1, part.n1(), s1),
    ))
}

/// OPT-REM for every `s₀`, indexed by packed `s₀`.
pub fn opt_rem_table(part: &Partition<'_>) -> Result<Vec<u32>, CouplingError> {
    part.guard(Side::V0, EXHAUSTIVE_SIDE_LIMIT)?;
    part.guard(Side::V1, EXHAUSTIVE_SIDE_LIMIT)?;
    let packed = part.packed()?;
    let cut1 = packed.cut1_table();
    Ok((0..1u64 << part.n0())
        .into_par_iter()
        .map(|s0| packed.opt_rem(s0, &cut1).0)
        .collect())
}

/// `max_{s₀} CUT₀(s₀) + OPT-REM(s₀)`, which equals MAX-CUT(G).
pub fn max_cut_via_reformulation(part: &Partition<'_>) -> Result<usize, CouplingError> {
    let opt = opt_rem_table(part)?;
    let packed = part.packed()?;
    Ok(opt
        .iter()
        .enumerate()
        .map(|(s0, &b)| packed.cut0(s0 as u64) + b)
        .max()
        .unwrap_or(0) as usize)
}

/// Qubits for the oracle-phase construction: an `n₀` register for `s₀`
/// plus an `l`-qubit value register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitBudget {
    pub n0: usize,
    pub l: usize,
    pub total: usize,
}

/// `l = ⌈log₂ |E − E₀|⌉`, zero when no edges leave `E₀`.
pub fn qubit_budget(part: &Partition<'_>) -> QubitBudget {
    let rem = part.remaining_edges();
    let l = if rem <= 1 {
        0
    } else {
        (usize::BITS - (rem - 1).leading_zeros()) as usize
    };
    QubitBudget {
        n0: part.n0(),
        l,
        total: part.n0() + l,
    }
}

fn guard_qubits(part: &Partition<'_>) -> Result<(), CouplingError> {
    part.guard(Side::V0, MAX_QUBITS)
}

/// Diagonal over the `s₀` register: `CUT₀(s₀) + rem_oracle(s₀)`, with `s₀`
/// passed packed. This is the phase the two-register oracle circuit leaves on
/// `|s₀⟩` once the value register is uncomputed.
pub fn oracle_phase_cost<F>(part: &Partition<'_>, rem_oracle: F) -> Result<CostTable, CouplingError>
where
    F: Fn(u64) -> u32,
{
    guard_qubits(part)?;
    let packed = part.packed_v0();
    let costs = (0..1u64 << part.n0())
        .map(|s0| packed.cut0(s0) + rem_oracle(s0))
        .collect();
    Ok(CostTable::new(costs)?)
}

impl Partition<'_> {
    /// Packed `E₀` only; valid for any `n₁`.
    fn packed_v0(&self) -> PackedPartition {
        let pos = |v: usize| self.position[v].1 as u32;
        PackedPartition {
            n1: 0,
            e0: self.e0.iter().map(|&(u, v)| (pos(u), pos(v))).collect(),
            e1: Vec::new(),
            cross: Vec::new(),
        }
    }
}

/// `Γ[x] = [Γ_{x,0}, Γ_{x,1}]` per `V₀` position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    entries: Vec<[u32; 2]>,
}

impl GammaTable {
    pub fn get(&self, x: usize, color: bool) -> u32 {
        self.entries[x][color as usize]
    }

    pub fn entries(&self) -> &[[u32; 2]] {
        &self.entries
    }

    /// `Σ_x Γ_{x, s₀(x)}` for packed `s₀`.
    pub fn contribution(&self, s0: u64) -> u32 {
        self.entries
            .iter()
            .enumerate()
            .map(|(x, e)| e[((s0 >> x) & 1) as usize])
            .sum()
    }
}

/// `Γ_{x,c}` = number of cross neighbours `y` of `x` with `s₁(y) ≠ c`, i.e.
/// the cross edges at `x` that are cut when `x` takes color `c`.
pub fn gamma_table(part: &Partition<'_>, s1: &SubColoring) -> Result<GammaTable, CouplingError> {
    part.check(s1, Side::V1)?;
    let mut entries = vec![[0u32; 2]; part.n0()];
    for &(x, y) in &part.e01 {
        let xi = part.position[x].1;
        let yc = s1.get(part.position[y].1);
        // cut when x's color is !yc
        entries[xi][(!yc) as usize] += 1;
    }
    Ok(GammaTable { entries })
}

/// `costs[s₀] = CUT₀(s₀) + Σ_x Γ_{x,s₀(x)} = CUT₀(s₀) + CUT₀₁(s₀, s₁)`.
pub fn coupled_cost_table(part: &Partition<'_>, s1: &SubColoring) -> Result<CostTable, CouplingError> {
    let gamma = gamma_table(part, s1)?;
    oracle_phase_cost(part, |s0| gamma.contribution(s0))
}

/// Result of solving `max_{s₀} CUT₀ + CUT₀₁(·, s₁)` for one fixed `s₁`.
#[derive(Debug, Clone)]
pub struct InnerSolution {
    pub s1: SubColoring,
    /// `CUT₁(s₁)` plus the inner objective: the QAOA expectation, or the
    /// exact table maximum in exact mode.
    pub value: f64,
    /// Concrete `s₀`: best sample, or the exact maximiser.
    pub s0: SubColoring,
    /// Cut of the combined coloring `(s₀, s₁)` on the whole graph.
    pub sampled_cut: usize,
    pub qaoa: Option<QaoaResult>,
}

/// Solve the fixed-`s₁` subproblem by QAOA (seeded per `s₁`) or exactly.
pub fn solve_fixed_s1(
    part: &Partition<'_>,
    s1: &SubColoring,
    config: &QaoaConfig,
    exact_inner: bool,
) -> Result<InnerSolution, CouplingError> {
    let table = coupled_cost_table(part, s1)?;
    let cut1 = part.cut1(s1);
    let (value, s0_index, inner_cost, qaoa) = if exact_inner {
        let k = table.argmax();
        (table.max_cost() as f64, k, table.max_cost(), None)
    } else {
        let seed = derive_seed(config.seed, s1_stream(s1));
        let res = optimize(&table, &config.with_seed(seed))?;
        let (k, c) = res.best_sampled;
        (res.expectation, k, c, Some(res))
    };
    Ok(InnerSolution {
        s1: s1.clone(),
        value: cut1 as f64 + value,
        s0: SubColoring::from_index(Side::V0, part.n0(), s0_index as u64),
        sampled_cut: cut1 + inner_cost as usize,
        qaoa,
    })
}

fn s1_stream(s1: &SubColoring) -> u64 {
    // Bits beyond 64 fold in; streams only need to differ in practice.
    s1.bits()
        .chunks(64)
        .enumerate()
        .fold(0u64, |acc, (i, chunk)| {
            let word = chunk
                .iter()
                .enumerate()
                .fold(0u64, |w, (j, &b)| w | ((b as u64) << j));
            derive_seed(acc ^ i as u64, word)
        })
}

#[derive(Debug, Clone)]
pub struct MultiQaoaOutcome {
    /// Best value over the guarantee set.
    pub value: f64,
    pub coloring: Coloring,
    pub sampled_cut: usize,
    /// Position in the guarantee set of the winning member.
    pub member: usize,
    pub per_member: Vec<InnerSolution>,
}

/// Solve the inner problem for every `s₁ ∈ T` and keep the best
/// (first member on ties).
pub fn run_multi_qaoa(
    part: &Partition<'_>,
    set: &GuaranteeSet,
    config: &QaoaConfig,
    exact_inner: bool,
) -> Result<MultiQaoaOutcome, CouplingError> {
    guard_qubits(part)?;
    let per_member = set
        .members()
        .par_iter()
        .map(|s1| solve_fixed_s1(part, s1, config, exact_inner))
        .collect::<Result<Vec<_>, _>>()?;
    let member = per_member
        .iter()
        .enumerate()
        .fold(0, |best, (i, sol)| if sol.value > per_member[best].value { i } else { best });
    let win = &per_member[member];
    Ok(MultiQaoaOutcome {
        value: win.value,
        coloring: part.combine(&win.s0, &win.s1)?,
        sampled_cut: win.sampled_cut,
        member,
        per_member,
    })
}

#[derive(Debug, Clone)]
pub struct Algorithm4Outcome {
    pub value: f64,
    pub v0: Vec<usize>,
    pub s1: SubColoring,
    pub inner: InnerSolution,
    pub coloring: Coloring,
    /// Accepted values, starting with the all-zeros `s₁`; strictly increasing.
    pub trace: Vec<f64>,
    /// Number of inner solves actually run (cache misses).
    pub evaluations: usize,
}

/// Local search over `s₁` with the coupled inner solve as the objective.
///
/// Starts from all-zeros `s₁`; each sweep evaluates every single-vertex flip,
/// takes the best (smallest vertex on ties) and accepts it only if it strictly
/// improves the current value.
pub fn algorithm4(
    g: &Graph,
    n0: usize,
    config: &QaoaConfig,
    exact_inner: bool,
) -> Result<Algorithm4Outcome, CouplingError> {
    let part = select_dense_subgraph(g, n0)?;
    algorithm4_on(&part, config, exact_inner)
}

/// [`algorithm4`] on a given partition.
pub fn algorithm4_on(
    part: &Partition<'_>,
    config: &QaoaConfig,
    exact_inner: bool,
) -> Result<Algorithm4Outcome, CouplingError> {
    guard_qubits(part)?;
    let mut cache: HashMap<SubColoring, InnerSolution> = HashMap::new();
    let mut evaluations = 0;

    let start = SubColoring::zeros(Side::V1, part.n1());
    let mut current = solve_fixed_s1(part, &start, config, exact_inner)?;
    evaluations += 1;
    cache.insert(start, current.clone());
    let mut trace = vec![current.value];

    loop {
        let flips: Vec<SubColoring> = (0..part.n1()).map(|u| current.s1.flipped(u)).collect();
        let missing: Vec<&SubColoring> = flips.iter().filter(|s| !cache.contains_key(*s)).collect();
        let solved = missing
            .par_iter()
            .map(|s1| solve_fixed_s1(part, s1, config, exact_inner))
            .collect::<Result<Vec<_>, _>>()?;
        evaluations += solved.len();
        for sol in solved {
            cache.insert(sol.s1.clone(), sol);
        }
        let best = flips
            .iter()
            .map(|s| &cache[s])
            .fold(None::<&InnerSolution>, |best, sol| match best {
                Some(b) if b.value >= sol.value => Some(b),
                _ => Some(sol),
            });
        match best {
            Some(sol) if sol.value > current.value => {
                current = sol.clone();
                trace.push(current.value);
            }
            _ => break,
        }
    }

    Ok(Algorithm4Outcome {
        value: current.value,
        v0: part.v0().to_vec(),
        coloring: part.combine(&current.s0, &current.s1)?,
        s1: current.s1.clone(),
        inner: current,
        trace,
        evaluations,
    })
}
