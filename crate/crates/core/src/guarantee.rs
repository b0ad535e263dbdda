//! β-guarantee sets: collections `T` of `V₁` colorings such that for every
//! `s₀`, some member reaches `β · OPT-REM(s₀)`.
//!
//! `COVER_β(s₁)` is the set of `s₀` that `s₁` alone satisfies, which turns
//! finding a small `T` into set cover. Where OPT-REM(s₀) = 0 the requirement
//! is vacuous and every `s₁` covers `s₀`.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use thiserror::Error;

use crate::coupling::{
    opt_rem_exact, rem_components, select_dense_subgraph, CouplingError, Partition, Side,
    SubColoring, EXHAUSTIVE_SIDE_LIMIT,
};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

/// Largest `n₀ + n₁` for which [`RemTable`] is materialised.
pub const REM_TABLE_LIMIT: usize = 28;

/// Absolute slack on `REM ≥ β·OPT-REM` so that products like `0.9 · 10`
/// are not lost to rounding.
const COVER_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuaranteeError {
    #[error("beta {0} outside (0, 1]")]
    Beta(f64),
    #[error("guarantee set is empty")]
    Empty,
    #[error("member {index} is not a V1 coloring of length {expected}")]
    BadMember { index: usize, expected: usize },
    #[error("member {index} duplicates an earlier member")]
    Duplicate { index: usize },
    #[error("s0 = {s0} is covered by no candidate")]
    Uncoverable { s0: u64 },
    #[error("n0 + n1 = {size} exceeds the table limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

fn check_beta(beta: f64) -> Result<(), GuaranteeError> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(GuaranteeError::Beta(beta))
    }
}

/// A β value and its member `V₁` colorings.
#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeSet {
    beta: f64,
    members: Vec<SubColoring>,
}

impl GuaranteeSet {
    pub fn new(beta: f64, members: Vec<SubColoring>) -> Result<Self, GuaranteeError> {
        check_beta(beta)?;
        let Some(first) = members.first() else {
            return Err(GuaranteeError::Empty);
        };
        let expected = first.len();
        let mut seen = std::collections::HashSet::new();
        for (index, m) in members.iter().enumerate() {
            if m.side() != Side::V1 || m.len() != expected {
                return Err(GuaranteeError::BadMember { index, expected });
            }
            if !seen.insert(m) {
                return Err(GuaranteeError::Duplicate { index });
            }
        }
        Ok(Self { beta, members })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn members(&self) -> &[SubColoring] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn meets(rem: u32, opt: u32, beta: f64) -> bool {
    opt == 0 || rem as f64 + COVER_EPS >= beta * opt as f64
}

fn ratio(rem: u32, opt: u32) -> f64 {
    if opt == 0 {
        1.0
    } else {
        rem as f64 / opt as f64
    }
}

/// `s₀ ∈ COVER_β(s₁)`.
pub fn covers(
    part: &Partition<'_>,
    s1: &SubColoring,
    s0: &SubColoring,
    beta: f64,
) -> Result<bool, GuaranteeError> {
    check_beta(beta)?;
    let (opt, _) = opt_rem_exact(part, s0)?;
    let rem = rem_components(part, s0, s1)?.rem();
    Ok(meets(rem as u32, opt as u32, beta))
}

/// Exhaustive `REM(s₀, s₁)` for every pair, plus OPT-REM per `s₀`.
#[derive(Debug, Clone)]
pub struct RemTable {
    n0: usize,
    n1: usize,
    /// Indexed `s₀ << n₁ | s₁`.
    rem: Vec<u32>,
    opt: Vec<u32>,
}

impl RemTable {
    pub fn new(part: &Partition<'_>) -> Result<Self, GuaranteeError> {
        let (n0, n1) = (part.n0(), part.n1());
        for (side, size) in [(Side::V0, n0), (Side::V1, n1)] {
            if size > EXHAUSTIVE_SIDE_LIMIT {
                return Err(CouplingError::TooLarge {
                    side,
                    size,
                    limit: EXHAUSTIVE_SIDE_LIMIT,
                }
                .into());
            }
        }
        if n0 + n1 > REM_TABLE_LIMIT {
            return Err(GuaranteeError::TooLarge {
                size: n0 + n1,
                limit: REM_TABLE_LIMIT,
            });
        }
        let packed = part.packed()?;
        let cut1 = packed.cut1_table();
        let rows: Vec<Vec<u32>> = (0..1u64 << n0)
            .into_par_iter()
            .map(|s0| {
                cut1.iter()
                    .enumerate()
                    .map(|(s1, &c1)| c1 + packed.cut01(s0, s1 as u64))
                    .collect()
            })
            .collect();
        let opt = rows.iter().map(|r| r.iter().copied().max().unwrap_or(0)).collect();
        Ok(Self {
            n0,
            n1,
            rem: rows.concat(),
            opt,
        })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn rem(&self, s0: u64, s1: u64) -> u32 {
        self.rem[((s0 << self.n1) | s1) as usize]
    }

    pub fn opt_rem(&self, s0: u64) -> u32 {
        self.opt[s0 as usize]
    }

    pub fn max_opt_rem(&self) -> u32 {
        self.opt.iter().copied().max().unwrap_or(0)
    }

    pub fn covers(&self, s1: u64, s0: u64, beta: f64) -> bool {
        meets(self.rem(s0, s1), self.opt_rem(s0), beta)
    }
}

/// Greedy set cover over packed indices. Returns chosen `s₁` in pick order.
pub fn greedy_cover_indices(
    table: &RemTable,
    universe: &[u64],
    candidates: &[u64],
    beta: f64,
) -> Result<Vec<u64>, GuaranteeError> {
    check_beta(beta)?;
    let words = universe.len().div_ceil(64);
    let bitmaps: Vec<Vec<u64>> = candidates
        .par_iter()
        .map(|&s1| {
            let mut bits = vec![0u64; words];
            for (i, &s0) in universe.iter().enumerate() {
                if table.covers(s1, s0, beta) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();

    let mut uncovered = vec![0u64; words];
    for i in 0..universe.len() {
        uncovered[i / 64] |= 1 << (i % 64);
    }
    let mut left = universe.len();
    let mut chosen = Vec::new();
    while left > 0 {
        let mut best: Option<(u32, u64, usize)> = None;
        for (c, bits) in bitmaps.iter().enumerate() {
            let gain: u32 = bits.iter().zip(&uncovered).map(|(a, b)| (a & b).count_ones()).sum();
            if gain == 0 {
                continue;
            }
            let s1 = candidates[c];
            let better = match best {
                None => true,
                Some((g, s, _)) => gain > g || (gain == g && s1 < s),
            };
            if better {
                best = Some((gain, s1, c));
            }
        }
        let Some((gain, s1, c)) = best else {
            let i = (0..universe.len())
                .find(|&i| uncovered[i / 64] >> (i % 64) & 1 == 1)
                .expect("left > 0");
            return Err(GuaranteeError::Uncoverable { s0: universe[i] });
        };
        for (u, b) in uncovered.iter_mut().zip(&bitmaps[c]) {
            *u &= !b;
        }
        left -= gain as usize;
        chosen.push(s1);
    }
    Ok(chosen)
}

/// Greedy set cover choosing, each round, the candidate that covers the most
/// still-uncovered `s₀` (smallest `s₁` integer on ties).
pub fn greedy_set_cover(
    part: &Partition<'_>,
    universe: &[SubColoring],
    candidates: &[SubColoring],
    beta: f64,
) -> Result<GuaranteeSet, GuaranteeError> {
    for s in universe {
        part.check(s, Side::V0)?;
    }
    for s in candidates {
        part.check(s, Side::V1)?;
    }
    let table = RemTable::new(part)?;
    let u: Vec<u64> = universe.iter().map(SubColoring::to_index).collect();
    let mut c: Vec<u64> = candidates.iter().map(SubColoring::to_index).collect();
    c.dedup();
    let picked = greedy_cover_indices(&table, &u, &c, beta)?;
    members_from(part.n1(), beta, &picked)
}

/// Greedy cover of the full universe with all `2^{n₁}` candidates.
pub fn greedy_full_cover(part: &Partition<'_>, beta: f64) -> Result<GuaranteeSet, GuaranteeError> {
    let table = RemTable::new(part)?;
    let u: Vec<u64> = (0..1u64 << part.n0()).collect();
    let c: Vec<u64> = (0..1u64 << part.n1()).collect();
    let picked = greedy_cover_indices(&table, &u, &c, beta)?;
    members_from(part.n1(), beta, &picked)
}

fn members_from(n1: usize, beta: f64, picked: &[u64]) -> Result<GuaranteeSet, GuaranteeError> {
    GuaranteeSet::new(
        beta,
        picked
            .iter()
            .map(|&s| SubColoring::from_index(Side::V1, n1, s))
            .collect(),
    )
}

/// Achieved ratio of the best member per `s₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeMeasurement {
    pub worst_ratio: f64,
    /// Indexed by packed `s₀`.
    pub per_s0_ratios: Vec<f64>,
}

impl GuaranteeMeasurement {
    /// `ε_s = ratio − β` per `s₀`.
    pub fn slack(&self, beta: f64) -> Vec<f64> {
        self.per_s0_ratios.iter().map(|r| r - beta).collect()
    }
}

pub fn measure_guarantee(
    part: &Partition<'_>,
    set: &GuaranteeSet,
) -> Result<GuaranteeMeasurement, GuaranteeError> {
    let table = RemTable::new(part)?;
    measure_with_table(&table, set)
}

pub fn measure_with_table(
    table: &RemTable,
    set: &GuaranteeSet,
) -> Result<GuaranteeMeasurement, GuaranteeError> {
    let members: Vec<u64> = set.members().iter().map(SubColoring::to_index).collect();
    if set.members()[0].len() != table.n1() {
        return Err(GuaranteeError::BadMember {
            index: 0,
            expected: table.n1(),
        });
    }
    let per_s0_ratios: Vec<f64> = (0..1u64 << table.n0())
        .map(|s0| {
            let best = members.iter().map(|&s1| table.rem(s0, s1)).max().unwrap_or(0);
            ratio(best, table.opt_rem(s0))
        })
        .collect();
    let worst_ratio = per_s0_ratios.iter().copied().fold(1.0, f64::min);
    Ok(GuaranteeMeasurement {
        worst_ratio,
        per_s0_ratios,
    })
}

/// Every `s₀` in `universe` has a member reaching `β · OPT-REM(s₀)`.
pub fn verify_cover(table: &RemTable, universe: &[u64], members: &[u64], beta: f64) -> bool {
    universe
        .iter()
        .all(|&s0| members.iter().any(|&s1| table.covers(s1, s0, beta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthRow {
    pub graph_seed: u64,
    pub perm_seed: u64,
    pub u0_size: usize,
    pub tg_size: usize,
}

/// `|T_g(U₀)|` along nested prefixes `U₀` of random orderings of all `s₀`,
/// at sizes `1, 2, 4, …, 2^{n₀}`. Uses the dense-subgraph partition and
/// every `s₁` as a candidate. Each recorded cover is re-verified.
pub fn tg_growth_experiment(
    g: &Graph,
    graph_seed: u64,
    n0: usize,
    beta: f64,
    num_perms: usize,
    seed: u64,
) -> Result<Vec<GrowthRow>, GuaranteeError> {
    check_beta(beta)?;
    let part = select_dense_subgraph(g, n0)?;
    let table = RemTable::new(&part)?;
    let candidates: Vec<u64> = (0..1u64 << part.n1()).collect();
    let per_perm = (0..num_perms as u64)
        .into_par_iter()
        .map(|k| {
            let perm_seed = derive_seed(seed, k);
            let mut order: Vec<u64> = (0..1u64 << part.n0()).collect();
            order.shuffle(&mut rng_from_seed(perm_seed));
            let mut rows = Vec::with_capacity(part.n0() + 1);
            for e in 0..=part.n0() {
                let prefix = &order[..1 << e];
                let picked = greedy_cover_indices(&table, prefix, &candidates, beta)?;
                assert!(verify_cover(&table, prefix, &picked, beta));
                rows.push(GrowthRow {
                    graph_seed,
                    perm_seed,
                    u0_size: prefix.len(),
                    tg_size: picked.len(),
                });
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>, GuaranteeError>>()?;
    Ok(per_perm.concat())
}
