//! Classical comparison algorithms: a random cut, single-flip local search,
//! and Goemans–Williamson with a low-rank SDP solve, plus the anchored
//! variant that approximates OPT-REM for a fixed `s₀`.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::coupling::{rem_components, CouplingError, Partition, Side, SubColoring};
use crate::graph::{cut_size, Coloring, Graph, GraphError};
use crate::rng::{derive_seed, rng_from_seed, Rng};

/// Each vertex gets an independent fair bit.
pub fn naive_random_cut(g: &Graph, seed: u64) -> Coloring {
    let mut rng = rng_from_seed(seed);
    Coloring::new((0..g.n()).map(|_| rng.random::<bool>()).collect())
}

/// Best-improvement single-flip local search from the all-zeros coloring.
/// Flips the vertex with the largest positive gain (smallest index on ties)
/// until no flip improves the cut.
pub fn local_search(g: &Graph) -> Coloring {
    let n = g.n();
    let mut color = vec![false; n];
    // gain[v] = (same-colored neighbours) − (differently colored neighbours)
    let mut gain: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    loop {
        let mut best: Option<(i64, usize)> = None;
        for (v, &gv) in gain.iter().enumerate() {
            if gv > 0 && best.is_none_or(|(b, _)| gv > b) {
                best = Some((gv, v));
            }
        }
        let Some((_, u)) = best else {
            break;
        };
        color[u] = !color[u];
        gain[u] = -gain[u];
        for &w in g.neighbors(u) {
            // Edge (u,w) switched between cut and uncut.
            gain[w] += if color[w] == color[u] { 2 } else { -2 };
        }
    }
    Coloring::new(color)
}

/// Graph Laplacian: degrees on the diagonal, −1 per edge.
pub fn laplacian(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.n();
    let mut l = vec![vec![0i64; n]; n];
    for (v, row) in l.iter_mut().enumerate() {
        row[v] = g.degree(v) as i64;
    }
    for &(u, v) in g.edges() {
        l[u][v] = -1;
        l[v][u] = -1;
    }
    l
}

/// One unit vector in `R^k` per vertex, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVectors {
    k: usize,
    data: Vec<f64>,
}

impl UnitVectors {
    /// Vectors are normalised on construction; zero rows are rejected.
    pub fn new(k: usize, rows: Vec<Vec<f64>>) -> Option<Self> {
        let mut data = Vec::with_capacity(rows.len() * k);
        for row in rows {
            if row.len() != k {
                return None;
            }
            let norm = dot(&row, &row).sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return None;
            }
            data.extend(row.iter().map(|x| x / norm));
        }
        Some(Self { k, data })
    }

    /// `v_x = (±1, 0, …)` with color 0 ↦ `+e₁`.
    pub fn from_coloring(s: &Coloring, k: usize) -> Self {
        let mut data = vec![0.0; s.len() * k];
        for x in 0..s.len() {
            data[x * k] = if s.get(x) { -1.0 } else { 1.0 };
        }
        Self { k, data }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn get(&self, x: usize) -> &[f64] {
        &self.data[x * self.k..(x + 1) * self.k]
    }

    fn get_mut(&mut self, x: usize) -> &mut [f64] {
        &mut self.data[x * self.k..(x + 1) * self.k]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fixed colors for a vertex subset; color 0 pins to `+e₁`, color 1 to `−e₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSpec {
    pub vertices: Vec<usize>,
    pub colors: Vec<bool>,
}

impl AnchorSpec {
    /// Anchors covering exactly `V₀`, colored by `s₀`.
    pub fn from_partition(part: &Partition<'_>, s0: &SubColoring) -> Result<Self, CouplingError> {
        part.check(s0, Side::V0)?;
        Ok(Self {
            vertices: part.v0().to_vec(),
            colors: s0.bits().to_vec(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SdpOptions {
    /// `None` means `⌈√(2n)⌉ + 1`.
    pub rank: Option<usize>,
    pub max_sweeps: usize,
    /// Stop once a sweep improves the objective by less than this fraction.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            rank: None,
            max_sweeps: 1000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize + 1).max(2)
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub vectors: UnitVectors,
    pub objective: f64,
    pub sweeps: usize,
    /// Objective after initialisation and after every sweep.
    pub history: Vec<f64>,
}

/// `Σ_{(x,y)∈E} (1 − v_x·v_y)/2`.
pub fn sdp_objective(g: &Graph, vecs: &UnitVectors) -> Result<f64, GraphError> {
    if vecs.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: vecs.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| (1.0 - dot(vecs.get(u), vecs.get(v))) / 2.0)
        .sum())
}

fn random_unit(rng: &mut Rng, k: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Maximise `tr(LM)/4` over unit vectors by exact coordinate updates
/// `v_x ← normalize(−Σ_{y∼x} v_y)`, visiting free vertices in index order.
/// Anchored vertices stay at `±e₁`.
pub fn solve_sdp_lowrank(
    g: &Graph,
    anchors: Option<&AnchorSpec>,
    opts: &SdpOptions,
) -> SdpSolution {
    let n = g.n();
    let k = opts.rank.unwrap_or_else(|| default_rank(n)).max(2);
    let mut rng = rng_from_seed(opts.seed);
    let mut data = Vec::with_capacity(n * k);
    for _ in 0..n {
        data.extend(random_unit(&mut rng, k));
    }
    let mut vecs = UnitVectors { k, data };
    let mut free = vec![true; n];
    if let Some(a) = anchors {
        for (&v, &c) in a.vertices.iter().zip(&a.colors) {
            free[v] = false;
            let row = vecs.get_mut(v);
            row.fill(0.0);
            row[0] = if c { -1.0 } else { 1.0 };
        }
    }

    let objective = |vecs: &UnitVectors| sdp_objective(g, vecs).expect("sizes match");
    let mut current = objective(&vecs);
    let mut history = vec![current];
    let mut sum = vec![0.0; k];
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        for x in (0..n).filter(|&x| free[x]) {
            sum.fill(0.0);
            for &y in g.neighbors(x) {
                for (s, v) in sum.iter_mut().zip(vecs.get(y)) {
                    *s -= v;
                }
            }
            let norm = dot(&sum, &sum).sqrt();
            if norm > 0.0 {
                for (dst, s) in vecs.get_mut(x).iter_mut().zip(&sum) {
                    *dst = s / norm;
                }
            }
        }
        sweeps += 1;
        let next = objective(&vecs);
        history.push(next);
        let improvement = next - current;
        current = next;
        if improvement < opts.tol * current.abs().max(1.0) {
            break;
        }
    }
    SdpSolution {
        vectors: vecs,
        objective: current,
        sweeps,
        history,
    }
}

fn round_once(vecs: &UnitVectors, rng: &mut Rng) -> Coloring {
    let r: Vec<f64> = (0..vecs.rank()).map(|_| rng.sample(StandardNormal)).collect();
    Coloring::new((0..vecs.len()).map(|x| dot(&r, vecs.get(x)) > 0.0).collect())
}

#[derive(Debug, Clone)]
pub struct Rounding {
    pub best: Coloring,
    pub best_cut: usize,
    pub mean_cut: f64,
}

/// Random-hyperplane rounding: color `x` is `r·v_x > 0` for a standard
/// normal `r`. Trial `t` draws from its own stream, so results do not depend
/// on the worker count. The first best trial wins ties.
pub fn hyperplane_round(
    g: &Graph,
    vecs: &UnitVectors,
    trials: usize,
    seed: u64,
) -> Result<Rounding, GraphError> {
    if vecs.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: vecs.len(),
        });
    }
    let trials = trials.max(1);
    let results: Vec<(usize, Coloring)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = round_once(vecs, &mut rng_from_seed(derive_seed(seed, t)));
            (cut_size(g, &s).expect("sizes match"), s)
        })
        .collect();
    let mean_cut = results.iter().map(|r| r.0 as f64).sum::<f64>() / trials as f64;
    let best = results
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.0 > results[b].0 { i } else { b });
    let (best_cut, best) = results[best].clone();
    Ok(Rounding {
        best,
        best_cut,
        mean_cut,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GwConfig {
    pub sdp: SdpOptions,
    pub trials: usize,
    pub seed: u64,
}

impl Default for GwConfig {
    fn default() -> Self {
        Self {
            sdp: SdpOptions::default(),
            trials: 100,
            seed: 0,
        }
    }
}

impl GwConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            sdp: SdpOptions {
                seed: derive_seed(seed, 0),
                ..Default::default()
            },
            trials: 100,
            seed: derive_seed(seed, 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GwOutcome {
    pub cut: usize,
    pub coloring: Coloring,
    pub mean_cut: f64,
    pub sdp_objective: f64,
}

/// Unanchored SDP solve followed by best-of-`trials` rounding.
pub fn gw_max_cut(g: &Graph, config: &GwConfig) -> GwOutcome {
    let sol = solve_sdp_lowrank(g, None, &config.sdp);
    let r = hyperplane_round(g, &sol.vectors, config.trials, config.seed).expect("sizes match");
    GwOutcome {
        cut: r.best_cut,
        coloring: r.best,
        mean_cut: r.mean_cut,
        sdp_objective: sol.objective,
    }
}

/// Attempts per trial before a degenerate hyperplane is given up on.
const ANCHOR_RETRIES: usize = 64;

#[derive(Debug, Clone)]
pub struct AnchoredOutcome {
    pub value: usize,
    pub s1: SubColoring,
    pub mean_value: f64,
    pub sdp_objective: f64,
    pub vectors: UnitVectors,
}

/// OPT-REM(s₀) approximation: SDP on `E − E₀` with `V₀` pinned to `±e₁` by
/// `s₀`, then hyperplane rounding. A trial whose anchors come out as the
/// complement of `s₀` is flipped globally; one that splits them any other
/// way (only when `r₁ = 0`) is redrawn.
pub fn anchored_gw_opt_rem(
    part: &Partition<'_>,
    s0: &SubColoring,
    config: &GwConfig,
) -> Result<AnchoredOutcome, CouplingError> {
    let anchors = AnchorSpec::from_partition(part, s0)?;
    let g = part.graph();
    let rest = Graph::new(g.n(), part.e1().iter().chain(part.e01()).copied())?;
    let sol = solve_sdp_lowrank(&rest, Some(&anchors), &config.sdp);

    let trials = config.trials.max(1);
    let results = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(derive_seed(config.seed, t));
            for _ in 0..ANCHOR_RETRIES {
                let mut s = round_once(&sol.vectors, &mut rng);
                let agree = anchors.vertices.iter().zip(&anchors.colors).all(|(&v, &c)| s.get(v) == c);
                let flipped = anchors.vertices.iter().zip(&anchors.colors).all(|(&v, &c)| s.get(v) != c);
                if !agree && flipped {
                    s = s.complement();
                } else if !agree {
                    continue;
                }
                let (_, s1) = part.split(&s)?;
                let rem = rem_components(part, s0, &s1)?.rem();
                return Ok(Some((rem, s1)));
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>, CouplingError>>()?;
    let results: Vec<(usize, SubColoring)> = results.into_iter().flatten().collect();
    // Fallback when every trial degenerated: the all-zeros V1 coloring.
    if results.is_empty() {
        let s1 = SubColoring::zeros(Side::V1, part.n1());
        let value = rem_components(part, s0, &s1)?.rem();
        return Ok(AnchoredOutcome {
            value,
            s1,
            mean_value: value as f64,
            sdp_objective: sol.objective,
            vectors: sol.vectors,
        });
    }
    let mean_value = results.iter().map(|r| r.0 as f64).sum::<f64>() / results.len() as f64;
    let best = results
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.0 > results[b].0 { i } else { b });
    let (value, s1) = results[best].clone();
    Ok(AnchoredOutcome {
        value,
        s1,
        mean_value,
        sdp_objective: sol.objective,
        vectors: sol.vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::opt_rem_exact;
    use crate::graph::{brute_force_max_cut, gen_erdos_renyi};

    fn has_improving_flip(g: &Graph, s: &Coloring) -> bool {
        let base = cut_size(g, s).unwrap();
        (0..g.n()).any(|v| {
            let mut t = s.clone();
            t.flip(v);
            cut_size(g, &t).unwrap() > base
        })
    }

    #[test]
    fn naive_random_k2_and_mean() {
        let k2 = Graph::complete(2);
        let hits: usize = (0..10_000).map(|s| cut_size(&k2, &naive_random_cut(&k2, s)).unwrap()).sum();
        assert!((hits as f64 / 1e4 - 0.5).abs() < 0.02);
        let g = gen_erdos_renyi(12, 0.5, 1);
        let m = g.num_edges() as f64;
        let mean = (0..10_000)
            .map(|s| cut_size(&g, &naive_random_cut(&g, s)).unwrap() as f64)
            .sum::<f64>()
            / 1e4;
        // Edges are pairwise independent under a uniform coloring: var = m/4.
        let se = (m / 4.0 / 1e4).sqrt();
        assert!((mean - m / 2.0).abs() < 3.0 * se, "{mean} vs {}", m / 2.0);
        assert_eq!(naive_random_cut(&g, 7), naive_random_cut(&g, 7));
    }

    #[test]
    fn local_search_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(cut_size(&k3, &local_search(&k3)).unwrap(), 2);
        let c4 = Graph::cycle(4);
        let s = local_search(&c4);
        assert_eq!(cut_size(&c4, &s).unwrap(), 4);
        assert_eq!(s.to_string(), "1010");
        assert_eq!(local_search(&Graph::empty(3)), Coloring::zeros(3));
    }

    #[test]
    fn local_search_is_locally_optimal() {
        for seed in 0..1000 {
            let g = gen_erdos_renyi(12, 0.5, seed);
            let s = local_search(&g);
            assert!(!has_improving_flip(&g, &s));
            assert!(2 * cut_size(&g, &s).unwrap() >= g.num_edges());
        }
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(laplacian(&Graph::complete(2)), vec![vec![1, -1], vec![-1, 1]]);
        let g = gen_erdos_renyi(9, 0.5, 2);
        let l = laplacian(&g);
        assert!(l.iter().all(|row| row.iter().sum::<i64>() == 0));
        let trace: i64 = (0..9).map(|i| l[i][i]).sum();
        assert_eq!(trace as usize, 2 * g.num_edges());
        // x^T L x / 4 equals the cut for x = ±1.
        let s = naive_random_cut(&g, 4);
        let x: Vec<i64> = (0..9).map(|i| if s.get(i) { -1 } else { 1 }).collect();
        let q: i64 = (0..9).map(|i| (0..9).map(|j| x[i] * l[i][j] * x[j]).sum::<i64>()).sum();
        assert_eq!(q as usize, 4 * cut_size(&g, &s).unwrap());
    }

    #[test]
    fn sdp_small_optima() {
        let opts = SdpOptions::default();
        let k2 = solve_sdp_lowrank(&Graph::complete(2), None, &opts);
        assert!((k2.objective - 1.0).abs() < 1e-6);
        let k3 = solve_sdp_lowrank(&Graph::complete(3), None, &opts);
        assert!((k3.objective - 2.25).abs() < 1e-4, "{}", k3.objective);
        let c4 = solve_sdp_lowrank(&Graph::cycle(4), None, &opts);
        assert!((c4.objective - 4.0).abs() < 1e-6);
    }

    #[test]
    fn sdp_objective_examples() {
        let g = gen_erdos_renyi(10, 0.5, 3);
        let same = UnitVectors::new(3, vec![vec![0.0, 1.0, 0.0]; 10]).unwrap();
        assert_eq!(sdp_objective(&g, &same).unwrap(), 0.0);
        let s = naive_random_cut(&g, 1);
        let embed = UnitVectors::from_coloring(&s, 4);
        assert_eq!(sdp_objective(&g, &embed).unwrap(), cut_size(&g, &s).unwrap() as f64);
        let mut rng = rng_from_seed(2);
        let rand = UnitVectors::new(5, (0..10).map(|_| random_unit(&mut rng, 5)).collect()).unwrap();
        let v = sdp_objective(&g, &rand).unwrap();
        assert!(v >= 0.0 && v <= g.num_edges() as f64);
        assert!(sdp_objective(&Graph::complete(3), &rand).is_err());
    }

    #[test]
    fn sdp_history_non_decreasing_and_relaxes() {
        for seed in 0..10 {
            let g = gen_erdos_renyi(12, 0.5, seed);
            let sol = solve_sdp_lowrank(&g, None, &SdpOptions { seed, ..Default::default() });
            assert!(sol.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            for x in 0..12 {
                let v = sol.vectors.get(x);
                assert!((dot(v, v).sqrt() - 1.0).abs() < 1e-9);
            }
            assert!(sol.objective >= brute_force_max_cut(&g).unwrap().value as f64 - 1e-9);
        }
    }

    #[test]
    fn rounding_examples() {
        let k2 = Graph::complete(2);
        let opp = UnitVectors::new(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let r = hyperplane_round(&k2, &opp, 50, 1).unwrap();
        assert_eq!((r.best_cut, r.mean_cut), (1, 1.0));
        let same = UnitVectors::new(2, vec![vec![0.6, 0.8]; 2]).unwrap();
        let r = hyperplane_round(&k2, &same, 50, 1).unwrap();
        assert_eq!((r.best_cut, r.mean_cut), (0, 0.0));

        let k3 = Graph::complete(3);
        let a = 2.0 * std::f64::consts::PI / 3.0;
        let tri = UnitVectors::new(2, (0..3).map(|i| vec![(a * i as f64).cos(), (a * i as f64).sin()]).collect())
            .unwrap();
        let r = hyperplane_round(&k3, &tri, 100_000, 3).unwrap();
        assert!((r.mean_cut - 2.0).abs() < 0.02, "{}", r.mean_cut);

        let g = gen_erdos_renyi(10, 0.5, 5);
        let s = naive_random_cut(&g, 9);
        let r = hyperplane_round(&g, &UnitVectors::from_coloring(&s, 3), 20, 0).unwrap();
        assert_eq!(r.mean_cut, cut_size(&g, &s).unwrap() as f64);
    }

    #[test]
    fn gw_quality() {
        assert_eq!(gw_max_cut(&Graph::cycle(4), &GwConfig::default()).cut, 4);
        for seed in 0..20 {
            let g = gen_erdos_renyi(12, 0.5, seed);
            let opt = brute_force_max_cut(&g).unwrap().value as f64;
            let out = gw_max_cut(&g, &GwConfig::with_seed(seed));
            assert!(out.cut as f64 >= 0.878 * opt);
            assert!(out.mean_cut >= 0.86 * out.sdp_objective);
            assert_eq!(cut_size(&g, &out.coloring).unwrap(), out.cut);
        }
    }

    #[test]
    fn anchored_examples() {
        let c4 = Graph::cycle(4);
        let part = Partition::new(&c4, &[0, 1]).unwrap();
        let s0 = SubColoring::new(Side::V0, vec![false, true]);
        let out = anchored_gw_opt_rem(&part, &s0, &GwConfig::default()).unwrap();
        assert_eq!(out.value, 3);
        for (i, &v) in part.v0().iter().enumerate() {
            let want = if s0.get(i) { -1.0 } else { 1.0 };
            let row = out.vectors.get(v);
            assert_eq!(row[0], want);
            assert!(row[1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn anchored_without_cross_edges_is_gw_on_g1() {
        let g = Graph::new(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (3, 6), (3, 5)]).unwrap();
        let part = Partition::new(&g, &[0, 1, 2]).unwrap();
        let g1 = g.induced_subgraph(part.v1());
        let want = brute_force_max_cut(&g1).unwrap().value;
        for k in 0..8 {
            let s0 = SubColoring::from_index(Side::V0, 3, k);
            let out = anchored_gw_opt_rem(&part, &s0, &GwConfig::with_seed(k)).unwrap();
            assert_eq!(out.value, want);
        }
    }

    #[test]
    fn anchored_quality_small() {
        for seed in 0..5 {
            let g = gen_erdos_renyi(11, 0.5, seed);
            let part = crate::coupling::select_dense_subgraph(&g, 5).unwrap();
            for k in [0u64, 7, 19, 31] {
                let s0 = SubColoring::from_index(Side::V0, 5, k);
                let (opt, _) = opt_rem_exact(&part, &s0).unwrap();
                let out = anchored_gw_opt_rem(&part, &s0, &GwConfig::with_seed(seed + k)).unwrap();
                assert!(out.value as f64 >= 0.878 * opt as f64);
                assert!(out.value <= opt);
                assert_eq!(rem_components(&part, &s0, &out.s1).unwrap().rem(), out.value);
            }
        }
    }
}
