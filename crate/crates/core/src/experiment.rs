//! Experiment drivers behind the command-line tool: bound tables, the
//! method comparison over random instances, and cover-size growth curves.
//! Output is CSV with floats at 10 significant digits, so files are
//! byte-stable for a fixed seed.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::baselines::{gw_max_cut, local_search, naive_random_cut, GwConfig};
use crate::bounds::{
    device_table_lemma2, device_table_trivial_half, threshold_grid, DeviceRow, SIZING_PAIRS,
};
use crate::coupling::{algorithm4_on, select_dense_subgraph};
use crate::graph::{brute_force_max_cut, cut_size, gen_erdos_renyi, Graph};
use crate::guarantee::{tg_growth_experiment, GrowthRow};
use crate::qaoa::{approx_ratio, QaoaConfig};
use crate::rng::{derive_seed, streams};
use crate::Error;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub n0: usize,
    pub prob: f64,
    pub instances: usize,
    pub beta: f64,
    /// Permutations per graph in the growth experiment.
    pub perms: usize,
    pub qaoa: QaoaConfig,
    pub exact_inner: bool,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 14,
            n0: 10,
            prob: 0.8,
            instances: 20,
            beta: 0.9,
            perms: 5,
            qaoa: QaoaConfig::default(),
            exact_inner: false,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 || self.n0 == 0 || self.instances == 0 || self.perms == 0 {
            return Err(Error::Config("counts must be positive"));
        }
        if self.n0 > self.n {
            return Err(Error::Config("n0 must not exceed n"));
        }
        if !(0.0..=1.0).contains(&self.prob) {
            return Err(Error::Config("prob must lie in [0, 1]"));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::Config("beta must lie in (0, 1]"));
        }
        self.qaoa.validate()?;
        Ok(())
    }

    /// Seed of instance `i`; every method draws from streams below it.
    pub fn instance_seed(&self, i: usize) -> u64 {
        derive_seed(self.seed, i as u64)
    }

    pub fn instance_graph(&self, i: usize) -> Graph {
        let s = self.instance_seed(i);
        gen_erdos_renyi(self.n, self.prob, derive_seed(s, streams::GRAPH))
    }
}

/// Fixed-precision float rendering: 10 significant digits, trailing zeros
/// trimmed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (9 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn table2a_csv() -> String {
    let mut out = String::from("alpha,beta,threshold\n");
    for (a, b, t) in threshold_grid() {
        writeln!(out, "{},{},{}", fmt_float(a), fmt_float(b), fmt_float(t)).unwrap();
    }
    out
}

fn device_csv(rows: &[DeviceRow]) -> String {
    let mut out = String::from("device,n0,max_n,delta\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.device, r.n0, r.max_n, r.delta()).unwrap();
    }
    out
}

pub fn table2b_csv(alpha: f64, beta: f64) -> String {
    device_csv(&device_table_lemma2(alpha, beta))
}

pub fn table3_csv() -> String {
    device_csv(&device_table_trivial_half(0.9))
}

/// File names and contents of all bound tables.
pub fn bounds_files() -> Vec<(String, String)> {
    let (a, b) = SIZING_PAIRS[0];
    let (a2, b2) = SIZING_PAIRS[1];
    vec![
        ("table2a.csv".into(), table2a_csv()),
        ("table2b.csv".into(), table2b_csv(a, b)),
        ("table2b_alpha0.97_beta0.91.csv".into(), table2b_csv(a2, b2)),
        ("table3.csv".into(), table3_csv()),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Row {
    pub instance_seed: u64,
    pub n: usize,
    pub n0: usize,
    pub method: &'static str,
    pub value: f64,
    pub optimum: usize,
    pub ratio: f64,
}

/// Method labels in row order per instance.
pub const FIG3_METHODS: [&str; 6] = [
    "coupled",
    "coupled_sample",
    "gw",
    "gw_mean",
    "local",
    "naive",
];

/// One instance of the comparison: exact optimum, then the coupled local
/// search (expectation and best sample), GW (best and mean rounding), local
/// search and a random cut.
pub fn fig3_instance(config: &ExperimentConfig, i: usize) -> Result<Vec<Fig3Row>, Error> {
    let seed = config.instance_seed(i);
    let g = config.instance_graph(i);
    let optimum = brute_force_max_cut(&g)?.value;

    let part = select_dense_subgraph(&g, config.n0)?;
    let qcfg = config.qaoa.with_seed(derive_seed(seed, streams::COUPLED));
    let coupled = algorithm4_on(&part, &qcfg, config.exact_inner)?;
    let gw = gw_max_cut(&g, &GwConfig::with_seed(derive_seed(seed, streams::GW)));
    let local = cut_size(&g, &local_search(&g))?;
    let naive = cut_size(&g, &naive_random_cut(&g, derive_seed(seed, streams::NAIVE)))?;

    let values = [
        coupled.value,
        coupled.inner.sampled_cut as f64,
        gw.cut as f64,
        gw.mean_cut,
        local as f64,
        naive as f64,
    ];
    Ok(FIG3_METHODS
        .iter()
        .zip(values)
        .map(|(&method, value)| Fig3Row {
            instance_seed: seed,
            n: config.n,
            n0: config.n0,
            method,
            value,
            optimum,
            ratio: approx_ratio(value, optimum as f64),
        })
        .collect())
}

/// All instances, in instance order regardless of completion order.
pub fn fig3_rows(config: &ExperimentConfig) -> Result<Vec<Fig3Row>, Error> {
    config.validate()?;
    let per = (0..config.instances)
        .into_par_iter()
        .map(|i| fig3_instance(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per.concat())
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    let mut out = String::from("instance_seed,n,n0,method,value,optimum,ratio\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.instance_seed,
            r.n,
            r.n0,
            r.method,
            fmt_float(r.value),
            r.optimum,
            fmt_float(r.ratio)
        )
        .unwrap();
    }
    out
}

/// Mean ratio per method, in [`FIG3_METHODS`] order.
pub fn mean_ratios(rows: &[Fig3Row]) -> Vec<(&'static str, f64)> {
    FIG3_METHODS
        .iter()
        .map(|&m| {
            let rs: Vec<f64> = rows.iter().filter(|r| r.method == m).map(|r| r.ratio).collect();
            (m, rs.iter().sum::<f64>() / rs.len().max(1) as f64)
        })
        .collect()
}

/// Growth curves for `instances` graphs × `perms` orderings each.
pub fn tg_growth_rows(config: &ExperimentConfig) -> Result<Vec<GrowthRow>, Error> {
    config.validate()?;
    let per = (0..config.instances)
        .into_par_iter()
        .map(|i| {
            let seed = config.instance_seed(i);
            let g = config.instance_graph(i);
            tg_growth_experiment(
                &g,
                seed,
                config.n0,
                config.beta,
                config.perms,
                derive_seed(seed, streams::PERMUTATION),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per.concat())
}

pub fn tg_growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("graph_seed,perm_seed,u0_size,tg_size\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.graph_seed, r.perm_seed, r.u0_size, r.tg_size).unwrap();
    }
    out
}
