//! `ltfb analyze ...`: exact reduced-distribution tables.

use ltfb_core::degree::{
    adaptive_degree_dist, n_layer_reduced_dist, redundancy_prob, redundancy_prob_acked, robust_soliton,
    TwoLayerAnalyzer,
};
use ltfb_core::{LayerConfig, RsdParams};
use serde::Serialize;

use crate::output::{Cell, Table};
use crate::params::Params;
use crate::{Failure, Run};

#[derive(Serialize)]
struct RsdConfig {
    rsd: RsdParams,
}

#[derive(Serialize)]
struct SweepConfig {
    rsd: RsdParams,
    undecoded: Vec<usize>,
}

#[derive(Serialize)]
struct LayeredConfig {
    rsd: RsdParams,
    layers: LayerConfig,
    undecoded: Option<Vec<usize>>,
}

fn undecoded_list(p: &Params, default: Vec<usize>) -> Result<Vec<usize>, Failure> {
    let k = p.k();
    let list = p.undecoded.clone().unwrap_or(default);
    if list.is_empty() {
        return Err(Failure::Invalid("undecoded list is empty".into()));
    }
    if let Some(l) = list.iter().find(|&&l| l == 0 || l > k) {
        return Err(Failure::Invalid(format!("undecoded count {l} outside 1..={k}")));
    }
    Ok(list)
}

/// Redundancy probability against the number of decoded inputs.
pub fn reduced(p: &Params) -> Result<Run, Failure> {
    let rsd = p.rsd()?;
    let pi = robust_soliton(rsd)?;
    let mut t = Table::new(["decoded", "undecoded", "p_redundant"]);
    for decoded in 0..=rsd.k {
        let l = rsd.k - decoded;
        t.push(vec![decoded.into(), l.into(), redundancy_prob(&pi, l)?.into()]);
    }
    Run::new("analyze reduced", "reduced", None, &RsdConfig { rsd }, vec![("", t)])
}

/// Redundancy probability against the number of acknowledged inputs.
pub fn reduced_acked(p: &Params) -> Result<Run, Failure> {
    let rsd = p.rsd()?;
    let defaults = [1, 10, 50, 90].into_iter().filter(|&l| l <= rsd.k).collect();
    let undecoded = undecoded_list(p, defaults)?;
    let pi = robust_soliton(rsd)?;
    let mut t = Table::new(["undecoded", "acked", "p_redundant"]);
    for &l in &undecoded {
        for m in 0..=rsd.k - l {
            t.push(vec![l.into(), m.into(), redundancy_prob_acked(&pi, l, m)?.into()]);
        }
    }
    let cfg = SweepConfig { rsd, undecoded };
    Run::new("analyze reduced-acked", "reduced_acked", None, &cfg, vec![("", t)])
}

/// Adaptive degree distribution for each undecoded count.
pub fn adaptive(p: &Params) -> Result<Run, Failure> {
    let rsd = p.rsd()?;
    let undecoded = undecoded_list(p, vec![(rsd.k / 2).max(1)])?;
    let pi = robust_soliton(rsd)?;
    let mut t = Table::new(["undecoded", "degree", "probability"]);
    for &l in &undecoded {
        let rho = adaptive_degree_dist(&pi, l)?;
        for d in 1..=l {
            t.push(vec![l.into(), d.into(), rho.prob(d).into()]);
        }
    }
    let cfg = SweepConfig { rsd, undecoded };
    Run::new("analyze adaptive", "adaptive", None, &cfg, vec![("", t)])
}

/// Redundancy probability over the grid of per-layer undecoded counts.
pub fn two_layer(p: &Params) -> Result<Run, Failure> {
    let rsd = p.rsd()?;
    let layers = LayerConfig::two_layer(rsd.k, p.alpha(), p.beta())?;
    let pi = robust_soliton(rsd)?;
    let analyzer = TwoLayerAnalyzer::new(&pi, &layers)?;
    let (nb, nr) = (layers.sizes()[0], layers.sizes()[1]);
    let mut t = Table::new(["base_undecoded", "refinement_undecoded", "p_redundant"]);
    for lb in 0..=nb {
        for lr in 0..=nr {
            t.push(vec![lb.into(), lr.into(), analyzer.redundancy(lb, lr)?.into()]);
        }
    }
    let cfg = LayeredConfig { rsd, layers, undecoded: None };
    Run::new("analyze two-layer", "two_layer", None, &cfg, vec![("", t)])
}

/// Joint reduced-degree distribution of a multi-layer code at one decoder state.
pub fn n_layer(p: &Params) -> Result<Run, Failure> {
    let layers = match (&p.sizes, &p.weights) {
        (Some(s), Some(w)) => LayerConfig::new(s.clone(), w.clone())?,
        (Some(s), None) => LayerConfig::new(s.clone(), vec![1.0; s.len()])?,
        (None, None) => LayerConfig::two_layer(p.k(), p.alpha(), p.beta())?,
        (None, Some(_)) => return Err(Failure::Invalid("--weights needs --sizes".into())),
    };
    if p.k.is_some_and(|k| k != layers.k()) {
        return Err(Failure::Invalid(format!("k = {} but layer sizes sum to {}", p.k(), layers.k())));
    }
    let rsd = RsdParams::new(layers.k(), p.c.unwrap_or(0.1), p.delta.unwrap_or(1.0))?;
    let undecoded = p.undecoded.clone().unwrap_or_else(|| layers.sizes().to_vec());
    let pi = robust_soliton(rsd)?;
    let dist = n_layer_reduced_dist(&pi, &layers, &undecoded)?;
    let mut header: Vec<String> = (1..=layers.len()).map(|n| format!("reduced_{n}")).collect();
    header.push("probability".into());
    let mut t = Table::new(header);
    for (cell, prob) in dist.iter() {
        let mut row: Vec<Cell> = cell.into_iter().map(Cell::from).collect();
        row.push(prob.into());
        t.push(row);
    }
    let cfg = LayeredConfig { rsd, layers, undecoded: Some(undecoded) };
    Run::new("analyze n-layer", "n_layer", None, &cfg, vec![("", t)])
}
