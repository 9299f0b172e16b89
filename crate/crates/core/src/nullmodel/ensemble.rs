//! Ensembles of rewired graphs and real-versus-null comparisons.

use std::collections::BTreeMap;

use serde::Serialize;

use super::asymmetry::{asymmetry_indices, AsymmetryIndices, INDEX_NAMES};
use super::rewire::{degree_preserving_rewire, RewireConfig};
use crate::bowtie::{bowtie_labels, StructureShares};
use crate::error::Result;
use crate::graph::Digraph;
use crate::metrics::{reciprocity, triad_census};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Asymmetry,
    BowtieShares,
    ReciprocityTotals,
    TriadCounts,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Asymmetry,
        MetricId::BowtieShares,
        MetricId::ReciprocityTotals,
        MetricId::TriadCounts,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Asymmetry => "asymmetry",
            MetricId::BowtieShares => "bowtie_shares",
            MetricId::ReciprocityTotals => "reciprocity_totals",
            MetricId::TriadCounts => "triad_counts",
        }
    }
}

/// Named scalar values of one metric on one graph.
pub type Scalars = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: u32,
    pub seed: u64,
    pub scalars: Scalars,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub metric: MetricId,
    pub runs: Vec<RunRecord>,
    /// Arithmetic mean of every scalar over the runs, in run order.
    pub mean: Scalars,
    /// Per-run asymmetry distributions; only for [`MetricId::Asymmetry`].
    #[serde(skip)]
    pub distributions: Vec<AsymmetryIndices>,
}

impl EnsembleResult {
    /// All runs' values of asymmetry index `k` concatenated in run order.
    pub fn pooled(&self, k: usize) -> Vec<f64> {
        self.distributions
            .iter()
            .flat_map(|a| a.series(k).iter().copied())
            .collect()
    }
}

/// Scalar summary of `metric` on one graph; also returns the asymmetry
/// distribution when that is the metric.
pub fn metric_scalars(g: &Digraph, metric: MetricId) -> (Scalars, Option<AsymmetryIndices>) {
    let mut s = Scalars::new();
    match metric {
        MetricId::Asymmetry => {
            let a = asymmetry_indices(g);
            s.insert("eligible".into(), a.len() as f64);
            for (k, name) in INDEX_NAMES.iter().enumerate() {
                let v = a.series(k);
                let mean = if v.is_empty() {
                    0.0
                } else {
                    v.iter().sum::<f64>() / v.len() as f64
                };
                s.insert(format!("{name}_mean"), mean);
            }
            return (s, Some(a));
        }
        MetricId::BowtieShares => {
            let shares = StructureShares::of(&bowtie_labels(g));
            for (name, v) in StructureShares::ROWS.iter().zip(shares.values()) {
                s.insert((*name).into(), v);
            }
        }
        MetricId::ReciprocityTotals => {
            let r = reciprocity(g);
            s.insert(
                "reciprocal_pairs".into(),
                r.iter().map(|&x| x as f64).sum::<f64>() / 2.0,
            );
            s.insert(
                "reciprocal_nodes".into(),
                r.iter().filter(|&&x| x > 0).count() as f64,
            );
            s.insert(
                "max_reciprocity".into(),
                r.iter().copied().max().unwrap_or(0) as f64,
            );
        }
        MetricId::TriadCounts => {
            let t = triad_census(g);
            s.insert("triangles".into(), t.triangles as f64);
            s.insert("strong_triplets".into(), t.strong_triplets as f64);
            s.insert("connected_triplets".into(), t.connected_triplets as f64);
            let n = t.clustering.len().max(1) as f64;
            s.insert(
                "mean_clustering".into(),
                t.clustering.iter().sum::<f64>() / n,
            );
        }
    }
    (s, None)
}

fn mean_of(runs: &[RunRecord]) -> Scalars {
    let mut mean = Scalars::new();
    if runs.is_empty() {
        return mean;
    }
    for key in runs[0].scalars.keys() {
        let sum = runs.iter().fold(0.0, |acc, r| acc + r.scalars[key]);
        mean.insert(key.clone(), sum / runs.len() as f64);
    }
    mean
}

/// Rewires `g` `cfg.runs` times and evaluates every requested metric on each
/// run. Runs are independent and may execute in parallel; results come back
/// in run order, so the output does not depend on the thread count.
pub fn ensemble_metrics(
    g: &Digraph,
    cfg: &RewireConfig,
    metrics: &[MetricId],
) -> Result<Vec<EnsembleResult>> {
    cfg.validate()?;
    let per_run = par::map_indexed(cfg.runs as usize, |run| {
        let rewired = degree_preserving_rewire(g, cfg, run as u32);
        metrics
            .iter()
            .map(|&m| metric_scalars(&rewired, m))
            .collect::<Vec<_>>()
    });
    let mut out: Vec<EnsembleResult> = metrics
        .iter()
        .map(|&metric| EnsembleResult {
            metric,
            runs: Vec::with_capacity(cfg.runs as usize),
            mean: Scalars::new(),
            distributions: Vec::new(),
        })
        .collect();
    for (run, values) in per_run.into_iter().enumerate() {
        for (res, (scalars, dist)) in out.iter_mut().zip(values) {
            res.runs.push(RunRecord {
                run: run as u32,
                seed: cfg.run_seed(run as u32),
                scalars,
            });
            if let Some(d) = dist {
                res.distributions.push(d);
            }
        }
    }
    for res in &mut out {
        res.mean = mean_of(&res.runs);
    }
    Ok(out)
}

pub fn ensemble_metric(
    g: &Digraph,
    cfg: &RewireConfig,
    metric: MetricId,
) -> Result<EnsembleResult> {
    Ok(ensemble_metrics(g, cfg, &[metric])?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondensationRow {
    pub structure: &'static str,
    pub real: f64,
    pub null_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondensationComparison {
    pub rows: Vec<CondensationRow>,
    /// Per-run null values, in [`StructureShares::ROWS`] order.
    pub null_runs: Vec<[f64; 8]>,
}

/// Bow-tie node shares of `g` next to their mean over the null ensemble.
pub fn null_condensation_report(g: &Digraph, cfg: &RewireConfig) -> Result<CondensationComparison> {
    let ens = ensemble_metric(g, cfg, MetricId::BowtieShares)?;
    Ok(condensation_from(g, &ens))
}

/// Builds the comparison from an already computed bow-tie ensemble.
pub fn condensation_from(g: &Digraph, ens: &EnsembleResult) -> CondensationComparison {
    let real = StructureShares::of(&bowtie_labels(g)).values();
    let null_runs: Vec<[f64; 8]> = ens
        .runs
        .iter()
        .map(|r| {
            let mut row = [0.0; 8];
            for (k, name) in StructureShares::ROWS.iter().enumerate() {
                row[k] = r.scalars[*name];
            }
            row
        })
        .collect();
    let rows = StructureShares::ROWS
        .iter()
        .enumerate()
        .map(|(k, name)| CondensationRow {
            structure: name,
            real: real[k],
            null_mean: ens.mean[*name],
        })
        .collect();
    CondensationComparison { rows, null_runs }
}
