//! Out-neighborhood size asymmetry indices.
//!
//! With `k_i = |N_i|` the number of out-neighbors of `i`, and only nodes
//! with `k_i ≥ 1` included:
//!
//! * `delta_out = k_i − mean_{j∈N_i} k_j`
//! * `delta_av = mean_{j∈N_i} |k_i − k_j|`
//! * `delta_max = max_{j∈N_i} |k_i − k_j|`
//! * `delta_conf = max_{j∈N_i} k_j − min_{j∈N_i} k_j`

use serde::Serialize;

use crate::graph::Digraph;

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AsymmetryIndices {
    /// Eligible nodes, ascending.
    pub nodes: Vec<u32>,
    pub delta_out: Vec<f64>,
    pub delta_av: Vec<f64>,
    pub delta_max: Vec<f64>,
    pub delta_conf: Vec<f64>,
}

pub const INDEX_NAMES: [&str; 4] = ["delta_out", "delta_av", "delta_max", "delta_conf"];

impl AsymmetryIndices {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn series(&self, k: usize) -> &[f64] {
        match k {
            0 => &self.delta_out,
            1 => &self.delta_av,
            2 => &self.delta_max,
            3 => &self.delta_conf,
            _ => panic!("asymmetry index {k} out of range"),
        }
    }
}

pub fn asymmetry_indices(g: &Digraph) -> AsymmetryIndices {
    let k: Vec<i64> = (0..g.node_count())
        .map(|v| g.out_degree(v) as i64)
        .collect();
    let mut out = AsymmetryIndices::default();
    for v in 0..g.node_count() {
        let nbrs = g.out(v);
        if nbrs.is_empty() {
            continue;
        }
        let ki = k[v];
        let (mut sum, mut abs_sum, mut abs_max) = (0i64, 0i64, 0i64);
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for &j in nbrs {
            let kj = k[j as usize];
            sum += kj;
            let d = (ki - kj).abs();
            abs_sum += d;
            abs_max = abs_max.max(d);
            lo = lo.min(kj);
            hi = hi.max(kj);
        }
        let deg = nbrs.len() as f64;
        out.nodes.push(v as u32);
        out.delta_out.push(ki as f64 - sum as f64 / deg);
        out.delta_av.push(abs_sum as f64 / deg);
        out.delta_max.push(abs_max as f64);
        out.delta_conf.push((hi - lo) as f64);
    }
    out
}
