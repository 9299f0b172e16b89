#![allow(dead_code, clippy::needless_range_loop)]

pub mod oracles;

use ccnet::graph::Edge;
use ccnet::{Digraph, TxGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i:04}")).collect()
}

/// Erdős–Rényi style digraph without self-loops.
pub fn random_arcs(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(u32, u32)> {
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(p) {
                arcs.push((a as u32, b as u32));
            }
        }
    }
    arcs
}

pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let arcs = random_arcs(rng, n, p);
    Digraph::from_arcs(n, arcs)
}

/// Random weighted graph with counts in 1..=5 and volumes in 1..=10_000 cents.
pub fn random_txgraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> TxGraph {
    let edges = random_arcs(rng, n, p)
        .into_iter()
        .map(|(src, dst)| Edge {
            src,
            dst,
            count: rng.random_range(1..=5),
            volume: rng.random_range(1..=10_000),
        })
        .collect();
    TxGraph::from_edges(ids(n), edges)
}

/// Dense adjacency matrix of a digraph.
pub fn matrix(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for (a, b) in g.arcs() {
        m[a as usize][b as usize] = true;
    }
    m
}

/// Reflexive transitive closure by Floyd–Warshall.
pub fn closure(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut c = adj.to_vec();
    for (v, row) in c.iter_mut().enumerate() {
        row[v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if c[i][k] {
                for j in 0..n {
                    if c[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}
