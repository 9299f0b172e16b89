//! Triangles, strongly connected triplets and local clustering.

use serde::Serialize;

use crate::graph::Digraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriadCensus {
    /// Triangles in the undirected projection.
    pub triangles: u64,
    /// Node triples that are strongly connected in the directed graph.
    pub strong_triplets: u64,
    /// Connected triplets (paths of length two, open or closed) in the
    /// undirected projection.
    pub connected_triplets: u64,
    #[serde(skip)]
    pub node_triangles: Vec<u64>,
    #[serde(skip)]
    pub node_strong_triplets: Vec<u64>,
    #[serde(skip)]
    pub clustering: Vec<f64>,
}

/// Undirected projection as sorted neighbor lists.
pub fn undirected(g: &Digraph) -> Vec<Vec<u32>> {
    (0..g.node_count())
        .map(|v| g.undirected_neighbors(v))
        .collect()
}

/// A triple is strongly connected iff it carries a directed 3-cycle in
/// either orientation.
fn strongly_connected(g: &Digraph, a: usize, b: usize, c: usize) -> bool {
    (g.has_arc(a, b) && g.has_arc(b, c) && g.has_arc(c, a))
        || (g.has_arc(a, c) && g.has_arc(c, b) && g.has_arc(b, a))
}

pub fn triad_census(g: &Digraph) -> TriadCensus {
    let adj = undirected(g);
    let n = adj.len();
    // orient each undirected edge from lower to higher (degree, index) rank
    let key = |v: usize| (adj[v].len(), v);
    let forward: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            adj[v]
                .iter()
                .copied()
                .filter(|&w| key(w as usize) > key(v))
                .collect()
        })
        .collect();
    let mut mark = vec![false; n];
    let mut node_triangles = vec![0u64; n];
    let mut node_strong = vec![0u64; n];
    let (mut tri, mut strong) = (0u64, 0u64);
    for v in 0..n {
        for &w in &forward[v] {
            mark[w as usize] = true;
        }
        for &u in &forward[v] {
            for &w in &forward[u as usize] {
                if mark[w as usize] {
                    let (u, w) = (u as usize, w as usize);
                    tri += 1;
                    for x in [v, u, w] {
                        node_triangles[x] += 1;
                    }
                    if strongly_connected(g, v, u, w) {
                        strong += 1;
                        for x in [v, u, w] {
                            node_strong[x] += 1;
                        }
                    }
                }
            }
        }
        for &w in &forward[v] {
            mark[w as usize] = false;
        }
    }
    let connected_triplets = adj.iter().map(|a| pairs(a.len() as u64)).sum();
    let clustering = (0..n)
        .map(|v| coefficient(node_triangles[v], adj[v].len()))
        .collect();
    TriadCensus {
        triangles: tri,
        strong_triplets: strong,
        connected_triplets,
        node_triangles,
        node_strong_triplets: node_strong,
        clustering,
    }
}

fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn coefficient(triangles: u64, k: usize) -> f64 {
    if k < 2 {
        0.0
    } else {
        triangles as f64 / pairs(k as u64) as f64
    }
}

/// Local clustering on the undirected projection; nodes with fewer than two
/// neighbors get 0.
pub fn local_clustering(g: &Digraph) -> Vec<f64> {
    triad_census(g).clustering
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringSummary {
    pub mean: f64,
    pub zero_share: f64,
    pub one_share: f64,
    /// Node counts in ten equal-width bins over (0, 1); bin edges
    /// (0, 0.1], (0.1, 0.2], …, (0.9, 1).
    pub interior_bins: [u64; 10],
}

pub fn clustering_summary(c: &[f64]) -> ClusteringSummary {
    let n = c.len().max(1) as f64;
    let mut bins = [0u64; 10];
    for &x in c {
        if x > 0.0 && x < 1.0 {
            bins[((x * 10.0).ceil() as usize).clamp(1, 10) - 1] += 1;
        }
    }
    ClusteringSummary {
        mean: c.iter().sum::<f64>() / n,
        zero_share: c.iter().filter(|&&x| x == 0.0).count() as f64 / n,
        one_share: c.iter().filter(|&&x| x == 1.0).count() as f64 / n,
        interior_bins: bins,
    }
}
