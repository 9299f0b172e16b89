//! Brute-force reference implementations.

use std::collections::{BTreeMap, BTreeSet};

use ccnet::bowtie::Label;
use ccnet::ledger::UserType;
use ccnet::metrics::Stratum;
use ccnet::TxGraph;

use super::closure;

pub fn sccs(reach: &[Vec<bool>]) -> BTreeSet<BTreeSet<usize>> {
    let n = reach.len();
    (0..n)
        .map(|v| (0..n).filter(|&w| reach[v][w] && reach[w][v]).collect())
        .collect()
}

pub fn bowtie_labels(adj: &[Vec<bool>]) -> Vec<Label> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let reach = closure(adj);
    let mut comps: Vec<BTreeSet<usize>> = sccs(&reach).into_iter().collect();
    comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), *c.iter().next().unwrap()));
    let core = &comps[0];
    let c0 = *core.iter().next().unwrap();
    let undirected: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| adj[i][j] || adj[j][i]).collect())
        .collect();
    let weak = closure(&undirected);
    let gin: Vec<bool> = (0..n).map(|v| reach[v][c0]).collect();
    let gout: Vec<bool> = (0..n).map(|v| reach[c0][v]).collect();
    // reachability avoiding the core
    let off: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| adj[i][j] && !core.contains(&i) && !core.contains(&j))
                .collect()
        })
        .collect();
    let off_reach = closure(&off);
    let base: Vec<Label> = (0..n)
        .map(|v| {
            if !weak[c0][v] {
                Label::OutsideGwcc
            } else if core.contains(&v) {
                Label::Gscc
            } else if gin[v] {
                Label::GinOnly
            } else if gout[v] {
                Label::GoutOnly
            } else {
                Label::Tendril
            }
        })
        .collect();
    (0..n)
        .map(|v| {
            if base[v] != Label::Tendril {
                return base[v];
            }
            let from_in = (0..n).any(|u| base[u] == Label::GinOnly && off_reach[u][v]);
            let to_out = (0..n).any(|w| base[w] == Label::GoutOnly && off_reach[v][w]);
            if from_in && to_out {
                Label::Tube
            } else {
                Label::Tendril
            }
        })
        .collect()
}

/// Per-length cycle counts and per-node participation from every sequence of
/// distinct nodes whose first node is the smallest.
pub fn cycles(adj: &[Vec<bool>], len: usize) -> (u64, Vec<u64>) {
    let n = adj.len();
    let mut total = 0;
    let mut per_node = vec![0u64; n];
    let mut seq = Vec::with_capacity(len);
    fn rec(
        adj: &[Vec<bool>],
        len: usize,
        seq: &mut Vec<usize>,
        total: &mut u64,
        per_node: &mut [u64],
    ) {
        if seq.len() == len {
            if adj[seq[len - 1]][seq[0]] {
                *total += 1;
                for &v in seq.iter() {
                    per_node[v] += 1;
                }
            }
            return;
        }
        for w in seq[0] + 1..adj.len() {
            if !seq.contains(&w) && adj[seq[seq.len() - 1]][w] {
                seq.push(w);
                rec(adj, len, seq, total, per_node);
                seq.pop();
            }
        }
    }
    for s in 0..n {
        seq.clear();
        seq.push(s);
        rec(adj, len, &mut seq, &mut total, &mut per_node);
    }
    // a 2-cycle a→b→a is found once from its smaller node, and every longer
    // cycle once per rotation starting at its minimum; no further dedup needed
    (total, per_node)
}

/// Count and volume matrices of a weighted graph.
pub fn dense(g: &TxGraph) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let n = g.node_count();
    let mut e = vec![vec![0u64; n]; n];
    let mut w = vec![vec![0u64; n]; n];
    for x in g.edges() {
        e[x.src as usize][x.dst as usize] = x.count;
        w[x.src as usize][x.dst as usize] = x.volume;
    }
    (e, w)
}

pub fn reciprocity(e: &[Vec<u64>]) -> Vec<u32> {
    let n = e.len();
    let d = |i: usize, j: usize| (e[i][j] > 0) as u64;
    (0..n)
        .map(|i| (0..n).map(|j| d(i, j) * d(j, i)).sum::<u64>() as u32)
        .collect()
}

pub fn strata(e: &[Vec<u64>], w: &[Vec<u64>]) -> BTreeMap<u32, Stratum> {
    let n = e.len();
    let d = |i: usize, j: usize| (e[i][j] > 0) as u64;
    let r = reciprocity(e);
    let mut out = BTreeMap::new();
    for rho in 1..=r.iter().copied().max().unwrap_or(0) {
        let mut s = Stratum::default();
        for i in 0..n {
            if r[i] != rho {
                continue;
            }
            s.nodes += 1;
            for j in 0..n {
                s.transactions += d(i, j) * d(j, i) * (e[i][j] + e[j][i]);
                s.volume_cents += d(i, j) * d(j, i) * (w[i][j] + w[j][i]);
            }
        }
        if s.nodes > 0 {
            out.insert(rho, s);
        }
    }
    out
}

/// Reciprocal pairs between type strata, symmetric.
pub fn reciprocity_by_type(e: &[Vec<u64>], types: &[Option<UserType>]) -> [[u64; 5]; 5] {
    let n = e.len();
    let mut m = [[0u64; 5]; 5];
    for i in 0..n {
        for j in i + 1..n {
            if e[i][j] > 0 && e[j][i] > 0 {
                let (a, b) = (
                    ccnet::ledger::stratum(types[i]),
                    ccnet::ledger::stratum(types[j]),
                );
                m[a][b] += 1;
                if a != b {
                    m[b][a] += 1;
                }
            }
        }
    }
    m
}

#[derive(Debug, PartialEq)]
pub struct Triads {
    pub triangles: u64,
    pub strong: u64,
    pub wedges: u64,
    pub node_triangles: Vec<u64>,
    pub node_strong: Vec<u64>,
}

/// Triangles, cyclic triangles and connected triplets over all 3-subsets.
pub fn triads(a: &[Vec<bool>]) -> Triads {
    let n = a.len();
    let u = |i: usize, j: usize| a[i][j] || a[j][i];
    let mut t = Triads {
        triangles: 0,
        strong: 0,
        wedges: 0,
        node_triangles: vec![0; n],
        node_strong: vec![0; n],
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let links = u(i, j) as u64 + u(j, k) as u64 + u(i, k) as u64;
                if links == 3 {
                    t.triangles += 1;
                    for x in [i, j, k] {
                        t.node_triangles[x] += 1;
                    }
                    if (a[i][j] && a[j][k] && a[k][i]) || (a[i][k] && a[k][j] && a[j][i]) {
                        t.strong += 1;
                        for x in [i, j, k] {
                            t.node_strong[x] += 1;
                        }
                    }
                }
                t.wedges += match links {
                    2 => 1,
                    3 => 3,
                    _ => 0,
                };
            }
        }
    }
    t
}

/// Local clustering by scanning each neighborhood.
pub fn clustering(a: &[Vec<bool>]) -> Vec<f64> {
    let n = a.len();
    let u = |i: usize, j: usize| a[i][j] || a[j][i];
    (0..n)
        .map(|i| {
            let nb: Vec<usize> = (0..n).filter(|&j| j != i && u(i, j)).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0;
            for x in 0..k {
                for y in x + 1..k {
                    links += u(nb[x], nb[y]) as u64;
                }
            }
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

/// Kolmogorov tail by 100 terms of the alternating series.
pub fn series_q(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
    }
    2.0 * s
}

/// KS distance evaluated at every pooled sample point.
pub fn pooled_point_d(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .chain(b)
        .map(|&x| {
            let fa = a.iter().filter(|&&v| v <= x).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&v| v <= x).count() as f64 / b.len() as f64;
            (fa - fb).abs()
        })
        .fold(0.0, f64::max)
}
