//! Exact census of simple directed cycles of length 2 to 5.
//!
//! Every cycle is enumerated once, from its anchor: the member that comes
//! first in a fixed node order (out-degree + in-degree descending, then
//! index). The search from an anchor only visits nodes later in that order,
//! and a backward breadth-first pass from the anchor prunes any branch that
//! can no longer close within the length limit. Putting hubs first keeps the
//! residual graphs searched from later anchors small.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::par;

pub const DEFAULT_CYCLE_CAP: u64 = 100_000_000;

pub const MIN_LEN: usize = 2;
pub const MAX_LEN: usize = 5;

/// Anchors handled per parallel batch; the cap is checked between batches.
const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LengthStats {
    pub length: usize,
    /// N_nℓ: nodes on at least one cycle of this length.
    pub nodes: u64,
    /// N_cℓ: number of cycles.
    pub cycles: u64,
    /// N_nℓ1: nodes on exactly one cycle.
    pub nodes_single: u64,
    /// N_cmax: most cycles through a single node.
    pub max_per_node: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub max_len: usize,
    /// One entry per length 2..=max_len.
    pub lengths: Vec<LengthStats>,
    /// Cycles through each node, per length (index 0 is length 2).
    #[serde(skip)]
    pub per_node: Vec<[u64; 4]>,
    /// Anchors fully processed; equals the node count for a complete census.
    pub anchors_done: usize,
}

impl CycleCensus {
    pub fn get(&self, len: usize) -> Option<&LengthStats> {
        self.lengths.iter().find(|s| s.length == len)
    }

    fn from_counts(
        max_len: usize,
        per_node: Vec<[u64; 4]>,
        cycles: [u64; 4],
        anchors_done: usize,
    ) -> Self {
        let lengths = (MIN_LEN..=max_len)
            .map(|len| {
                let k = len - MIN_LEN;
                let mut s = LengthStats {
                    length: len,
                    cycles: cycles[k],
                    ..Default::default()
                };
                for c in &per_node {
                    let c = c[k];
                    s.nodes += (c > 0) as u64;
                    s.nodes_single += (c == 1) as u64;
                    s.max_per_node = s.max_per_node.max(c);
                }
                s
            })
            .collect();
        CycleCensus {
            max_len,
            lengths,
            per_node,
            anchors_done,
        }
    }
}

struct Search<'a> {
    /// Graph relabeled into anchor order.
    g: &'a Digraph,
    max_len: usize,
    cap: u64,
    dist: Vec<u8>,
    stamp: Vec<u32>,
    on_path: Vec<bool>,
    path: Vec<u32>,
    queue: Vec<u32>,
    found: u64,
}

#[derive(Clone)]
struct Tally {
    per_node: Vec<[u64; 4]>,
    cycles: [u64; 4],
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            per_node: vec![[0; 4]; n],
            cycles: [0; 4],
        }
    }

    fn total(&self) -> u64 {
        self.cycles.iter().sum()
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.per_node.iter_mut().zip(&other.per_node) {
            for k in 0..4 {
                a[k] = a[k].saturating_add(b[k]);
            }
        }
        for k in 0..4 {
            self.cycles[k] += other.cycles[k];
        }
        self
    }
}

impl<'a> Search<'a> {
    fn new(g: &'a Digraph, max_len: usize, cap: u64) -> Self {
        let n = g.node_count();
        Search {
            g,
            max_len,
            cap,
            dist: vec![0; n],
            stamp: vec![u32::MAX; n],
            on_path: vec![false; n],
            path: Vec::with_capacity(max_len),
            queue: Vec::new(),
            found: 0,
        }
    }

    /// Enumerates cycles anchored at `a`. Returns false if this anchor alone
    /// produced more than `cap` cycles; the search is then cut short.
    fn run(&mut self, a: usize, tally: &mut Tally) -> bool {
        // backward distances to the anchor through nodes later in the order
        let limit = (self.max_len - 1) as u8;
        self.queue.clear();
        self.queue.push(a as u32);
        self.stamp[a] = a as u32;
        self.dist[a] = 0;
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head] as usize;
            head += 1;
            let d = self.dist[v];
            if d >= limit {
                continue;
            }
            for &u in self.g.inn(v) {
                let u = u as usize;
                if u > a && self.stamp[u] != a as u32 {
                    self.stamp[u] = a as u32;
                    self.dist[u] = d + 1;
                    self.queue.push(u as u32);
                }
            }
        }
        self.found = 0;
        self.path.clear();
        self.path.push(a as u32);
        self.on_path[a] = true;
        let ok = self.extend(a, a, tally);
        self.on_path[a] = false;
        ok
    }

    fn extend(&mut self, a: usize, v: usize, tally: &mut Tally) -> bool {
        let used = self.path.len(); // edges after stepping = used
        for &w in self.g.out(v) {
            let w = w as usize;
            if w == a {
                let k = used - MIN_LEN;
                tally.cycles[k] += 1;
                for &p in &self.path {
                    let c = &mut tally.per_node[p as usize][k];
                    *c = c.saturating_add(1);
                }
                self.found += 1;
                if self.found > self.cap {
                    return false;
                }
                continue;
            }
            if w < a || self.on_path[w] || used >= self.max_len || self.stamp[w] != a as u32 {
                continue;
            }
            // after stepping to w, `used` edges are spent and dist[w] more are needed
            if used + self.dist[w] as usize > self.max_len {
                continue;
            }
            self.path.push(w as u32);
            self.on_path[w] = true;
            let ok = self.extend(a, w, tally);
            self.on_path[w] = false;
            self.path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Counts simple directed cycles of every length `2..=max_len`.
///
/// Fails with [`Error::CycleCapExceeded`] once more than `cap` cycles have
/// been found; the error carries the census of all completed batches.
pub fn cycle_census(g: &Digraph, max_len: usize, cap: u64) -> Result<CycleCensus> {
    if !(MIN_LEN..=MAX_LEN).contains(&max_len) {
        return Err(Error::InvalidConfig(format!(
            "cycle length must be in 2..=5, got {max_len}"
        )));
    }
    let n = g.node_count();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| {
        (
            std::cmp::Reverse(g.out_degree(v as usize) + g.in_degree(v as usize)),
            v,
        )
    });
    let mut rank = vec![0u32; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v as usize] = r as u32;
    }
    let ranked = Digraph::from_arcs(
        n,
        g.arcs().map(|(a, b)| (rank[a as usize], rank[b as usize])),
    );

    let mut total = Tally::new(n);
    let mut done = 0;
    let batches: Vec<(usize, usize)> = (0..n)
        .step_by(BATCH)
        .map(|s| (s, (s + BATCH).min(n)))
        .collect();
    for &(start, end) in &batches {
        let (batch, complete) = par::fold_range(
            start..end,
            || (Search::new(&ranked, max_len, cap), Tally::new(n), true),
            |(search, tally, ok), a| *ok &= search.run(a, tally),
            |(_, t, ok)| (t, ok),
            |(a, oka), (b, okb)| (a.merge(b), oka && okb),
        )
        .unwrap_or_else(|| (Tally::new(n), true));
        total = total.merge(batch);
        done = end;
        if !complete || total.total() > cap {
            let per_node = unrank(&total.per_node, &rank);
            let partial = CycleCensus::from_counts(max_len, per_node, total.cycles, done);
            return Err(Error::CycleCapExceeded {
                cap,
                partial: Box::new(partial),
            });
        }
    }
    let per_node = unrank(&total.per_node, &rank);
    Ok(CycleCensus::from_counts(
        max_len,
        per_node,
        total.cycles,
        done,
    ))
}

fn unrank(per_rank: &[[u64; 4]], rank: &[u32]) -> Vec<[u64; 4]> {
    rank.iter().map(|&r| per_rank[r as usize]).collect()
}
