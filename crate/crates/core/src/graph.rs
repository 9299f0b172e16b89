//! Aggregated transaction graph and its binary projection.

use std::collections::BTreeMap;

use crate::ledger::{Cents, TransactionSet};

/// One aggregated arc: all transactions from `src` (buyer) to `dst` (seller).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: u32,
    pub dst: u32,
    /// Number of transactions, always at least 1.
    pub count: u64,
    /// Summed amount in cents.
    pub volume: Cents,
}

/// Directed weighted graph for one period.
///
/// Nodes are indexed in ascending user-id order, so "smallest node id" and
/// "smallest node index" coincide. Self-loops are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TxGraph {
    ids: Vec<String>,
    edges: Vec<Edge>,
    out_off: Vec<usize>,
    in_off: Vec<usize>,
    in_edges: Vec<u32>,
    /// Transactions dropped because buyer and seller coincide.
    pub self_trades_dropped: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Keep users from the user map that have no transaction in the period.
    pub include_isolated: bool,
}

/// Aggregates a transaction set into a [`TxGraph`].
pub fn build_graph(set: &TransactionSet, opts: BuildOptions) -> TxGraph {
    let mut pairs: BTreeMap<(&str, &str), (u64, u64)> = BTreeMap::new();
    let mut dropped = 0u64;
    let mut ids: Vec<&str> = Vec::new();
    for t in &set.transactions {
        if t.buyer_id == t.seller_id {
            dropped += 1;
            continue;
        }
        let e = pairs.entry((&t.buyer_id, &t.seller_id)).or_default();
        e.0 += 1;
        e.1 += t.amount;
        ids.push(&t.buyer_id);
        ids.push(&t.seller_id);
    }
    if opts.include_isolated {
        ids.extend(set.users.keys().map(String::as_str));
    }
    ids.sort_unstable();
    ids.dedup();
    let index = |id: &str| ids.binary_search(&id).expect("endpoint indexed") as u32;
    let edges: Vec<Edge> = pairs
        .into_iter()
        .map(|((b, s), (count, volume))| Edge {
            src: index(b),
            dst: index(s),
            count,
            volume,
        })
        .collect();
    let mut g = TxGraph::from_edges(ids.into_iter().map(String::from).collect(), edges);
    g.self_trades_dropped = dropped;
    g
}

impl TxGraph {
    /// Builds a graph from node ids and aggregated edges. Ids must be sorted
    /// and unique; edges with `src == dst` or zero count are discarded and
    /// duplicate pairs are merged.
    pub fn from_edges(ids: Vec<String>, mut edges: Vec<Edge>) -> TxGraph {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let n = ids.len();
        edges.retain(|e| e.src != e.dst && e.count > 0);
        edges.sort_unstable_by_key(|e| (e.src, e.dst));
        edges.dedup_by(|later, kept| {
            if (later.src, later.dst) == (kept.src, kept.dst) {
                kept.count += later.count;
                kept.volume += later.volume;
                true
            } else {
                false
            }
        });
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for e in &edges {
            out_off[e.src as usize + 1] += 1;
            in_off[e.dst as usize + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        let mut fill = in_off.clone();
        let mut in_edges = vec![0u32; edges.len()];
        for (k, e) in edges.iter().enumerate() {
            let slot = &mut fill[e.dst as usize];
            in_edges[*slot] = k as u32;
            *slot += 1;
        }
        TxGraph {
            ids,
            edges,
            out_off,
            in_off,
            in_edges,
            self_trades_dropped: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.edges[self.out_off[v]..self.out_off[v + 1]]
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[self.in_off[v]..self.in_off[v + 1]]
            .iter()
            .map(|&k| &self.edges[k as usize])
    }

    pub fn edge(&self, src: usize, dst: usize) -> Option<&Edge> {
        let out = self.out_edges(src);
        out.binary_search_by_key(&(dst as u32), |e| e.dst)
            .ok()
            .map(|k| &out[k])
    }

    pub fn total_transactions(&self) -> u64 {
        self.edges.iter().map(|e| e.count).sum()
    }

    pub fn total_volume(&self) -> Cents {
        self.edges.iter().map(|e| e.volume).sum()
    }

    /// Binary adjacency δ.
    pub fn binary(&self) -> Digraph {
        Digraph::from_sorted_unique(
            self.node_count(),
            self.edges.iter().map(|e| (e.src, e.dst)).collect(),
        )
    }

    /// Subgraph induced on nodes with `keep[v]`, keeping ids and edge weights.
    pub fn induced(&self, keep: &[bool]) -> TxGraph {
        let mut remap = vec![u32::MAX; self.node_count()];
        let mut ids = Vec::new();
        for (v, id) in self.ids.iter().enumerate() {
            if keep[v] {
                remap[v] = ids.len() as u32;
                ids.push(id.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.src as usize] && keep[e.dst as usize])
            .map(|e| Edge {
                src: remap[e.src as usize],
                dst: remap[e.dst as usize],
                ..*e
            })
            .collect();
        TxGraph::from_edges(ids, edges)
    }
}

/// Unweighted simple digraph in compressed adjacency form. Neighbor lists are
/// sorted ascending; there are no self-loops and no parallel arcs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    n: usize,
    out_off: Vec<usize>,
    out_adj: Vec<u32>,
    in_off: Vec<usize>,
    in_adj: Vec<u32>,
}

impl Digraph {
    /// Builds from arbitrary arcs, dropping self-loops and duplicates.
    pub fn from_arcs<I: IntoIterator<Item = (u32, u32)>>(n: usize, arcs: I) -> Digraph {
        let mut arcs: Vec<(u32, u32)> = arcs.into_iter().filter(|(a, b)| a != b).collect();
        arcs.sort_unstable();
        arcs.dedup();
        Digraph::from_sorted_unique(n, arcs)
    }

    fn from_sorted_unique(n: usize, arcs: Vec<(u32, u32)>) -> Digraph {
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for &(a, b) in &arcs {
            out_off[a as usize + 1] += 1;
            in_off[b as usize + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        let out_adj: Vec<u32> = arcs.iter().map(|&(_, b)| b).collect();
        let mut fill = in_off.clone();
        let mut in_adj = vec![0u32; arcs.len()];
        // arcs are sorted by source, so every in-list comes out sorted too
        for &(a, b) in &arcs {
            let slot = &mut fill[b as usize];
            in_adj[*slot] = a;
            *slot += 1;
        }
        Digraph {
            n,
            out_off,
            out_adj,
            in_off,
            in_adj,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn out(&self, v: usize) -> &[u32] {
        &self.out_adj[self.out_off[v]..self.out_off[v + 1]]
    }

    pub fn inn(&self, v: usize) -> &[u32] {
        &self.in_adj[self.in_off[v]..self.in_off[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_off[v + 1] - self.out_off[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_off[v + 1] - self.in_off[v]
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.out(a).binary_search(&(b as u32)).is_ok()
    }

    /// All arcs in (source, target) lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |a| self.out(a).iter().map(move |&b| (a as u32, b)))
    }

    pub fn transpose(&self) -> Digraph {
        Digraph {
            n: self.n,
            out_off: self.in_off.clone(),
            out_adj: self.in_adj.clone(),
            in_off: self.out_off.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.in_degree(v)).collect()
    }

    /// Sorted, deduplicated union of in- and out-neighbors.
    pub fn undirected_neighbors(&self, v: usize) -> Vec<u32> {
        let (a, b) = (self.out(v), self.inn(v));
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        merged
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{Transaction, TransactionSet};
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn tx(b: &str, s: &str, amount: u64) -> Transaction {
        Transaction {
            tx_id: String::new(),
            date: NaiveDate::from_ymd_opt(2022, 1, 1).unwrap(),
            buyer_id: b.into(),
            seller_id: s.into(),
            amount,
        }
    }

    fn set(txs: Vec<Transaction>) -> TransactionSet {
        TransactionSet {
            transactions: txs,
            ..Default::default()
        }
    }

    #[test]
    fn parallel_transactions_aggregate() {
        let g = build_graph(
            &set(vec![tx("u1", "u2", 500), tx("u1", "u2", 700)]),
            BuildOptions::default(),
        );
        assert_eq!(g.edge_count(), 1);
        let e = g.edge(0, 1).unwrap();
        assert_eq!((e.count, e.volume), (2, 1200));
    }

    #[test]
    fn self_trade_dropped_and_counted() {
        let g = build_graph(&set(vec![tx("u1", "u1", 500)]), BuildOptions::default());
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.self_trades_dropped, 1);
    }

    #[test]
    fn isolated_users_only_on_request() {
        let mut s = set(vec![tx("a", "b", 1)]);
        s.users
            .insert("z".into(), crate::ledger::UserRecord::unknown("z"));
        assert_eq!(build_graph(&s, BuildOptions::default()).node_count(), 2);
        let g = build_graph(
            &s,
            BuildOptions {
                include_isolated: true,
            },
        );
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.index_of("z"), Some(2));
    }

    #[test]
    fn undirected_neighbors_merge() {
        let d = Digraph::from_arcs(4, [(0, 1), (2, 0), (0, 3), (3, 0)]);
        assert_eq!(d.undirected_neighbors(0), vec![1, 2, 3]);
        assert!(d.has_arc(3, 0) && !d.has_arc(1, 0));
        assert_eq!(d.transpose().out(0), &[2, 3]);
    }

    fn random_txs() -> impl Strategy<Value = Vec<(u8, u8, u32)>> {
        prop::collection::vec((0u8..8, 0u8..8, 0u32..10_000), 0..50)
    }

    proptest! {
        #[test]
        fn matches_brute_force_tally(raw in random_txs()) {
            let txs: Vec<Transaction> = raw.iter().map(|&(b, s, a)| tx(&format!("u{b}"), &format!("u{s}"), a as u64)).collect();
            let g = build_graph(&set(txs.clone()), BuildOptions::default());
            let mut tally: std::collections::HashMap<(String, String), (u64, u64)> = Default::default();
            let mut selfs = 0;
            for t in &txs {
                if t.buyer_id == t.seller_id { selfs += 1; continue; }
                let e = tally.entry((t.buyer_id.clone(), t.seller_id.clone())).or_default();
                e.0 += 1;
                e.1 += t.amount;
            }
            prop_assert_eq!(g.self_trades_dropped, selfs);
            prop_assert_eq!(g.edge_count(), tally.len());
            for ((b, s), (c, v)) in tally {
                let e = g.edge(g.index_of(&b).unwrap(), g.index_of(&s).unwrap()).unwrap();
                prop_assert_eq!((e.count, e.volume), (c, v));
            }
        }

        #[test]
        fn order_invariant(raw in random_txs(), rot in 0usize..50) {
            let txs: Vec<Transaction> = raw.iter().map(|&(b, s, a)| tx(&format!("u{b}"), &format!("u{s}"), a as u64)).collect();
            let mut shuffled = txs.clone();
            if !shuffled.is_empty() {
                let k = rot % shuffled.len();
                shuffled.rotate_left(k);
                shuffled.reverse();
            }
            prop_assert_eq!(
                build_graph(&set(txs), BuildOptions::default()),
                build_graph(&set(shuffled), BuildOptions::default())
            );
        }
    }
}
