use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{Digraph, TxGraph};
use crate::ledger::{stratum, Cents, TransactionSet};

/// r_i: number of partners linked to `i` in both directions.
pub fn reciprocity(g: &Digraph) -> Vec<u32> {
    (0..g.node_count())
        .map(|v| sorted_intersection_len(g.out(v), g.inn(v)) as u32)
        .collect()
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Nodes, transactions and volume attached to one reciprocity value ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Stratum {
    pub nodes: u64,
    pub transactions: u64,
    pub volume_cents: Cents,
}

/// N_ρ, T_ρ and v_ρ for every ρ ≥ 1 that occurs.
///
/// The sums are node-anchored: T_ρ adds `e_ij + e_ji` over the reciprocal
/// partners `j` of every node `i` with `r_i = ρ`, so a pair whose endpoints
/// share the same ρ contributes twice.
pub fn reciprocity_strata(g: &TxGraph) -> BTreeMap<u32, Stratum> {
    let bin = g.binary();
    let r = reciprocity(&bin);
    let mut strata: BTreeMap<u32, Stratum> = BTreeMap::new();
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0 {
            continue;
        }
        let s = strata.entry(ri).or_default();
        s.nodes += 1;
        for e in g.out_edges(i) {
            if let Some(back) = g.edge(e.dst as usize, i) {
                s.transactions += e.count + back.count;
                s.volume_cents += e.volume + back.volume;
            }
        }
    }
    strata
}

/// Folds strata with ρ ≥ `cap` into a single row keyed by `cap`.
pub fn rollup(strata: &BTreeMap<u32, Stratum>, cap: u32) -> BTreeMap<u32, Stratum> {
    let mut out = BTreeMap::new();
    for (&rho, s) in strata {
        let e: &mut Stratum = out.entry(rho.min(cap)).or_default();
        e.nodes += s.nodes;
        e.transactions += s.transactions;
        e.volume_cents += s.volume_cents;
    }
    out
}

/// Reciprocal pairs by (type, type); index 4 is the unknown stratum.
/// Symmetric: a B↔C pair adds one to both (B, C) and (C, B).
pub fn reciprocity_by_type(g: &TxGraph, set: &TransactionSet) -> [[u64; 5]; 5] {
    let bin = g.binary();
    let mut m = [[0u64; 5]; 5];
    for i in 0..bin.node_count() {
        for &j in bin.out(i) {
            let j = j as usize;
            if j > i && bin.has_arc(j, i) {
                let (a, b) = (
                    stratum(set.user_type(g.id(i))),
                    stratum(set.user_type(g.id(j))),
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
