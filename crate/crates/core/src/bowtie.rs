//! Strongly connected components, condensation and bow-tie decomposition.
//!
//! The GSCC is the largest SCC by node count, ties going to the component
//! holding the smallest node index. The GWCC is the weakly connected
//! component that contains the GSCC. Inside it every node gets exactly one
//! label:
//!
//! * `Gscc`
//! * `GinOnly`: reaches the GSCC
//! * `GoutOnly`: reachable from the GSCC
//! * `Tube`: on a directed path from a `GinOnly` node to a `GoutOnly` node
//!   that avoids the GSCC
//! * `Tendril`: anything else in the GWCC
//!
//! Nodes outside the GWCC are `OutsideGwcc`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, TxGraph};
use crate::ledger::{TransactionSet, UserType};
use crate::share::Share;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    /// Component index of every node.
    pub comp_of: Vec<u32>,
    /// Members of every component, ascending. Components are ordered by their
    /// smallest member.
    pub components: Vec<Vec<u32>>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the largest component; ties go to the lowest index.
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (c, members) in self.components.iter().enumerate() {
            if best.is_none_or(|b| members.len() > self.components[b].len()) {
                best = Some(c);
            }
        }
        best
    }

    /// Component sizes, largest first, truncated to `k`.
    pub fn top_sizes(&self, k: usize) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.components.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes.truncate(k);
        sizes
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn strongly_connected_components(g: &Digraph) -> SccPartition {
    const UNSEEN: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut calls: Vec<(u32, usize)> = Vec::new();
    let mut next = 0u32;
    let mut raw: Vec<Vec<u32>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        calls.push((root as u32, 0));

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            let v = v as usize;
            let succ = g.out(v);
            if *pos < succ.len() {
                let w = succ[*pos] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    calls.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    comp.push(w);
                    if w as usize == v {
                        break;
                    }
                }
                raw.push(comp);
            }
            if let Some(&(parent, _)) = calls.last() {
                let p = parent as usize;
                low[p] = low[p].min(low[v]);
            }
        }
    }

    for comp in &mut raw {
        comp.sort_unstable();
    }
    raw.sort_unstable_by_key(|c| c[0]);
    let mut comp_of = vec![0u32; n];
    for (c, members) in raw.iter().enumerate() {
        for &v in members {
            comp_of[v as usize] = c as u32;
        }
    }
    SccPartition {
        comp_of,
        components: raw,
    }
}

/// Weakly connected component index of every node, components numbered by
/// smallest member.
pub fn weak_components(g: &Digraph) -> Vec<u32> {
    let n = g.node_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for (a, b) in g.arcs() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            // keep the smaller index as root so roots are component minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi as usize] = lo;
        }
    }
    let mut label = vec![u32::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|v| {
            let r = find(&mut parent, v as u32) as usize;
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CondensedDag {
    /// Arcs between distinct components, sorted and unique.
    pub edges: Vec<(u32, u32)>,
    pub node_count: Vec<u64>,
    /// Transactions on edges with both endpoints in the component.
    pub internal_transactions: Vec<u64>,
    pub internal_volume: Vec<u64>,
}

pub fn condense(g: &TxGraph, p: &SccPartition) -> CondensedDag {
    let k = p.len();
    let mut dag = CondensedDag {
        edges: Vec::new(),
        node_count: p.components.iter().map(|c| c.len() as u64).collect(),
        internal_transactions: vec![0; k],
        internal_volume: vec![0; k],
    };
    for e in g.edges() {
        let (a, b) = (p.comp_of[e.src as usize], p.comp_of[e.dst as usize]);
        if a == b {
            dag.internal_transactions[a as usize] += e.count;
            dag.internal_volume[a as usize] += e.volume;
        } else {
            dag.edges.push((a, b));
        }
    }
    dag.edges.sort_unstable();
    dag.edges.dedup();
    dag
}

/// Kahn's algorithm; `None` if the arcs contain a cycle.
pub fn topological_order(n: usize, arcs: &[(u32, u32)]) -> Option<Vec<u32>> {
    let d = Digraph::from_arcs(n, arcs.iter().copied());
    let mut indeg = d.in_degrees();
    let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in d.out(v as usize) {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                queue.push_back(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Gscc,
    GinOnly,
    GoutOnly,
    Tendril,
    Tube,
    OutsideGwcc,
}

impl Label {
    pub const ALL: [Label; 6] = [
        Label::Gscc,
        Label::GinOnly,
        Label::GoutOnly,
        Label::Tendril,
        Label::Tube,
        Label::OutsideGwcc,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Gscc => "GSCC",
            Label::GinOnly => "GIN_ONLY",
            Label::GoutOnly => "GOUT_ONLY",
            Label::Tendril => "TENDRIL",
            Label::Tube => "TUBE",
            Label::OutsideGwcc => "OUTSIDE_GWCC",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowTie {
    pub labels: Vec<Label>,
    pub partition: SccPartition,
    /// Component index of the GSCC; `None` for an empty graph.
    pub gscc: Option<usize>,
}

impl BowTie {
    pub fn count(&self, l: Label) -> usize {
        self.labels.iter().filter(|&&x| x == l).count()
    }

    pub fn gwcc_size(&self) -> usize {
        self.labels.len() - self.count(Label::OutsideGwcc)
    }

    pub fn gscc_size(&self) -> usize {
        self.count(Label::Gscc)
    }
}

fn reach(
    g: &Digraph,
    seeds: impl IntoIterator<Item = usize>,
    allowed: &[bool],
    backward: bool,
) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = if backward { g.inn(v) } else { g.out(v) };
        for &w in next {
            let w = w as usize;
            if allowed[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Bow-tie labels of every node of the binary graph.
pub fn bowtie_labels(g: &Digraph) -> BowTie {
    let n = g.node_count();
    let partition = strongly_connected_components(g);
    let Some(gscc) = partition.largest() else {
        return BowTie {
            labels: Vec::new(),
            partition,
            gscc: None,
        };
    };
    let members = &partition.components[gscc];
    let wcc = weak_components(g);
    let giant_wcc = wcc[members[0] as usize];
    let in_gscc: Vec<bool> = (0..n)
        .map(|v| partition.comp_of[v] as usize == gscc)
        .collect();
    let everywhere = vec![true; n];
    let seeds = members.iter().map(|&v| v as usize);
    let downstream = reach(g, seeds.clone(), &everywhere, false);
    let upstream = reach(g, seeds, &everywhere, true);

    let mut labels = vec![Label::Tendril; n];
    for v in 0..n {
        labels[v] = if wcc[v] != giant_wcc {
            Label::OutsideGwcc
        } else if in_gscc[v] {
            Label::Gscc
        } else if upstream[v] {
            Label::GinOnly
        } else if downstream[v] {
            Label::GoutOnly
        } else {
            Label::Tendril
        };
    }
    let off_core: Vec<bool> = in_gscc.iter().map(|&c| !c).collect();
    let from_gin = reach(
        g,
        (0..n).filter(|&v| labels[v] == Label::GinOnly),
        &off_core,
        false,
    );
    let to_gout = reach(
        g,
        (0..n).filter(|&v| labels[v] == Label::GoutOnly),
        &off_core,
        true,
    );
    for v in 0..n {
        if labels[v] == Label::Tendril && from_gin[v] && to_gout[v] {
            labels[v] = Label::Tube;
        }
    }
    BowTie {
        labels,
        partition,
        gscc: Some(gscc),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Nodes,
    Transactions,
    Volume,
}

pub const BUCKETS: [&str; 6] = [
    "GSCC",
    "GIN\\GSCC",
    "GOUT\\GSCC",
    "tendrils",
    "tubes",
    "cross/other",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentProportions {
    pub weighting: Weighting,
    /// Size of the universe in the weighting's unit (nodes, transactions or cents).
    pub universe: u64,
    /// Shares in [`BUCKETS`] order.
    pub shares: [Share; 6],
    /// Edge weight between source label and destination label, in
    /// [`Label::ALL`] order. Absent for node weighting.
    pub matrix: Option<[[u64; 6]; 6]>,
}

/// Collapses a (source label, destination label) pair into a bucket index.
///
/// GSCC→GSCC is core traffic; anything leaving a `GinOnly` node is GIN
/// traffic; an edge into a `GoutOnly` node from the core or the out-component
/// is GOUT traffic. Remaining edges touching a tendril or tube count for that
/// class, and everything else is cross/other.
pub fn edge_bucket(src: Label, dst: Label) -> usize {
    use Label::*;
    match (src, dst) {
        (Gscc, Gscc) => 0,
        (GinOnly, _) => 1,
        (Gscc | GoutOnly, GoutOnly) => 2,
        (Tendril, _) | (_, Tendril) => 3,
        (Tube, _) | (_, Tube) => 4,
        _ => 5,
    }
}

pub fn component_proportions(
    g: &TxGraph,
    bt: &BowTie,
    weighting: Weighting,
) -> Result<ComponentProportions> {
    match weighting {
        Weighting::Nodes => {
            let universe = bt.gwcc_size() as u64;
            if universe == 0 {
                return Err(Error::EmptyUniverse("no nodes in the GWCC"));
            }
            let mut counts = [0u64; 6];
            for &l in &bt.labels {
                let slot = match l {
                    Label::Gscc => 0,
                    Label::GinOnly => 1,
                    Label::GoutOnly => 2,
                    Label::Tendril => 3,
                    Label::Tube => 4,
                    Label::OutsideGwcc => continue,
                };
                counts[slot] += 1;
            }
            Ok(ComponentProportions {
                weighting,
                universe,
                shares: counts.map(|c| Share::ratio(c as f64, universe as f64)),
                matrix: None,
            })
        }
        Weighting::Transactions | Weighting::Volume => {
            let mut matrix = [[0u64; 6]; 6];
            for e in g.edges() {
                let w = if weighting == Weighting::Volume {
                    e.volume
                } else {
                    e.count
                };
                let (a, b) = (bt.labels[e.src as usize], bt.labels[e.dst as usize]);
                matrix[a.index()][b.index()] += w;
            }
            let universe: u64 = matrix.iter().flatten().sum();
            if universe == 0 {
                return Err(Error::EmptyUniverse("no transactions or zero volume"));
            }
            let mut buckets = [0u64; 6];
            for a in Label::ALL {
                for b in Label::ALL {
                    buckets[edge_bucket(a, b)] += matrix[a.index()][b.index()];
                }
            }
            Ok(ComponentProportions {
                weighting,
                universe,
                shares: buckets.map(|c| Share::ratio(c as f64, universe as f64)),
                matrix: Some(matrix),
            })
        }
    }
}

/// Node shares over the GWCC including the composite GIN and GOUT sets.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StructureShares {
    pub nodes: u64,
    pub gin: Share,
    pub gin_only: Share,
    pub gout: Share,
    pub gout_only: Share,
    pub gscc: Share,
    pub tendrils: Share,
    pub tubes: Share,
}

impl StructureShares {
    pub fn of(bt: &BowTie) -> StructureShares {
        let u = bt.gwcc_size() as f64;
        let c = |l| bt.count(l) as f64;
        StructureShares {
            nodes: bt.gwcc_size() as u64,
            gin: Share::ratio(c(Label::Gscc) + c(Label::GinOnly), u),
            gin_only: Share::ratio(c(Label::GinOnly), u),
            gout: Share::ratio(c(Label::Gscc) + c(Label::GoutOnly), u),
            gout_only: Share::ratio(c(Label::GoutOnly), u),
            gscc: Share::ratio(c(Label::Gscc), u),
            tendrils: Share::ratio(c(Label::Tendril), u),
            tubes: Share::ratio(c(Label::Tube), u),
        }
    }

    pub const ROWS: [&'static str; 8] = [
        "nodes",
        "GIN",
        "GIN\\GSCC",
        "GOUT",
        "GOUT\\GSCC",
        "GSCC",
        "tendrils",
        "tubes",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.nodes as f64,
            self.gin.0,
            self.gin_only.0,
            self.gout.0,
            self.gout_only.0,
            self.gscc.0,
            self.tendrils.0,
            self.tubes.0,
        ]
    }
}

/// Drops every transaction with a provider (type P) at either end.
pub fn filter_provider_flows(set: &TransactionSet) -> TransactionSet {
    let is_p = |id: &str| set.user_type(id) == Some(UserType::P);
    set.filter(format!("{}-noP", set.period), |t| {
        !is_p(&t.buyer_id) && !is_p(&t.seller_id)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Centroid {
    pub scc: u32,
    pub lat: f64,
    pub lon: f64,
    pub members: u64,
    /// Members that contributed coordinates.
    pub located: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CentroidReport {
    pub centroids: Vec<Centroid>,
    /// Components without any located member.
    pub omitted: Vec<u32>,
}

/// Mean coordinates of every SCC over its located members.
pub fn scc_centroids(p: &SccPartition, g: &TxGraph, set: &TransactionSet) -> CentroidReport {
    let mut report = CentroidReport::default();
    for (c, members) in p.components.iter().enumerate() {
        let coords: Vec<(f64, f64)> = members
            .iter()
            .filter_map(|&v| set.users.get(g.id(v as usize)).and_then(|u| u.coord))
            .collect();
        if coords.is_empty() {
            report.omitted.push(c as u32);
            continue;
        }
        let k = coords.len() as f64;
        report.centroids.push(Centroid {
            scc: c as u32,
            lat: coords.iter().map(|x| x.0).sum::<f64>() / k,
            lon: coords.iter().map(|x| x.1).sum::<f64>() / k,
            members: members.len() as u64,
            located: coords.len() as u64,
        });
    }
    report
}

/// Labels keyed by user id.
pub fn labels_by_id(g: &TxGraph, bt: &BowTie) -> BTreeMap<String, Label> {
    bt.labels
        .iter()
        .enumerate()
        .map(|(v, &l)| (g.id(v).to_owned(), l))
        .collect()
}

/// Nodes of `g` that are strongly connected with one another, per component.
pub fn scc_member_sets(p: &SccPartition) -> Vec<BTreeSet<u32>> {
    p.components
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}
