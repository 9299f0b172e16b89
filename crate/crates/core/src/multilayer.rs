//! Business/person two-layer decomposition.
//!
//! Businesses and providers form the business layer; consumers and
//! employees form the person layer. Users of unknown type stay out of both
//! layers, and edges touching them are tallied separately so the
//! intra/inter decomposition still sums to the full graph.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bowtie::{bowtie_labels, Label};
use crate::graph::TxGraph;
use crate::ledger::{Cents, UserRecord, UserType};
use crate::share::{ser6_opt, Share};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Layer {
    Business,
    Person,
}

impl Layer {
    pub fn of(t: UserType) -> Layer {
        match t {
            UserType::B | UserType::P => Layer::Business,
            UserType::C | UserType::E => Layer::Person,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Business => "BUSINESS",
            Layer::Person => "PERSON",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LayerPartition {
    pub layer: BTreeMap<String, Layer>,
    /// Users left out because their type is unknown.
    pub excluded: Vec<String>,
}

pub fn partition_layers<'a, I: IntoIterator<Item = &'a UserRecord>>(users: I) -> LayerPartition {
    let mut p = LayerPartition::default();
    for u in users {
        match u.utype {
            Some(t) => {
                p.layer.insert(u.user_id.clone(), Layer::of(t));
            }
            None => p.excluded.push(u.user_id.clone()),
        }
    }
    p
}

/// GSCC, GIN\GSCC and GOUT\GSCC node shares over a (sub)graph's GWCC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoreShares {
    pub gscc: Share,
    pub gin_only: Share,
    pub gout_only: Share,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LayerStats {
    pub nodes: u64,
    /// Binary arcs with both ends in the layer.
    pub intra_edges: u64,
    pub intra_transactions: u64,
    pub intra_volume_cents: Cents,
    /// Degrees counting intra-layer arcs only.
    #[serde(serialize_with = "ser6_opt")]
    pub avg_in_degree_intra: Option<f64>,
    #[serde(serialize_with = "ser6_opt")]
    pub avg_out_degree_intra: Option<f64>,
    #[serde(serialize_with = "ser6_opt")]
    pub avg_total_degree_intra: Option<f64>,
    /// Degrees in the full graph, averaged over the layer's nodes.
    #[serde(serialize_with = "ser6_opt")]
    pub avg_in_degree_full: Option<f64>,
    #[serde(serialize_with = "ser6_opt")]
    pub avg_out_degree_full: Option<f64>,
    #[serde(serialize_with = "ser6_opt")]
    pub avg_total_degree_full: Option<f64>,
    /// Mean volume per intra-layer arc (pair-aggregated), in cents.
    #[serde(serialize_with = "ser6_opt")]
    pub avg_edge_volume_cents: Option<f64>,
    /// `None` when the layer's largest SCC has fewer than two nodes.
    pub bowtie: Option<CoreShares>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EdgeTally {
    pub edges: u64,
    pub transactions: u64,
    pub volume_cents: Cents,
}

impl EdgeTally {
    fn add(&mut self, count: u64, volume: Cents) {
        self.edges += 1;
        self.transactions += count;
        self.volume_cents += volume;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerReport {
    pub business: LayerStats,
    pub person: LayerStats,
    pub full: LayerStats,
    pub business_to_person: EdgeTally,
    pub person_to_business: EdgeTally,
    /// Edges with an endpoint outside both layers.
    pub unassigned: EdgeTally,
}

impl LayerReport {
    /// Sum of intra, inter and unassigned tallies.
    pub fn decomposed_total(&self) -> EdgeTally {
        let mut t = EdgeTally::default();
        for x in [
            EdgeTally {
                edges: self.business.intra_edges,
                transactions: self.business.intra_transactions,
                volume_cents: self.business.intra_volume_cents,
            },
            EdgeTally {
                edges: self.person.intra_edges,
                transactions: self.person.intra_transactions,
                volume_cents: self.person.intra_volume_cents,
            },
            self.business_to_person,
            self.person_to_business,
            self.unassigned,
        ] {
            t.edges += x.edges;
            t.transactions += x.transactions;
            t.volume_cents += x.volume_cents;
        }
        t
    }
}

fn core_shares(g: &TxGraph) -> Option<CoreShares> {
    let bt = bowtie_labels(&g.binary());
    let gscc = bt.gscc?;
    if bt.partition.components[gscc].len() < 2 {
        return None;
    }
    let u = bt.gwcc_size() as f64;
    Some(CoreShares {
        gscc: Share::ratio(bt.count(Label::Gscc) as f64, u),
        gin_only: Share::ratio(bt.count(Label::GinOnly) as f64, u),
        gout_only: Share::ratio(bt.count(Label::GoutOnly) as f64, u),
    })
}

fn avg(sum: u64, n: u64) -> Option<f64> {
    (n > 0).then(|| sum as f64 / n as f64)
}

fn stats_for(g: &TxGraph, members: &[bool]) -> LayerStats {
    let bin = g.binary();
    let nodes = members.iter().filter(|&&m| m).count() as u64;
    let sub = g.induced(members);
    let (mut din_full, mut dout_full) = (0u64, 0u64);
    for v in (0..g.node_count()).filter(|&v| members[v]) {
        din_full += bin.in_degree(v) as u64;
        dout_full += bin.out_degree(v) as u64;
    }
    let intra_edges = sub.edge_count() as u64;
    LayerStats {
        nodes,
        intra_edges,
        intra_transactions: sub.total_transactions(),
        intra_volume_cents: sub.total_volume(),
        avg_in_degree_intra: avg(intra_edges, nodes),
        avg_out_degree_intra: avg(intra_edges, nodes),
        avg_total_degree_intra: avg(2 * intra_edges, nodes),
        avg_in_degree_full: avg(din_full, nodes),
        avg_out_degree_full: avg(dout_full, nodes),
        avg_total_degree_full: avg(din_full + dout_full, nodes),
        avg_edge_volume_cents: (intra_edges > 0)
            .then(|| sub.total_volume() as f64 / intra_edges as f64),
        bowtie: if nodes > 0 { core_shares(&sub) } else { None },
    }
}

pub fn layer_report(g: &TxGraph, p: &LayerPartition) -> LayerReport {
    let n = g.node_count();
    let layer: Vec<Option<Layer>> = (0..n).map(|v| p.layer.get(g.id(v)).copied()).collect();
    let business: Vec<bool> = layer.iter().map(|l| *l == Some(Layer::Business)).collect();
    let person: Vec<bool> = layer.iter().map(|l| *l == Some(Layer::Person)).collect();
    let mut report = LayerReport {
        business: stats_for(g, &business),
        person: stats_for(g, &person),
        full: stats_for(g, &vec![true; n]),
        business_to_person: EdgeTally::default(),
        person_to_business: EdgeTally::default(),
        unassigned: EdgeTally::default(),
    };
    for e in g.edges() {
        match (layer[e.src as usize], layer[e.dst as usize]) {
            (Some(Layer::Business), Some(Layer::Person)) => {
                report.business_to_person.add(e.count, e.volume)
            }
            (Some(Layer::Person), Some(Layer::Business)) => {
                report.person_to_business.add(e.count, e.volume)
            }
            (Some(_), Some(_)) => {}
            _ => report.unassigned.add(e.count, e.volume),
        }
    }
    report
}
