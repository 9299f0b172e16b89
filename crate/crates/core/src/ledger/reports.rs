//! Dataset-level statistics: flows, correlations, balances, cohorts and
//! type/amount breakdowns.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{stratum, Cents, TransactionSet, CENTS_PER_UNIT, STRATUM_LABELS};
use crate::graph::{build_graph, BuildOptions, TxGraph};
use crate::share::{ser6, ser6_opt, Share};

/// Per-node transaction counts (θ) and volumes (v), both directions.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FlowStats {
    pub theta_in: Vec<u64>,
    pub theta_out: Vec<u64>,
    pub v_in: Vec<Cents>,
    pub v_out: Vec<Cents>,
}

impl FlowStats {
    pub fn len(&self) -> usize {
        self.theta_in.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_in.is_empty()
    }

    /// v_in − v_out for node `i`, in cents.
    pub fn net(&self, i: usize) -> i64 {
        self.v_in[i] as i64 - self.v_out[i] as i64
    }

    pub fn nets(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.net(i)).collect()
    }
}

pub fn flow_stats(g: &TxGraph) -> FlowStats {
    let n = g.node_count();
    let mut s = FlowStats {
        theta_in: vec![0; n],
        theta_out: vec![0; n],
        v_in: vec![0; n],
        v_out: vec![0; n],
    };
    for e in g.edges() {
        s.theta_out[e.src as usize] += e.count;
        s.theta_in[e.dst as usize] += e.count;
        s.v_out[e.src as usize] += e.volume;
        s.v_in[e.dst as usize] += e.volume;
    }
    s
}

pub const FLOW_VECTORS: [&str; 4] = ["theta_out", "theta_in", "v_out", "v_in"];

/// Pearson correlation matrix over (θ_out, θ_in, v_out, v_in).
///
/// An entry is `None` when either vector has zero variance or there are
/// fewer than two nodes.
pub fn pearson_correlations(stats: &FlowStats) -> [[Option<f64>; 4]; 4] {
    let cols: [Vec<f64>; 4] = [
        stats.theta_out.iter().map(|&x| x as f64).collect(),
        stats.theta_in.iter().map(|&x| x as f64).collect(),
        stats.v_out.iter().map(|&x| x as f64).collect(),
        stats.v_in.iter().map(|&x| x as f64).collect(),
    ];
    let mut m = [[None; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let r = pearson(&cols[a], &cols[b]);
            m[a][b] = r;
            m[b][a] = r;
        }
    }
    m
}

/// Two-pass Pearson correlation, clamped to [-1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Counts nets into half-open bins `(a, b]`.
///
/// With edges `e_0 < … < e_k` the result has `k + 2` slots: slot 0 holds
/// values `≤ e_0`, slot `j` holds `(e_{j-1}, e_j]`, and the last slot holds
/// values `> e_k`.
pub fn net_balance_histogram(nets: &[i64], bin_edges: &[i64]) -> Vec<u64> {
    debug_assert!(bin_edges.windows(2).all(|w| w[0] < w[1]));
    let mut counts = vec![0u64; bin_edges.len() + 1];
    for &x in nets {
        // number of edges strictly below x = index of the (a, b] bin holding x
        let slot = bin_edges.partition_point(|&e| e < x);
        counts[slot] += 1;
    }
    counts
}

/// Share of users per type whose net balance lies in `[-5, 5]`, `[-50, 50]`
/// units, and above zero.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceBands {
    pub stratum: &'static str,
    pub users: u64,
    pub within_5: Share,
    pub within_50: Share,
    pub positive: Share,
}

pub fn balance_bands(g: &TxGraph, stats: &FlowStats, set: &TransactionSet) -> Vec<BalanceBands> {
    let mut tallies = [[0u64; 4]; 5];
    for v in 0..g.node_count() {
        let s = stratum(set.user_type(g.id(v)));
        let net = stats.net(v);
        let t = &mut tallies[s];
        t[0] += 1;
        t[1] += (net.unsigned_abs() <= 5 * CENTS_PER_UNIT) as u64;
        t[2] += (net.unsigned_abs() <= 50 * CENTS_PER_UNIT) as u64;
        t[3] += (net > 0) as u64;
    }
    tallies
        .iter()
        .enumerate()
        .map(|(s, t)| BalanceBands {
            stratum: STRATUM_LABELS[s],
            users: t[0],
            within_5: Share::ratio(t[1] as f64, t[0] as f64),
            within_50: Share::ratio(t[2] as f64, t[0] as f64),
            positive: Share::ratio(t[3] as f64, t[0] as f64),
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FlowSums {
    pub count: u64,
    pub theta_in: u64,
    pub theta_out: u64,
    pub v_in_cents: Cents,
    pub v_out_cents: Cents,
    #[serde(serialize_with = "ser6")]
    pub v_in_mean: f64,
    #[serde(serialize_with = "ser6")]
    pub v_in_std: f64,
    #[serde(serialize_with = "ser6")]
    pub v_out_mean: f64,
    #[serde(serialize_with = "ser6")]
    pub v_out_std: f64,
}

impl FlowSums {
    fn over(stats: &FlowStats, nodes: &[usize]) -> FlowSums {
        let mut s = FlowSums {
            count: nodes.len() as u64,
            ..Default::default()
        };
        for &v in nodes {
            s.theta_in += stats.theta_in[v];
            s.theta_out += stats.theta_out[v];
            s.v_in_cents += stats.v_in[v];
            s.v_out_cents += stats.v_out[v];
        }
        let vin: Vec<f64> = nodes.iter().map(|&v| stats.v_in[v] as f64).collect();
        let vout: Vec<f64> = nodes.iter().map(|&v| stats.v_out[v] as f64).collect();
        (s.v_in_mean, s.v_in_std) = mean_std(&vin);
        (s.v_out_mean, s.v_out_std) = mean_std(&vout);
        s
    }
}

/// Mean and population standard deviation; zeros for an empty slice.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, var.sqrt())
}

/// Flow sums of one cohort in one period, with the breakdown by activity side.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CohortFlows {
    pub period: String,
    pub total: FlowSums,
    /// θ_in > 0 and θ_out > 0.
    pub buy_and_sell: FlowSums,
    /// θ_in > 0 and θ_out = 0.
    pub sell_only: FlowSums,
    /// θ_in = 0 and θ_out > 0.
    pub buy_only: FlowSums,
    /// Cohort share of the period's node count, θ_out, θ_in, v_out and v_in totals.
    pub share_of_period: [Share; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortReport {
    #[serde(skip)]
    pub exited: Vec<String>,
    #[serde(skip)]
    pub entered: Vec<String>,
    #[serde(skip)]
    pub persistent: Vec<String>,
    /// Exited users, measured in the first period.
    pub exited_flows: CohortFlows,
    /// Entered users, measured in the second period.
    pub entered_flows: CohortFlows,
    /// Persistent users, measured in each period.
    pub persistent_flows: [CohortFlows; 2],
}

fn cohort_flows(g: &TxGraph, stats: &FlowStats, ids: &[String]) -> CohortFlows {
    let nodes: Vec<usize> = ids.iter().filter_map(|id| g.index_of(id)).collect();
    let pick = |f: &dyn Fn(usize) -> bool| -> Vec<usize> {
        nodes.iter().copied().filter(|&v| f(v)).collect()
    };
    let total = FlowSums::over(stats, &nodes);
    let all: Vec<usize> = (0..g.node_count()).collect();
    let period = FlowSums::over(stats, &all);
    let share_of_period = [
        Share::ratio(total.count as f64, period.count as f64),
        Share::ratio(total.theta_out as f64, period.theta_out as f64),
        Share::ratio(total.theta_in as f64, period.theta_in as f64),
        Share::ratio(total.v_out_cents as f64, period.v_out_cents as f64),
        Share::ratio(total.v_in_cents as f64, period.v_in_cents as f64),
    ];
    CohortFlows {
        period: String::new(),
        buy_and_sell: FlowSums::over(
            stats,
            &pick(&|v| stats.theta_in[v] > 0 && stats.theta_out[v] > 0),
        ),
        sell_only: FlowSums::over(
            stats,
            &pick(&|v| stats.theta_in[v] > 0 && stats.theta_out[v] == 0),
        ),
        buy_only: FlowSums::over(
            stats,
            &pick(&|v| stats.theta_in[v] == 0 && stats.theta_out[v] > 0),
        ),
        total,
        share_of_period,
    }
}

/// Compares who is active in period `a` versus period `b`.
pub fn cohort_flow_report(a: &TransactionSet, b: &TransactionSet) -> CohortReport {
    let ga = build_graph(a, BuildOptions::default());
    let gb = build_graph(b, BuildOptions::default());
    let (sa, sb) = (flow_stats(&ga), flow_stats(&gb));
    let in_a: BTreeSet<&String> = ga.ids().iter().collect();
    let in_b: BTreeSet<&String> = gb.ids().iter().collect();
    let exited: Vec<String> = in_a.difference(&in_b).map(|s| (*s).clone()).collect();
    let entered: Vec<String> = in_b.difference(&in_a).map(|s| (*s).clone()).collect();
    let persistent: Vec<String> = in_a.intersection(&in_b).map(|s| (*s).clone()).collect();
    let label = |mut c: CohortFlows, p: &str| {
        c.period = p.to_owned();
        c
    };
    CohortReport {
        exited_flows: label(cohort_flows(&ga, &sa, &exited), &a.period),
        entered_flows: label(cohort_flows(&gb, &sb, &entered), &b.period),
        persistent_flows: [
            label(cohort_flows(&ga, &sa, &persistent), &a.period),
            label(cohort_flows(&gb, &sb, &persistent), &b.period),
        ],
        exited,
        entered,
        persistent,
    }
}

/// Degree predicates on (θ_in, θ_out), in table order.
pub const DEGREE_PREDICATES: [&str; 8] = [
    "in>=1&out=0",
    "in=0&out>=1",
    "in>=1&out>=1",
    "in=0&out=1",
    "in>0&out=1",
    "in=1&out=0",
    "in=1&out>0",
    "in>1&out>1",
];

fn degree_predicate(k: usize, tin: u64, tout: u64) -> bool {
    match k {
        0 => tin >= 1 && tout == 0,
        1 => tin == 0 && tout >= 1,
        2 => tin >= 1 && tout >= 1,
        3 => tin == 0 && tout == 1,
        4 => tin > 0 && tout == 1,
        5 => tin == 1 && tout == 0,
        6 => tin == 1 && tout > 0,
        7 => tin > 1 && tout > 1,
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeRangeRow {
    pub predicate: &'static str,
    pub nodes: Share,
    /// Σ λ_i e_ij over all j, relative to all transactions.
    pub transactions: Share,
    /// Σ λ_i w_ij, relative to total volume.
    pub volume: Share,
    /// Σ λ_i δ_ij, relative to the number of binary edges.
    pub edges: Share,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeRangeReport {
    pub nodes: u64,
    pub transactions: u64,
    pub volume_cents: Cents,
    pub edges: u64,
    pub rows: Vec<DegreeRangeRow>,
}

/// Source-anchored shares of nodes, transactions, volume and binary edges per
/// degree predicate.
pub fn degree_range_report(g: &TxGraph) -> DegreeRangeReport {
    let s = flow_stats(g);
    let bin = g.binary();
    let (n, tx, vol, m) = (
        g.node_count() as f64,
        g.total_transactions() as f64,
        g.total_volume() as f64,
        g.edge_count() as f64,
    );
    let rows = (0..DEGREE_PREDICATES.len())
        .map(|k| {
            let (mut c, mut t, mut v, mut e) = (0u64, 0u64, 0u64, 0u64);
            for i in 0..g.node_count() {
                if degree_predicate(k, s.theta_in[i], s.theta_out[i]) {
                    c += 1;
                    t += s.theta_out[i];
                    v += s.v_out[i];
                    e += bin.out_degree(i) as u64;
                }
            }
            DegreeRangeRow {
                predicate: DEGREE_PREDICATES[k],
                nodes: Share::ratio(c as f64, n),
                transactions: Share::ratio(t as f64, tx),
                volume: Share::ratio(v as f64, vol),
                edges: Share::ratio(e as f64, m),
            }
        })
        .collect();
    DegreeRangeReport {
        nodes: g.node_count() as u64,
        transactions: g.total_transactions(),
        volume_cents: g.total_volume(),
        edges: g.edge_count() as u64,
        rows,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TypeCell {
    pub buyers: u64,
    pub sellers: u64,
    pub transactions: u64,
    pub volume_cents: Cents,
}

/// Buyer-type × seller-type breakdown. Index 4 is the unknown stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeMatrix {
    pub labels: [&'static str; 5],
    pub cells: [[TypeCell; 5]; 5],
}

pub fn type_transaction_matrix(set: &TransactionSet) -> TypeMatrix {
    let mut buyers: BTreeMap<(usize, usize), BTreeSet<&str>> = BTreeMap::new();
    let mut sellers: BTreeMap<(usize, usize), BTreeSet<&str>> = BTreeMap::new();
    let mut cells: [[TypeCell; 5]; 5] = Default::default();
    for t in &set.transactions {
        let key = (
            stratum(set.user_type(&t.buyer_id)),
            stratum(set.user_type(&t.seller_id)),
        );
        let c = &mut cells[key.0][key.1];
        c.transactions += 1;
        c.volume_cents += t.amount;
        buyers.entry(key).or_default().insert(&t.buyer_id);
        sellers.entry(key).or_default().insert(&t.seller_id);
    }
    for ((a, b), ids) in buyers {
        cells[a][b].buyers = ids.len() as u64;
    }
    for ((a, b), ids) in sellers {
        cells[a][b].sellers = ids.len() as u64;
    }
    TypeMatrix {
        labels: STRATUM_LABELS,
        cells,
    }
}

pub const AMOUNT_BUCKETS: [&str; 6] = [
    "[0,1]", "(1,10]", "(10,100]", "(100,1k]", "(1k,10k]", ">10k",
];

/// Bucket index for an amount in cents; bounds are in currency units.
pub fn amount_bucket(amount: Cents) -> usize {
    const UPPER: [Cents; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];
    UPPER.partition_point(|&u| u < amount)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmountRow {
    pub stratum: &'static str,
    pub transactions: u64,
    pub shares: [Share; 6],
}

/// Share of transactions per amount bucket, overall or per buyer type.
/// Shares in each row are relative to that row's transactions.
pub fn amount_range_distribution(set: &TransactionSet, by_type: bool) -> Vec<AmountRow> {
    let rows = if by_type { 5 } else { 1 };
    let mut counts = vec![[0u64; 6]; rows];
    for t in &set.transactions {
        let r = if by_type {
            stratum(set.user_type(&t.buyer_id))
        } else {
            0
        };
        counts[r][amount_bucket(t.amount)] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let total: u64 = c.iter().sum();
            AmountRow {
                stratum: if by_type { STRATUM_LABELS[r] } else { "all" },
                transactions: total,
                shares: c.map(|x| Share::ratio(x as f64, total as f64)),
            }
        })
        .collect()
}

/// Correlation matrix with labels for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationTable {
    pub vectors: [&'static str; 4],
    pub matrix: Vec<Vec<OptF64>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(transparent)]
pub struct OptF64(#[serde(serialize_with = "ser6_opt")] pub Option<f64>);

impl CorrelationTable {
    pub fn new(m: [[Option<f64>; 4]; 4]) -> Self {
        CorrelationTable {
            vectors: FLOW_VECTORS,
            matrix: m
                .iter()
                .map(|r| r.iter().map(|&x| OptF64(x)).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::ledger::{Transaction, UserRecord, UserType};
    use chrono::NaiveDate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i:03}")).collect()
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> TxGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if a != b && rng.random_bool(p) {
                    edges.push(Edge {
                        src: a,
                        dst: b,
                        count: rng.random_range(1..20),
                        volume: rng.random_range(0..100_000),
                    });
                }
            }
        }
        TxGraph::from_edges(ids(n), edges)
    }

    fn tx(b: &str, s: &str, amount: u64, y: i32) -> Transaction {
        Transaction {
            tx_id: String::new(),
            date: NaiveDate::from_ymd_opt(y, 5, 1).unwrap(),
            buyer_id: b.into(),
            seller_id: s.into(),
            amount,
        }
    }

    fn typed_set(txs: Vec<Transaction>, types: &[(&str, Option<UserType>)]) -> TransactionSet {
        let mut set = TransactionSet {
            transactions: txs,
            ..Default::default()
        };
        for (id, t) in types {
            set.users.insert(
                id.to_string(),
                UserRecord {
                    user_id: id.to_string(),
                    utype: *t,
                    ..Default::default()
                },
            );
        }
        set
    }

    #[test]
    fn single_edge_flows() {
        let g = TxGraph::from_edges(
            ids(2),
            vec![Edge {
                src: 0,
                dst: 1,
                count: 1,
                volume: 1000,
            }],
        );
        let s = flow_stats(&g);
        assert_eq!(s.theta_out[0], 1);
        assert_eq!(s.v_in[1], 1000);
        assert_eq!(s.net(1), 1000);
        assert_eq!(s.net(0), -1000);
        assert!(flow_stats(&TxGraph::default()).is_empty());
    }

    #[test]
    fn flows_match_dense_matrix() {
        let g = random_graph(20, 0.3, 7);
        let n = 20;
        let mut e = vec![vec![0u64; n]; n];
        let mut w = vec![vec![0u64; n]; n];
        for x in g.edges() {
            e[x.src as usize][x.dst as usize] = x.count;
            w[x.src as usize][x.dst as usize] = x.volume;
        }
        let s = flow_stats(&g);
        for i in 0..n {
            assert_eq!(s.theta_out[i], e[i].iter().sum::<u64>());
            assert_eq!(s.theta_in[i], (0..n).map(|j| e[j][i]).sum::<u64>());
            assert_eq!(s.v_out[i], w[i].iter().sum::<u64>());
            assert_eq!(s.v_in[i], (0..n).map(|j| w[j][i]).sum::<u64>());
        }
    }

    #[test]
    fn pearson_identity_and_antisymmetry() {
        let x = [1.0, 2.0, 5.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[3.0; 4]), None);
    }

    /// Textbook single-formula Pearson: (nΣxy − ΣxΣy)/sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²)).
    fn textbook_pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|a| a * a).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    #[test]
    fn correlations_match_textbook_formula() {
        let g = random_graph(100, 0.05, 3);
        let s = flow_stats(&g);
        let m = pearson_correlations(&s);
        let cols: [Vec<f64>; 4] = [
            s.theta_out.iter().map(|&x| x as f64).collect(),
            s.theta_in.iter().map(|&x| x as f64).collect(),
            s.v_out.iter().map(|&x| x as f64).collect(),
            s.v_in.iter().map(|&x| x as f64).collect(),
        ];
        for a in 0..4 {
            assert_eq!(m[a][a].map(|v| (v - 1.0).abs() < 1e-12), Some(true));
            for b in 0..4 {
                let oracle = textbook_pearson(&cols[a], &cols[b]);
                let got = m[a][b].unwrap();
                assert!(
                    (got - oracle).abs() <= 1e-12 * oracle.abs().max(1.0),
                    "{a}{b}: {got} vs {oracle}"
                );
                assert_eq!(m[a][b], m[b][a]);
            }
        }
    }

    #[test]
    fn histogram_boundaries() {
        assert_eq!(net_balance_histogram(&[0], &[-500, 500]), vec![0, 1, 0]);
        assert_eq!(net_balance_histogram(&[-500], &[-500, 500]), vec![1, 0, 0]);
        assert_eq!(net_balance_histogram(&[500], &[-500, 500]), vec![0, 1, 0]);
        assert_eq!(net_balance_histogram(&[501], &[-500, 500]), vec![0, 0, 1]);
    }

    #[test]
    fn histogram_hand_tally() {
        let nets = [-10_000, -5000, -501, -500, -1, 0, 499, 500, 5000, 9999];
        // bins: ≤-5000 | (-5000,-500] | (-500,500] | (500,5000] | >5000
        let got = net_balance_histogram(&nets, &[-5000, -500, 500, 5000]);
        assert_eq!(got, vec![2, 2, 4, 1, 1]);
        assert_eq!(got.iter().sum::<u64>(), nets.len() as u64);
    }

    #[test]
    fn cohorts() {
        let a = typed_set(vec![tx("u1", "u2", 10, 2022)], &[]);
        let b = typed_set(vec![tx("u2", "u3", 10, 2023)], &[]);
        let r = cohort_flow_report(&a, &b);
        assert_eq!(r.exited, vec!["u1"]);
        assert_eq!(r.persistent, vec!["u2"]);
        assert_eq!(r.entered, vec!["u3"]);
        let same = cohort_flow_report(&a, &a);
        assert!(same.exited.is_empty() && same.entered.is_empty());
    }

    #[test]
    fn cohort_breakdowns_add_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sets = Vec::new();
        for y in 2022..2025 {
            let txs = (0..60)
                .map(|_| {
                    let b = rng.random_range(0..15);
                    let s = rng.random_range(0..15);
                    tx(
                        &format!("u{b}"),
                        &format!("u{s}"),
                        rng.random_range(1..1000),
                        y,
                    )
                })
                .collect();
            let mut s = typed_set(txs, &[]);
            s.period = y.to_string();
            sets.push(s);
        }
        for w in sets.windows(2) {
            let r = cohort_flow_report(&w[0], &w[1]);
            let gb = build_graph(&w[1], BuildOptions::default());
            let sb = flow_stats(&gb);
            for c in [&r.entered_flows, &r.persistent_flows[1]] {
                let parts = [&c.buy_and_sell, &c.sell_only, &c.buy_only];
                assert_eq!(parts.iter().map(|p| p.count).sum::<u64>(), c.total.count);
                assert_eq!(
                    parts.iter().map(|p| p.theta_in).sum::<u64>(),
                    c.total.theta_in
                );
                assert_eq!(
                    parts.iter().map(|p| p.v_out_cents).sum::<u64>(),
                    c.total.v_out_cents
                );
            }
            // entered + persistent cover the whole second period
            let total_in: u64 = sb.theta_in.iter().sum();
            assert_eq!(
                r.entered_flows.total.theta_in + r.persistent_flows[1].total.theta_in,
                total_in
            );
        }
    }

    #[test]
    fn degree_range_single_edge() {
        let g = TxGraph::from_edges(
            ids(2),
            vec![Edge {
                src: 0,
                dst: 1,
                count: 1,
                volume: 5,
            }],
        );
        let r = degree_range_report(&g);
        let row = &r.rows[3];
        assert_eq!(row.predicate, "in=0&out=1");
        assert_eq!(row.nodes.value(), 0.5);
        assert_eq!(row.edges.value(), 1.0);
        assert_eq!(row.transactions.value(), 1.0);
        let empty = degree_range_report(&TxGraph::default());
        assert!(empty
            .rows
            .iter()
            .all(|r| r.nodes.value() == 0.0 && r.volume.value() == 0.0));
    }

    #[test]
    fn degree_range_matches_filter() {
        let g = random_graph(30, 0.08, 5);
        let r = degree_range_report(&g);
        let s = flow_stats(&g);
        let filters: [fn(u64, u64) -> bool; 8] = [
            |i, o| i >= 1 && o == 0,
            |i, o| i == 0 && o >= 1,
            |i, o| i >= 1 && o >= 1,
            |i, o| i == 0 && o == 1,
            |i, o| i > 0 && o == 1,
            |i, o| i == 1 && o == 0,
            |i, o| i == 1 && o > 0,
            |i, o| i > 1 && o > 1,
        ];
        for (k, f) in filters.iter().enumerate() {
            let sel: Vec<usize> = (0..30)
                .filter(|&i| f(s.theta_in[i], s.theta_out[i]))
                .collect();
            let edges = g
                .edges()
                .iter()
                .filter(|e| sel.contains(&(e.src as usize)))
                .count();
            let vol: u64 = g
                .edges()
                .iter()
                .filter(|e| sel.contains(&(e.src as usize)))
                .map(|e| e.volume)
                .sum();
            assert_eq!(r.rows[k].nodes.value(), sel.len() as f64 / 30.0);
            assert_eq!(
                r.rows[k].edges.value(),
                edges as f64 / g.edge_count() as f64
            );
            assert_eq!(
                r.rows[k].volume.value(),
                vol as f64 / g.total_volume() as f64
            );
        }
    }

    #[test]
    fn type_matrix_cases() {
        use UserType::*;
        let s = typed_set(
            vec![tx("b", "c", 7, 2022)],
            &[("b", Some(B)), ("c", Some(C))],
        );
        let m = type_transaction_matrix(&s);
        assert_eq!(
            m.cells[0][1],
            TypeCell {
                buyers: 1,
                sellers: 1,
                transactions: 1,
                volume_cents: 7
            }
        );
        let empty = type_transaction_matrix(&typed_set(vec![], &[]));
        assert!(empty
            .cells
            .iter()
            .flatten()
            .all(|c| *c == TypeCell::default()));
    }

    #[test]
    fn type_matrix_hand_tally() {
        use UserType::*;
        let types = [
            ("b1", Some(B)),
            ("b2", Some(B)),
            ("c1", Some(C)),
            ("e1", Some(E)),
            ("p1", Some(P)),
            ("x", None),
        ];
        let txs = vec![
            tx("b1", "b2", 1, 2022),
            tx("b1", "b2", 2, 2022),
            tx("b2", "b1", 3, 2022),
            tx("c1", "b1", 4, 2022),
            tx("c1", "b2", 5, 2022),
            tx("e1", "b1", 6, 2022),
            tx("p1", "c1", 7, 2022),
            tx("p1", "e1", 8, 2022),
            tx("b1", "e1", 9, 2022),
            tx("x", "b1", 10, 2022),
            tx("b2", "x", 11, 2022),
            tx("c1", "b1", 12, 2022),
        ];
        let m = type_transaction_matrix(&typed_set(txs, &types));
        let bb = &m.cells[0][0];
        assert_eq!(
            (bb.buyers, bb.sellers, bb.transactions, bb.volume_cents),
            (2, 2, 3, 6)
        );
        let cb = &m.cells[1][0];
        assert_eq!(
            (cb.buyers, cb.sellers, cb.transactions, cb.volume_cents),
            (1, 2, 3, 21)
        );
        assert_eq!(m.cells[4][0].transactions, 1);
        assert_eq!(m.cells[0][4].transactions, 1);
        assert_eq!(m.cells[3][1].volume_cents, 7);
        let total: u64 = m.cells.iter().flatten().map(|c| c.transactions).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn amount_buckets() {
        let s = typed_set(
            vec![
                tx("a", "b", 50, 2022),
                tx("a", "b", 500, 2022),
                tx("a", "b", 5000, 2022),
            ],
            &[],
        );
        let r = amount_range_distribution(&s, false);
        let shares: Vec<f64> = r[0].shares.iter().map(|s| s.value()).collect();
        assert_eq!(&shares[..3], &[1.0 / 3.0; 3]);
        assert_eq!(amount_bucket(100), 0);
        assert_eq!(amount_bucket(0), 0);
        assert_eq!(amount_bucket(101), 1);
        assert_eq!(amount_bucket(1_000_000), 4);
        assert_eq!(amount_bucket(1_000_001), 5);
    }

    proptest! {
        #[test]
        fn amount_shares_match_direct_bucketing(amounts in prop::collection::vec(0u64..5_000_000, 1..100)) {
            let s = typed_set(amounts.iter().map(|&a| tx("a", "b", a, 2022)).collect(), &[("a", Some(UserType::E))]);
            let by_type = amount_range_distribution(&s, true);
            let row = &by_type[UserType::E.index()];
            let bounds = [(0u64, 100u64), (100, 1000), (1000, 10_000), (10_000, 100_000), (100_000, 1_000_000)];
            for (k, share) in row.shares.iter().enumerate() {
                let n = amounts.iter().filter(|&&a| match bounds.get(k) {
                    Some(&(lo, hi)) => (k == 0 || a > lo) && a <= hi,
                    None => a > 1_000_000,
                }).count();
                prop_assert!((share.value() - n as f64 / amounts.len() as f64).abs() < 1e-12);
            }
            let sum: f64 = row.shares.iter().map(|s| s.value()).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }

        #[test]
        fn histogram_counts_everything(nets in prop::collection::vec(-10_000i64..10_000, 0..200)) {
            let h = net_balance_histogram(&nets, &[-5000, -500, 0, 500, 5000]);
            prop_assert_eq!(h.iter().sum::<u64>(), nets.len() as u64);
        }
    }
}
