//! The consolidated per-period analysis document.
//!
//! Each section can be computed on its own (the CLI subcommands do so) or
//! all together through [`build_report`]. Per-node artifacts needed for CSV
//! output are kept on the section structs but left out of the JSON.

use serde::Serialize;

use crate::bowtie::{
    bowtie_labels, component_proportions, filter_provider_flows, scc_centroids, BowTie,
    CentroidReport, ComponentProportions, StructureShares, Weighting,
};
use crate::error::{Error, Result};
use crate::geocluster::{sector_aggregate, zone_aggregate, OdAggregate};
use crate::graph::{build_graph, BuildOptions, Digraph, TxGraph};
use crate::ledger::reports::{
    amount_range_distribution, balance_bands, cohort_flow_report, degree_range_report, flow_stats,
    net_balance_histogram, pearson_correlations, type_transaction_matrix, AmountRow, BalanceBands,
    CohortReport, CorrelationTable, DegreeRangeReport, TypeMatrix,
};
use crate::ledger::{
    slice_by_period, stratum, Cents, TransactionSet, CENTS_PER_UNIT, STRATUM_LABELS,
};
use crate::metrics::cycles::MAX_LEN;
use crate::metrics::reciprocity::rollup;
use crate::metrics::triads::{clustering_summary, ClusteringSummary};
use crate::metrics::{
    cycle_census, reciprocity, reciprocity_by_type, reciprocity_strata, triad_census, CycleCensus,
    Stratum, TriadCensus, DEFAULT_CYCLE_CAP,
};
use crate::multilayer::{layer_report, partition_layers, LayerReport};
use crate::nullmodel::asymmetry::INDEX_NAMES;
use crate::nullmodel::ensemble::{condensation_from, CondensationComparison, Scalars};
use crate::nullmodel::{
    asymmetry_indices, boxplot_summary, ensemble_metrics, ks_two_sample, AsymmetryIndices,
    BoxplotSummary, EnsembleResult, MetricId, RewireConfig,
};
use crate::share::Share;
use crate::SCHEMA_VERSION;

/// Net-balance bin edges in cents: ±5, ±50, ±500, ±5000 units and zero.
pub const DEFAULT_BALANCE_EDGES: [i64; 9] = [
    -500_000, -50_000, -5_000, -500, 0, 500, 5_000, 50_000, 500_000,
];

/// Reciprocity values at or above this are pooled in the rolled-up strata.
pub const RECIPROCITY_ROLLUP: u32 = 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub cycles_max_len: usize,
    pub cycle_cap: u64,
    pub rewire: RewireConfig,
    pub include_isolated: bool,
    pub balance_edges_cents: Vec<i64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            cycles_max_len: MAX_LEN,
            cycle_cap: DEFAULT_CYCLE_CAP,
            rewire: RewireConfig::default(),
            include_isolated: false,
            balance_edges_cents: DEFAULT_BALANCE_EDGES.to_vec(),
        }
    }
}

impl ReportConfig {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            include_isolated: self.include_isolated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeRow {
    pub stratum: &'static str,
    pub users: u64,
    pub theta_out: u64,
    pub v_out_cents: Cents,
    pub v_out_share: Share,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overview {
    pub period: String,
    pub nodes: u64,
    pub edges: u64,
    pub transactions: u64,
    pub volume_cents: Cents,
    pub self_trades_dropped: u64,
    pub by_type: Vec<TypeRow>,
}

pub fn overview(g: &TxGraph, set: &TransactionSet) -> Overview {
    let stats = flow_stats(g);
    let mut rows = [(0u64, 0u64, 0u64); 5];
    for v in 0..g.node_count() {
        let r = &mut rows[stratum(set.user_type(g.id(v)))];
        r.0 += 1;
        r.1 += stats.theta_out[v];
        r.2 += stats.v_out[v];
    }
    let total = g.total_volume();
    Overview {
        period: set.period.clone(),
        nodes: g.node_count() as u64,
        edges: g.edge_count() as u64,
        transactions: g.total_transactions(),
        volume_cents: total,
        self_trades_dropped: g.self_trades_dropped,
        by_type: rows
            .iter()
            .enumerate()
            .map(|(s, r)| TypeRow {
                stratum: STRATUM_LABELS[s],
                users: r.0,
                theta_out: r.1,
                v_out_cents: r.2,
                v_out_share: Share::ratio(r.2 as f64, total as f64),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSection {
    pub correlations: CorrelationTable,
    pub balance_edges_cents: Vec<i64>,
    pub balance_histogram: Vec<u64>,
    pub balance_bands: Vec<BalanceBands>,
    pub degree_ranges: DegreeRangeReport,
    pub type_matrix: TypeMatrix,
    pub amounts: Vec<AmountRow>,
    pub amounts_by_type: Vec<AmountRow>,
}

pub fn ledger_section(
    g: &TxGraph,
    set: &TransactionSet,
    balance_edges: &[i64],
) -> Result<LedgerSection> {
    if balance_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "balance bin edges must be strictly increasing".into(),
        ));
    }
    let stats = flow_stats(g);
    Ok(LedgerSection {
        correlations: CorrelationTable::new(pearson_correlations(&stats)),
        balance_edges_cents: balance_edges.to_vec(),
        balance_histogram: net_balance_histogram(&stats.nets(), balance_edges),
        balance_bands: balance_bands(g, &stats, set),
        degree_ranges: degree_range_report(g),
        type_matrix: type_transaction_matrix(set),
        amounts: amount_range_distribution(set, false),
        amounts_by_type: amount_range_distribution(set, true),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleStatus {
    Complete,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSection {
    pub status: CycleStatus,
    pub cap: u64,
    /// Complete census, or the partial one at the point the cap tripped.
    pub census: CycleCensus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReciprocitySection {
    pub max: u32,
    pub reciprocal_pairs: u64,
    pub reciprocal_nodes: u64,
    pub strata: Vec<StratumRow>,
    /// Strata with values ≥ [`RECIPROCITY_ROLLUP`] pooled into one row.
    pub strata_rolled_up: Vec<StratumRow>,
    /// Reciprocal pair counts between user types, in stratum order.
    pub by_type: [[u64; 5]; 5],
    #[serde(skip)]
    pub per_node: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumRow {
    pub r: u32,
    #[serde(flatten)]
    pub stratum: Stratum,
}

fn stratum_rows(m: &std::collections::BTreeMap<u32, Stratum>) -> Vec<StratumRow> {
    m.iter()
        .map(|(&r, s)| StratumRow { r, stratum: *s })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSection {
    pub reciprocity: ReciprocitySection,
    pub cycles: CycleSection,
    pub triads: TriadCensus,
    pub clustering: ClusteringSummary,
}

pub fn metrics_section(
    g: &TxGraph,
    set: &TransactionSet,
    max_len: usize,
    cap: u64,
) -> Result<MetricsSection> {
    let bin = g.binary();
    let r = reciprocity(&bin);
    let strata = reciprocity_strata(g);
    let cycles = match cycle_census(&bin, max_len, cap) {
        Ok(census) => CycleSection {
            status: CycleStatus::Complete,
            cap,
            census,
        },
        Err(Error::CycleCapExceeded { cap, partial }) => CycleSection {
            status: CycleStatus::CapExceeded,
            cap,
            census: *partial,
        },
        Err(e) => return Err(e),
    };
    let triads = triad_census(&bin);
    let clustering = clustering_summary(&triads.clustering);
    Ok(MetricsSection {
        reciprocity: ReciprocitySection {
            max: r.iter().copied().max().unwrap_or(0),
            reciprocal_pairs: r.iter().map(|&x| x as u64).sum::<u64>() / 2,
            reciprocal_nodes: r.iter().filter(|&&x| x > 0).count() as u64,
            strata: stratum_rows(&strata),
            strata_rolled_up: stratum_rows(&rollup(&strata, RECIPROCITY_ROLLUP)),
            by_type: reciprocity_by_type(g, set),
            per_node: r,
        },
        cycles,
        triads,
        clustering,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BowtieSection {
    pub period: String,
    pub structure: StructureShares,
    /// One entry per weighting with a non-empty universe.
    pub proportions: Vec<ComponentProportions>,
    pub scc_count: u64,
    pub top_scc_sizes: Vec<usize>,
    pub centroids_located: u64,
    pub centroids_omitted: u64,
    #[serde(skip)]
    pub bowtie: BowTie,
    #[serde(skip)]
    pub centroids: CentroidReport,
}

pub fn bowtie_section(g: &TxGraph, set: &TransactionSet) -> BowtieSection {
    let bt = bowtie_labels(&g.binary());
    let proportions = [Weighting::Nodes, Weighting::Transactions, Weighting::Volume]
        .into_iter()
        .filter_map(|w| component_proportions(g, &bt, w).ok())
        .collect();
    let centroids = scc_centroids(&bt.partition, g, set);
    BowtieSection {
        period: set.period.clone(),
        structure: StructureShares::of(&bt),
        proportions,
        scc_count: bt.partition.components.len() as u64,
        top_scc_sizes: bt.partition.top_sizes(5),
        centroids_located: centroids.centroids.len() as u64,
        centroids_omitted: centroids.omitted.len() as u64,
        bowtie: bt,
        centroids,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsRow {
    pub index: &'static str,
    pub d: f64,
    pub p: f64,
    pub n_real: usize,
    pub n_null: usize,
}

/// Boxplot summary without the outlier list, which can be very long for the
/// pooled null distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxRow {
    pub index: &'static str,
    pub source: &'static str,
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub outliers: usize,
}

impl BoxRow {
    fn new(index: &'static str, source: &'static str, b: &BoxplotSummary) -> BoxRow {
        BoxRow {
            index,
            source,
            n: b.n,
            min: b.min,
            q1: b.q1,
            median: b.median,
            q3: b.q3,
            max: b.max,
            whisker_lo: b.whisker_lo,
            whisker_hi: b.whisker_hi,
            outliers: b.outliers.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullSection {
    pub config: RewireConfig,
    pub ks: Vec<KsRow>,
    pub boxplots: Vec<BoxRow>,
    pub real_means: Scalars,
    pub null_means: Vec<(MetricId, Scalars)>,
    pub condensation: CondensationComparison,
    /// Same comparison with provider flows removed; absent when not requested.
    pub condensation_without_providers: Option<CondensationComparison>,
    #[serde(skip)]
    pub ensembles: Vec<EnsembleResult>,
    #[serde(skip)]
    pub real: AsymmetryIndices,
}

/// Runs the null ensemble on `g` and compares asymmetry distributions and
/// bow-tie structure. `filtered` adds the provider-free bow-tie comparison.
pub fn null_section(
    g: &Digraph,
    filtered: Option<&Digraph>,
    cfg: &RewireConfig,
) -> Result<NullSection> {
    let ensembles = ensemble_metrics(g, cfg, &MetricId::ALL)?;
    let real = asymmetry_indices(g);
    let asym = &ensembles[0];
    let mut ks = Vec::new();
    let mut boxplots = Vec::new();
    for (k, name) in INDEX_NAMES.iter().enumerate() {
        let pooled = asym.pooled(k);
        if let Ok(r) = ks_two_sample(real.series(k), &pooled) {
            ks.push(KsRow {
                index: name,
                d: r.d_statistic,
                p: r.p_value,
                n_real: r.n1,
                n_null: r.n2,
            });
        }
        if let Ok(b) = boxplot_summary(real.series(k)) {
            boxplots.push(BoxRow::new(name, "real", &b));
        }
        if let Ok(b) = boxplot_summary(&pooled) {
            boxplots.push(BoxRow::new(name, "null", &b));
        }
    }
    let condensation = condensation_from(g, &ensembles[1]);
    let condensation_without_providers = match filtered {
        Some(f) => {
            let ens = ensemble_metrics(f, cfg, &[MetricId::BowtieShares])?;
            Some(condensation_from(f, &ens[0]))
        }
        None => None,
    };
    let mut real_means = Scalars::new();
    for m in MetricId::ALL {
        real_means.extend(crate::nullmodel::ensemble::metric_scalars(g, m).0);
    }
    Ok(NullSection {
        config: *cfg,
        ks,
        boxplots,
        real_means,
        null_means: ensembles
            .iter()
            .map(|e| (e.metric, e.mean.clone()))
            .collect(),
        condensation,
        condensation_without_providers,
        ensembles,
        real,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoSection {
    pub zones: OdAggregate,
    pub sectors: OdAggregate,
}

pub fn geo_section(set: &TransactionSet) -> GeoSection {
    GeoSection {
        zones: zone_aggregate(set),
        sectors: sector_aggregate(set),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodReport {
    pub overview: Overview,
    pub ledger: LedgerSection,
    pub metrics: MetricsSection,
    pub bowtie: BowtieSection,
    pub bowtie_without_providers: BowtieSection,
    pub null_model: NullSection,
    pub multilayer: LayerReport,
    pub geo: GeoSection,
}

pub fn period_report(set: &TransactionSet, cfg: &ReportConfig) -> Result<PeriodReport> {
    let g = build_graph(set, cfg.build_options());
    let filtered_set = filter_provider_flows(set);
    let filtered = build_graph(&filtered_set, cfg.build_options());
    Ok(PeriodReport {
        overview: overview(&g, set),
        ledger: ledger_section(&g, set, &cfg.balance_edges_cents)?,
        metrics: metrics_section(&g, set, cfg.cycles_max_len, cfg.cycle_cap)?,
        bowtie: bowtie_section(&g, set),
        bowtie_without_providers: bowtie_section(&filtered, &filtered_set),
        null_model: null_section(&g.binary(), Some(&filtered.binary()), &cfg.rewire)?,
        multilayer: layer_report(&g, &partition_layers(set.users.values())),
        geo: geo_section(set),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub schema_version: &'static str,
    pub config: ReportConfig,
    pub periods: Vec<PeriodReport>,
    /// Cohort comparisons between consecutive selected periods.
    pub cohorts: Vec<CohortReport>,
}

/// Analyzes each of `years` (every year present in `set` when empty).
pub fn build_report(set: &TransactionSet, years: &[i32], cfg: &ReportConfig) -> Result<Document> {
    cfg.rewire.validate()?;
    let years = if years.is_empty() {
        set.years()
    } else {
        years.to_vec()
    };
    let slices: Vec<TransactionSet> = years.iter().map(|&y| slice_by_period(set, y)).collect();
    let periods = slices
        .iter()
        .map(|s| period_report(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let cohorts = slices
        .windows(2)
        .map(|w| cohort_flow_report(&w[0], &w[1]))
        .collect();
    Ok(Document {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        periods,
        cohorts,
    })
}

/// Amount in cents rendered as currency units with two decimals.
pub fn units(cents: Cents) -> String {
    format!("{}.{:02}", cents / CENTS_PER_UNIT, cents % CENTS_PER_UNIT)
}
