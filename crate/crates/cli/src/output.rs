use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ccnet::bowtie::labels_by_id;
use ccnet::geocluster::{Measure, OdAggregate};
use ccnet::ledger::reports::flow_stats;
use ccnet::ledger::{TransactionSet, CENTS_PER_UNIT};
use ccnet::multilayer::LayerPartition;
use ccnet::nullmodel::asymmetry::INDEX_NAMES;
use ccnet::report::{BowtieSection, GeoSection, MetricsSection, NullSection};
use ccnet::share::fmt6;
use ccnet::{TxGraph, SCHEMA_VERSION};
use serde::Serialize;

use crate::error::CliError;

pub type Out<T = ()> = Result<T, CliError>;

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Out {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| output_error(&tmp, e))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| output_error(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| output_error(path, e))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with a `schema_version` field added at the top level.
pub fn write_json<T: Serialize>(path: &Path, body: &T) -> Out {
    let mut bytes = serde_json::to_vec_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        body,
    })
    .map_err(|e| output_error(path, e))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Serializes a document that already carries its own schema version.
pub fn write_document<T: Serialize>(path: &Path, doc: &T) -> Out {
    let mut bytes = serde_json::to_vec_pretty(doc).map_err(|e| output_error(path, e))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn write_csv<I, R, S>(path: &Path, header: &[&str], rows: I) -> Out
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| output_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| output_error(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| output_error(path, e))?;
    write_atomic(path, &bytes)
}

/// Integers print as integers, everything else with six decimals.
fn num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        fmt6(x)
    }
}

pub fn period_dir(out: &Path, period: &str) -> PathBuf {
    out.join(period)
}

pub fn write_flows(dir: &Path, g: &TxGraph, set: &TransactionSet) -> Out {
    let s = flow_stats(g);
    write_csv(
        &dir.join("flows.csv"),
        &[
            "user_id",
            "type",
            "theta_in",
            "theta_out",
            "v_in_cents",
            "v_out_cents",
            "net_cents",
        ],
        (0..g.node_count()).map(|v| {
            let t = set.user_type(g.id(v)).map_or("", |t| t.as_str());
            [
                g.id(v).to_string(),
                t.to_string(),
                s.theta_in[v].to_string(),
                s.theta_out[v].to_string(),
                s.v_in[v].to_string(),
                s.v_out[v].to_string(),
                s.net(v).to_string(),
            ]
        }),
    )
}

pub fn write_metrics(dir: &Path, g: &TxGraph, m: &MetricsSection) -> Out {
    let r = &m.reciprocity;
    write_csv(
        &dir.join("reciprocity.csv"),
        &["user_id", "r"],
        (0..g.node_count()).map(|v| [g.id(v).to_string(), r.per_node[v].to_string()]),
    )?;
    write_csv(
        &dir.join("strata.csv"),
        &["rho", "nodes", "transactions", "volume_cents"],
        r.strata.iter().map(|s| {
            [
                s.r.to_string(),
                s.stratum.nodes.to_string(),
                s.stratum.transactions.to_string(),
                s.stratum.volume_cents.to_string(),
            ]
        }),
    )?;
    write_json(&dir.join("cycles.json"), &m.cycles)?;
    write_csv(
        &dir.join("clustering.csv"),
        &["user_id", "clustering", "triangles", "strong_triplets"],
        (0..g.node_count()).map(|v| {
            [
                g.id(v).to_string(),
                fmt6(m.triads.clustering[v]),
                m.triads.node_triangles[v].to_string(),
                m.triads.node_strong_triplets[v].to_string(),
            ]
        }),
    )?;
    #[derive(Serialize)]
    struct Triads<'a> {
        triads: &'a ccnet::metrics::TriadCensus,
        clustering: &'a ccnet::metrics::triads::ClusteringSummary,
    }
    write_json(
        &dir.join("triads.json"),
        &Triads {
            triads: &m.triads,
            clustering: &m.clustering,
        },
    )
}

pub fn write_bowtie(dir: &Path, g: &TxGraph, b: &BowtieSection, top_k: usize) -> Out {
    write_csv(
        &dir.join("labels.csv"),
        &["user_id", "label"],
        labels_by_id(g, &b.bowtie)
            .into_iter()
            .map(|(id, l)| [id, l.as_str().to_string()]),
    )?;
    write_json(&dir.join("proportions.json"), b)?;
    write_csv(
        &dir.join("scc_summary.csv"),
        &["rank", "size"],
        b.bowtie
            .partition
            .top_sizes(top_k)
            .into_iter()
            .enumerate()
            .map(|(i, s)| [(i + 1).to_string(), s.to_string()]),
    )?;
    write_csv(
        &dir.join("centroids.csv"),
        &["scc", "members", "located", "lat", "lon"],
        b.centroids.centroids.iter().map(|c| {
            [
                c.scc.to_string(),
                c.members.to_string(),
                c.located.to_string(),
                fmt6(c.lat),
                fmt6(c.lon),
            ]
        }),
    )
}

pub fn write_null(dir: &Path, n: &NullSection) -> Out {
    let keys: Vec<(usize, String)> = n
        .ensembles
        .iter()
        .enumerate()
        .flat_map(|(k, e)| e.mean.keys().map(move |key| (k, key.clone())))
        .collect();
    let mut header = vec!["run".to_string(), "seed".to_string()];
    header.extend(
        keys.iter()
            .map(|(k, key)| format!("{}.{key}", n.ensembles[*k].metric.as_str())),
    );
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let runs = n.ensembles.first().map_or(0, |e| e.runs.len());
    write_csv(
        &dir.join("runs.csv"),
        &header,
        (0..runs).map(|i| {
            let first = &n.ensembles[0].runs[i];
            let mut row = vec![first.run.to_string(), first.seed.to_string()];
            row.extend(
                keys.iter()
                    .map(|(k, key)| num(n.ensembles[*k].runs[i].scalars[key])),
            );
            row
        }),
    )?;
    write_json(&dir.join("summary.json"), n)?;
    let stats = [
        "n",
        "min",
        "q1",
        "median",
        "q3",
        "max",
        "whisker_lo",
        "whisker_hi",
        "outliers",
    ];
    let mut rows = Vec::new();
    for name in INDEX_NAMES {
        let pick = |source: &str| {
            n.boxplots
                .iter()
                .find(|b| b.index == name && b.source == source)
        };
        let (real, null) = (pick("real"), pick("null"));
        for stat in stats {
            let value = |b: Option<&ccnet::report::BoxRow>| {
                b.map_or(String::new(), |b| match stat {
                    "n" => b.n.to_string(),
                    "min" => num(b.min),
                    "q1" => num(b.q1),
                    "median" => num(b.median),
                    "q3" => num(b.q3),
                    "max" => num(b.max),
                    "whisker_lo" => num(b.whisker_lo),
                    "whisker_hi" => num(b.whisker_hi),
                    _ => b.outliers.to_string(),
                })
            };
            rows.push([name.to_string(), stat.to_string(), value(real), value(null)]);
        }
    }
    write_csv(
        &dir.join("boxplots.csv"),
        &["index", "statistic", "real", "null"],
        rows,
    )
}

pub fn write_multilayer<T: Serialize>(
    dir: &Path,
    g: &TxGraph,
    p: &LayerPartition,
    report: &T,
) -> Out {
    write_csv(
        &dir.join("layers.csv"),
        &["user_id", "layer"],
        g.ids().iter().map(|id| {
            [
                id.clone(),
                p.layer.get(id).map_or("", |l| l.as_str()).to_string(),
            ]
        }),
    )?;
    write_json(&dir.join("layer_report.json"), report)
}

fn write_od(path: &Path, agg: &OdAggregate, measure: Measure) -> Out {
    let m = agg.matrix(measure);
    let mut header = vec!["buyer\\seller".to_string()];
    header.extend(m.labels.iter().cloned());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        path,
        &header,
        m.labels.iter().zip(&m.cells).map(|(label, row)| {
            let mut r = vec![label.clone()];
            r.extend(row.iter().map(|&x| num(x)));
            r
        }),
    )
}

pub fn write_geo(dir: &Path, geo: &GeoSection) -> Out {
    for (prefix, agg) in [("zone", &geo.zones), ("sector", &geo.sectors)] {
        write_od(
            &dir.join(format!("{prefix}_count.csv")),
            agg,
            Measure::Count,
        )?;
        write_od(
            &dir.join(format!("{prefix}_volume.csv")),
            agg,
            Measure::Volume,
        )?;
        write_od(
            &dir.join(format!("{prefix}_mean.csv")),
            agg,
            Measure::MeanPerPair,
        )?;
        write_od(
            &dir.join(format!("{prefix}_mean_count.csv")),
            agg,
            Measure::MeanCountPerPair,
        )?;
    }
    #[derive(Serialize)]
    struct Coverage {
        volume_unit: &'static str,
        cents_per_unit: u64,
        zone_coverage: f64,
        zone_resolved: u64,
        sector_coverage: f64,
        sector_resolved: u64,
        total: u64,
    }
    write_json(
        &dir.join("geo_summary.json"),
        &Coverage {
            volume_unit: "cents",
            cents_per_unit: CENTS_PER_UNIT,
            zone_coverage: ccnet::share::round6(geo.zones.coverage()),
            zone_resolved: geo.zones.resolved,
            sector_coverage: ccnet::share::round6(geo.sectors.coverage()),
            sector_resolved: geo.sectors.resolved,
            total: geo.zones.total,
        },
    )
}
