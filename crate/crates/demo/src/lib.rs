//! WebAssembly bindings for the browser demo in `www/`.
//!
//! A [`Demo`] holds one synthetic ledger. Its methods return JSON strings
//! that the page renders.

use ccnet::geocluster::{zone_matrix, Measure};
use ccnet::nullmodel::RewireConfig;
use ccnet::report::{bowtie_section, null_section, BoxRow, KsRow};
use ccnet::synthgen::{generate_ledger, SynthConfig};
use ccnet::{build_graph, BuildOptions, TransactionSet, TxGraph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    set: TransactionSet,
    graph: TxGraph,
}

#[derive(Serialize)]
struct Summary {
    users: usize,
    transactions: usize,
    nodes: usize,
    edges: usize,
    volume_cents: u64,
}

#[derive(Serialize)]
struct NullView<'a> {
    runs: u32,
    ks: &'a [KsRow],
    boxplots: &'a [BoxRow],
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo views serialize")
}

fn measure(name: &str) -> Result<Measure, String> {
    match name {
        "count" => Ok(Measure::Count),
        "volume" => Ok(Measure::Volume),
        "mean" => Ok(Measure::MeanPerPair),
        "mean_count" => Ok(Measure::MeanCountPerPair),
        other => Err(format!("unknown measure {other:?}")),
    }
}

impl Demo {
    pub fn build(n_users: u32, n_transactions: u32, beta: f64, seed: u32) -> Result<Demo, String> {
        let cfg = SynthConfig {
            n_users,
            n_transactions: n_transactions.into(),
            imitation_beta: beta,
            seed: seed.into(),
            ..Default::default()
        };
        let set = generate_ledger(&cfg).map_err(|e| e.to_string())?;
        let graph = build_graph(&set, BuildOptions::default());
        Ok(Demo { set, graph })
    }

    pub fn null_json(&self, runs: u32) -> Result<String, String> {
        let cfg = RewireConfig {
            runs,
            seed: 42,
            swap_multiplier: 10,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        let n = null_section(&self.graph.binary(), None, &cfg).map_err(|e| e.to_string())?;
        Ok(to_json(&NullView {
            runs,
            ks: &n.ks,
            boxplots: &n.boxplots,
        }))
    }

    pub fn heatmap_json(&self, measure_name: &str) -> Result<String, String> {
        Ok(to_json(&zone_matrix(&self.set, measure(measure_name)?)))
    }
}

#[wasm_bindgen]
impl Demo {
    /// Generates a synthetic ledger with imitation strength `beta`.
    #[wasm_bindgen(constructor)]
    pub fn new(n_users: u32, n_transactions: u32, beta: f64, seed: u32) -> Result<Demo, JsValue> {
        Demo::build(n_users, n_transactions, beta, seed).map_err(|e| JsValue::from_str(&e))
    }

    pub fn summary(&self) -> String {
        to_json(&Summary {
            users: self.set.users.len(),
            transactions: self.set.transactions.len(),
            nodes: self.graph.node_count(),
            edges: self.graph.edge_count(),
            volume_cents: self.graph.total_volume(),
        })
    }

    /// Bow-tie structure and component shares.
    pub fn bowtie(&self) -> String {
        to_json(&bowtie_section(&self.graph, &self.set))
    }

    /// KS tests and boxplots of asymmetry indices, real against `runs` rewired graphs.
    pub fn null_model(&self, runs: u32) -> Result<String, JsValue> {
        self.null_json(runs).map_err(|e| JsValue::from_str(&e))
    }

    /// Buyer-zone by seller-zone matrix; `measure` is count, volume, mean or mean_count.
    pub fn zone_heatmap(&self, measure: &str) -> Result<String, JsValue> {
        self.heatmap_json(measure)
            .map_err(|e| JsValue::from_str(&e))
    }
}
