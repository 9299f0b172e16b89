//! Network analytics for community-currency transaction ledgers.
//!
//! The pipeline runs from raw ledger rows to yearly directed weighted graphs
//! and on to the structural measurements built on top of them:
//!
//! * [`ledger`]: CSV ingestion, period slicing and dataset-level flow reports.
//! * [`graph`]: the aggregated transaction graph and its binary projection.
//! * [`bowtie`]: strongly connected components, condensation and bow-tie labels.
//! * [`metrics`]: reciprocity, bounded cycle census, clustering and triads.
//! * [`nullmodel`]: degree-preserving rewiring, asymmetry indices, KS testing.
//! * [`multilayer`]: business/person layer decomposition.
//! * [`geocluster`]: postal-zone and sector origin/destination matrices.
//! * [`synthgen`]: seeded synthetic ledgers.
//! * [`report`]: the consolidated per-year analysis document.

pub mod bowtie;
pub mod error;
pub mod geocluster;
pub mod graph;
pub mod ledger;
pub mod metrics;
pub mod multilayer;
pub mod nullmodel;
pub mod par;
pub mod report;
pub mod share;
pub mod synthgen;

pub use error::{Error, Result};
pub use graph::{build_graph, BuildOptions, Digraph, TxGraph};
pub use ledger::{Transaction, TransactionSet, UserRecord, UserType};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: &str = "ccnet/1";
