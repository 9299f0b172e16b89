//! Local structural statistics of the transaction graph.

pub mod cycles;
pub mod reciprocity;
pub mod triads;

pub use cycles::{cycle_census, CycleCensus, LengthStats, DEFAULT_CYCLE_CAP};
pub use reciprocity::{reciprocity, reciprocity_by_type, reciprocity_strata, Stratum};
pub use triads::{local_clustering, triad_census, TriadCensus};
