//! Degree-preserving null model and the statistics compared against it.

pub mod asymmetry;
pub mod boxplot;
pub mod ensemble;
pub mod ks;
pub mod rewire;

pub use asymmetry::{asymmetry_indices, AsymmetryIndices};
pub use boxplot::{boxplot_summary, BoxplotSummary};
pub use ensemble::{
    ensemble_metric, ensemble_metrics, null_condensation_report, EnsembleResult, MetricId,
};
pub use ks::{ks_two_sample, KsResult};
pub use rewire::{degree_preserving_rewire, RewireConfig};
