//! Minimum spanning forests of sampled networks.
//!
//! How well does the MSF of a node-sampled subgraph predict the MSF of the
//! whole network? This crate builds population graphs, draws samples under
//! several designs, and scores the sample MSF against the population MSF,
//! along with bootstrap-based estimates of that score.
//!
//! Everything is generic over the edge-weight scalar [`Weight`]; the aliases
//! below cover the usual choices.

pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod ingest;
pub mod mst;
pub mod output;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod theorems;

pub use error::{Error, Result};
pub use experiment::{
    auc, bootstrap_size, estimate_gnp_ppv_formula, ppv, run_experiment, run_replication, summarize,
    summarize_values, BootstrapMode, ExperimentConfig, Population, ReplicationResult, Statistic, SummaryStats,
};
pub use generators::{generate, GeneratorConfig, GraphKind};
pub use graph::{
    component_count, components, cut_from_partition, induced_subgraph, Cut, Edge, EdgeId, InducedSubgraph, NodeId,
    NodeSubset, WeightedGraph,
};
pub use mst::{msf, weight_ordering, EdgeOrdering, Forest};
pub use sampling::{sample, NeighborScore, Quadrant, SampleDesign, SamplingKind};
pub use scalar::{FloatWeight, Weight};

/// Exact rational weights.
pub type Rational = num_rational::Rational64;

pub type Graph64 = WeightedGraph<f64>;
pub type Graph32 = WeightedGraph<f32>;
pub type RationalGraph = WeightedGraph<Rational>;
