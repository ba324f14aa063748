//! Diffusion-based recommendation on coupled user–object and user–group
//! bipartite networks.
//!
//! * [`graph`]: immutable sparse bipartite graphs and the coupled dataset
//! * [`similarity`]: Jaccard and Salton similarities
//! * [`aspect`]: aspect-model estimate of group influence on object choice
//! * [`recommend`]: MD, HDH, SD, UCF, ICF and the SD+HDH blend
//! * [`evaluation`]: splits, ranking scores, cohort curves and sweeps
//! * [`dataio`], [`synth`], [`cli`]: ingestion, synthetic data and the CLI

pub mod aspect;
pub mod binning;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod recommend;
pub mod similarity;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{build_graph, BipartiteGraph, CoupledDataset, Labels, NodeId, Side};
pub use recommend::{Algorithm, ScoreVector};
