pub mod approx;
pub mod dynamic_exact;
pub mod error;
pub mod graph;
pub mod harness;
pub mod mpsp_batch;
pub mod negcycle;
pub mod oracle_threshold;
pub mod queue;
pub mod sssp;
pub mod threshold;
pub mod weight;

pub use approx::ApproxMinCycle;
pub use dynamic_exact::{DynamicExactConfig, DynamicMinCycle, DynamicMpsp};
pub use error::{Error, Result};
pub use graph::{DynamicDigraph, Edge, EdgeBatch, PairSet, VertexId};
pub use mpsp_batch::{BatchDeletionIndex, MpspAnswer, MpspConfig};
pub use negcycle::NegCycleDetector;
pub use oracle_threshold::{DynamicDistanceOracle, EdgeThresholdDetector, NaiveOracle};
pub use sssp::{Direction, DistArray, HopDistTable, PriceFunction};
pub use threshold::ThresholdDetector;
pub use weight::{ExtWeight, Weight};
