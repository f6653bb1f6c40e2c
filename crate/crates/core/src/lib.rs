//! Directed triad census and triad evolution across graph snapshots.
//!
//! The pipeline is: load snapshots ([`graph`]) and profiles ([`profile`]),
//! optionally reduce them ([`sampler`]), count triangle classes per snapshot
//! ([`census`]), join the per-snapshot triangle sets into trajectories and
//! transition matrices ([`evolution`]), and relate classes to geography
//! ([`geo`]) and degrees ([`degree`]).

pub mod census;
pub mod degree;
pub mod error;
pub mod evolution;
pub mod geo;
pub mod graph;
pub mod io;
pub mod profile;
pub mod sampler;
pub mod stats;
pub mod synth;
pub mod triad;

pub use census::{census, enumerate_triangles, triangle_set, CensusResult, TriangleSet};
pub use error::{Error, ErrorKind, Result};
pub use evolution::{
    change_summary, ChangeSummary, Evolution, MatrixView, TransitionMatrix, TripleTrajectory,
};
pub use graph::{load_snapshot, NodeDictionary, NodeId, PairState, Snapshot, SnapshotSequence};
pub use profile::{load_profiles, Profile, Profiles};
pub use sampler::{SamplePlan, SequenceSample};
pub use triad::{
    arc_delta, classify, TriadClass, TriadCode, TriadConfiguration, Triple, TypeMappingTable,
};
