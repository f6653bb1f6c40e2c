//! Graph reduction: location filter, random seed selection and the
//! triangle-graph closure around the seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::census::UndirectedAdjacency;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Snapshot};
use crate::profile::Profiles;

pub const DEFAULT_SEED_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplePlan {
    pub seed_count: usize,
    pub rng_seed: u64,
    pub location_filter: bool,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            seed_count: DEFAULT_SEED_COUNT,
            rng_seed: 0,
            location_filter: false,
        }
    }
}

impl SamplePlan {
    pub fn validate(&self, node_count: usize) -> Result<()> {
        if self.seed_count == 0 {
            return Err(Error::SamplePlan("seed count must be at least 1".into()));
        }
        if self.seed_count > node_count {
            return Err(Error::SamplePlan(format!(
                "{} seeds requested but the graph has only {} nodes",
                self.seed_count, node_count
            )));
        }
        Ok(())
    }
}

/// Subgraph induced on the profiled nodes.
pub fn filter_by_location(snapshot: &Snapshot, profiles: &Profiles) -> Snapshot {
    let filtered = snapshot.induced(|n| profiles.contains(n));
    if filtered.node_count() == 0 {
        log::warn!("location filter left {:?} empty", snapshot.label());
    }
    filtered
}

/// Draws `plan.seed_count` distinct nodes uniformly; returned in ascending order.
pub fn draw_seeds(snapshot: &Snapshot, plan: &SamplePlan) -> Result<Vec<NodeId>> {
    plan.validate(snapshot.node_count())?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.rng_seed);
    let nodes = snapshot.nodes();
    let mut seeds: Vec<NodeId> = rand::seq::index::sample(&mut rng, nodes.len(), plan.seed_count)
        .into_iter()
        .map(|i| nodes[i])
        .collect();
    seeds.sort_unstable();
    Ok(seeds)
}

#[inline]
fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Nodes and edges of every weakly connected triple containing at least one seed.
/// Seeds that belong to no such triple do not appear in the result.
pub fn triangle_closure(snapshot: &Snapshot, seeds: &[NodeId]) -> Snapshot {
    let adj = UndirectedAdjacency::new(snapshot);
    let mut pairs: Vec<(NodeId, NodeId)> = seeds
        .par_iter()
        .flat_map_iter(|&seed| {
            let mut local = Vec::new();
            let (neighbors, _) = adj.neighbors(seed);
            // any two neighbors of the seed form a triple with it
            if neighbors.len() >= 2 {
                local.extend(neighbors.iter().map(|&x| ordered(seed, x)));
            }
            // seed - x - y paths
            for &x in neighbors {
                let (second, _) = adj.neighbors(x);
                for &y in second.iter().filter(|&&y| y != seed) {
                    local.push(ordered(seed, x));
                    local.push(ordered(x, y));
                }
            }
            local
        })
        .collect();
    pairs.par_sort_unstable();
    pairs.dedup();

    let mut edges = Vec::with_capacity(pairs.len() * 2);
    for &(a, b) in &pairs {
        if snapshot.has_edge(a, b) {
            edges.push((a, b));
        }
        if snapshot.has_edge(b, a) {
            edges.push((b, a));
        }
    }
    Snapshot::from_edges(snapshot.label(), [], edges)
}

/// Draws seeds from `snapshot` and returns its triangle-graph with the seed list.
pub fn sample_triangle_graph(
    snapshot: &Snapshot,
    plan: &SamplePlan,
) -> Result<(Snapshot, Vec<NodeId>)> {
    let seeds = draw_seeds(snapshot, plan)?;
    Ok((triangle_closure(snapshot, &seeds), seeds))
}

/// Reduction stages of a sampled snapshot sequence.
#[derive(Debug, Clone)]
pub struct SequenceSample {
    pub seeds: Vec<NodeId>,
    /// Location-filtered snapshots, when the plan asks for the filter.
    pub located: Option<Vec<Snapshot>>,
    pub triangle_graphs: Vec<Snapshot>,
}

/// Applies one seed set, drawn from the first (filtered) snapshot, to every snapshot.
pub fn reuse_seeds(
    snapshots: &[Snapshot],
    plan: &SamplePlan,
    profiles: Option<&Profiles>,
) -> Result<SequenceSample> {
    let first = snapshots
        .first()
        .ok_or_else(|| Error::Sequence("no snapshots to sample".into()))?;
    let located = if plan.location_filter {
        let profiles = profiles.ok_or_else(|| {
            Error::SamplePlan("location filter requested without profiles".into())
        })?;
        Some(
            snapshots
                .iter()
                .map(|s| filter_by_location(s, profiles))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let base: &[Snapshot] = located.as_deref().unwrap_or(snapshots);
    let seeds = draw_seeds(base.first().unwrap_or(first), plan)?;
    let triangle_graphs = base.iter().map(|s| triangle_closure(s, &seeds)).collect();
    Ok(SequenceSample {
        seeds,
        located,
        triangle_graphs,
    })
}
