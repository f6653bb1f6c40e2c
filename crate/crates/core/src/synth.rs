//! Seeded synthetic graph generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeId, Snapshot};

/// Erdős-Rényi digraph: every ordered pair is an arc with probability `p`.
pub fn random_digraph(label: &str, n: u64, p: f64, seed: u64) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((NodeId(u), NodeId(v)));
            }
        }
    }
    Snapshot::from_edges(label, (0..n).map(NodeId), edges)
}

/// Preferential-attachment digraph.
///
/// Node `v` adds arcs to `min(m, v)` distinct earlier nodes chosen with
/// probability proportional to in-degree + 1; each arc is reciprocated with
/// probability `reciprocity`.
pub fn preferential_attachment(
    label: &str,
    n: u64,
    m: usize,
    reciprocity: f64,
    seed: u64,
) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected = (n as usize) * m;
    let mut edges = Vec::with_capacity(expected + (expected as f64 * reciprocity) as usize + 16);
    // one entry per node plus one per received arc
    let mut urn: Vec<u32> = Vec::with_capacity(n as usize + expected);
    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    for v in 0..n as u32 {
        chosen.clear();
        let want = m.min(v as usize);
        while chosen.len() < want {
            let t = urn[rng.gen_range(0..urn.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((NodeId(v as u64), NodeId(t as u64)));
            urn.push(t);
            if rng.gen_bool(reciprocity) {
                edges.push((NodeId(t as u64), NodeId(v as u64)));
                urn.push(v);
            }
        }
        urn.push(v);
    }
    Snapshot::from_edges(label, (0..n).map(NodeId), edges)
}

/// Random edge churn: each arc survives with probability `1 - remove`, then
/// `add` random arcs between nodes `0..n` are inserted.
pub fn churn(base: &Snapshot, label: &str, n: u64, remove: f64, add: usize, seed: u64) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = base.edges().filter(|_| !rng.gen_bool(remove)).collect();
    for _ in 0..add {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        edges.push((NodeId(u), NodeId(v)));
    }
    edges.shuffle(&mut rng);
    Snapshot::from_edges(label, base.nodes().iter().copied(), edges)
}

/// A sequence of `len` snapshots on `n` nodes, each derived from the previous by [`churn`].
pub fn churn_sequence(
    n: u64,
    p: f64,
    len: usize,
    remove: f64,
    add: usize,
    seed: u64,
) -> Vec<Snapshot> {
    let mut out = vec![random_digraph("t0", n, p, seed)];
    for k in 1..len {
        let next = churn(
            &out[k - 1],
            &format!("t{k}"),
            n,
            remove,
            add,
            seed.wrapping_add(k as u64),
        );
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        assert_eq!(
            random_digraph("a", 20, 0.2, 3),
            random_digraph("a", 20, 0.2, 3)
        );
        assert_ne!(
            random_digraph("a", 20, 0.2, 3),
            random_digraph("a", 20, 0.2, 4)
        );
        let g = preferential_attachment("pa", 500, 4, 0.1, 9);
        assert_eq!(g, preferential_attachment("pa", 500, 4, 0.1, 9));
        assert_eq!(g.node_count(), 500);
        assert!(g.edge_count() >= 496 * 4);
        assert_eq!(g.report().self_loops, 0);
    }

    #[test]
    fn churn_keeps_node_set() {
        let seq = churn_sequence(15, 0.3, 3, 0.2, 10, 1);
        assert_eq!(seq.len(), 3);
        assert!(seq.iter().all(|s| s.node_count() == 15));
        assert_eq!(seq[2].label(), "t2");
    }
}
