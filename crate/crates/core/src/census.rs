//! Triangle enumeration and the per-class census of a snapshot.
//!
//! Every weakly connected triple has one, two or three "centers" (nodes
//! adjacent to both others). Enumeration walks the neighbor pairs of each
//! center and emits a triple only from its smallest center, so each triple
//! appears exactly once.
//!
//! Counting does not need the full stream: open triples (a single center)
//! are determined by the two pair states seen from the center, so they are
//! counted combinatorially from per-node state tallies, and only closed
//! triples are enumerated explicitly.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, PairState, Snapshot};
use crate::triad::{classify_states, TriadCode, Triple, TypeMappingTable};

/// Undirected neighbor lists, each entry tagged with the pair state seen from the owner.
#[derive(Debug, Clone)]
pub struct UndirectedAdjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    states: Vec<PairState>,
}

impl UndirectedAdjacency {
    pub fn new(snapshot: &Snapshot) -> Self {
        let n = snapshot.id_space();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(snapshot.edge_count() * 2);
        let mut states = Vec::with_capacity(snapshot.edge_count() * 2);
        offsets.push(0);
        for i in 0..n {
            let v = NodeId(i as u64);
            let out = snapshot.out_neighbors(v);
            let inc = snapshot.in_neighbors(v);
            let (mut a, mut b) = (0, 0);
            while a < out.len() || b < inc.len() {
                let next = match (out.get(a), inc.get(b)) {
                    (Some(&x), Some(&y)) if x == y => {
                        a += 1;
                        b += 1;
                        (x, PairState::Mutual)
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        a += 1;
                        (x, PairState::Forward)
                    }
                    (Some(&x), None) => {
                        a += 1;
                        (x, PairState::Forward)
                    }
                    (_, Some(&y)) => {
                        b += 1;
                        (y, PairState::Backward)
                    }
                    (None, None) => unreachable!(),
                };
                targets.push(next.0);
                states.push(next.1);
            }
            offsets.push(targets.len());
        }
        UndirectedAdjacency {
            offsets,
            targets,
            states,
        }
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> (&[NodeId], &[PairState]) {
        let i = v.index();
        if i + 1 >= self.offsets.len() {
            return (&[], &[]);
        }
        let range = self.offsets[i]..self.offsets[i + 1];
        (&self.targets[range.clone()], &self.states[range])
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).0.len()
    }

    /// State of `(u, v)`; `None` when not adjacent.
    #[inline]
    pub fn state(&self, u: NodeId, v: NodeId) -> PairState {
        let (targets, states) = self.neighbors(u);
        match targets.binary_search(&v) {
            Ok(pos) => states[pos],
            Err(_) => PairState::None,
        }
    }
}

/// Orient a center-relative state as the state of the sorted pair.
#[inline]
fn oriented(first: NodeId, second: NodeId, state_first_to_second: PairState) -> PairState {
    if first < second {
        state_first_to_second
    } else {
        state_first_to_second.mirror()
    }
}

/// Sorted triple and its configuration states for center `v` with neighbors `u < w`.
#[inline]
fn center_triple(
    v: NodeId,
    u: NodeId,
    w: NodeId,
    vu: PairState,
    vw: PairState,
    uw: PairState,
) -> (Triple, [PairState; 3]) {
    // states are oriented low -> high
    let vu_sorted = oriented(v, u, vu);
    let vw_sorted = oriented(v, w, vw);
    if v < u {
        (Triple::from_sorted(v, u, w), [vu_sorted, vw_sorted, uw])
    } else if v < w {
        (Triple::from_sorted(u, v, w), [vu_sorted, uw, vw_sorted])
    } else {
        (Triple::from_sorted(u, w, v), [uw, vu_sorted, vw_sorted])
    }
}

/// Calls `emit` for every triangle whose smallest center is `v`.
#[inline]
fn visit_center<F>(adj: &UndirectedAdjacency, v: NodeId, mut emit: F)
where
    F: FnMut(Triple, TriadCode),
{
    let (targets, states) = adj.neighbors(v);
    for i in 0..targets.len() {
        let u = targets[i];
        for j in (i + 1)..targets.len() {
            let w = targets[j];
            let uw = adj.state(u, w);
            if uw.is_linked() && u < v {
                continue;
            }
            let (triple, config) = center_triple(v, u, w, states[i], states[j], uw);
            let code = classify_states(config).expect("a center makes the triple connected");
            emit(triple, code);
        }
    }
}

/// Streaming enumeration of all weakly connected triples of a snapshot.
pub struct TriangleStream<'a> {
    snapshot: &'a Snapshot,
    adj: UndirectedAdjacency,
    node_pos: usize,
    buffer: Vec<(Triple, TriadCode)>,
}

impl Iterator for TriangleStream<'_> {
    type Item = (Triple, TriadCode);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(item) = self.buffer.pop() {
                return Some(item);
            }
            let v = *self.snapshot.nodes().get(self.node_pos)?;
            self.node_pos += 1;
            let buffer = &mut self.buffer;
            visit_center(&self.adj, v, |t, c| buffer.push((t, c)));
            buffer.reverse();
        }
    }
}

pub fn enumerate_triangles(snapshot: &Snapshot) -> TriangleStream<'_> {
    TriangleStream {
        snapshot,
        adj: UndirectedAdjacency::new(snapshot),
        node_pos: 0,
        buffer: Vec::new(),
    }
}

/// Per-class triangle counts of one snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub snapshot_label: String,
    pub counts: [u64; 13],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub code: TriadCode,
    pub type_number: u8,
    pub count: u64,
    pub percent: f64,
}

impl CensusResult {
    pub fn from_triangles<I>(label: impl Into<String>, triangles: I) -> Self
    where
        I: IntoIterator<Item = (Triple, TriadCode)>,
    {
        let mut counts = [0u64; 13];
        for (_, code) in triangles {
            counts[code.index()] += 1;
        }
        CensusResult {
            snapshot_label: label.into(),
            counts,
        }
    }

    pub fn count(&self, code: TriadCode) -> u64 {
        self.counts[code.index()]
    }

    pub fn total_triangles(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Percent per class; all zero for an empty census.
    pub fn frequencies(&self) -> [f64; 13] {
        let total = self.total_triangles();
        let mut out = [0.0; 13];
        if total > 0 {
            for (f, &c) in out.iter_mut().zip(&self.counts) {
                *f = 100.0 * c as f64 / total as f64;
            }
        }
        out
    }

    /// Rows in type-number order.
    pub fn rows(&self, mapping: &TypeMappingTable) -> Vec<CensusRow> {
        let freq = self.frequencies();
        mapping
            .codes_in_type_order()
            .iter()
            .map(|&code| CensusRow {
                code,
                type_number: mapping.type_number(code),
                count: self.count(code),
                percent: freq[code.index()],
            })
            .collect()
    }
}

// open-triple categories seen from the center
const FF: usize = 0;
const BB: usize = 1;
const FB: usize = 2;
const MF: usize = 3;
const MB: usize = 4;
const MM: usize = 5;

const CATEGORY_CODE: [TriadCode; 6] = [
    TriadCode::D021,
    TriadCode::U021,
    TriadCode::C021,
    TriadCode::U111,
    TriadCode::D111,
    TriadCode::M201,
];

#[inline]
fn category(a: PairState, b: PairState) -> usize {
    use PairState::*;
    match (a, b) {
        (Forward, Forward) => FF,
        (Backward, Backward) => BB,
        (Forward, Backward) | (Backward, Forward) => FB,
        (Mutual, Forward) | (Forward, Mutual) => MF,
        (Mutual, Backward) | (Backward, Mutual) => MB,
        (Mutual, Mutual) => MM,
        _ => unreachable!("center states are linked"),
    }
}

#[derive(Clone, Copy)]
struct Tally {
    open: [u64; 6],
    closed_as_open: [u64; 6],
    closed: [u64; 13],
}

impl Tally {
    const ZERO: Tally = Tally {
        open: [0; 6],
        closed_as_open: [0; 6],
        closed: [0; 13],
    };

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..6 {
            self.open[i] += other.open[i];
            self.closed_as_open[i] += other.closed_as_open[i];
        }
        for i in 0..13 {
            self.closed[i] += other.closed[i];
        }
        self
    }
}

/// Counts every class in the snapshot.
pub fn census(snapshot: &Snapshot) -> CensusResult {
    let adj = UndirectedAdjacency::new(snapshot);
    census_with(snapshot, &adj)
}

pub fn census_with(snapshot: &Snapshot, adj: &UndirectedAdjacency) -> CensusResult {
    let forward = ForwardAdjacency::new(snapshot, adj);
    let tally = snapshot
        .nodes()
        .par_iter()
        .fold(
            || Tally::ZERO,
            |mut t, &v| {
                let (_, states) = adj.neighbors(v);
                let (mut f, mut b, mut m) = (0u64, 0u64, 0u64);
                for s in states {
                    match s {
                        PairState::Forward => f += 1,
                        PairState::Backward => b += 1,
                        PairState::Mutual => m += 1,
                        PairState::None => {}
                    }
                }
                let pairs = |k: u64| k * k.saturating_sub(1) / 2;
                t.open[FF] += pairs(f);
                t.open[BB] += pairs(b);
                t.open[FB] += f * b;
                t.open[MF] += m * f;
                t.open[MB] += m * b;
                t.open[MM] += pairs(m);

                let (v_fwd, v_states) = forward.neighbors(v);
                for (i, &u) in v_fwd.iter().enumerate() {
                    let vu = v_states[i];
                    let (u_fwd, u_states) = forward.neighbors(u);
                    let (mut p, mut q) = (0, 0);
                    while p < v_fwd.len() && q < u_fwd.len() {
                        let (x, y) = (v_fwd[p], u_fwd[q]);
                        if x < y {
                            p += 1;
                        } else if y < x {
                            q += 1;
                        } else {
                            let vx = v_states[p];
                            let ux = u_states[q];
                            let (_, config) = if u < x {
                                center_triple(v, u, x, vu, vx, ux)
                            } else {
                                center_triple(v, x, u, vx, vu, ux.mirror())
                            };
                            let code = classify_states(config).expect("closed triple");
                            t.closed[code.index()] += 1;
                            t.closed_as_open[category(vu, vx)] += 1;
                            t.closed_as_open[category(vu.mirror(), ux)] += 1;
                            t.closed_as_open[category(vx.mirror(), ux.mirror())] += 1;
                            p += 1;
                            q += 1;
                        }
                    }
                }
                t
            },
        )
        .reduce(|| Tally::ZERO, Tally::merge);

    let mut counts = tally.closed;
    for cat in 0..6 {
        counts[CATEGORY_CODE[cat].index()] += tally.open[cat] - tally.closed_as_open[cat];
    }
    CensusResult {
        snapshot_label: snapshot.label().to_owned(),
        counts,
    }
}

/// Undirected lists restricted to neighbors of higher `(degree, id)` rank, so
/// each closed triple is found once from its lowest-ranked node and hub lists
/// stay short.
struct ForwardAdjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    states: Vec<PairState>,
}

impl ForwardAdjacency {
    fn new(snapshot: &Snapshot, adj: &UndirectedAdjacency) -> Self {
        let rank = |x: NodeId| (adj.degree(x), x);
        let n = snapshot.id_space();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut states = Vec::new();
        offsets.push(0);
        for i in 0..n {
            let v = NodeId(i as u64);
            let rv = rank(v);
            let (t, s) = adj.neighbors(v);
            for (&u, &state) in t.iter().zip(s) {
                if rank(u) > rv {
                    targets.push(u);
                    states.push(state);
                }
            }
            offsets.push(targets.len());
        }
        ForwardAdjacency {
            offsets,
            targets,
            states,
        }
    }

    #[inline]
    fn neighbors(&self, v: NodeId) -> (&[NodeId], &[PairState]) {
        let range = self.offsets[v.index()]..self.offsets[v.index() + 1];
        (&self.targets[range.clone()], &self.states[range])
    }
}

/// Sorted `(triple, class)` entries of every triangle in one snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSet {
    label: String,
    entries: Vec<(Triple, TriadCode)>,
}

impl TriangleSet {
    pub fn from_entries(label: impl Into<String>, mut entries: Vec<(Triple, TriadCode)>) -> Self {
        entries.sort_unstable();
        entries.dedup_by_key(|e| e.0);
        TriangleSet {
            label: label.into(),
            entries,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[(Triple, TriadCode)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, triple: &Triple) -> Option<TriadCode> {
        self.entries
            .binary_search_by(|e| e.0.cmp(triple))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.get(triple).is_some()
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.entries.iter().map(|e| e.0)
    }
}

const ENTRY_BYTES: u64 = std::mem::size_of::<(Triple, TriadCode)>() as u64;

/// Materializes all triangles of a snapshot, refusing when the estimated size
/// exceeds `memory_budget` bytes.
pub fn triangle_set(snapshot: &Snapshot, memory_budget: Option<u64>) -> Result<TriangleSet> {
    let adj = UndirectedAdjacency::new(snapshot);
    if let Some(budget) = memory_budget {
        let total = census_with(snapshot, &adj).total_triangles();
        let needed = total.saturating_mul(ENTRY_BYTES);
        if needed > budget {
            return Err(Error::Resource {
                what: "triangle set",
                needed,
                budget,
            });
        }
    }
    let entries: Vec<(Triple, TriadCode)> = snapshot
        .nodes()
        .par_iter()
        .flat_map_iter(|&v| {
            let mut local = Vec::new();
            visit_center(&adj, v, |t, c| local.push((t, c)));
            local
        })
        .collect();
    Ok(TriangleSet::from_entries(snapshot.label(), entries))
}
