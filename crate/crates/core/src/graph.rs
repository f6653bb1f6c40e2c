//! Directed graph snapshots and the identifier dictionary shared across them.
//!
//! A [`Snapshot`] stores both adjacency directions in compressed sparse row
//! form. Every adjacency list is sorted ascending, which lets the census
//! merge neighbor lists linearly and answer edge queries by binary search.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node identifier assigned by a [`NodeDictionary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct NodeId(pub u64);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bijection between raw external identifiers and consecutive [`NodeId`]s.
///
/// One dictionary is shared by every snapshot of a run so that the same user
/// keeps the same id in all of them.
#[derive(Debug, Default, Clone)]
pub struct NodeDictionary {
    ids: HashMap<String, NodeId>,
    names: Vec<String>,
}

impl NodeDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, raw: &str) -> NodeId {
        if let Some(&id) = self.ids.get(raw) {
            return id;
        }
        let id = NodeId(self.names.len() as u64);
        self.names.push(raw.to_owned());
        self.ids.insert(raw.to_owned(), id);
        id
    }

    pub fn get(&self, raw: &str) -> Option<NodeId> {
        self.ids.get(raw).copied()
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Relationship between an ordered pair of distinct nodes `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum PairState {
    None = 0,
    /// `u -> v` only.
    Forward = 1,
    /// `v -> u` only.
    Backward = 2,
    Mutual = 3,
}

impl PairState {
    pub const ALL: [PairState; 4] = [
        PairState::None,
        PairState::Forward,
        PairState::Backward,
        PairState::Mutual,
    ];

    #[inline]
    pub fn from_arcs(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (false, false) => PairState::None,
            (true, false) => PairState::Forward,
            (false, true) => PairState::Backward,
            (true, true) => PairState::Mutual,
        }
    }

    #[inline]
    pub fn from_bits(bits: u8) -> Self {
        Self::ALL[(bits & 3) as usize]
    }

    /// State of the reversed pair `(v, u)`.
    #[inline]
    pub fn mirror(self) -> Self {
        match self {
            PairState::Forward => PairState::Backward,
            PairState::Backward => PairState::Forward,
            s => s,
        }
    }

    #[inline]
    pub fn has_forward(self) -> bool {
        matches!(self, PairState::Forward | PairState::Mutual)
    }

    #[inline]
    pub fn has_backward(self) -> bool {
        matches!(self, PairState::Backward | PairState::Mutual)
    }

    #[inline]
    pub fn is_linked(self) -> bool {
        self != PairState::None
    }

    pub fn arc_count(self) -> u32 {
        self.has_forward() as u32 + self.has_backward() as u32
    }
}

/// Counters collected while building a snapshot.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines: u64,
    pub self_loops: u64,
    pub duplicates: u64,
}

/// Immutable directed graph at one point in time.
#[derive(Clone, PartialEq, Eq)]
pub struct Snapshot {
    label: String,
    nodes: Vec<NodeId>,
    present: Vec<bool>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_targets: Vec<NodeId>,
    report: IngestReport,
}

impl fmt::Debug for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Snapshot")
            .field("label", &self.label)
            .field("nodes", &self.nodes.len())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Snapshot {
    /// Builds a snapshot from explicit node and edge lists.
    ///
    /// Endpoints of edges are added to the node set automatically. Self-loops
    /// and repeated edges are dropped and counted in [`Snapshot::report`].
    pub fn from_edges<N, E>(label: impl Into<String>, nodes: N, edges: E) -> Self
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut node_list: Vec<NodeId> = nodes.into_iter().collect();
        let mut edge_list = Vec::new();
        let mut report = IngestReport::default();
        for (u, v) in edges {
            node_list.push(u);
            node_list.push(v);
            if u == v {
                report.self_loops += 1;
            } else {
                edge_list.push((u, v));
            }
        }
        Self::build(label.into(), node_list, edge_list, report)
    }

    fn build(
        label: String,
        mut nodes: Vec<NodeId>,
        mut edges: Vec<(NodeId, NodeId)>,
        mut report: IngestReport,
    ) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        report.duplicates += (before - edges.len()) as u64;

        let id_space = nodes.last().map_or(0, |n| n.index() + 1);
        let mut present = vec![false; id_space];
        for n in &nodes {
            present[n.index()] = true;
        }

        let mut out_offsets = vec![0usize; id_space + 1];
        let mut in_offsets = vec![0usize; id_space + 1];
        for &(u, v) in &edges {
            out_offsets[u.index() + 1] += 1;
            in_offsets[v.index() + 1] += 1;
        }
        for i in 0..id_space {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets: Vec<NodeId> = edges.iter().map(|&(_, v)| v).collect();
        // Edges are sorted by source, so filling in-lists in edge order keeps them sorted.
        let mut in_targets = vec![NodeId(0); edges.len()];
        let mut cursor = in_offsets.clone();
        for &(u, v) in &edges {
            in_targets[cursor[v.index()]] = u;
            cursor[v.index()] += 1;
        }

        Snapshot {
            label,
            nodes,
            present,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            report,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Sorted node set.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn report(&self) -> IngestReport {
        self.report
    }

    /// One past the largest node id stored in this snapshot.
    pub fn id_space(&self) -> usize {
        self.present.len()
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.present.get(v.index()).copied().unwrap_or(false)
    }

    /// Sorted successors of `v`; empty for unknown nodes.
    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        if i >= self.present.len() {
            return &[];
        }
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    /// Sorted predecessors of `v`; empty for unknown nodes.
    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        if i >= self.present.len() {
            return &[];
        }
        &self.in_targets[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_neighbors(v).len()
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_neighbors(v).len()
    }

    /// `(in_degree, out_degree)` of a node of this snapshot.
    pub fn degrees(&self, v: NodeId) -> Result<(usize, usize)> {
        if !self.contains(v) {
            return Err(Error::UnknownNode(v.0));
        }
        Ok((self.in_degree(v), self.out_degree(v)))
    }

    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// State of the pair `(u, v)`. Nodes absent from the snapshot have no edges.
    pub fn pair_state(&self, u: NodeId, v: NodeId) -> Result<PairState> {
        if u == v {
            return Err(Error::SameNode(u.0));
        }
        Ok(self.pair_state_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn pair_state_unchecked(&self, u: NodeId, v: NodeId) -> PairState {
        PairState::from_arcs(self.has_edge(u, v), self.has_edge(v, u))
    }

    /// Iterates every directed edge in `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes
            .iter()
            .flat_map(move |&u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Subgraph induced on the nodes accepted by `keep`.
    pub fn induced<F>(&self, keep: F) -> Snapshot
    where
        F: Fn(NodeId) -> bool,
    {
        let nodes: Vec<NodeId> = self.nodes.iter().copied().filter(|&n| keep(n)).collect();
        let mut kept = vec![false; self.id_space()];
        for n in &nodes {
            kept[n.index()] = true;
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .filter(|&(u, v)| kept[u.index()] && kept[v.index()])
            .collect();
        Self::build(self.label.clone(), nodes, edges, IngestReport::default())
    }
}

/// Reads an edge list: one `src dst` pair per line, `#` comments and blank lines ignored.
pub fn load_snapshot<R: BufRead>(
    source: R,
    dictionary: &mut NodeDictionary,
    label: impl Into<String>,
) -> Result<Snapshot> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut report = IngestReport::default();
    let mut saw_edge_line = false;

    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::Ingest {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (src, dst) = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(d), None) => (s, d),
            _ => {
                return Err(Error::Ingest {
                    line: line_no,
                    message: format!("expected \"src dst\", found {trimmed:?}"),
                })
            }
        };
        saw_edge_line = true;
        report.lines += 1;
        let u = dictionary.intern(src);
        let v = dictionary.intern(dst);
        nodes.push(u);
        nodes.push(v);
        if u == v {
            report.self_loops += 1;
        } else {
            edges.push((u, v));
        }
    }

    if !saw_edge_line {
        return Err(Error::EmptySnapshot);
    }
    if report.self_loops > 0 {
        log::warn!("dropped {} self-loop(s)", report.self_loops);
    }
    Ok(Snapshot::build(label.into(), nodes, edges, report))
}

/// Ordered snapshots sharing one identifier dictionary.
#[derive(Debug, Clone)]
pub struct SnapshotSequence {
    snapshots: Vec<Snapshot>,
    dictionary: NodeDictionary,
}

impl SnapshotSequence {
    pub fn new(snapshots: Vec<Snapshot>, dictionary: NodeDictionary) -> Result<Self> {
        validate_sequence(&snapshots)?;
        Ok(SnapshotSequence {
            snapshots,
            dictionary,
        })
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn dictionary(&self) -> &NodeDictionary {
        &self.dictionary
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

/// At least two snapshots, all labels distinct.
pub fn validate_sequence(snapshots: &[Snapshot]) -> Result<()> {
    if snapshots.len() < 2 {
        return Err(Error::Sequence(format!(
            "at least 2 snapshots required, got {}",
            snapshots.len()
        )));
    }
    for (i, s) in snapshots.iter().enumerate() {
        if snapshots[..i].iter().any(|t| t.label() == s.label()) {
            return Err(Error::Sequence(format!("duplicate label {:?}", s.label())));
        }
    }
    Ok(())
}
