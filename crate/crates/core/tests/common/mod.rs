//! Brute-force reference implementations shared by the integration tests.
//! Nothing here uses the library's classifier or enumeration code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use triad_core::graph::{NodeId, Snapshot};
use triad_core::triad::{TriadCode, Triple};

// Batagelj-Mrvar triad table; bits v->u 1, u->v 2, v->w 4, w->v 8, u->w 16, w->u 32.
const TRICODES: [u8; 64] = [
    0, 1, 1, 2, 1, 3, 5, 7, 1, 5, 4, 6, 2, 7, 6, 10, 1, 5, 3, 7, 4, 8, 8, 12, 5, 9, 8, 13, 6, 13,
    11, 14, 1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12, 13, 14, 2, 6, 7, 10, 6, 11, 13, 14, 7, 13,
    12, 14, 10, 14, 14, 15,
];
const NAMES: [&str; 16] = [
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D",
    "120U", "120C", "210", "300",
];

/// Class name of the triad induced on `v, u, w`, one of the 16 names above.
pub fn tricode_name(g: &Snapshot, v: NodeId, u: NodeId, w: NodeId) -> &'static str {
    let e = |a, b| g.contains(a) && g.contains(b) && g.has_edge(a, b);
    let code = e(v, u) as usize
        | (e(u, v) as usize) << 1
        | (e(v, w) as usize) << 2
        | (e(w, v) as usize) << 3
        | (e(u, w) as usize) << 4
        | (e(w, u) as usize) << 5;
    NAMES[TRICODES[code] as usize]
}

pub fn oracle_class(g: &Snapshot, t: Triple) -> Option<TriadCode> {
    let [a, b, c] = t.nodes();
    match tricode_name(g, a, b, c) {
        "003" | "012" | "102" => None,
        name => Some(name.parse().unwrap()),
    }
}

fn all_triples(nodes: &[NodeId]) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            for k in j + 1..nodes.len() {
                out.push(Triple::new(nodes[i], nodes[j], nodes[k]).unwrap());
            }
        }
    }
    out
}

/// Every weakly connected triple with its class, by checking all C(n,3) triples.
pub fn brute_triangles(g: &Snapshot) -> BTreeMap<Triple, TriadCode> {
    all_triples(g.nodes())
        .into_iter()
        .filter_map(|t| oracle_class(g, t).map(|c| (t, c)))
        .collect()
}

pub fn brute_census(g: &Snapshot) -> BTreeMap<TriadCode, u64> {
    let mut counts = BTreeMap::new();
    for code in brute_triangles(g).into_values() {
        *counts.entry(code).or_insert(0) += 1;
    }
    counts
}

/// Nodes and arcs of all weakly connected triples that contain a seed.
pub fn brute_closure(
    g: &Snapshot,
    seeds: &[NodeId],
) -> (BTreeSet<NodeId>, BTreeSet<(NodeId, NodeId)>) {
    let mut nodes = BTreeSet::new();
    let mut arcs = BTreeSet::new();
    for t in brute_triangles(g).into_keys() {
        let members = t.nodes();
        if !members.iter().any(|m| seeds.contains(m)) {
            continue;
        }
        for &a in &members {
            nodes.insert(a);
            for &b in &members {
                if a != b && g.has_edge(a, b) {
                    arcs.insert((a, b));
                }
            }
        }
    }
    (nodes, arcs)
}

/// Per-triple classification in every snapshot over the union of node sets,
/// restricted to triples that are a triangle at least once.
pub fn brute_trajectories(seq: &[Snapshot]) -> BTreeMap<Triple, Vec<Option<TriadCode>>> {
    let nodes: BTreeSet<NodeId> = seq.iter().flat_map(|s| s.nodes().iter().copied()).collect();
    let nodes: Vec<NodeId> = nodes.into_iter().collect();
    all_triples(&nodes)
        .into_iter()
        .filter_map(|t| {
            let types: Vec<_> = seq.iter().map(|s| oracle_class(s, t)).collect();
            types.iter().any(Option::is_some).then_some((t, types))
        })
        .collect()
}

/// Matrix slot: 0 for Type 0, MAN position + 1 otherwise.
pub fn oracle_slot(c: Option<TriadCode>) -> usize {
    match c {
        None => 0,
        Some(code) => 1 + NAMES[3..].iter().position(|n| *n == code.as_str()).unwrap(),
    }
}

pub fn brute_matrix(seq: &[Snapshot], origin: usize, destination: usize) -> [[u64; 14]; 14] {
    let mut m = [[0u64; 14]; 14];
    for types in brute_trajectories(seq).values() {
        m[oracle_slot(types[origin])][oracle_slot(types[destination])] += 1;
    }
    m
}

pub fn arcs(c: Option<TriadCode>) -> i32 {
    let name = match c {
        None => return 0,
        Some(code) => code.as_str(),
    };
    let digits: Vec<i32> = name
        .chars()
        .take(3)
        .map(|ch| ch.to_digit(10).unwrap() as i32)
        .collect();
    2 * digits[0] + digits[1]
}
