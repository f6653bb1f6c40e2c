//! Degree distributions per reduction stage, out-degrees by transition class
//! and follower retention of the top in-degree nodes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::evolution::{classify_transition, Evolution, TransitionClass};
use crate::graph::{NodeId, Snapshot};
use crate::stats::{distribution, DistributionPoint, Summary};
use crate::triad::TriadCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSeries {
    pub stage: String,
    pub direction: Direction,
    pub points: Vec<DistributionPoint>,
}

/// Out-degrees (in the origin snapshot) of the members of triples in one transition group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionDegrees {
    pub class: TransitionClass,
    /// `None` aggregates all origin types.
    pub origin: Option<TriadCode>,
    pub triples: u64,
    pub summary: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Superstar {
    pub rank: usize,
    pub node: NodeId,
    pub followers: u64,
    /// Percent of full-graph followers still following, per reduction stage.
    pub retention: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub series: Vec<DegreeSeries>,
    pub transitions: Vec<TransitionDegrees>,
    pub superstars: Vec<Superstar>,
}

pub fn degree_series(stage: &str, snapshot: &Snapshot) -> [DegreeSeries; 2] {
    let collect = |f: &dyn Fn(NodeId) -> usize| -> Vec<f64> {
        snapshot.nodes().iter().map(|&v| f(v) as f64).collect()
    };
    [
        DegreeSeries {
            stage: stage.to_owned(),
            direction: Direction::In,
            points: distribution(&collect(&|v| snapshot.in_degree(v))),
        },
        DegreeSeries {
            stage: stage.to_owned(),
            direction: Direction::Out,
            points: distribution(&collect(&|v| snapshot.out_degree(v))),
        },
    ]
}

/// Groups origin-triangle triples by win/lose/stable and summarizes member out-degrees.
///
/// Triples that were Type 0 at the origin and changes of type that keep the
/// arc count belong to no group.
pub fn transition_degrees(
    evolution: &Evolution,
    origin_snapshot: &Snapshot,
    origin: usize,
    destination: usize,
) -> Vec<TransitionDegrees> {
    let mut groups: BTreeMap<(TransitionClass, Option<TriadCode>), (u64, Vec<f64>)> =
        BTreeMap::new();
    for trajectory in evolution.trajectories() {
        let (from, to) = (trajectory.types[origin], trajectory.types[destination]);
        let Some(code) = from else { continue };
        let Some(class) = classify_transition(from, to) else {
            continue;
        };
        let degrees: Vec<f64> = trajectory
            .triple
            .nodes()
            .iter()
            .map(|&v| origin_snapshot.out_degree(v) as f64)
            .collect();
        for key in [(class, None), (class, Some(code))] {
            let entry = groups.entry(key).or_default();
            entry.0 += 1;
            entry.1.extend_from_slice(&degrees);
        }
    }
    groups
        .into_iter()
        .map(|((class, origin), (triples, values))| TransitionDegrees {
            class,
            origin,
            triples,
            summary: Summary::of(&values),
        })
        .collect()
}

/// Top `top_n` in-degree nodes of `full` (ties by id) with their follower retention.
pub fn superstars(
    full: &Snapshot,
    reductions: &[(&str, &Snapshot)],
    top_n: usize,
) -> Vec<Superstar> {
    let mut ranked: Vec<(usize, NodeId)> = full
        .nodes()
        .iter()
        .map(|&v| (full.in_degree(v), v))
        .filter(|&(d, _)| d > 0)
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked
        .into_iter()
        .take(top_n)
        .enumerate()
        .map(|(i, (followers, node))| Superstar {
            rank: i + 1,
            node,
            followers: followers as u64,
            retention: reductions
                .iter()
                .map(|&(stage, s)| {
                    let kept = if s.contains(node) {
                        s.in_degree(node)
                    } else {
                        0
                    };
                    (stage.to_owned(), 100.0 * kept as f64 / followers as f64)
                })
                .collect(),
        })
        .collect()
}

/// Transition grouping input: the tracked sequence, its snapshots and the chosen pair.
pub struct TransitionInput<'a> {
    pub evolution: &'a Evolution,
    pub snapshots: &'a [Snapshot],
    pub origin: usize,
    pub destination: usize,
}

/// `stages[0]` is the full graph; the rest are reductions of it.
pub fn degree_report(
    stages: &[(&str, &Snapshot)],
    transitions: Option<TransitionInput<'_>>,
    top_n: usize,
) -> DegreeReport {
    let series = stages
        .iter()
        .flat_map(|&(name, s)| degree_series(name, s))
        .collect();
    let transitions = transitions
        .map(|t| transition_degrees(t.evolution, &t.snapshots[t.origin], t.origin, t.destination))
        .unwrap_or_default();
    let superstars = match stages.split_first() {
        Some((&(_, full), rest)) => superstars(full, rest, top_n),
        None => Vec::new(),
    };
    DegreeReport {
        series,
        transitions,
        superstars,
    }
}
