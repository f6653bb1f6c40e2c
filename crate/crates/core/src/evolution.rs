//! Tracking node triples across an ordered sequence of snapshots.
//!
//! The tracked universe is every triple that is a triangle in at least one
//! snapshot. In snapshots where such a triple is not weakly connected it is
//! recorded as Type 0 (`None` here), so every trajectory has one entry per
//! snapshot and creation/dissolution show up as transitions to and from 0.

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{triangle_set, TriangleSet};
use crate::error::{Error, Result};
use crate::graph::{validate_sequence, Snapshot};
use crate::triad::{
    arc_delta, classify_states, TriadCode, TriadConfiguration, Triple, TypeMappingTable,
};

/// Matrix slot of a class: 0 for Type 0, `code.index() + 1` otherwise.
#[inline]
pub fn slot(class: Option<TriadCode>) -> usize {
    class.map_or(0, |c| c.index() + 1)
}

#[inline]
pub fn from_slot(slot: usize) -> Option<TriadCode> {
    slot.checked_sub(1).and_then(TriadCode::from_index)
}

/// All 14 states in slot order.
pub fn all_states() -> impl Iterator<Item = Option<TriadCode>> {
    std::iter::once(None).chain(TriadCode::ALL.into_iter().map(Some))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleTrajectory {
    pub triple: Triple,
    pub types: Vec<Option<TriadCode>>,
}

impl TripleTrajectory {
    pub fn type_numbers(&self, mapping: &TypeMappingTable) -> Vec<u8> {
        self.types.iter().map(|&t| mapping.type_of(t)).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.types.windows(2).all(|w| w[0] == w[1])
    }
}

/// Classifies the induced configuration of `triple` in each snapshot directly.
pub fn classify_trajectory(snapshots: &[Snapshot], triple: Triple) -> Vec<Option<TriadCode>> {
    snapshots
        .iter()
        .map(|s| classify_states(TriadConfiguration::from_snapshot(s, triple).states()))
        .collect()
}

/// Joined triangle sets of a snapshot sequence.
#[derive(Debug, Clone)]
pub struct Evolution {
    labels: Vec<String>,
    universe: Vec<Triple>,
    // universe.len() rows of labels.len() slots
    slots: Vec<u8>,
}

impl Evolution {
    /// Computes per-snapshot triangle sets and joins them.
    pub fn track(snapshots: &[Snapshot], memory_budget: Option<u64>) -> Result<Self> {
        validate_sequence(snapshots)?;
        let sets = snapshots
            .iter()
            .map(|s| triangle_set(s, memory_budget))
            .collect::<Result<Vec<_>>>()?;
        Self::from_triangle_sets(&sets)
    }

    pub fn from_triangle_sets(sets: &[TriangleSet]) -> Result<Self> {
        if sets.len() < 2 {
            return Err(Error::Sequence(format!(
                "at least 2 snapshots required, got {}",
                sets.len()
            )));
        }
        let mut universe: Vec<Triple> = sets.iter().flat_map(|s| s.triples()).collect();
        universe.par_sort_unstable();
        universe.dedup();

        let n = sets.len();
        let mut slots = vec![0u8; universe.len() * n];
        for (k, set) in sets.iter().enumerate() {
            // both sides sorted: walk them in lockstep
            let mut entries = set.entries().iter().peekable();
            for (i, triple) in universe.iter().enumerate() {
                if let Some(&&(t, code)) = entries.peek() {
                    if t == *triple {
                        slots[i * n + k] = slot(Some(code)) as u8;
                        entries.next();
                    }
                }
            }
        }
        Ok(Evolution {
            labels: sets.iter().map(|s| s.label().to_owned()).collect(),
            universe,
            slots,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn snapshot_count(&self) -> usize {
        self.labels.len()
    }

    /// Sorted union of all per-snapshot triangle sets.
    pub fn universe(&self) -> &[Triple] {
        &self.universe
    }

    #[inline]
    fn row(&self, i: usize) -> &[u8] {
        let n = self.labels.len();
        &self.slots[i * n..(i + 1) * n]
    }

    fn trajectory_at(&self, i: usize) -> TripleTrajectory {
        TripleTrajectory {
            triple: self.universe[i],
            types: self.row(i).iter().map(|&s| from_slot(s as usize)).collect(),
        }
    }

    pub fn trajectory(&self, triple: Triple) -> Result<TripleTrajectory> {
        let i = self
            .universe
            .binary_search(&triple)
            .map_err(|_| Error::NotInUniverse(triple.nodes().map(|n| n.0)))?;
        Ok(self.trajectory_at(i))
    }

    pub fn trajectories(&self) -> impl Iterator<Item = TripleTrajectory> + '_ {
        (0..self.universe.len()).map(|i| self.trajectory_at(i))
    }

    /// Share of tracked triples whose type is not the same in every snapshot.
    pub fn sequence_change_fraction(&self) -> Option<f64> {
        if self.universe.is_empty() {
            return None;
        }
        let changed = (0..self.universe.len())
            .into_par_iter()
            .filter(|&i| self.row(i).windows(2).any(|w| w[0] != w[1]))
            .count();
        Some(changed as f64 / self.universe.len() as f64)
    }

    pub fn transition_matrix(
        &self,
        origin: usize,
        destination: usize,
        include_type0: bool,
    ) -> Result<TransitionMatrix> {
        let n = self.labels.len();
        if origin >= destination || destination >= n {
            return Err(Error::TransitionOrder {
                origin,
                destination,
                len: n,
            });
        }
        let counts = (0..self.universe.len())
            .into_par_iter()
            .fold(
                || [[0u64; 14]; 14],
                |mut acc, i| {
                    let row = self.row(i);
                    let (o, d) = (row[origin] as usize, row[destination] as usize);
                    if include_type0 || (o != 0 && d != 0) {
                        acc[o][d] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || [[0u64; 14]; 14],
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(&b) {
                        for (x, y) in ra.iter_mut().zip(rb) {
                            *x += y;
                        }
                    }
                    a
                },
            );
        Ok(TransitionMatrix {
            origin_label: self.labels[origin].clone(),
            destination_label: self.labels[destination].clone(),
            include_type0,
            counts,
        })
    }

    /// Matrices between each pair of neighboring snapshots.
    pub fn consecutive_matrices(&self, include_type0: bool) -> Result<Vec<TransitionMatrix>> {
        (1..self.labels.len())
            .map(|d| self.transition_matrix(d - 1, d, include_type0))
            .collect()
    }
}

/// How the arc count of a triple moved between two snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionClass {
    Win,
    Lose,
    Stable,
}

impl TransitionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionClass::Win => "win",
            TransitionClass::Lose => "lose",
            TransitionClass::Stable => "stable",
        }
    }
}

/// `None` for a change of type that keeps the arc count.
pub fn classify_transition(
    from: Option<TriadCode>,
    to: Option<TriadCode>,
) -> Option<TransitionClass> {
    match arc_delta(from, to) {
        d if d > 0 => Some(TransitionClass::Win),
        d if d < 0 => Some(TransitionClass::Lose),
        _ if from == to => Some(TransitionClass::Stable),
        _ => None,
    }
}

/// Normalization used when presenting a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixView {
    Counts,
    /// Every cell as a share of all counted triples.
    Overall,
    /// Each origin row sums to 100.
    RowNormalized,
    /// Each destination column sums to 100.
    ColumnNormalized,
    /// Off-diagonal cells as a share of all type changes; the diagonal is 0.
    Changes,
}

impl MatrixView {
    pub const ALL: [MatrixView; 5] = [
        MatrixView::Counts,
        MatrixView::Overall,
        MatrixView::RowNormalized,
        MatrixView::ColumnNormalized,
        MatrixView::Changes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixView::Counts => "counts",
            MatrixView::Overall => "overall",
            MatrixView::RowNormalized => "row_normalized",
            MatrixView::ColumnNormalized => "column_normalized",
            MatrixView::Changes => "changes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub origin_label: String,
    pub destination_label: String,
    pub include_type0: bool,
    counts: [[u64; 14]; 14],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bubble {
    pub origin: Option<TriadCode>,
    pub destination: Option<TriadCode>,
    pub percent: f64,
}

impl TransitionMatrix {
    /// States in slot order; Type 0 only when included.
    pub fn states(&self) -> Vec<Option<TriadCode>> {
        all_states()
            .filter(|s| self.include_type0 || s.is_some())
            .collect()
    }

    #[inline]
    pub fn count(&self, from: Option<TriadCode>, to: Option<TriadCode>) -> u64 {
        self.counts[slot(from)][slot(to)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sum(&self, from: Option<TriadCode>) -> u64 {
        self.counts[slot(from)].iter().sum()
    }

    pub fn column_sum(&self, to: Option<TriadCode>) -> u64 {
        self.counts.iter().map(|r| r[slot(to)]).sum()
    }

    pub fn diagonal_sum(&self) -> u64 {
        (0..14).map(|i| self.counts[i][i]).sum()
    }

    /// The same matrix restricted to triples that are triangles at both ends.
    pub fn without_type0(&self) -> TransitionMatrix {
        let mut counts = self.counts;
        counts[0] = [0; 14];
        for row in counts.iter_mut() {
            row[0] = 0;
        }
        TransitionMatrix {
            origin_label: self.origin_label.clone(),
            destination_label: self.destination_label.clone(),
            include_type0: false,
            counts,
        }
    }

    /// Cell value under a view; 0 where the normalizing sum is 0.
    pub fn value(&self, view: MatrixView, from: Option<TriadCode>, to: Option<TriadCode>) -> f64 {
        let c = self.count(from, to) as f64;
        let denominator = match view {
            MatrixView::Counts => return c,
            MatrixView::Overall => self.total(),
            MatrixView::RowNormalized => self.row_sum(from),
            MatrixView::ColumnNormalized => self.column_sum(to),
            MatrixView::Changes if from == to => return 0.0,
            MatrixView::Changes => self.total() - self.diagonal_sum(),
        };
        if denominator == 0 {
            0.0
        } else {
            100.0 * c / denominator as f64
        }
    }

    /// Off-diagonal cells whose view value exceeds `threshold` percent.
    pub fn bubbles(&self, view: MatrixView, threshold: f64) -> Vec<Bubble> {
        let states = self.states();
        let mut out = Vec::new();
        for &from in &states {
            for &to in &states {
                if from == to {
                    continue;
                }
                let percent = self.value(view, from, to);
                if percent > threshold {
                    out.push(Bubble {
                        origin: from,
                        destination: to,
                        percent,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeChange {
    pub state: Option<TriadCode>,
    /// Tracked triples of this type in the origin snapshot.
    pub origin_count: u64,
    pub unchanged: u64,
    /// `1 - unchanged / origin_count`; `None` when the type does not occur.
    pub change_probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeNeighbors {
    pub code: TriadCode,
    /// Most frequent other origin of triples ending in `code`.
    pub predecessor: Option<Option<TriadCode>>,
    /// Most frequent other destination of triples starting in `code`.
    pub successor: Option<Option<TriadCode>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SummaryOptions {
    /// Leave Type 0 out of the predecessor/successor search.
    pub neighbors_exclude_type0: bool,
    /// Leave the diagonal out of the predecessor/successor search.
    pub neighbors_exclude_self: bool,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            neighbors_exclude_type0: true,
            neighbors_exclude_self: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeSummary {
    pub origin_label: String,
    pub destination_label: String,
    /// Slot order, Type 0 first.
    pub per_type: Vec<TypeChange>,
    /// Triangle-to-triangle view, codes only.
    pub per_type_without_type0: Vec<TypeChange>,
    /// Share of origin triangles that are a different triangle type at the destination.
    pub changed_fraction_without_type0: Option<f64>,
    /// Share of tracked triples whose trajectory is not constant.
    pub sequence_change_fraction: Option<f64>,
    /// Among origin triangles that changed, share that lost arcs.
    pub less_connected_fraction: Option<f64>,
    /// Among origin triangles that changed, share that dissolved to Type 0.
    pub dissolution_fraction: Option<f64>,
    pub changed_transitions: u64,
    pub neighbors: Vec<TypeNeighbors>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn type_changes(matrix: &TransitionMatrix) -> Vec<TypeChange> {
    matrix
        .states()
        .into_iter()
        .map(|state| {
            let origin_count = matrix.row_sum(state);
            let unchanged = matrix.count(state, state);
            TypeChange {
                state,
                origin_count,
                unchanged,
                change_probability: ratio(origin_count - unchanged, origin_count),
            }
        })
        .collect()
}

impl ChangeSummary {
    /// Summarizes an origin/destination matrix that includes Type 0.
    pub fn from_matrix(
        matrix: &TransitionMatrix,
        sequence_change_fraction: Option<f64>,
        options: SummaryOptions,
    ) -> Self {
        let without = matrix.without_type0();
        let mut changed = 0u64;
        let mut less = 0u64;
        let mut dissolved = 0u64;
        for from in TriadCode::ALL.iter().map(|&c| Some(c)) {
            for to in all_states() {
                if from == to {
                    continue;
                }
                let c = matrix.count(from, to);
                changed += c;
                if arc_delta(from, to) < 0 {
                    less += c;
                }
                if to.is_none() {
                    dissolved += c;
                }
            }
        }

        let candidates = |exclude: Option<TriadCode>| {
            all_states().filter(move |&s| {
                !(options.neighbors_exclude_type0 && s.is_none())
                    && !(options.neighbors_exclude_self && s == exclude)
            })
        };
        // ties resolve to the earliest state in slot order
        let arg_max = |values: Vec<(Option<TriadCode>, u64)>| {
            values
                .into_iter()
                .filter(|&(_, c)| c > 0)
                .fold(
                    None,
                    |best: Option<(Option<TriadCode>, u64)>, (s, c)| match best {
                        Some((_, bc)) if bc >= c => best,
                        _ => Some((s, c)),
                    },
                )
                .map(|(s, _)| s)
        };
        let neighbors = TriadCode::ALL
            .iter()
            .map(|&code| {
                let me = Some(code);
                TypeNeighbors {
                    code,
                    predecessor: arg_max(
                        candidates(me).map(|s| (s, matrix.count(s, me))).collect(),
                    ),
                    successor: arg_max(candidates(me).map(|s| (s, matrix.count(me, s))).collect()),
                }
            })
            .collect();

        ChangeSummary {
            origin_label: matrix.origin_label.clone(),
            destination_label: matrix.destination_label.clone(),
            per_type: type_changes(matrix),
            per_type_without_type0: type_changes(&without),
            changed_fraction_without_type0: ratio(
                without.total() - without.diagonal_sum(),
                without.total(),
            ),
            sequence_change_fraction,
            less_connected_fraction: ratio(less, changed),
            dissolution_fraction: ratio(dissolved, changed),
            changed_transitions: changed,
            neighbors,
        }
    }
}

pub fn change_summary(
    evolution: &Evolution,
    origin: usize,
    destination: usize,
    options: SummaryOptions,
) -> Result<ChangeSummary> {
    let matrix = evolution.transition_matrix(origin, destination, true)?;
    Ok(ChangeSummary::from_matrix(
        &matrix,
        evolution.sequence_change_fraction(),
        options,
    ))
}
