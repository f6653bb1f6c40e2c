//! Classification of three-node configurations into the 13 weakly connected
//! directed triad classes.
//!
//! Classes are identified internally by their MAN code (counts of Mutual,
//! Asymmetric and Null pairs plus an orientation suffix). The numbering used
//! in reports lives in a separate [`TypeMappingTable`], so changing the
//! numbering never touches computed results.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{NodeId, PairState, Snapshot};

/// Sorted triple of distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple([NodeId; 3]);

impl Triple {
    pub fn new(a: NodeId, b: NodeId, c: NodeId) -> Result<Self> {
        let mut nodes = [a, b, c];
        nodes.sort_unstable();
        if nodes[0] == nodes[1] || nodes[1] == nodes[2] {
            return Err(Error::InvalidTriple([a.0, b.0, c.0]));
        }
        Ok(Triple(nodes))
    }

    /// Caller guarantees `a < b < c`.
    #[inline]
    pub(crate) fn from_sorted(a: NodeId, b: NodeId, c: NodeId) -> Self {
        debug_assert!(a < b && b < c);
        Triple([a, b, c])
    }

    #[inline]
    pub fn nodes(&self) -> [NodeId; 3] {
        self.0
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    /// The three pairs in configuration order: (n1,n2), (n1,n3), (n2,n3).
    #[inline]
    pub fn pairs(&self) -> [(NodeId, NodeId); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }
}

/// The induced pair states of a sorted node triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriadConfiguration {
    triple: Triple,
    states: [PairState; 3],
}

impl TriadConfiguration {
    pub fn new(triple: Triple, states: [PairState; 3]) -> Self {
        TriadConfiguration { triple, states }
    }

    /// Reads the induced configuration of `triple` from a snapshot.
    pub fn from_snapshot(snapshot: &Snapshot, triple: Triple) -> Self {
        let states = triple
            .pairs()
            .map(|(u, v)| snapshot.pair_state_unchecked(u, v));
        TriadConfiguration { triple, states }
    }

    pub fn triple(&self) -> Triple {
        self.triple
    }

    pub fn states(&self) -> [PairState; 3] {
        self.states
    }

    /// Position of this labeled configuration among the 64 possible ones.
    #[inline]
    pub fn index(&self) -> usize {
        states_index(self.states)
    }
}

#[inline]
pub fn states_index(states: [PairState; 3]) -> usize {
    (states[0] as usize) << 4 | (states[1] as usize) << 2 | states[2] as usize
}

#[inline]
fn states_from_index(index: usize) -> [PairState; 3] {
    [
        PairState::from_bits((index >> 4) as u8),
        PairState::from_bits((index >> 2) as u8),
        PairState::from_bits(index as u8),
    ]
}

/// The 13 weakly connected isomorphism classes, in MAN order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriadCode {
    D021,
    U021,
    C021,
    D111,
    U111,
    T030,
    C030,
    M201,
    D120,
    U120,
    C120,
    M210,
    M300,
}

impl TriadCode {
    pub const ALL: [TriadCode; 13] = [
        TriadCode::D021,
        TriadCode::U021,
        TriadCode::C021,
        TriadCode::D111,
        TriadCode::U111,
        TriadCode::T030,
        TriadCode::C030,
        TriadCode::M201,
        TriadCode::D120,
        TriadCode::U120,
        TriadCode::C120,
        TriadCode::M210,
        TriadCode::M300,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriadCode::D021 => "021D",
            TriadCode::U021 => "021U",
            TriadCode::C021 => "021C",
            TriadCode::D111 => "111D",
            TriadCode::U111 => "111U",
            TriadCode::T030 => "030T",
            TriadCode::C030 => "030C",
            TriadCode::M201 => "201",
            TriadCode::D120 => "120D",
            TriadCode::U120 => "120U",
            TriadCode::C120 => "120C",
            TriadCode::M210 => "210",
            TriadCode::M300 => "300",
        }
    }

    pub fn mutual_count(self) -> u32 {
        self.as_str().as_bytes()[0] as u32 - b'0' as u32
    }

    pub fn asymmetric_count(self) -> u32 {
        self.as_str().as_bytes()[1] as u32 - b'0' as u32
    }

    pub fn arc_count(self) -> u32 {
        2 * self.mutual_count() + self.asymmetric_count()
    }
}

impl fmt::Display for TriadCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TriadCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TriadCode::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Mapping(format!("unknown triad code {s:?}")))
    }
}

impl Serialize for TriadCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Number of directed edges of a class; Type 0 (not a triangle) counts as 0.
pub fn arc_count(class: Option<TriadCode>) -> u32 {
    class.map_or(0, TriadCode::arc_count)
}

/// Change in directed-edge count from one class to another.
pub fn arc_delta(from: Option<TriadCode>, to: Option<TriadCode>) -> i32 {
    arc_count(to) as i32 - arc_count(from) as i32
}

/// Is there an arc from position `i` to position `j` (0..3) of a configuration?
#[inline]
fn arc(states: &[PairState; 3], i: usize, j: usize) -> bool {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let state = states[lo + hi - 1];
    if i < j {
        state.has_forward()
    } else {
        state.has_backward()
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Relabels positions so that new position `k` holds old position `perm[k]`.
fn permute(states: &[PairState; 3], perm: [usize; 3]) -> [PairState; 3] {
    let pair = |a: usize, b: usize| {
        PairState::from_arcs(arc(states, perm[a], perm[b]), arc(states, perm[b], perm[a]))
    };
    [pair(0, 1), pair(0, 2), pair(1, 2)]
}

/// Lexicographically smallest pair-state encoding over all relabelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm([PairState; 3]);

impl CanonicalForm {
    pub fn states(&self) -> [PairState; 3] {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            let c = match s {
                PairState::None => '0',
                PairState::Forward => '>',
                PairState::Backward => '<',
                PairState::Mutual => '=',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn canonical_states(states: [PairState; 3]) -> CanonicalForm {
    let best = PERMUTATIONS
        .iter()
        .map(|&p| permute(&states, p))
        .min()
        .expect("six permutations");
    CanonicalForm(best)
}

pub fn canonicalize(config: &TriadConfiguration) -> CanonicalForm {
    canonical_states(config.states)
}

/// Derives the MAN code from the arc structure.
fn structural_code(states: &[PairState; 3]) -> Option<TriadCode> {
    let mutual = states.iter().filter(|&&s| s == PairState::Mutual).count();
    let null = states.iter().filter(|&&s| s == PairState::None).count();
    let asym = 3 - mutual - null;
    if null >= 2 {
        return None;
    }
    let out_deg = |i: usize| (0..3).filter(|&j| j != i && arc(states, i, j)).count();
    let in_deg = |i: usize| (0..3).filter(|&j| j != i && arc(states, j, i)).count();
    // position opposite to pair index p
    let opposite = |p: usize| 2 - p;
    let find = |target: PairState| states.iter().position(|&s| s == target);

    let code = match (mutual, asym) {
        (0, 2) => {
            let hub = opposite(find(PairState::None)?);
            match (out_deg(hub), in_deg(hub)) {
                (2, 0) => TriadCode::D021,
                (0, 2) => TriadCode::U021,
                _ => TriadCode::C021,
            }
        }
        (1, 1) => {
            // the node shared by the mutual and the asymmetric pair sits opposite the null pair
            let shared = opposite(find(PairState::None)?);
            if out_deg(shared) == 2 {
                TriadCode::U111
            } else {
                TriadCode::D111
            }
        }
        (0, 3) => {
            if (0..3).all(|i| out_deg(i) == 1) {
                TriadCode::C030
            } else {
                TriadCode::T030
            }
        }
        (2, 0) => TriadCode::M201,
        (1, 2) => {
            let outsider = opposite(find(PairState::Mutual)?);
            match (out_deg(outsider), in_deg(outsider)) {
                (2, 0) => TriadCode::D120,
                (0, 2) => TriadCode::U120,
                _ => TriadCode::C120,
            }
        }
        (2, 1) => TriadCode::M210,
        (3, 0) => TriadCode::M300,
        _ => unreachable!("null count below 2 leaves only the cases above"),
    };
    Some(code)
}

fn lookup_table() -> &'static [Option<TriadCode>; 64] {
    static TABLE: OnceLock<[Option<TriadCode>; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [None; 64];
        for (index, slot) in table.iter_mut().enumerate() {
            let states = states_from_index(index);
            let canonical = canonical_states(states);
            *slot = structural_code(&canonical.0);
            debug_assert_eq!(*slot, structural_code(&states));
        }
        table
    })
}

/// Class of a labeled configuration given by its three pair states.
#[inline]
pub fn classify_states(states: [PairState; 3]) -> Option<TriadCode> {
    lookup_table()[states_index(states)]
}

/// Class of a labeled configuration index (see [`states_index`]).
#[inline]
pub fn classify_index(index: usize) -> Option<TriadCode> {
    lookup_table()[index]
}

/// Full classification of a configuration under a numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriadClass {
    pub code: Option<TriadCode>,
    pub type_number: u8,
    pub arc_count: u32,
    pub mutual_count: u32,
}

impl TriadClass {
    pub fn of(code: Option<TriadCode>, mapping: &TypeMappingTable) -> Self {
        TriadClass {
            code,
            type_number: mapping.type_of(code),
            arc_count: arc_count(code),
            mutual_count: code.map_or(0, TriadCode::mutual_count),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.code.is_some()
    }
}

pub fn classify(config: &TriadConfiguration, mapping: &TypeMappingTable) -> TriadClass {
    TriadClass::of(classify_states(config.states), mapping)
}

/// Assignment of the 13 classes to report type numbers 1..=13.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeMappingTable {
    numbers: [u8; 13],
    provenance: String,
    reconstructed: bool,
}

const DEFAULT_MAPPING: [(TriadCode, u8); 13] = [
    (TriadCode::D021, 1),
    (TriadCode::C021, 2),
    (TriadCode::U111, 3),
    (TriadCode::U021, 4),
    (TriadCode::T030, 5),
    (TriadCode::U120, 6),
    (TriadCode::D111, 7),
    (TriadCode::M201, 8),
    (TriadCode::C030, 9),
    (TriadCode::C120, 10),
    (TriadCode::D120, 11),
    (TriadCode::M210, 12),
    (TriadCode::M300, 13),
];

impl Default for TypeMappingTable {
    fn default() -> Self {
        let mut numbers = [0u8; 13];
        for (code, n) in DEFAULT_MAPPING {
            numbers[code.index()] = n;
        }
        TypeMappingTable {
            numbers,
            provenance: "default reconstruction (types 1/2, 3/7 and 8/10/11/12 inferred from frequency hints, not confirmed)".into(),
            reconstructed: true,
        }
    }
}

impl TypeMappingTable {
    /// Parses `code = number` lines; `#` starts a comment.
    pub fn parse(text: &str, provenance: impl Into<String>) -> Result<Self> {
        let mut numbers = [0u8; 13];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (code, number) = line.split_once('=').ok_or_else(|| {
                Error::Mapping(format!("line {}: expected \"code = number\"", i + 1))
            })?;
            let code: TriadCode = code.parse()?;
            let number: u8 = number.trim().parse().map_err(|_| {
                Error::Mapping(format!(
                    "line {}: bad type number {:?}",
                    i + 1,
                    number.trim()
                ))
            })?;
            if numbers[code.index()] != 0 {
                return Err(Error::Mapping(format!("code {code} assigned twice")));
            }
            numbers[code.index()] = number;
        }
        Self::from_numbers(numbers, provenance.into())
    }

    fn from_numbers(numbers: [u8; 13], provenance: String) -> Result<Self> {
        let mut seen = [false; 14];
        for (code, &n) in TriadCode::ALL.iter().zip(&numbers) {
            if n == 0 {
                return Err(Error::Mapping(format!("code {code} has no type number")));
            }
            if n > 13 || seen[n as usize] {
                return Err(Error::Mapping(format!(
                    "type number {n} is out of range or used twice"
                )));
            }
            seen[n as usize] = true;
        }
        let table = TypeMappingTable {
            numbers,
            provenance,
            reconstructed: false,
        };
        table.check_anchors()?;
        Ok(table)
    }

    /// Constraints that any numbering must satisfy.
    fn check_anchors(&self) -> Result<()> {
        use TriadCode::*;
        let fixed = [(U021, 4), (T030, 5), (U120, 6), (C030, 9), (M300, 13)];
        for (code, n) in fixed {
            if self.type_number(code) != n {
                return Err(Error::Mapping(format!("{code} must map to type {n}")));
            }
        }
        let groups: [(&[TriadCode], &[u8]); 3] = [
            (&[D111, U111], &[3, 7]),
            (&[D021, C021], &[1, 2]),
            (&[M201, D120, C120, M210], &[8, 10, 11, 12]),
        ];
        for (codes, allowed) in groups {
            for &code in codes {
                if !allowed.contains(&self.type_number(code)) {
                    return Err(Error::Mapping(format!(
                        "{code} must map to one of {allowed:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn type_number(&self, code: TriadCode) -> u8 {
        self.numbers[code.index()]
    }

    /// Type number of a class, 0 for "not a triangle".
    #[inline]
    pub fn type_of(&self, code: Option<TriadCode>) -> u8 {
        code.map_or(0, |c| self.type_number(c))
    }

    pub fn code_of(&self, type_number: u8) -> Option<TriadCode> {
        TriadCode::ALL
            .iter()
            .copied()
            .find(|&c| self.type_number(c) == type_number)
    }

    /// Codes ordered by type number 1..=13.
    pub fn codes_in_type_order(&self) -> [TriadCode; 13] {
        let mut codes = TriadCode::ALL;
        codes.sort_by_key(|&c| self.type_number(c));
        codes
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// True for the built-in numbering, whose ambiguous groups are unconfirmed.
    pub fn is_reconstruction(&self) -> bool {
        self.reconstructed
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for code in self.codes_in_type_order() {
            out.push_str(&format!("{} = {}\n", code, self.type_number(code)));
        }
        out
    }
}
