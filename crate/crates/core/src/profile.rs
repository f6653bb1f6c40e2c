//! User profile locations.

use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::{timezone_of, GeoPoint};
use crate::graph::{NodeDictionary, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Profile {
    pub node: NodeId,
    pub latitude: f64,
    pub longitude: f64,
    pub timezone: i8,
}

impl Profile {
    /// Validates the coordinates and derives the timezone.
    pub fn new(node: NodeId, latitude: f64, longitude: f64) -> Result<Self, String> {
        if !(-90.0..=90.0).contains(&latitude) {
            return Err(format!("latitude {latitude} outside [-90, 90]"));
        }
        if !(longitude > -180.0 && longitude <= 180.0) {
            return Err(format!("longitude {longitude} outside (-180, 180]"));
        }
        Ok(Profile {
            node,
            latitude,
            longitude,
            timezone: timezone_of(longitude),
        })
    }

    pub fn point(&self) -> GeoPoint {
        GeoPoint::new(self.latitude, self.longitude)
    }
}

/// At most one profile per node, indexed by id.
#[derive(Debug, Clone, Default)]
pub struct Profiles {
    by_id: Vec<Option<Profile>>,
    count: usize,
}

impl Profiles {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless the node already has a profile. Returns whether it was inserted.
    pub fn insert(&mut self, profile: Profile) -> bool {
        let i = profile.node.index();
        if i >= self.by_id.len() {
            self.by_id.resize(i + 1, None);
        }
        if self.by_id[i].is_some() {
            return false;
        }
        self.by_id[i] = Some(profile);
        self.count += 1;
        true
    }

    #[inline]
    pub fn get(&self, node: NodeId) -> Option<&Profile> {
        self.by_id.get(node.index()).and_then(Option::as_ref)
    }

    #[inline]
    pub fn contains(&self, node: NodeId) -> bool {
        self.get(node).is_some()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Profiles in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = &Profile> {
        self.by_id.iter().flatten()
    }
}

impl FromIterator<Profile> for Profiles {
    fn from_iter<I: IntoIterator<Item = Profile>>(iter: I) -> Self {
        let mut p = Profiles::new();
        for profile in iter {
            p.insert(profile);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDiagnostic {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ProfileLoad {
    pub profiles: Profiles,
    pub rejected: Vec<RowDiagnostic>,
    pub unknown_ids: u64,
    /// Valid rows ignored because the node already had a profile.
    pub repeated: u64,
}

/// Reads `raw_id,lat,lon` rows. A first row whose coordinates do not parse is
/// treated as a header. Rows for ids the dictionary has never seen are counted
/// and skipped.
pub fn load_profiles<R: Read>(source: R, dictionary: &NodeDictionary) -> Result<ProfileLoad> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);

    let mut load = ProfileLoad {
        profiles: Profiles::new(),
        rejected: Vec::new(),
        unknown_ids: 0,
        repeated: 0,
    };

    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Ingest {
            line: e.position().map_or(index + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.len() != 3 {
            load.rejected.push(RowDiagnostic {
                line,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
            continue;
        }
        let coords = record[1]
            .parse::<f64>()
            .and_then(|lat| record[2].parse::<f64>().map(|lon| (lat, lon)));
        let (lat, lon) = match coords {
            Ok(c) => c,
            Err(_) if index == 0 => continue,
            Err(e) => {
                load.rejected.push(RowDiagnostic {
                    line,
                    reason: format!("unparseable coordinate: {e}"),
                });
                continue;
            }
        };
        let Some(node) = dictionary.get(&record[0]) else {
            load.unknown_ids += 1;
            continue;
        };
        match Profile::new(node, lat, lon) {
            Ok(profile) => {
                if !load.profiles.insert(profile) {
                    load.repeated += 1;
                }
            }
            Err(reason) => {
                log::warn!("profile line {line}: {reason}");
                load.rejected.push(RowDiagnostic { line, reason });
            }
        }
    }
    Ok(load)
}
