//! Geographic context of triangles: great-circle distances and timezone spread.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{PairState, Snapshot};
use crate::profile::Profiles;
use crate::stats::{distribution, DistributionPoint, Summary};
use crate::triad::{TriadCode, TriadConfiguration, Triple};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoPoint {
    pub fn new(latitude: f64, longitude: f64) -> Self {
        GeoPoint {
            latitude,
            longitude,
        }
    }
}

/// Great-circle distance in kilometres.
pub fn haversine(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.latitude.to_radians();
    let lat2 = b.latitude.to_radians();
    let dlat = (b.latitude - a.latitude).to_radians();
    let dlon = (b.longitude - a.longitude).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Offset from UTC in whole hours, from the nearest multiple of 15 degrees longitude.
pub fn timezone_of(longitude: f64) -> i8 {
    // f64::round rounds half away from zero
    (longitude / 15.0).round().clamp(-12.0, 12.0) as i8
}

/// Do the zones fit inside `window` consecutive zones on the 24-hour circle?
pub fn fits_in_window(zones: &[i8], window: u32) -> bool {
    if window >= 24 || zones.is_empty() {
        return true;
    }
    let positions: Vec<i32> = zones.iter().map(|&z| (z as i32).rem_euclid(24)).collect();
    (0..24).any(|start| {
        positions
            .iter()
            .all(|&p| ((p - start).rem_euclid(24) as u32) < window)
    })
}

fn triangle_points(triple: Triple, profiles: &Profiles) -> Option<[GeoPoint; 3]> {
    let [a, b, c] = triple.nodes();
    Some([
        profiles.get(a)?.point(),
        profiles.get(b)?.point(),
        profiles.get(c)?.point(),
    ])
}

/// Distance statistics for one triangle class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeDistance {
    pub code: TriadCode,
    pub triangles: u64,
    /// Triangles with all three members profiled.
    pub covered: u64,
    /// Per-triangle mean of the three pairwise distances.
    pub mean_distance: Option<Summary>,
    /// Distances of mutual pairs; `None` for classes without a mutual pair.
    pub mutual_link_distance: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistancePopulation {
    pub name: &'static str,
    pub summary: Option<Summary>,
    pub cdf: Vec<DistributionPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoStats {
    pub per_type: Vec<TypeDistance>,
    /// Linked pairs of the whole graph, edges inside triangles, all pairs inside triangles.
    pub populations: Vec<DistancePopulation>,
    pub triangles: u64,
    pub uncovered_triangles: u64,
}

struct TriangleDistances {
    code: TriadCode,
    pairs: [f64; 3],
    states: [PairState; 3],
}

pub fn triangle_geo_stats(
    snapshot: &Snapshot,
    triangles: &[(Triple, TriadCode)],
    profiles: &Profiles,
) -> GeoStats {
    let measured: Vec<Option<TriangleDistances>> = triangles
        .par_iter()
        .map(|&(triple, code)| {
            let [a, b, c] = triangle_points(triple, profiles)?;
            let config = TriadConfiguration::from_snapshot(snapshot, triple);
            Some(TriangleDistances {
                code,
                pairs: [haversine(a, b), haversine(a, c), haversine(b, c)],
                states: config.states(),
            })
        })
        .collect();

    let mut means: Vec<Vec<f64>> = vec![Vec::new(); 13];
    let mut mutual: Vec<Vec<f64>> = vec![Vec::new(); 13];
    let mut totals = [0u64; 13];
    let mut edge_distances = Vec::new();
    let mut pair_distances = Vec::new();
    for (&(_, code), m) in triangles.iter().zip(&measured) {
        totals[code.index()] += 1;
        let Some(m) = m else { continue };
        means[m.code.index()].push(m.pairs.iter().sum::<f64>() / 3.0);
        for (&d, &state) in m.pairs.iter().zip(&m.states) {
            pair_distances.push(d);
            if state.is_linked() {
                edge_distances.push(d);
            }
            if state == PairState::Mutual {
                mutual[m.code.index()].push(d);
            }
        }
    }

    let linked: Vec<f64> = snapshot
        .nodes()
        .par_iter()
        .flat_map_iter(|&u| {
            let pu = profiles.get(u).map(|p| p.point());
            let successors = snapshot.out_neighbors(u).iter().copied();
            let predecessors = snapshot.in_neighbors(u).iter().copied();
            // each linked pair once, from its smaller endpoint
            let mut others: Vec<_> = successors.chain(predecessors).filter(|&v| v > u).collect();
            others.sort_unstable();
            others.dedup();
            others
                .into_iter()
                .filter_map(move |v| Some(haversine(pu?, profiles.get(v)?.point())))
        })
        .collect();

    let per_type = TriadCode::ALL
        .iter()
        .map(|&code| TypeDistance {
            code,
            triangles: totals[code.index()],
            covered: means[code.index()].len() as u64,
            mean_distance: Summary::of(&means[code.index()]),
            mutual_link_distance: if code.mutual_count() >= 1 {
                Summary::of(&mutual[code.index()])
            } else {
                None
            },
        })
        .collect();

    let population = |name, values: &[f64]| DistancePopulation {
        name,
        summary: Summary::of(values),
        cdf: distribution(values),
    };
    let covered: u64 = means.iter().map(|m| m.len() as u64).sum();
    GeoStats {
        per_type,
        populations: vec![
            population("linked_pairs", &linked),
            population("triangle_edges", &edge_distances),
            population("triangle_pairs", &pair_distances),
        ],
        triangles: triangles.len() as u64,
        uncovered_triangles: triangles.len() as u64 - covered,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimezoneRow {
    pub code: TriadCode,
    pub triangles: u64,
    /// Triangles with all three members profiled.
    pub covered: u64,
    pub within_one: u64,
    pub within_window: u64,
    /// Member count per zone, index 0 is UTC-12 and index 24 is UTC+12.
    pub zone_histogram: [u64; 25],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimezoneStats {
    pub window: u32,
    pub rows: Vec<TimezoneRow>,
}

pub fn timezone_spread(
    triangles: &[(Triple, TriadCode)],
    profiles: &Profiles,
    window: u32,
) -> Result<TimezoneStats> {
    if window == 0 {
        return Err(Error::Config("timezone window must be at least 1".into()));
    }
    let mut rows: Vec<TimezoneRow> = TriadCode::ALL
        .iter()
        .map(|&code| TimezoneRow {
            code,
            triangles: 0,
            covered: 0,
            within_one: 0,
            within_window: 0,
            zone_histogram: [0; 25],
        })
        .collect();
    for &(triple, code) in triangles {
        let row = &mut rows[code.index()];
        row.triangles += 1;
        let zones: Option<Vec<i8>> = triple
            .nodes()
            .iter()
            .map(|&n| profiles.get(n).map(|p| p.timezone))
            .collect();
        let Some(zones) = zones else { continue };
        row.covered += 1;
        row.within_one += fits_in_window(&zones, 1) as u64;
        row.within_window += fits_in_window(&zones, window) as u64;
        for z in zones {
            row.zone_histogram[(z as i32 + 12) as usize] += 1;
        }
    }
    Ok(TimezoneStats { window, rows })
}
