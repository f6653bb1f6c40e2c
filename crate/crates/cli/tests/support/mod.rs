//! Helpers shared by the CLI tests: running the binary, reading reports and
//! recomputing the fixture's numbers from the raw files.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use triad_core::graph::{NodeId, Snapshot};
use triad_core::triad::TriadCode;

#[path = "../../../core/tests/common/mod.rs"]
pub mod oracle;

pub const GOLDEN_ARGS: &[&str] = &[
    "all",
    "--manifest",
    "manifest.toml",
    "--seeds",
    "5",
    "--rng-seed",
    "1",
];

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary from the fixture directory.
pub fn triad(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triad"))
        .current_dir(fixture_dir())
        .args(args)
        .arg("--out")
        .arg(out)
        .env("TRIAD_LOG", "error")
        .output()
        .expect("binary runs")
}

pub fn read_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    if let Ok(entries) = std::fs::read_dir(dir) {
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            files.insert(name, std::fs::read(entry.path()).unwrap());
        }
    }
    files
}

/// Column names and rows, `#` lines skipped. Fields never contain commas here.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let split = |l: &str| l.split(',').map(str::to_owned).collect::<Vec<_>>();
    let header = lines.next().map(split).unwrap_or_default();
    (header, lines.map(split).collect())
}

pub fn read_csv(dir: &Path, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_csv(&text)
}

/// Type numbers of the default report numbering, written out by hand.
pub fn type_number(code: Option<TriadCode>) -> usize {
    let Some(code) = code else { return 0 };
    match code.as_str() {
        "021D" => 1,
        "021C" => 2,
        "111U" => 3,
        "021U" => 4,
        "030T" => 5,
        "120U" => 6,
        "111D" => 7,
        "201" => 8,
        "030C" => 9,
        "120C" => 10,
        "120D" => 11,
        "210" => 12,
        "300" => 13,
        other => panic!("unexpected code {other}"),
    }
}

pub struct Fixture {
    pub ids: BTreeMap<String, NodeId>,
    pub labels: Vec<String>,
    pub full: Vec<Snapshot>,
    pub profiled: BTreeMap<NodeId, (f64, f64)>,
}

impl Fixture {
    /// Parses the fixture files without the library loaders.
    pub fn load() -> Fixture {
        let dir = fixture_dir();
        let mut ids = BTreeMap::new();
        let intern = |name: &str, ids: &mut BTreeMap<String, NodeId>| {
            let next = NodeId(ids.len() as u64);
            *ids.entry(name.to_owned()).or_insert(next)
        };
        let mut full = Vec::new();
        let mut labels = Vec::new();
        for (label, file) in [("sep07", "2011-09-07.txt"), ("oct20", "2011-10-20.txt")] {
            let text = std::fs::read_to_string(dir.join(file)).unwrap();
            let mut edges = Vec::new();
            for line in text
                .lines()
                .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            {
                let mut parts = line.split_whitespace();
                let a = intern(parts.next().unwrap(), &mut ids);
                let b = intern(parts.next().unwrap(), &mut ids);
                edges.push((a, b));
            }
            full.push(Snapshot::from_edges(label, [], edges));
            labels.push(label.to_owned());
        }
        let mut profiled = BTreeMap::new();
        let text = std::fs::read_to_string(dir.join("profiles.csv")).unwrap();
        for line in text.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let (lat, lon): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
            if let Some(&id) = ids.get(f[0]) {
                if (-90.0..=90.0).contains(&lat) && lon > -180.0 && lon <= 180.0 {
                    profiled.insert(id, (lat, lon));
                }
            }
        }
        Fixture {
            ids,
            labels,
            full,
            profiled,
        }
    }

    pub fn located(&self, k: usize) -> Snapshot {
        let g = &self.full[k];
        let edges: Vec<_> = g
            .edges()
            .filter(|(a, b)| self.profiled.contains_key(a) && self.profiled.contains_key(b))
            .collect();
        Snapshot::from_edges(g.label(), [], edges)
    }

    pub fn closure(&self, k: usize, seeds: &[NodeId]) -> Snapshot {
        let (_, arcs) = oracle::brute_closure(&self.full[k], seeds);
        Snapshot::from_edges(self.full[k].label(), [], arcs)
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Recomputes the golden run's numbers from the raw fixture and compares.
pub fn check_against_oracles(dir: &Path) -> Result<(), String> {
    let fx = Fixture::load();
    let (_, seed_rows) = read_csv(dir, "seeds.csv");
    let seeds: Vec<NodeId> = seed_rows.iter().map(|r| fx.ids[&r[0]]).collect();
    ensure(seeds.len() == 5, || {
        format!("expected 5 seeds, got {}", seeds.len())
    })?;
    let closures: Vec<Snapshot> = (0..2).map(|k| fx.closure(k, &seeds)).collect();

    let (_, rows) = read_csv(dir, "graphs.csv");
    let mut expected = Vec::new();
    for (k, closure) in closures.iter().enumerate() {
        for (stage, g) in [
            ("full", fx.full[k].clone()),
            ("locations only", fx.located(k)),
            ("triangle-graph", closure.clone()),
        ] {
            expected.push(vec![
                fx.labels[k].clone(),
                stage.to_owned(),
                g.node_count().to_string(),
                g.edge_count().to_string(),
                oracle::brute_triangles(&g).len().to_string(),
            ]);
        }
    }
    ensure(rows == expected, || {
        format!("graphs.csv {rows:?} != {expected:?}")
    })?;

    let (_, rows) = read_csv(dir, "census.csv");
    for (k, closure) in closures.iter().enumerate() {
        let brute = oracle::brute_census(closure);
        for code in TriadCode::ALL {
            let row = rows
                .iter()
                .find(|r| r[0] == fx.labels[k] && r[2] == code.as_str())
                .ok_or_else(|| format!("census row for {code} missing"))?;
            let want = brute.get(&code).copied().unwrap_or(0);
            ensure(row[1] == type_number(Some(code)).to_string(), || {
                format!("type of {code}")
            })?;
            ensure(row[3] == want.to_string(), || {
                format!("census {} {code}: {} != {want}", fx.labels[k], row[3])
            })?;
        }
    }

    let brute = oracle::brute_matrix(&closures, 0, 1);
    let mut by_type = [[0u64; 14]; 14];
    for (i, row) in brute.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let from = if i == 0 {
                None
            } else {
                TriadCode::from_index(i - 1)
            };
            let to = if j == 0 {
                None
            } else {
                TriadCode::from_index(j - 1)
            };
            by_type[type_number(from)][type_number(to)] = c;
        }
    }
    for (file, first) in [
        ("transitions_with_type0.csv", 0),
        ("transitions_without_type0.csv", 1),
    ] {
        let (header, rows) = read_csv(dir, file);
        for row in rows.iter().filter(|r| r[0] == "counts") {
            let from: usize = row[1].parse().unwrap();
            for (col, cell) in header[2..].iter().zip(&row[2..]) {
                let to: usize = col.parse().unwrap();
                let want = if from < first || to < first {
                    0
                } else {
                    by_type[from][to]
                };
                ensure(*cell == want.to_string(), || {
                    format!("{file} {from}->{to}: {cell} != {want}")
                })?;
            }
        }
    }

    let (_, rows) = read_csv(dir, "change_probability.csv");
    for row in &rows {
        let t: usize = row[0].parse().unwrap();
        let origin: u64 = by_type[t].iter().sum();
        ensure(row[2] == origin.to_string(), || {
            format!("origin count of type {t}")
        })?;
        ensure(row[3] == by_type[t][t].to_string(), || {
            format!("unchanged count of type {t}")
        })?;
    }

    let (_, rows) = read_csv(dir, "superstars.csv");
    let last = &fx.full[1];
    let located = fx.located(1);
    let mut ranked: Vec<(usize, &String, NodeId)> = fx
        .ids
        .iter()
        .map(|(name, &id)| (last.in_neighbors(id).len(), name, id))
        .filter(|t| t.0 > 0)
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.2.cmp(&b.2)));
    for (row, (followers, name, id)) in rows.iter().zip(&ranked) {
        ensure(&row[0] == *name, || {
            format!("superstar {} != {name}", row[0])
        })?;
        ensure(row[2] == followers.to_string(), || {
            format!("followers of {name}")
        })?;
        let kept = if located.contains(*id) {
            located.in_degree(*id)
        } else {
            0
        };
        let pct = format!("{:.2}", 100.0 * kept as f64 / *followers as f64);
        ensure(row[3] == pct, || {
            format!("retention of {name}: {} != {pct}", row[3])
        })?;
    }
    Ok(())
}

/// Column layout and row counts of the table-shaped reports.
pub fn check_shapes(dir: &Path) -> Result<(), String> {
    let types: Vec<String> = (1..=13).map(|t| t.to_string()).collect();
    let with_prefix = |prefix: &[&str], tail: &[String]| {
        prefix
            .iter()
            .map(|s| s.to_string())
            .chain(tail.iter().cloned())
            .collect::<Vec<_>>()
    };

    let (h, rows) = read_csv(dir, "graphs.csv");
    ensure(
        h == ["snapshot", "stage", "nodes", "edges", "triangles"],
        || format!("graphs.csv header {h:?}"),
    )?;
    ensure(rows.len() == 6, || "graphs.csv rows".into())?;

    let (h, rows) = read_csv(dir, "census_table.csv");
    ensure(h == with_prefix(&["snapshot"], &types), || {
        format!("census_table.csv header {h:?}")
    })?;
    ensure(rows.len() == 2, || "census_table.csv rows".into())?;
    for row in &rows {
        let sum: f64 = row[1..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        ensure((sum - 100.0).abs() < 1e-3, || {
            format!("census percentages sum to {sum}")
        })?;
        ensure(
            row[1..]
                .iter()
                .all(|v| v.split('.').nth(1).map(str::len) == Some(5)),
            || "census decimals".into(),
        )?;
    }

    let (h, rows) = read_csv(dir, "change_probability.csv");
    ensure(
        h == [
            "type",
            "code",
            "origin_count",
            "unchanged",
            "change_percent",
        ],
        || format!("{h:?}"),
    )?;
    let listed: Vec<String> = rows.iter().map(|r| r[0].clone()).collect();
    ensure(
        listed == (0..=13).map(|t| t.to_string()).collect::<Vec<_>>(),
        || "change_probability types".into(),
    )?;
    ensure(rows[0][4] == "100.00" || rows[0][2] == "0", || {
        "Type 0 must always change".into()
    })?;

    let zero_types: Vec<String> = (0..=13).map(|t| t.to_string()).collect();
    for (file, cols) in [
        ("transitions_without_type0.csv", &types),
        ("transitions_with_type0.csv", &zero_types),
    ] {
        let (h, rows) = read_csv(dir, file);
        ensure(h == with_prefix(&["view", "from"], cols), || {
            format!("{file} header {h:?}")
        })?;
        let views: BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
        ensure(views.len() == 5, || format!("{file} views {views:?}"))?;
        ensure(rows.len() == 5 * cols.len(), || format!("{file} rows"))?;
        for row in rows.iter().filter(|r| r[0] == "changes") {
            let i = cols.iter().position(|c| *c == row[1]).unwrap();
            ensure(row[2 + i] == "---", || format!("{file} diagonal"))?;
        }
    }

    let (h, rows) = read_csv(dir, "summary_table.csv");
    ensure(
        h == ["type", "code", "predecessor", "successor", "freq_percent"],
        || format!("{h:?}"),
    )?;
    ensure(rows.len() == 13, || "summary_table rows".into())?;

    let (h, rows) = read_csv(dir, "timezone_neighbors.csv");
    ensure(h == with_prefix(&["metric"], &types), || {
        format!("timezone header {h:?}")
    })?;
    let metrics: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    ensure(
        metrics
            == [
                "triangles_within_3",
                "percent_within_3",
                "percent_within_1",
                "percent_of_all_triangles",
                "covered_triangles",
            ],
        || format!("timezone metrics {metrics:?}"),
    )?;

    let (h, rows) = read_csv(dir, "superstars.csv");
    ensure(
        h == [
            "name",
            "rank",
            "followers",
            "percent_in_locations_only",
            "percent_in_triangle_graph",
        ],
        || format!("superstars header {h:?}"),
    )?;
    ensure(!rows.is_empty() && rows.len() <= 10, || {
        "superstar rows".into()
    })?;
    for row in &rows {
        for p in &row[3..] {
            let v: f64 = p.parse().unwrap();
            ensure((0.0..=100.0).contains(&v), || format!("retention {v}"))?;
        }
    }
    Ok(())
}

/// Runs `all` with the golden arguments and compares every file byte for byte.
pub fn check_golden(out: &Path) -> Result<(), String> {
    let result = triad(GOLDEN_ARGS, out);
    ensure(result.status.success(), || {
        String::from_utf8_lossy(&result.stderr).into_owned()
    })?;
    let produced = read_files(out);
    let golden = read_files(&golden_dir());
    ensure(!golden.is_empty(), || "no golden files committed".into())?;
    let names: Vec<_> = produced.keys().collect();
    let golden_names: Vec<_> = golden.keys().collect();
    ensure(names == golden_names, || {
        format!("file sets differ: {names:?} vs {golden_names:?}")
    })?;
    for (name, bytes) in &produced {
        ensure(golden[name] == *bytes, || {
            format!("{name} differs from its golden copy")
        })?;
    }
    Ok(())
}
