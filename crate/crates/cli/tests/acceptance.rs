//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod support;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;
use support::oracle;
use triad_core::census::{census, enumerate_triangles};
use triad_core::evolution::{all_states, Evolution};
use triad_core::geo::{haversine, GeoPoint, EARTH_RADIUS_KM};
use triad_core::graph::{NodeId, PairState, Snapshot};
use triad_core::sampler::{sample_triangle_graph, SamplePlan};
use triad_core::synth::{churn_sequence, preferential_attachment, random_digraph};
use triad_core::triad::{classify_states, TriadCode, TriadConfiguration, Triple};

// WGS84 geodesic distance Berlin (52.52, 13.405) - London (51.507, -0.128),
// from Karney's algorithm, computed outside this code base.
const BERLIN_LONDON_GEODESIC_KM: f64 = 934.546;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<String, String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{took:.2?}"))
}

fn three_node_graph(states: [PairState; 3], labels: [u64; 3]) -> Snapshot {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut edges = Vec::new();
    for (&(a, b), s) in pairs.iter().zip(states) {
        let (a, b) = (NodeId(labels[a]), NodeId(labels[b]));
        if s.has_forward() {
            edges.push((a, b));
        }
        if s.has_backward() {
            edges.push((b, a));
        }
    }
    Snapshot::from_edges("t", (0..3).map(NodeId), edges)
}

fn classifier_exhaustiveness() -> Outcome {
    let start = Instant::now();
    let expected_orbits: BTreeMap<&str, usize> = [
        ("021D", 3),
        ("021U", 3),
        ("021C", 6),
        ("111D", 6),
        ("111U", 6),
        ("030T", 6),
        ("030C", 2),
        ("201", 3),
        ("120D", 3),
        ("120U", 3),
        ("120C", 6),
        ("210", 6),
        ("300", 1),
    ]
    .into_iter()
    .collect();
    let permutations = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let triple = Triple::new(NodeId(0), NodeId(1), NodeId(2)).unwrap();
    let mut orbits: BTreeMap<&str, usize> = BTreeMap::new();
    let mut connected = 0;
    let mut total = 0;
    for a in PairState::ALL {
        for b in PairState::ALL {
            for c in PairState::ALL {
                total += 1;
                let states = [a, b, c];
                let class = classify_states(states);
                let g = three_node_graph(states, [0, 1, 2]);
                let [x, y, z] = triple.nodes();
                let reference = match oracle::tricode_name(&g, x, y, z) {
                    "003" | "012" | "102" => None,
                    name => Some(name),
                };
                check(class.map(TriadCode::as_str) == reference, || {
                    format!("{states:?}: {class:?} vs reference {reference:?}")
                })?;
                for p in permutations {
                    let relabeled = three_node_graph(states, p.map(|i| i as u64));
                    let c2 = classify_states(
                        TriadConfiguration::from_snapshot(&relabeled, triple).states(),
                    );
                    check(c2 == class, || {
                        format!("{states:?} under {p:?}: {c2:?} vs {class:?}")
                    })?;
                }
                if let Some(code) = class {
                    connected += 1;
                    *orbits.entry(code.as_str()).or_default() += 1;
                }
            }
        }
    }
    check(total == 64, || format!("{total} configurations"))?;
    check(connected == 54, || format!("{connected} weakly connected"))?;
    check(orbits == expected_orbits, || format!("orbits {orbits:?}"))?;
    check(orbits.values().sum::<usize>() == 54, || {
        "orbit sizes".into()
    })?;
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!(
        "64 configurations, 54 connected, 13 classes, {took}"
    ))
}

fn census_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    for i in 0..200u64 {
        let n = 3 + i % 10;
        let p = [0.1, 0.3, 0.5][((i / 10) % 3) as usize];
        let g = random_digraph("g", n, p, 1000 + i);
        let result = census(&g);
        let brute = oracle::brute_census(&g);
        for code in TriadCode::ALL {
            let want = brute.get(&code).copied().unwrap_or(0);
            check(result.count(code) == want, || {
                format!(
                    "graph {i} (n={n}, p={p}) {code}: {} vs {want}",
                    result.count(code)
                )
            })?;
        }
        let listed: BTreeMap<_, _> = enumerate_triangles(&g).collect();
        check(listed == oracle::brute_triangles(&g), || {
            format!("graph {i}: enumeration differs")
        })?;
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("200 graphs exact, {took}"))
}

fn synthetic_sequences() -> Vec<Vec<Snapshot>> {
    (0..50u64)
        .map(|i| {
            let len = 2 + (i % 3) as usize;
            let n = 8 + i % 7;
            churn_sequence(
                n,
                [0.1, 0.2, 0.3][(i % 3) as usize],
                len,
                0.3,
                (n * 2) as usize,
                500 + i,
            )
        })
        .collect()
}

fn transition_conservation() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (i, seq) in synthetic_sequences().iter().enumerate() {
        let evo = Evolution::track(seq, None).map_err(|e| e.to_string())?;
        let universe = evo.universe().len() as u64;
        let oracle_universe = oracle::brute_trajectories(seq).len() as u64;
        check(universe == oracle_universe, || {
            format!("sequence {i}: universe {universe} vs {oracle_universe}")
        })?;
        for d in 1..seq.len() {
            for o in 0..d {
                let with = evo
                    .transition_matrix(o, d, true)
                    .map_err(|e| e.to_string())?;
                let without = evo
                    .transition_matrix(o, d, false)
                    .map_err(|e| e.to_string())?;
                check(with.total() == universe, || {
                    format!(
                        "sequence {i} {o}->{d}: total {} vs {universe}",
                        with.total()
                    )
                })?;
                let brute = oracle::brute_matrix(seq, o, d);
                for from in all_states() {
                    for to in all_states() {
                        let (r, c) = (oracle::oracle_slot(from), oracle::oracle_slot(to));
                        check(with.count(from, to) == brute[r][c], || {
                            format!("sequence {i} {o}->{d} cell {from:?}->{to:?}")
                        })?;
                        let expect = if r == 0 || c == 0 { 0 } else { brute[r][c] };
                        check(without.count(from, to) == expect, || {
                            format!("sequence {i} {o}->{d} without-Type-0 cell {from:?}->{to:?}")
                        })?;
                    }
                }
                checked += 1;
            }
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("50 sequences, {checked} matrices exact, {took}"))
}

fn type0_law() -> Outcome {
    let mut constant = 0;
    for (i, seq) in synthetic_sequences().iter().enumerate() {
        let evo = Evolution::track(seq, None).map_err(|e| e.to_string())?;
        for t in evo.trajectories() {
            if t.is_constant() {
                constant += 1;
                check(t.types.iter().all(Option::is_some), || {
                    format!(
                        "sequence {i}: constant trajectory with Type 0 for {:?}",
                        t.triple
                    )
                })?;
            }
        }
    }
    Ok(format!("{constant} constant trajectories, 0 violations"))
}

fn sampler_closure() -> Outcome {
    for i in 0..50u64 {
        let g = random_digraph("g", 20, [0.05, 0.1, 0.15][(i % 3) as usize], 77 + i);
        let plan = SamplePlan {
            seed_count: 1 + (i % 4) as usize,
            rng_seed: i,
            location_filter: false,
        };
        let (sample, seeds) = sample_triangle_graph(&g, &plan).map_err(|e| e.to_string())?;
        let (nodes, arcs) = oracle::brute_closure(&g, &seeds);
        check(
            sample.nodes().iter().copied().eq(nodes.iter().copied()),
            || format!("graph {i}: node set"),
        )?;
        check(sample.edges().eq(arcs.iter().copied()), || {
            format!("graph {i}: arc set")
        })?;

        let dump = |s: &Snapshot, seeds: &[NodeId]| {
            format!("{seeds:?}{:?}", s.edges().collect::<Vec<_>>())
        };
        let (again, again_seeds) = ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| sample_triangle_graph(&g, &plan))
            .map_err(|e| e.to_string())?;
        check(dump(&sample, &seeds) == dump(&again, &again_seeds), || {
            format!("graph {i}: rerun differs")
        })?;
    }
    Ok("50 graphs match the brute-force closure; reruns identical".into())
}

fn geodesic_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let a = GeoPoint::new(rng.gen_range(-90.0..=90.0), rng.gen_range(-179.999..=180.0));
        let b = GeoPoint::new(rng.gen_range(-90.0..=90.0), rng.gen_range(-179.999..=180.0));
        let (ab, ba) = (haversine(a, b), haversine(b, a));
        check((ab - ba).abs() <= 1e-9, || {
            format!("asymmetric: {ab} vs {ba}")
        })?;
    }
    let antipodal = haversine(GeoPoint::new(0.0, 0.0), GeoPoint::new(0.0, 180.0));
    let half = std::f64::consts::PI * 6371.0088;
    check(EARTH_RADIUS_KM == 6371.0088, || "radius".into())?;
    check(((antipodal - half) / half).abs() <= 1e-6, || {
        format!("antipodal {antipodal}")
    })?;
    let bl = haversine(GeoPoint::new(52.52, 13.405), GeoPoint::new(51.507, -0.128));
    let rel = (bl - BERLIN_LONDON_GEODESIC_KM).abs() / BERLIN_LONDON_GEODESIC_KM;
    check(rel <= 0.01, || {
        format!("Berlin-London {bl:.3} km, {:.3}% off", 100.0 * rel)
    })?;
    Ok(format!(
        "antipodal {antipodal:.3} km, Berlin-London {bl:.3} km ({:.2}% from {BERLIN_LONDON_GEODESIC_KM})",
        100.0 * rel
    ))
}

fn determinism() -> Outcome {
    let one = tempfile::tempdir().map_err(|e| e.to_string())?;
    let eight = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut args = support::GOLDEN_ARGS.to_vec();
    args.extend(["--threads", "1"]);
    let r1 = support::triad(&args, one.path());
    args.pop();
    args.push("8");
    let r8 = support::triad(&args, eight.path());
    check(r1.status.success() && r8.status.success(), || {
        "CLI run failed".into()
    })?;
    let (a, b) = (
        support::read_files(one.path()),
        support::read_files(eight.path()),
    );
    check(!a.is_empty(), || "no reports written".into())?;
    for (name, bytes) in &a {
        check(b.get(name) == Some(bytes), || {
            format!("{name} differs between 1 and 8 threads")
        })?;
    }
    check(a.len() == b.len(), || "file sets differ".into())?;
    Ok(format!("{} report files byte-identical", a.len()))
}

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn desk_scale_performance() -> Outcome {
    let pool = ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .map_err(|e| e.to_string())?;
    let build = Instant::now();
    let g = preferential_attachment("pa", 1_000_000, 10, 0.05, 2024);
    let build_time = build.elapsed();
    check(g.node_count() == 1_000_000, || {
        format!("{} nodes", g.node_count())
    })?;
    check(g.edge_count() >= 10_000_000, || {
        format!("{} edges", g.edge_count())
    })?;
    let start = Instant::now();
    let result = pool.install(|| census(&g));
    let took = start.elapsed();
    check(took < Duration::from_secs(300), || {
        format!("census took {took:.2?}")
    })?;
    check(result.total_triangles() > 0, || "empty census".into())?;
    let peak = peak_rss_bytes().ok_or("cannot read peak resident memory")?;
    check(peak < 8 << 30, || {
        format!("peak resident memory {} MiB", peak >> 20)
    })?;
    Ok(format!(
        "{} edges, {} connected triples, census {took:.2?} on 4 threads (build {build_time:.2?}), peak RSS {} MiB",
        g.edge_count(),
        result.total_triangles(),
        peak >> 20
    ))
}

fn report_fidelity() -> Outcome {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    support::check_golden(out.path())?;
    support::check_shapes(out.path())?;
    support::check_against_oracles(out.path())?;
    Ok("all reports match golden files; shapes and oracle values verified".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("classifier exhaustiveness", classifier_exhaustiveness),
        ("census-oracle equivalence", census_oracle_equivalence),
        (
            "transition conservation and oracle diff",
            transition_conservation,
        ),
        ("Type-0 change law", type0_law),
        ("sampler closure correctness", sampler_closure),
        ("geodesic checks", geodesic_checks),
        ("determinism under parallelism", determinism),
        ("desk-scale performance", desk_scale_performance),
        ("report fidelity", report_fidelity),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(reason) => {
                failures += 1;
                println!("[FAIL] {name}: {reason}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
