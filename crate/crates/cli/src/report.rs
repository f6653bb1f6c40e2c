//! Report builders. Every CSV starts with a `#` block naming the inputs and
//! options it was built from; the same options always give the same bytes.

use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;

use serde_json::{json, Value};
use triad_core::census::{census as run_census, triangle_set, CensusResult};
use triad_core::degree::{degree_report, DegreeReport, TransitionInput};
use triad_core::evolution::{
    change_summary, ChangeSummary, Evolution, MatrixView, SummaryOptions, TransitionMatrix,
};
use triad_core::geo::{timezone_spread, triangle_geo_stats};
use triad_core::{Error, Snapshot, TriadCode};

use crate::error::CliError;
use crate::output::Outputs;
use crate::pipeline::{Inputs, Stages};
use crate::{Options, Type0};

pub struct Context<'a> {
    inputs: &'a Inputs,
    stages: &'a Stages,
    options: &'a Options,
    analysed: &'a [Snapshot],
    origin: usize,
    destination: usize,
    focus: usize,
    header: String,
    censuses: RefCell<BTreeMap<(&'static str, usize), CensusResult>>,
    evolution: OnceCell<Evolution>,
}

impl<'a> Context<'a> {
    pub fn new(
        inputs: &'a Inputs,
        stages: &'a Stages,
        options: &'a Options,
    ) -> Result<Self, CliError> {
        let analysed = stages.analysed(inputs);
        let len = analysed.len();
        let origin = options.origin.unwrap_or(0);
        let destination = options.destination.unwrap_or(len - 1);
        if origin >= destination || destination >= len {
            return Err(Error::TransitionOrder {
                origin,
                destination,
                len,
            }
            .into());
        }
        let focus = options.snapshot.unwrap_or(len - 1);
        if focus >= len {
            return Err(CliError::config(format!(
                "--snapshot {focus} is out of range for {len} snapshots"
            )));
        }
        if options.timezone_window == 0 {
            return Err(CliError::config("--timezone-window must be at least 1"));
        }
        let mut ctx = Context {
            inputs,
            stages,
            options,
            analysed,
            origin,
            destination,
            focus,
            header: String::new(),
            censuses: RefCell::new(BTreeMap::new()),
            evolution: OnceCell::new(),
        };
        ctx.header = ctx.build_header();
        Ok(ctx)
    }

    fn build_header(&self) -> String {
        let m = &self.inputs.manifest;
        let mut h = format!(
            "# triad {}\n# manifest: {}\n",
            env!("CARGO_PKG_VERSION"),
            m.source
        );
        for (i, entry) in m.snapshots.iter().enumerate() {
            h += &format!("# snapshot {i}: {} {}\n", entry.label, entry.path);
        }
        h += &format!("# profiles: {}\n", m.profiles.as_deref().unwrap_or("none"));
        let mapping = &self.inputs.mapping;
        h += &format!(
            "# mapping: {} ({})\n",
            self.inputs.mapping_source,
            if mapping.is_reconstruction() {
                "reconstructed numbering"
            } else {
                "custom numbering"
            }
        );
        h += &format!("# locations only: {}\n", self.options.locations_only);
        match &self.stages.sample {
            Some(s) => {
                h += &format!(
                    "# sample: seeds={} rng_seed={}\n",
                    s.seeds.len(),
                    self.options.rng_seed
                )
            }
            None => h += "# sample: none\n",
        }
        h += &format!(
            "# transition: {} -> {}\n",
            self.analysed[self.origin].label(),
            self.analysed[self.destination].label()
        );
        h += &format!(
            "# context snapshot: {} (timezone window {})\n",
            self.analysed[self.focus].label(),
            self.options.timezone_window
        );
        h
    }

    fn analysed_stage(&self) -> &'static str {
        if self.stages.sample.is_some() {
            "triangle-graph"
        } else if self.stages.locations_only {
            "locations only"
        } else {
            "full"
        }
    }

    fn census_of(&self, stage: &'static str, k: usize, snapshot: &Snapshot) -> CensusResult {
        self.censuses
            .borrow_mut()
            .entry((stage, k))
            .or_insert_with(|| run_census(snapshot))
            .clone()
    }

    fn analysed_census(&self, k: usize) -> CensusResult {
        self.census_of(self.analysed_stage(), k, &self.analysed[k])
    }

    fn evolution(&self) -> Result<&Evolution, CliError> {
        if let Some(e) = self.evolution.get() {
            return Ok(e);
        }
        let e = Evolution::track(self.analysed, self.options.memory_budget)?;
        Ok(self.evolution.get_or_init(|| e))
    }

    fn type_of(&self, code: Option<TriadCode>) -> u8 {
        self.inputs.mapping.type_of(code)
    }

    fn codes(&self) -> [TriadCode; 13] {
        self.inputs.mapping.codes_in_type_order()
    }

    fn csv(&self, columns: &[&str], rows: Vec<Vec<String>>) -> String {
        let mut out = self.header.clone();
        out += &columns
            .iter()
            .map(|c| quote(c))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in rows {
            out += &row.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
        out
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

fn opt_fixed(x: Option<f64>, decimals: usize) -> String {
    x.map_or_else(String::new, |v| fixed(v, decimals))
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

fn state_label(code: Option<TriadCode>) -> &'static str {
    code.map_or("none", TriadCode::as_str)
}

pub fn ingest(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let inputs = ctx.inputs;
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    for (entry, s) in inputs.manifest.snapshots.iter().zip(&inputs.full) {
        let r = s.report();
        rows.push(vec![
            s.label().to_owned(),
            entry.path.clone(),
            r.lines.to_string(),
            s.node_count().to_string(),
            s.edge_count().to_string(),
            r.self_loops.to_string(),
            r.duplicates.to_string(),
        ]);
        snapshots.push(json!({
            "label": s.label(),
            "path": entry.path,
            "lines": r.lines,
            "nodes": s.node_count(),
            "edges": s.edge_count(),
            "self_loops": r.self_loops,
            "duplicates": r.duplicates,
        }));
    }
    out.add(
        "ingest.csv",
        ctx.csv(
            &[
                "snapshot",
                "path",
                "lines",
                "nodes",
                "edges",
                "self_loops",
                "duplicates",
            ],
            rows,
        ),
    );
    let profiles = inputs.profiles.as_ref().map(|p| {
        json!({
            "path": inputs.manifest.profiles,
            "loaded": p.profiles.len(),
            "rejected": p.rejected,
            "unknown_ids": p.unknown_ids,
            "repeated": p.repeated,
        })
    });
    out.add(
        "ingest.json",
        json_text(&json!({ "snapshots": snapshots, "profiles": profiles })),
    );
    Ok(())
}

pub fn census(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let codes = ctx.codes();
    let mut long = Vec::new();
    let mut wide = Vec::new();
    let mut doc = Vec::new();
    for k in 0..ctx.analysed.len() {
        let result = ctx.analysed_census(k);
        let label = ctx.analysed[k].label().to_owned();
        let freq = result.frequencies();
        let mut wide_row = vec![label.clone()];
        let mut types = Vec::new();
        for &code in &codes {
            let percent = freq[code.index()];
            long.push(vec![
                label.clone(),
                ctx.type_of(Some(code)).to_string(),
                code.as_str().to_owned(),
                result.count(code).to_string(),
                fixed(percent, 5),
            ]);
            wide_row.push(fixed(percent, 5));
            types.push(json!({
                "type": ctx.type_of(Some(code)),
                "code": code,
                "count": result.count(code),
                "percent": percent,
            }));
        }
        wide.push(wide_row);
        doc.push(json!({
            "snapshot": label,
            "triangles": result.total_triangles(),
            "types": types,
        }));
    }
    out.add(
        "census.csv",
        ctx.csv(&["snapshot", "type", "code", "count", "percent"], long),
    );
    let type_columns: Vec<String> = codes
        .iter()
        .map(|&c| ctx.type_of(Some(c)).to_string())
        .collect();
    let mut columns = vec!["snapshot"];
    columns.extend(type_columns.iter().map(String::as_str));
    out.add("census_table.csv", ctx.csv(&columns, wide));
    out.add(
        "census.json",
        json_text(&json!({ "stage": ctx.analysed_stage(), "snapshots": doc })),
    );
    Ok(())
}

pub fn sample(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for k in 0..ctx.inputs.full.len() {
        for (stage, snapshot) in ctx.stages.stages_at(ctx.inputs, k) {
            let triangles = ctx.census_of(stage, k, snapshot).total_triangles();
            rows.push(vec![
                snapshot.label().to_owned(),
                stage.to_owned(),
                snapshot.node_count().to_string(),
                snapshot.edge_count().to_string(),
                triangles.to_string(),
            ]);
        }
    }
    out.add(
        "graphs.csv",
        ctx.csv(&["snapshot", "stage", "nodes", "edges", "triangles"], rows),
    );
    if let Some(sample) = &ctx.stages.sample {
        let rows = sample
            .seeds
            .iter()
            .map(|&s| vec![ctx.inputs.node_name(s).to_owned()])
            .collect();
        out.add("seeds.csv", ctx.csv(&["seed"], rows));
    }
    Ok(())
}

fn matrix_file(ctx: &Context, m: &TransitionMatrix) -> String {
    let mut states = m.states();
    states.sort_by_key(|&s| ctx.type_of(s));
    let labels: Vec<String> = states.iter().map(|&s| ctx.type_of(s).to_string()).collect();
    let mut columns = vec!["view", "from"];
    columns.extend(labels.iter().map(String::as_str));
    let mut rows = Vec::new();
    for view in MatrixView::ALL {
        for &from in &states {
            let mut row = vec![view.as_str().to_owned(), ctx.type_of(from).to_string()];
            for &to in &states {
                row.push(match view {
                    MatrixView::Counts => m.count(from, to).to_string(),
                    MatrixView::Changes if from == to => "---".to_owned(),
                    _ => fixed(m.value(view, from, to), 3),
                });
            }
            rows.push(row);
        }
    }
    ctx.csv(&columns, rows)
}

fn bubble_file(ctx: &Context, m: &TransitionMatrix) -> String {
    let mut rows = Vec::new();
    for view in [
        MatrixView::RowNormalized,
        MatrixView::ColumnNormalized,
        MatrixView::Changes,
    ] {
        let mut bubbles = m.bubbles(view, ctx.options.bubble_threshold);
        bubbles.sort_by_key(|b| (ctx.type_of(b.origin), ctx.type_of(b.destination)));
        for b in bubbles {
            rows.push(vec![
                view.as_str().to_owned(),
                ctx.type_of(b.origin).to_string(),
                ctx.type_of(b.destination).to_string(),
                fixed(b.percent, 3),
            ]);
        }
    }
    ctx.csv(&["view", "from", "to", "percent"], rows)
}

fn matrix_json(ctx: &Context, m: &TransitionMatrix) -> Value {
    let mut states = m.states();
    states.sort_by_key(|&s| ctx.type_of(s));
    let cells: Vec<Value> = states
        .iter()
        .flat_map(|&from| states.iter().map(move |&to| (from, to)))
        .filter(|&(from, to)| m.count(from, to) > 0)
        .map(|(from, to)| {
            json!({
                "from": ctx.type_of(from),
                "to": ctx.type_of(to),
                "count": m.count(from, to),
                "overall": m.value(MatrixView::Overall, from, to),
                "row_normalized": m.value(MatrixView::RowNormalized, from, to),
                "column_normalized": m.value(MatrixView::ColumnNormalized, from, to),
                "changes": m.value(MatrixView::Changes, from, to),
            })
        })
        .collect();
    json!({
        "origin": m.origin_label,
        "destination": m.destination_label,
        "include_type0": m.include_type0,
        "total": m.total(),
        "cells": cells,
    })
}

fn summary_files(ctx: &Context, summary: &ChangeSummary, tracked: usize, out: &mut Outputs) {
    let mut per_type = summary.per_type.clone();
    per_type.sort_by_key(|c| ctx.type_of(c.state));
    let rows = per_type
        .iter()
        .map(|c| {
            vec![
                ctx.type_of(c.state).to_string(),
                state_label(c.state).to_owned(),
                c.origin_count.to_string(),
                c.unchanged.to_string(),
                opt_fixed(c.change_probability.map(|p| 100.0 * p), 2),
            ]
        })
        .collect();
    out.add(
        "change_probability.csv",
        ctx.csv(
            &[
                "type",
                "code",
                "origin_count",
                "unchanged",
                "change_percent",
            ],
            rows,
        ),
    );

    let freq: BTreeMap<u8, Option<f64>> = summary
        .per_type_without_type0
        .iter()
        .map(|c| (ctx.type_of(c.state), c.change_probability))
        .collect();
    let neighbor =
        |n: Option<Option<TriadCode>>| n.map_or_else(String::new, |s| ctx.type_of(s).to_string());
    let mut neighbors = summary.neighbors.clone();
    neighbors.sort_by_key(|n| ctx.type_of(Some(n.code)));
    let rows = neighbors
        .iter()
        .map(|n| {
            let t = ctx.type_of(Some(n.code));
            vec![
                t.to_string(),
                n.code.as_str().to_owned(),
                neighbor(n.predecessor),
                neighbor(n.successor),
                opt_fixed(freq[&t].map(|p| 100.0 * p), 2),
            ]
        })
        .collect();
    out.add(
        "summary_table.csv",
        ctx.csv(
            &["type", "code", "predecessor", "successor", "freq_percent"],
            rows,
        ),
    );

    let pct = |x: Option<f64>| opt_fixed(x.map(|v| 100.0 * v), 2);
    let rows = vec![
        vec!["tracked_triples".to_owned(), tracked.to_string()],
        vec![
            "changed_transitions".to_owned(),
            summary.changed_transitions.to_string(),
        ],
        vec![
            "changed_without_type0_percent".to_owned(),
            pct(summary.changed_fraction_without_type0),
        ],
        vec![
            "sequence_changed_percent".to_owned(),
            pct(summary.sequence_change_fraction),
        ],
        vec![
            "less_connected_percent".to_owned(),
            pct(summary.less_connected_fraction),
        ],
        vec![
            "dissolved_percent".to_owned(),
            pct(summary.dissolution_fraction),
        ],
    ];
    out.add("change_overview.csv", ctx.csv(&["metric", "value"], rows));
}

pub fn transitions(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let evolution = ctx.evolution()?;
    let with = evolution.transition_matrix(ctx.origin, ctx.destination, true)?;
    let mut matrices = Vec::new();
    if matches!(ctx.options.type0, Type0::With | Type0::Both) {
        matrices.push(("with_type0", with.clone()));
    }
    if matches!(ctx.options.type0, Type0::Without | Type0::Both) {
        matrices.push(("without_type0", with.without_type0()));
    }
    let mut docs = Vec::new();
    for (suffix, m) in &matrices {
        out.add(format!("transitions_{suffix}.csv"), matrix_file(ctx, m));
        out.add(format!("bubbles_{suffix}.csv"), bubble_file(ctx, m));
        docs.push(matrix_json(ctx, m));
    }
    let summary = change_summary(
        evolution,
        ctx.origin,
        ctx.destination,
        SummaryOptions::default(),
    )?;
    summary_files(ctx, &summary, evolution.universe().len(), out);

    let mut per_type = summary.per_type.clone();
    per_type.sort_by_key(|c| ctx.type_of(c.state));
    let per_type: Vec<Value> = per_type
        .iter()
        .map(|c| {
            json!({
                "type": ctx.type_of(c.state),
                "origin_count": c.origin_count,
                "unchanged": c.unchanged,
                "change_probability": c.change_probability,
            })
        })
        .collect();
    out.add(
        "transitions.json",
        json_text(&json!({
            "snapshots": evolution.labels(),
            "tracked_triples": evolution.universe().len(),
            "matrices": docs,
            "per_type": per_type,
            "changed_fraction_without_type0": summary.changed_fraction_without_type0,
            "sequence_change_fraction": summary.sequence_change_fraction,
            "less_connected_fraction": summary.less_connected_fraction,
            "dissolution_fraction": summary.dissolution_fraction,
        })),
    );
    Ok(())
}

pub fn geo(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let profiles = ctx
        .inputs
        .profiles()
        .ok_or_else(|| CliError::config("geo reports need a profiles entry in the manifest"))?;
    let snapshot = &ctx.analysed[ctx.focus];
    let set = triangle_set(snapshot, ctx.options.memory_budget)?;
    let stats = triangle_geo_stats(snapshot, set.entries(), profiles);
    let tz = timezone_spread(set.entries(), profiles, ctx.options.timezone_window)?;
    let codes = ctx.codes();
    let by_code = |code: TriadCode| &stats.per_type[code.index()];

    let summary_cells = |s: Option<triad_core::stats::Summary>| {
        [
            opt_fixed(s.map(|s| s.mean), 3),
            opt_fixed(s.map(|s| s.q1), 3),
            opt_fixed(s.map(|s| s.median), 3),
            opt_fixed(s.map(|s| s.q3), 3),
        ]
    };
    let distance_columns = [
        "type",
        "code",
        "triangles",
        "covered",
        "mean_km",
        "q1_km",
        "median_km",
        "q3_km",
    ];
    let rows = codes
        .iter()
        .map(|&code| {
            let d = by_code(code);
            let mut row = vec![
                ctx.type_of(Some(code)).to_string(),
                code.as_str().to_owned(),
                d.triangles.to_string(),
                d.covered.to_string(),
            ];
            row.extend(summary_cells(d.mean_distance));
            row
        })
        .collect();
    out.add("geo_distance_by_type.csv", ctx.csv(&distance_columns, rows));

    let rows = codes
        .iter()
        .filter(|c| c.mutual_count() >= 1)
        .map(|&code| {
            let d = by_code(code);
            let mut row = vec![
                ctx.type_of(Some(code)).to_string(),
                code.as_str().to_owned(),
                d.triangles.to_string(),
                d.covered.to_string(),
            ];
            row.extend(summary_cells(d.mutual_link_distance));
            row
        })
        .collect();
    out.add(
        "geo_bidirectional_by_type.csv",
        ctx.csv(&distance_columns, rows),
    );

    let rows = stats
        .populations
        .iter()
        .flat_map(|p| {
            p.cdf.iter().map(move |pt| {
                vec![
                    p.name.to_owned(),
                    fixed(pt.value, 3),
                    pt.count.to_string(),
                    fixed(pt.cdf, 6),
                    fixed(pt.ccdf, 6),
                ]
            })
        })
        .collect();
    out.add(
        "geo_distance_cdf.csv",
        ctx.csv(&["population", "distance_km", "count", "cdf", "ccdf"], rows),
    );

    let census = ctx.analysed_census(ctx.focus);
    let freq = census.frequencies();
    let k = tz.window;
    let row_of = |code: TriadCode| &tz.rows[code.index()];
    let share = |n: u64, d: u64| {
        if d == 0 {
            String::new()
        } else {
            fixed(100.0 * n as f64 / d as f64, 2)
        }
    };
    let metric_row = |name: String, cell: &dyn Fn(TriadCode) -> String| {
        let mut row = vec![name];
        row.extend(codes.iter().map(|&c| cell(c)));
        row
    };
    let rows = vec![
        metric_row(format!("triangles_within_{k}"), &|c| {
            row_of(c).within_window.to_string()
        }),
        metric_row(format!("percent_within_{k}"), &|c| {
            share(row_of(c).within_window, row_of(c).covered)
        }),
        metric_row("percent_within_1".to_owned(), &|c| {
            share(row_of(c).within_one, row_of(c).covered)
        }),
        metric_row("percent_of_all_triangles".to_owned(), &|c| {
            fixed(freq[c.index()], 5)
        }),
        metric_row("covered_triangles".to_owned(), &|c| {
            row_of(c).covered.to_string()
        }),
    ];
    let type_columns: Vec<String> = codes
        .iter()
        .map(|&c| ctx.type_of(Some(c)).to_string())
        .collect();
    let mut columns = vec!["metric"];
    columns.extend(type_columns.iter().map(String::as_str));
    out.add("timezone_neighbors.csv", ctx.csv(&columns, rows));

    let zone_columns: Vec<String> = (-12..=12).map(|z| format!("utc{z:+}")).collect();
    let mut columns = vec!["type", "code"];
    columns.extend(zone_columns.iter().map(String::as_str));
    let rows = codes
        .iter()
        .map(|&code| {
            let mut row = vec![
                ctx.type_of(Some(code)).to_string(),
                code.as_str().to_owned(),
            ];
            row.extend(row_of(code).zone_histogram.iter().map(u64::to_string));
            row
        })
        .collect();
    out.add("timezone_histogram.csv", ctx.csv(&columns, rows));

    let load = ctx
        .inputs
        .profiles
        .as_ref()
        .expect("profiles checked above");
    out.add(
        "geo.json",
        json_text(&json!({
            "snapshot": snapshot.label(),
            "triangles": stats.triangles,
            "uncovered_triangles": stats.uncovered_triangles,
            "profiles_loaded": load.profiles.len(),
            "profile_rows_rejected": load.rejected.len(),
            "profile_unknown_ids": load.unknown_ids,
            "per_type": stats.per_type,
            "populations": stats.populations,
            "timezones": tz,
        })),
    );
    Ok(())
}

pub fn degrees(ctx: &Context, out: &mut Outputs) -> Result<(), CliError> {
    let stages = ctx.stages.stages_at(ctx.inputs, ctx.focus);
    let evolution = ctx.evolution()?;
    let report: DegreeReport = degree_report(
        &stages,
        Some(TransitionInput {
            evolution,
            snapshots: ctx.analysed,
            origin: ctx.origin,
            destination: ctx.destination,
        }),
        ctx.options.top,
    );

    let rows = report
        .series
        .iter()
        .flat_map(|s| {
            s.points.iter().map(move |p| {
                vec![
                    s.stage.clone(),
                    s.direction.as_str().to_owned(),
                    fixed(p.value, 0),
                    p.count.to_string(),
                    fixed(p.cdf, 6),
                    fixed(p.ccdf, 6),
                ]
            })
        })
        .collect();
    out.add(
        "degree_distributions.csv",
        ctx.csv(
            &["stage", "direction", "degree", "count", "cdf", "ccdf"],
            rows,
        ),
    );

    let mut transitions = report.transitions.clone();
    transitions.sort_by_key(|t| (t.class, t.origin.map_or(0, |c| ctx.type_of(Some(c)))));
    let rows = transitions
        .iter()
        .map(|t| {
            vec![
                t.class.as_str().to_owned(),
                t.origin
                    .map_or("all".to_owned(), |c| ctx.type_of(Some(c)).to_string()),
                t.origin.map_or("all", TriadCode::as_str).to_owned(),
                t.triples.to_string(),
                opt_fixed(t.summary.map(|s| s.mean), 2),
                opt_fixed(t.summary.map(|s| s.q1), 2),
                opt_fixed(t.summary.map(|s| s.median), 2),
                opt_fixed(t.summary.map(|s| s.q3), 2),
            ]
        })
        .collect();
    out.add(
        "outdegree_by_transition.csv",
        ctx.csv(
            &[
                "class", "type", "code", "triples", "mean", "q1", "median", "q3",
            ],
            rows,
        ),
    );

    let reduction_columns: Vec<String> = stages[1..]
        .iter()
        .map(|(name, _)| format!("percent_in_{}", name.replace([' ', '-'], "_")))
        .collect();
    let mut columns = vec!["name", "rank", "followers"];
    columns.extend(reduction_columns.iter().map(String::as_str));
    let rows = report
        .superstars
        .iter()
        .map(|s| {
            let mut row = vec![
                ctx.inputs.node_name(s.node).to_owned(),
                s.rank.to_string(),
                s.followers.to_string(),
            ];
            row.extend(s.retention.iter().map(|(_, p)| fixed(*p, 2)));
            row
        })
        .collect();
    out.add("superstars.csv", ctx.csv(&columns, rows));

    let superstars: Vec<Value> = report
        .superstars
        .iter()
        .map(|s| {
            json!({
                "name": ctx.inputs.node_name(s.node),
                "rank": s.rank,
                "followers": s.followers,
                "retention": s.retention,
            })
        })
        .collect();
    out.add(
        "degrees.json",
        json_text(&json!({
            "snapshot": ctx.analysed[ctx.focus].label(),
            "series": report.series,
            "transitions": report.transitions,
            "superstars": superstars,
        })),
    );
    Ok(())
}
