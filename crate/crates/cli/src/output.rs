//! Table and matrix rendering for the census and matrix dumps.

use anyhow::{bail, Result};
use nbspec_core::census::{CensusTable, Grouping};
use nbspec_core::spectra::OperatorTag;
use std::collections::BTreeMap;
use std::fmt::Write;

pub fn matrix_csv(m: &nalgebra::DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn meta_line(table: &CensusTable) -> String {
    format!(
        "precision={} rounding=half-away-from-zero nbl-convention=dtilde-b grouping={:?} min-degree={} graphs={}",
        table.config.precision,
        table.config.grouping,
        table.config.min_degree.map_or("none".to_string(), |d| d.to_string()),
        table.records.len(),
    )
}

/// Census rows keyed by vertex count (per-N groupings) or edge count (ByM).
struct Rows {
    key_label: &'static str,
    keys: Vec<u32>,
    universe: BTreeMap<u32, usize>,
    not_determined: BTreeMap<OperatorTag, BTreeMap<u32, usize>>,
    pair_pct: BTreeMap<OperatorTag, BTreeMap<u32, Option<f64>>>,
}

fn collect_rows(table: &CensusTable) -> Rows {
    let per_m = matches!(table.config.grouping, Grouping::ByM);
    let universe = if per_m { table.universe_by_m() } else { table.universe_by_n() };
    let mut not_determined = BTreeMap::new();
    let mut pair_pct = BTreeMap::new();
    for &op in &table.config.operators {
        let nd = if per_m { table.not_determined_by_m(op) } else { table.not_determined_by_n(op) };
        not_determined.insert(op, nd);
        if !per_m {
            pair_pct.insert(op, table.pair_percentage_by_n(op));
        }
    }
    Rows {
        key_label: if per_m { "M" } else { "N" },
        keys: universe.keys().copied().collect(),
        universe,
        not_determined,
        pair_pct,
    }
}

pub fn render_census(table: &CensusTable, format: &str, list_mates: bool) -> Result<String> {
    let rows = collect_rows(table);
    let ops = &table.config.operators;
    let mut out = String::new();
    match format {
        "md" => {
            let _ = writeln!(out, "<!-- {} -->", meta_line(table));
            let header: Vec<String> = ops.iter().map(|o| o.flag().to_string()).collect();
            let _ = writeln!(out, "| {} | #graphs | {} |", rows.key_label, header.join(" | "));
            let _ = writeln!(out, "|---|---|{}|", vec!["---"; ops.len()].join("|"));
            for &k in &rows.keys {
                let cells: Vec<String> = ops
                    .iter()
                    .map(|o| rows.not_determined[o].get(&k).copied().unwrap_or(0).to_string())
                    .collect();
                let _ = writeln!(out, "| {} | {} | {} |", k, rows.universe[&k], cells.join(" | "));
            }
            if !rows.pair_pct.is_empty() {
                let _ = writeln!(out, "\npercentage of not-determined graphs in classes of size two:");
                let _ = writeln!(out, "| {} | {} |", rows.key_label, header.join(" | "));
                let _ = writeln!(out, "|---|{}|", vec!["---"; ops.len()].join("|"));
                for &k in &rows.keys {
                    let cells: Vec<String> = ops
                        .iter()
                        .map(|o| match rows.pair_pct[o].get(&k).copied().flatten() {
                            Some(p) => format!("{p:.2}"),
                            None => "---".to_string(),
                        })
                        .collect();
                    let _ = writeln!(out, "| {} | {} |", k, cells.join(" | "));
                }
            }
            if list_mates {
                for &op in ops {
                    let _ = writeln!(out, "\nmates under {}:", op.flag());
                    for class in table.list_mates(op) {
                        let _ = writeln!(out, "- {}", class.join(" "));
                    }
                }
            }
        }
        "csv" => {
            let _ = writeln!(out, "# {}", meta_line(table));
            let header: Vec<String> = ops.iter().map(|o| o.flag().to_string()).collect();
            let _ = writeln!(out, "{},graphs,{}", rows.key_label, header.join(","));
            for &k in &rows.keys {
                let cells: Vec<String> = ops
                    .iter()
                    .map(|o| rows.not_determined[o].get(&k).copied().unwrap_or(0).to_string())
                    .collect();
                let _ = writeln!(out, "{},{},{}", k, rows.universe[&k], cells.join(","));
            }
        }
        "json" => {
            let mut json_rows = Vec::new();
            for &k in &rows.keys {
                let mut row = serde_json::json!({
                    rows.key_label.to_lowercase(): k,
                    "graphs": rows.universe[&k],
                });
                for &op in ops {
                    row[op.flag()] =
                        serde_json::json!(rows.not_determined[&op].get(&k).copied().unwrap_or(0));
                    if let Some(pct) = rows.pair_pct.get(&op).and_then(|m| m.get(&k)) {
                        row[format!("{}_pair_pct", op.flag())] = serde_json::json!(pct);
                    }
                }
                json_rows.push(row);
            }
            let mut doc = serde_json::json!({
                "meta": {
                    "precision": table.config.precision,
                    "rounding": "half-away-from-zero",
                    "nbl_convention": "dtilde-b",
                    "grouping": format!("{:?}", table.config.grouping),
                    "min_degree": table.config.min_degree,
                    "graphs": table.records.len(),
                },
                "rows": json_rows,
            });
            if list_mates {
                let mut mates = serde_json::Map::new();
                for &op in ops {
                    mates.insert(op.flag().to_string(), serde_json::json!(table.list_mates(op)));
                }
                doc["mates"] = serde_json::Value::Object(mates);
            }
            let _ = writeln!(out, "{doc}");
        }
        other => bail!("unknown format {other:?} (expect csv, md, json)"),
    }
    Ok(out)
}
