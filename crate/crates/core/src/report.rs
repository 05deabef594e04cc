//! Cross-task tables and drops relative to the original captions.
//!
//! All arithmetic happens on values rounded to tenths and held as integers,
//! so `baseline - drop == task` holds exactly at the printed precision.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturb::{PerturbationKind, ORIGINAL_TASK_ID};
use crate::retrieval::{Direction, MetricsReport};

/// Value rounded to one decimal, stored as tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tenths(pub i64);

impl Tenths {
    pub fn of(x: f64) -> Self {
        Tenths((x * 10.0).round() as i64)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl std::fmt::Display for Tenths {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}{}.{}", a / 10, a % 10)
    }
}

impl Serialize for Tenths {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Tenths {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Tenths::of)
    }
}

/// Sort key placing `original` first, then the tasks in their fixed order,
/// then anything else alphabetically.
pub fn task_order(task_id: &str) -> (usize, String) {
    if task_id == ORIGINAL_TASK_ID {
        return (0, String::new());
    }
    match PerturbationKind::ALL.iter().position(|k| k.task_id() == task_id) {
        Some(i) => (i + 1, String::new()),
        None => (PerturbationKind::ALL.len() + 1, task_id.to_string()),
    }
}

/// All reports of one run (one model or encoder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunComparison {
    pub label: String,
    pub reports: Vec<MetricsReport>,
}

impl RunComparison {
    pub fn new(label: impl Into<String>, reports: Vec<MetricsReport>) -> Self {
        RunComparison {
            label: label.into(),
            reports,
        }
    }

    pub fn get(&self, task_id: &str, direction: Direction) -> Option<&MetricsReport> {
        self.reports
            .iter()
            .find(|r| r.task_id == task_id && r.direction == direction)
    }

    fn columns(&self) -> BTreeSet<((usize, String), String, Direction)> {
        self.reports
            .iter()
            .map(|r| (task_order(&r.task_id), r.task_id.clone(), r.direction))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub task_id: String,
    pub direction: Direction,
    pub baseline_r1: Tenths,
    pub task_r1: Tenths,
    /// Baseline minus task, in R@1 points. Negative when the task scores higher.
    pub absolute_drop: Tenths,
    /// Drop as a percentage of the baseline; absent when the baseline is 0.
    pub relative_drop: Option<Tenths>,
}

pub fn delta_table(comp: &RunComparison) -> Result<Vec<DeltaEntry>> {
    let mut out = Vec::new();
    for (_, task_id, direction) in comp.columns() {
        if task_id == ORIGINAL_TASK_ID {
            continue;
        }
        let base = comp
            .get(ORIGINAL_TASK_ID, direction)
            .ok_or_else(|| Error::MissingBaseline(comp.label.clone()))?;
        let task = comp.get(&task_id, direction).expect("column comes from reports");
        let b = Tenths::of(base.r1);
        let t = Tenths::of(task.r1);
        let drop = Tenths(b.0 - t.0);
        let relative = (b.0 > 0).then(|| Tenths::of(100.0 * drop.0 as f64 / b.0 as f64));
        out.push(DeltaEntry {
            task_id,
            direction,
            baseline_r1: b,
            task_r1: t,
            absolute_drop: drop,
            relative_drop: relative,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

fn all_columns(comparisons: &[RunComparison]) -> Vec<(String, Direction)> {
    let mut cols = BTreeSet::new();
    for c in comparisons {
        cols.extend(c.columns());
    }
    cols.into_iter().map(|(_, t, d)| (t, d)).collect()
}

fn cell(comp: &RunComparison, task: &str, dir: Direction) -> Option<String> {
    comp.get(task, dir).map(|r| Tenths::of(r.r1).to_string())
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    task_id: &'a str,
    direction: Direction,
    r1: Tenths,
    r5: Tenths,
    r10: Tenths,
    median_rank: Tenths,
    mean_rank: Tenths,
    query_count: usize,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    label: &'a str,
    reports: Vec<JsonReport<'a>>,
    deltas: Option<Vec<DeltaEntry>>,
}

/// R@1 table: one row per run, one column per (task, direction), tasks in
/// fixed order with `original` first. JSON additionally carries every metric
/// and the drop table of each run that has a baseline.
pub fn emit(comparisons: &[RunComparison], format: ReportFormat) -> Result<String> {
    if comparisons.is_empty() {
        return Err(Error::EmptyInput);
    }
    let cols = all_columns(comparisons);
    match format {
        ReportFormat::Markdown => {
            let mut out = String::from("| run |");
            for (t, d) in &cols {
                let _ = write!(out, " {t} {d} |");
            }
            out.push_str("\n| --- |");
            for _ in &cols {
                out.push_str(" ---: |");
            }
            out.push('\n');
            for c in comparisons {
                let _ = write!(out, "| {} |", md_escape(&c.label));
                for (t, d) in &cols {
                    let _ = write!(out, " {} |", cell(c, t, *d).unwrap_or_else(|| "-".into()));
                }
                out.push('\n');
            }
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut rows = vec![std::iter::once("run".to_string())
                .chain(cols.iter().map(|(t, d)| format!("{t}/{d}")))
                .collect::<Vec<_>>()];
            for c in comparisons {
                let mut row = vec![c.label.clone()];
                row.extend(cols.iter().map(|(t, d)| cell(c, t, *d).unwrap_or_default()));
                rows.push(row);
            }
            csv_string(rows)
        }
        ReportFormat::Json => {
            let runs: Vec<JsonRun> = comparisons
                .iter()
                .map(|c| {
                    let mut reports: Vec<&MetricsReport> = c.reports.iter().collect();
                    reports.sort_by_key(|r| (task_order(&r.task_id), r.direction));
                    JsonRun {
                        label: &c.label,
                        reports: reports
                            .into_iter()
                            .map(|r| JsonReport {
                                task_id: &r.task_id,
                                direction: r.direction,
                                r1: Tenths::of(r.r1),
                                r5: Tenths::of(r.r5),
                                r10: Tenths::of(r.r10),
                                median_rank: Tenths::of(r.median_rank),
                                mean_rank: Tenths::of(r.mean_rank),
                                query_count: r.query_count,
                            })
                            .collect(),
                        deltas: delta_table(c).ok(),
                    }
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "runs": runs }))
                .map_err(|e| Error::json("report", e))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Long-form drop table: one row per (run, task, direction).
pub fn emit_deltas(comparisons: &[RunComparison], format: ReportFormat) -> Result<String> {
    if comparisons.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows = Vec::new();
    for c in comparisons {
        for d in delta_table(c)? {
            rows.push((c.label.clone(), d));
        }
    }
    let fmt_rel = |d: &DeltaEntry| d.relative_drop.map(|r| r.to_string());
    match format {
        ReportFormat::Markdown => {
            let mut out = String::from(
                "| run | task | direction | original R@1 | task R@1 | drop | drop % |\n\
                 | --- | --- | --- | ---: | ---: | ---: | ---: |\n",
            );
            for (label, d) in &rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    md_escape(label),
                    d.task_id,
                    d.direction,
                    d.baseline_r1,
                    d.task_r1,
                    d.absolute_drop,
                    fmt_rel(d).unwrap_or_else(|| "-".into())
                );
            }
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut table = vec![[
                "run", "task", "direction", "original_r1", "task_r1", "drop", "drop_pct",
            ]
            .map(String::from)
            .to_vec()];
            for (label, d) in &rows {
                table.push(vec![
                    label.clone(),
                    d.task_id.clone(),
                    d.direction.to_string(),
                    d.baseline_r1.to_string(),
                    d.task_r1.to_string(),
                    d.absolute_drop.to_string(),
                    fmt_rel(d).unwrap_or_default(),
                ]);
            }
            csv_string(table)
        }
        ReportFormat::Json => {
            let runs: Vec<serde_json::Value> = rows
                .iter()
                .map(|(label, d)| serde_json::json!({ "run": label, "delta": d }))
                .collect();
            let mut s = serde_json::to_string_pretty(&runs).map_err(|e| Error::json("deltas", e))?;
            s.push('\n');
            Ok(s)
        }
    }
}
