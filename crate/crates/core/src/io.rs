//! File formats: CSV matrices for covariates and rewards, the canonical
//! JSON tree form, and machine-readable stat reports.
//!
//! CSV files are UTF-8, comma-delimited, with a mandatory header row:
//! covariate columns are named `x1..xp` and reward columns `a1..am`. Cells
//! are decimal numbers in standard or scientific notation. Tree JSON is
//! canonical: fixed key order, compact separators, shortest round-trip
//! float formatting, so parse-then-serialize of a canonical document is
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::bounded::SearchStats;
use crate::dataset::Dataset;
use crate::error::{CsvError, TreeParseError};
use crate::simulation::SimDataset;
use crate::tree::PolicyTree;

/// Loads a covariate file and a reward file into a validated dataset.
pub fn load_dataset(covariates_path: &Path, rewards_path: &Path) -> Result<Dataset, CsvError> {
    let covariates = read_matrix(covariates_path, "x")?;
    let rewards = read_matrix(rewards_path, "a")?;
    if covariates.len() != rewards.len() {
        return Err(CsvError::RowCountMismatch {
            covariate_rows: covariates.len(),
            reward_rows: rewards.len(),
        });
    }
    Ok(Dataset::build(covariates, rewards)?)
}

/// Loads a covariate file on its own (for prediction).
pub fn load_covariates(path: &Path) -> Result<Vec<Vec<f64>>, CsvError> {
    read_matrix(path, "x")
}

/// Reads a numeric matrix whose header must be `{prefix}1..{prefix}k`.
fn read_matrix(path: &Path, prefix: &str) -> Result<Vec<Vec<f64>>, CsvError> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                if let csv::ErrorKind::Io(io) = e.into_kind() {
                    CsvError::Io {
                        path: display.clone(),
                        source: io,
                    }
                } else {
                    unreachable!()
                }
            }
            _ => CsvError::Malformed {
                path: display.clone(),
                source: e,
            },
        })?;

    {
        let headers = reader.headers().map_err(|e| CsvError::Malformed {
            path: display.clone(),
            source: e,
        })?;
        let expected: Vec<String> = (1..=headers.len())
            .map(|k| format!("{prefix}{k}"))
            .collect();
        let found: Vec<&str> = headers.iter().collect();
        if found.iter().map(|s| s.to_string()).collect::<Vec<_>>() != expected {
            return Err(CsvError::HeaderMismatch {
                path: display,
                expected: expected.join(","),
                found: found.join(","),
            });
        }
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CsvError::Malformed {
            path: display.clone(),
            source: e,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut row = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| CsvError::NonNumericCell {
                path: display.clone(),
                line,
                column: col + 1,
                value: cell.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CsvError::NoRows { path: display });
    }
    Ok(rows)
}

/// Canonical JSON form of a tree: `{"leaf":{"action":..}}` or
/// `{"split":{"covariate":..,"value":..,"left":..,"right":..}}` with
/// 0-based indices.
pub fn tree_to_json(tree: &PolicyTree) -> String {
    serde_json::to_string(tree).expect("trees always serialize")
}

/// Parses the canonical JSON form, naming the path of any schema violation.
pub fn tree_from_json(text: &str) -> Result<PolicyTree, TreeParseError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|e| TreeParseError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn matrix_csv(header_prefix: &str, columns: usize, rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    for k in 1..=columns {
        if k > 1 {
            out.push(',');
        }
        out.push_str(header_prefix);
        out.push_str(&k.to_string());
    }
    out.push('\n');
    for row in rows {
        for (idx, v) in row.iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

/// Writes the four per-instance CSVs (`covariates.csv`, `actions.csv`,
/// `outcomes.csv`, `rewards.csv`) into `dir`. Actions are 0-based; rewards
/// are the doubly-robust scores.
pub fn write_sim_csvs(dir: &Path, sim: &SimDataset) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let p = sim.x[0].len();
    let m = sim.num_actions();
    write_atomic(
        &dir.join("covariates.csv"),
        matrix_csv("x", p, sim.x.iter().cloned()).as_bytes(),
    )?;
    write_atomic(
        &dir.join("rewards.csv"),
        matrix_csv("a", m, sim.scores.iter().cloned()).as_bytes(),
    )?;
    let mut actions = String::from("w\n");
    for &w in &sim.actions {
        actions.push_str(&w.to_string());
        actions.push('\n');
    }
    write_atomic(&dir.join("actions.csv"), actions.as_bytes())?;
    let mut outcomes = String::from("y\n");
    for &y in &sim.outcomes {
        outcomes.push_str(&format!("{y}\n"));
    }
    write_atomic(&dir.join("outcomes.csv"), outcomes.as_bytes())?;
    Ok(())
}

/// Writes via a temporary sibling file and a rename, so a failed run never
/// leaves a partial output file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}tmp{}",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default(),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Machine-readable training outcome: the optimal reward, the unit-set
/// method used, and the search counters.
#[derive(Debug, Serialize)]
pub struct TrainReport {
    pub reward: f64,
    pub method: String,
    pub stats: SearchStats,
}

impl TrainReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report always serializes")
    }
}
