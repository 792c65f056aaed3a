//! Deterministic CSV/JSON tables with a config-hash header and a JSON
//! metadata sidecar.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "true" } else { "false" }.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x.unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Twelve significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.11e}")
    }
}

fn rounded(x: f64) -> Value {
    if x.is_finite() {
        json!(format_number(x)
            .parse::<f64>()
            .expect("formatted float parses"))
    } else {
        Value::Null
    }
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let text = serde_json::to_string(&cfg.physics()).expect("config serializes");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub struct Emitter {
    dir: PathBuf,
    format: Format,
    hash: String,
    config: Value,
    tolerances: Value,
    started: Instant,
}

const HASH_PREFIX: &str = "# config_hash: ";

impl Emitter {
    pub fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let dir = PathBuf::from(&cfg.output.dir);
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            format: cfg.output.format,
            hash: config_hash(cfg),
            config: serde_json::to_value(cfg).expect("config serializes"),
            tolerances: json!({
                "solver_tol": cfg.solver.tol,
                "quadrature_rel_tol": cfg.quadrature.rel_tol,
            }),
            started: Instant::now(),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    fn data_text(&self, table: &Table) -> String {
        match self.format {
            Format::Csv => {
                let mut out = format!("{HASH_PREFIX}{}\n{}\n", self.hash, table.columns.join(","));
                for row in &table.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(x) => format_number(*x),
                            Cell::Text(s) => s.clone(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Array(
                            row.iter()
                                .map(|c| match c {
                                    Cell::Num(x) => rounded(*x),
                                    Cell::Text(s) => json!(s),
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let doc =
                    json!({ "config_hash": self.hash, "columns": table.columns, "rows": rows });
                serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
            }
        }
    }

    /// Write `<name>.csv` (or `.json`) and `<name>.meta.json`.
    pub fn write(
        &self,
        command: &str,
        name: &str,
        table: &Table,
        results: Value,
    ) -> Result<PathBuf, CliError> {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let data = self.dir.join(format!("{name}.{ext}"));
        fs::write(&data, self.data_text(table))?;
        let meta = json!({
            "command": command,
            "config_hash": self.hash,
            "config": self.config,
            "version": env!("CARGO_PKG_VERSION"),
            "parallel": bowstate::Execution::Parallel.is_parallel(),
            "tolerances": self.tolerances,
            "wall_time_s": self.started.elapsed().as_secs_f64(),
            "results": results,
        });
        let meta_path = self.dir.join(format!("{name}.meta.json"));
        fs::write(
            &meta_path,
            serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n",
        )?;
        for stale in self.stale_files()? {
            eprintln!(
                "warning: {} was produced by a different configuration; {} holds mixed outputs",
                stale.display(),
                self.dir.display()
            );
        }
        Ok(data)
    }

    /// Output files in the directory whose embedded hash differs from ours.
    pub fn stale_files(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut stale = Vec::new();
        let mut entries: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for path in entries {
            if let Some(h) = embedded_hash(&path) {
                if h != self.hash {
                    stale.push(path);
                }
            }
        }
        Ok(stale)
    }
}

/// Hash recorded in an output file, if it is one of ours.
pub fn embedded_hash(path: &Path) -> Option<String> {
    let ext = path.extension()?.to_str()?;
    let text = fs::read_to_string(path).ok()?;
    match ext {
        "csv" => text
            .lines()
            .next()?
            .strip_prefix(HASH_PREFIX)
            .map(str::to_string),
        "json" => serde_json::from_str::<Value>(&text)
            .ok()?
            .get("config_hash")?
            .as_str()
            .map(str::to_string),
        _ => None,
    }
}
