//! CSV tables and run manifests, written atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::Failure;

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// Fixed-point decimal with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let s = format!("{x:.*}", (8 - mag).max(0) as usize);
    // Rounding can carry into a new leading digit (9.9999999996 → 10.00000000).
    if s.parse::<f64>().is_ok_and(|r| r.abs() >= 10f64.powi(mag + 1)) && mag < 8 {
        return format!("{x:.*}", (7 - mag).max(0) as usize);
    }
    s
}

pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => sig9(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

/// A CSV table held in memory until every table of a run is ready.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_bytes(&self) -> Result<Vec<u8>, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(runtime)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(runtime)?;
        }
        w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))
    }
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: Option<u64>,
    config: &'a C,
    outputs: Vec<String>,
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

/// Writes `tables` (the first to `csv_path`, the rest to `<stem>_<suffix>.csv`)
/// and a `<stem>.manifest.json` next to them. Nothing becomes visible until
/// every file has been rendered.
pub fn write_run<C: Serialize>(
    csv_path: &Path,
    command: &str,
    seed: Option<u64>,
    config: &C,
    tables: Vec<(&str, Table)>,
) -> Result<Vec<PathBuf>, Failure> {
    let dir = match csv_path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let stem = csv_path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Failure::Invalid(format!("bad output path {}", csv_path.display())))?
        .to_string();

    let mut files: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    for (i, (suffix, table)) in tables.iter().enumerate() {
        let path = if i == 0 {
            csv_path.to_path_buf()
        } else {
            dir.join(format!("{stem}_{suffix}.csv"))
        };
        files.push((path, table.to_bytes()?));
    }
    let manifest = Manifest {
        tool: "ltfb",
        version: VERSION,
        command,
        seed,
        config,
        outputs: files
            .iter()
            .map(|(p, _)| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest).map_err(runtime)?;
    json.push(b'\n');
    files.push((dir.join(format!("{stem}.manifest.json")), json));

    std::fs::create_dir_all(&dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    let mut staged = Vec::new();
    for (path, bytes) in &files {
        let mut tmp = NamedTempFile::new_in(&dir).map_err(runtime)?;
        tmp.write_all(bytes).map_err(runtime)?;
        staged.push((tmp, path.clone()));
    }
    for (tmp, path) in staged {
        tmp.persist(&path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
