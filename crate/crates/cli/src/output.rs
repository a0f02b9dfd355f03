//! Tables, result records and the files they are written to.

use crate::args::Format;
use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One table cell. Floats are written with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => { vec![$($crate::output::Cell::from($v)),*] };
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Grid samples of a computed state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub x: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<Vec<f64>>,
    pub phi: Vec<f64>,
}

/// Persisted outcome of one run. Fields serialize in declaration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    /// Effective parameters, including defaults.
    pub spec: BTreeMap<String, String>,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub version: String,
    pub energy: Option<f64>,
    pub mu: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<u64>,
    pub converged: Option<bool>,
    /// Further named scalars; non-finite values are dropped.
    pub scalars: BTreeMap<String, f64>,
    /// Categorical results such as a verdict or a solve status.
    pub labels: BTreeMap<String, String>,
    pub profile: Option<Profile>,
}

impl ResultRecord {
    pub fn new(command: &str, spec: &BTreeMap<String, String>) -> Self {
        Self {
            command: command.to_string(),
            spec: spec.clone(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            energy: None,
            mu: None,
            residual: None,
            iterations: None,
            converged: None,
            scalars: BTreeMap::new(),
            labels: BTreeMap::new(),
            profile: None,
        }
    }

    pub fn scalar(&mut self, name: &str, v: f64) {
        if v.is_finite() {
            self.scalars.insert(name.to_string(), v);
        }
    }

    pub fn label(&mut self, name: &str, v: &str) {
        self.labels.insert(name.to_string(), v.to_string());
    }

    pub fn from_result(
        command: &str,
        spec: &BTreeMap<String, String>,
        r: &nlse_core::GroundStateResult,
    ) -> Self {
        let mut rec = Self::new(command, spec);
        rec.energy = Some(r.energy).filter(|v| v.is_finite());
        rec.mu = Some(r.mu).filter(|v| v.is_finite());
        rec.residual = Some(r.residual).filter(|v| v.is_finite());
        rec.iterations = Some(r.iterations as u64);
        rec.converged = Some(r.converged);
        rec
    }
}

/// Destination directory and format policy for a run.
#[derive(Clone, Debug)]
pub struct Output {
    pub dir: PathBuf,
    pub format: Format,
    pub quiet: bool,
}

impl Output {
    fn path(&self, name: &str, ext: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.dir.display())))?;
        Ok(self.dir.join(format!("{name}.{ext}")))
    }

    fn created(&self, p: &Path) {
        self.note(&format!("wrote {}", p.display()));
    }

    /// CSV unless the format is JSON only, in which case the table is a JSON document.
    pub fn table(&self, name: &str, t: &Table) -> Result<(), CliError> {
        if self.format.csv() {
            let p = self.path(name, "csv")?;
            t.write_csv(fs::File::create(&p)?)?;
            self.created(&p);
        } else {
            let p = self.path(name, "json")?;
            serde_json::to_writer(fs::File::create(&p)?, t)?;
            self.created(&p);
        }
        Ok(())
    }

    /// One record per document: `name.json` for one record, JSON lines otherwise.
    pub fn records(&self, name: &str, recs: &[ResultRecord]) -> Result<(), CliError> {
        if !self.format.json() {
            return Ok(());
        }
        if let [one] = recs {
            let p = self.path(name, "json")?;
            let mut f = fs::File::create(&p)?;
            serde_json::to_writer_pretty(&mut f, one)?;
            writeln!(f)?;
            self.created(&p);
        } else {
            let p = self.path(name, "jsonl")?;
            let mut f = std::io::BufWriter::new(fs::File::create(&p)?);
            for r in recs {
                serde_json::to_writer(&mut f, r)?;
                writeln!(f)?;
            }
            self.created(&p);
        }
        Ok(())
    }

    pub fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}
