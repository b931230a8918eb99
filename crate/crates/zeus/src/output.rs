//! Result records and their CSV / JSON-lines encodings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of the CSV encoding.
pub const CSV_HEADER: [&str; 17] = [
    "experiment",
    "objective",
    "dim",
    "N",
    "iter_pso",
    "iter_bfgs",
    "required_c",
    "seed",
    "rep",
    "wall_time_s",
    "best_f",
    "euclid_error",
    "n_correct",
    "converged",
    "diverged",
    "stopped",
    "domain_error",
];

/// Outcome of one driver execution inside an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub objective: String,
    pub dim: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    pub iter_pso: usize,
    pub iter_bfgs: usize,
    pub required_c: usize,
    pub workers: usize,
    pub seed: u64,
    pub rep: usize,
    pub wall_time_s: f64,
    pub best_f: f64,
    pub best_point: Vec<f64>,
    pub euclid_error: f64,
    /// Runs ending within 0.5 of the known optimum.
    pub n_correct: usize,
    /// Runs ending within 1e-6 of the known optimum.
    pub n_correct_strict: usize,
    pub converged: usize,
    pub diverged: usize,
    pub stopped: usize,
    pub domain_error: usize,
}

/// The flat CSV row; field order matches [`CSV_HEADER`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub experiment: String,
    pub objective: String,
    pub dim: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    pub iter_pso: usize,
    pub iter_bfgs: usize,
    pub required_c: usize,
    pub seed: u64,
    pub rep: usize,
    pub wall_time_s: f64,
    pub best_f: f64,
    pub euclid_error: f64,
    pub n_correct: usize,
    pub converged: usize,
    pub diverged: usize,
    pub stopped: usize,
    pub domain_error: usize,
}

impl From<&RunRecord> for CsvRow {
    fn from(r: &RunRecord) -> Self {
        Self {
            experiment: r.experiment.clone(),
            objective: r.objective.clone(),
            dim: r.dim,
            particles: r.particles,
            iter_pso: r.iter_pso,
            iter_bfgs: r.iter_bfgs,
            required_c: r.required_c,
            seed: r.seed,
            rep: r.rep,
            wall_time_s: r.wall_time_s,
            best_f: r.best_f,
            euclid_error: r.euclid_error,
            n_correct: r.n_correct,
            converged: r.converged,
            diverged: r.diverged,
            stopped: r.stopped,
            domain_error: r.domain_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" | "jsonlines" => Ok(Format::JsonLines),
            other => Err(format!("unknown output format `{other}` (expected csv or jsonl)")),
        }
    }
}

enum Sink {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json(Box<dyn Write>),
}

/// Incremental writer; every record is flushed as soon as it is written.
pub struct RecordWriter {
    sink: Sink,
    path: PathBuf,
}

impl RecordWriter {
    /// Create (truncate) `path` and write the CSV header if applicable.
    pub fn create(path: &Path, format: Format) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Self::from_writer(Box::new(BufWriter::new(file)), format, path)
    }

    pub fn from_writer(inner: Box<dyn Write>, format: Format, label: &Path) -> Result<Self> {
        let mut w = Self {
            sink: match format {
                Format::Csv => Sink::Csv(Box::new(
                    csv::WriterBuilder::new().has_headers(false).from_writer(inner),
                )),
                Format::JsonLines => Sink::Json(inner),
            },
            path: label.to_path_buf(),
        };
        if let Sink::Csv(csv) = &mut w.sink {
            csv.write_record(CSV_HEADER).map_err(|e| csv_error(&w.path, e))?;
        }
        w.flush()?;
        Ok(w)
    }

    pub fn write(&mut self, record: &RunRecord) -> Result<()> {
        match &mut self.sink {
            Sink::Csv(csv) => csv
                .serialize(CsvRow::from(record))
                .map_err(|e| csv_error(&self.path, e))?,
            Sink::Json(out) => {
                serde_json::to_writer(&mut *out, record).map_err(|e| Error::Format {
                    path: self.path.clone(),
                    message: e.to_string(),
                })?;
                out.write_all(b"\n").map_err(|e| Error::io(&self.path, e))?;
            }
        }
        self.flush()
    }

    pub fn flush(&mut self) -> Result<()> {
        let r = match &mut self.sink {
            Sink::Csv(csv) => csv.flush(),
            Sink::Json(out) => out.flush(),
        };
        r.map_err(|e| Error::io(&self.path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

/// Write all records to `path`; the file is created before anything else
/// happens, so an unwritable path fails without partial output.
pub fn emit_results(records: &[RunRecord], format: Format, path: &Path) -> Result<()> {
    let mut w = RecordWriter::create(path, format)?;
    for r in records {
        w.write(r)?;
    }
    w.flush()
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: "unexpected CSV header".into(),
        });
    }
    reader
        .deserialize()
        .map(|row| row.map_err(|e| csv_error(path, e)))
        .collect()
}

pub fn read_json_lines(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}
