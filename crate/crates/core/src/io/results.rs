//! FI result documents and the writers that serialise them.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fisher::{FiPoint, FiSeries};
use crate::io::csv_input::{reader_builder, write_matrix_csv};
use crate::matrix::TimeSeriesMatrix;
use crate::regime::RegimeVerdict;
use crate::registry::{result_writers, Named};

/// Where the size of state came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SosSource {
    Explicit,
    Estimated {
        method: String,
        k: f64,
        stable_range: Option<(usize, usize)>,
    },
}

/// Everything needed to replay a run on the same input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub variables: Vec<String>,
    pub input_rows: usize,
    pub input_sha256: String,
    pub window_size: usize,
    pub increment: usize,
    pub state_size: Vec<f64>,
    pub state_size_source: SosSource,
    pub slope_tol: f64,
    /// Inclusive time-label range used for regime classification.
    pub regime_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub metadata: RunMetadata,
    pub fi_points: Vec<FiPoint>,
    /// Absent when the series has fewer than two points.
    pub verdict: Option<RegimeVerdict>,
}

impl ResultDocument {
    pub fn new(metadata: RunMetadata, series: &FiSeries, verdict: Option<RegimeVerdict>) -> Self {
        Self {
            metadata,
            fi_points: series.points.clone(),
            verdict,
        }
    }
}

/// SHA-256 over the canonical CSV rendering of `matrix`.
pub fn matrix_digest(matrix: &TimeSeriesMatrix) -> String {
    let mut buf = Vec::new();
    write_matrix_csv(matrix, "time", &mut buf).expect("writing to memory");
    let digest = Sha256::digest(&buf);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Serialises a [`ResultDocument`] in one output format.
pub trait ResultWriter: Named + Send + Sync {
    fn extension(&self) -> &'static str;
    fn write(&self, doc: &ResultDocument, out: &mut dyn Write) -> io::Result<()>;
}

/// `time,fi,m_states` rows preceded by `# key=value` metadata comments.
pub struct CsvWriter;

/// The full document, pretty-printed.
pub struct JsonWriter;

impl Named for CsvWriter {
    fn name(&self) -> &'static str {
        "csv"
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

impl ResultWriter for CsvWriter {
    fn extension(&self) -> &'static str {
        "csv"
    }

    fn write(&self, doc: &ResultDocument, out: &mut dyn Write) -> io::Result<()> {
        let m = &doc.metadata;
        writeln!(out, "# tool={}", m.tool)?;
        writeln!(out, "# variables={}", m.variables.join(";"))?;
        writeln!(out, "# input_rows={}", m.input_rows)?;
        writeln!(out, "# input_sha256={}", m.input_sha256)?;
        writeln!(out, "# window_size={}", m.window_size)?;
        writeln!(out, "# increment={}", m.increment)?;
        writeln!(out, "# state_size={}", join(&m.state_size))?;
        match &m.state_size_source {
            SosSource::Explicit => writeln!(out, "# state_size_source=explicit")?,
            SosSource::Estimated {
                method,
                k,
                stable_range,
            } => {
                let range = stable_range.map_or("all".to_string(), |(a, b)| format!("{a}:{b}"));
                writeln!(
                    out,
                    "# state_size_source={method} k={k} stable_range={range}"
                )?
            }
        }
        writeln!(out, "# slope_tol={}", m.slope_tol)?;
        if let Some((a, b)) = m.regime_range {
            writeln!(out, "# regime_range={a}:{b}")?;
        }
        if let Some(v) = &doc.verdict {
            writeln!(
                out,
                "# verdict={} slope={} mean_fi={}",
                v.category, v.slope, v.mean_fi
            )?;
        }
        writeln!(out, "time,fi,m_states")?;
        for p in &doc.fi_points {
            writeln!(out, "{},{},{}", p.time_label, p.fi, p.m_states)?;
        }
        Ok(())
    }
}

impl Named for JsonWriter {
    fn name(&self) -> &'static str {
        "json"
    }
}

impl ResultWriter for JsonWriter {
    fn extension(&self) -> &'static str {
        "json"
    }

    fn write(&self, doc: &ResultDocument, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, doc)?;
        writeln!(out)
    }
}

pub fn write_results_to(doc: &ResultDocument, format: &str, out: &mut dyn Write) -> Result<()> {
    let registry = result_writers();
    let writer = registry.get(format)?;
    writer.write(doc, out).map_err(|e| Error::io("<stream>", e))
}

pub fn write_results(doc: &ResultDocument, format: &str, destination: &Path) -> Result<()> {
    let registry = result_writers();
    let writer = registry.get(format)?;
    let file = File::create(destination).map_err(|e| Error::io(destination, e))?;
    let mut out = BufWriter::new(file);
    writer
        .write(doc, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(destination, e))
}

/// One data row of a results CSV.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct FiRow {
    pub time: f64,
    pub fi: f64,
    pub m_states: usize,
}

pub fn read_results_csv<R: Read>(source: R) -> Result<Vec<FiRow>> {
    let mut rdr = reader_builder().flexible(false).from_reader(source);
    rdr.deserialize()
        .map(|r| {
            r.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                column: String::new(),
                message: e.to_string(),
            })
        })
        .collect()
}
