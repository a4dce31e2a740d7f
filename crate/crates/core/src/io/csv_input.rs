//! Time series CSV: header row, time label in the first column, one column
//! per variable. Comma separated, `.` decimals, optional quoting, LF or CRLF.
//! Lines starting with `#` are ignored.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{validate_matrix, RawTable, TimeSeriesMatrix};

/// Cell spellings treated as a missing observation.
const MISSING: &[&str] = &["", "NA", "N/A", "NaN", "nan", ".."];

pub(crate) fn reader_builder() -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'));
    b
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        line,
        column: String::new(),
        message: e.to_string(),
    }
}

pub fn read_csv<R: Read>(source: R) -> Result<TimeSeriesMatrix> {
    let mut rdr = reader_builder().from_reader(source);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyInput);
    }
    if header.len() < 2 {
        return Err(Error::Parse {
            line: 1,
            column: header[0].to_string(),
            message: "expected a time column followed by at least one variable".into(),
        });
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut times = Vec::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                column: String::new(),
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let time = record[0].parse::<f64>().map_err(|e| Error::Parse {
            line,
            column: header[0].to_string(),
            message: format!("`{}`: {e}", &record[0]),
        })?;
        let row = record
            .iter()
            .skip(1)
            .zip(&labels)
            .map(|(cell, label)| {
                if MISSING.contains(&cell) {
                    return Ok(f64::NAN);
                }
                cell.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    column: label.clone(),
                    message: format!("`{cell}`: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        times.push(time);
        rows.push(row);
    }

    validate_matrix(RawTable {
        labels,
        times,
        rows,
    })
}

pub fn read_csv_path(path: &Path) -> Result<TimeSeriesMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file)
}

/// Writes `matrix` in the same dialect [`read_csv`] accepts. Values use the
/// shortest representation that parses back to the identical `f64`.
pub fn write_matrix_csv<W: Write>(
    matrix: &TimeSeriesMatrix,
    time_header: &str,
    out: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once(time_header).chain(matrix.labels().iter().map(String::as_str)))?;
    for (t, row) in matrix.times().iter().zip(matrix.rows()) {
        w.write_record(std::iter::once(t.to_string()).chain(row.iter().map(f64::to_string)))?;
    }
    w.flush()?;
    Ok(())
}
