//! World Bank open data (API v2) indicator client with an on-disk cache.
//!
//! Cache files use the same CSV dialect as time series input:
//! `year,<indicator id>` followed by one row per year.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::csv_input::read_csv;
use crate::matrix::TimeSeriesMatrix;

pub const API_BASE: &str = "https://api.worldbank.org/v2";
pub const CACHE_DIR_ENV: &str = "FISHER_INFO_CACHE_DIR";
/// Cache directory holding the committed demonstration fixture.
pub const FIXTURE_CACHE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/worldbank");

pub const GDP_PER_CAPITA: &str = "NY.GDP.PCAP.CD";
pub const POPULATION: &str = "SP.POP.TOTL";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorRequest {
    pub country_code: String,
    pub indicator_id: String,
    pub start: i32,
    pub end: i32,
}

impl IndicatorRequest {
    pub fn new(country_code: &str, indicator_id: &str, start: i32, end: i32) -> Result<Self> {
        let valid = |s: &str| {
            !s.is_empty()
                && s.chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_' || c == '-')
        };
        if !valid(country_code) || !valid(indicator_id) {
            return Err(Error::InvalidConfig(format!(
                "invalid country `{country_code}` or indicator `{indicator_id}`"
            )));
        }
        if start > end {
            return Err(Error::InvalidConfig(format!(
                "year range {start}..{end} is reversed"
            )));
        }
        Ok(Self {
            country_code: country_code.to_ascii_uppercase(),
            indicator_id: indicator_id.to_string(),
            start,
            end,
        })
    }

    pub fn cache_file_name(&self) -> String {
        format!(
            "{}_{}_{}-{}.csv",
            self.country_code, self.indicator_id, self.start, self.end
        )
    }
}

/// Indicator values by ascending year.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub indicator_id: String,
    pub observations: Vec<(i32, f64)>,
}

/// Supplies raw `(year, value)` observations; `None` marks a missing value.
pub trait IndicatorSource: Send + Sync {
    fn fetch(&self, req: &IndicatorRequest) -> Result<Vec<(i32, Option<f64>)>>;
}

/// Live HTTP access to the World Bank API.
pub struct WorldBankApi {
    base_url: String,
    client: reqwest::blocking::Client,
}

impl WorldBankApi {
    pub fn new(base_url: impl Into<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| Error::Network(e.to_string()))?;
        Ok(Self {
            base_url: base_url.into(),
            client,
        })
    }

    fn get_page(&self, req: &IndicatorRequest, page: u32) -> Result<String> {
        let url = format!(
            "{}/country/{}/indicator/{}?format=json&date={}:{}&per_page=1000&page={page}",
            self.base_url.trim_end_matches('/'),
            req.country_code,
            req.indicator_id,
            req.start,
            req.end
        );
        let resp = self
            .client
            .get(&url)
            .send()
            .map_err(|e| Error::Network(format!("{url}: {e}")))?;
        if resp.status() == reqwest::StatusCode::NOT_FOUND {
            return Err(Error::NotFound(url));
        }
        if !resp.status().is_success() {
            return Err(Error::Network(format!("{url}: HTTP {}", resp.status())));
        }
        resp.text()
            .map_err(|e| Error::Network(format!("{url}: {e}")))
    }
}

impl IndicatorSource for WorldBankApi {
    fn fetch(&self, req: &IndicatorRequest) -> Result<Vec<(i32, Option<f64>)>> {
        let mut out = Vec::new();
        let mut page = 1;
        loop {
            let body = self.get_page(req, page)?;
            let parsed = parse_api_page(&body, req)?;
            out.extend(parsed.observations);
            if page >= parsed.pages {
                break;
            }
            page += 1;
        }
        Ok(out)
    }
}

#[derive(Debug)]
pub(crate) struct ApiPage {
    pub pages: u32,
    pub observations: Vec<(i32, Option<f64>)>,
}

/// Parses one page of an API v2 JSON response: `[metadata, [entries]]`.
pub(crate) fn parse_api_page(body: &str, req: &IndicatorRequest) -> Result<ApiPage> {
    let json: Value =
        serde_json::from_str(body).map_err(|e| Error::Response(format!("invalid JSON: {e}")))?;
    let parts = json
        .as_array()
        .ok_or_else(|| Error::Response("expected a top-level array".into()))?;
    let meta = parts
        .first()
        .ok_or_else(|| Error::Response("empty response".into()))?;

    if let Some(messages) = meta.get("message").and_then(Value::as_array) {
        let text = messages
            .iter()
            .filter_map(|m| m.get("value").and_then(Value::as_str))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::NotFound(format!(
            "{} for {}: {text}",
            req.indicator_id, req.country_code
        )));
    }

    let pages = match meta.get("pages") {
        Some(Value::Number(n)) => n.as_u64().unwrap_or(1) as u32,
        Some(Value::String(s)) => s.parse().unwrap_or(1),
        _ => 1,
    };
    let entries = match parts.get(1) {
        Some(Value::Array(entries)) => entries,
        _ => {
            return Err(Error::NotFound(format!(
                "{} for {}: no data",
                req.indicator_id, req.country_code
            )))
        }
    };

    let observations = entries
        .iter()
        .map(|e| {
            let year = e
                .get("date")
                .and_then(Value::as_str)
                .and_then(|d| d.parse::<i32>().ok())
                .ok_or_else(|| Error::Response(format!("entry without a year: {e}")))?;
            Ok((year, e.get("value").and_then(Value::as_f64)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApiPage {
        pages: pages.max(1),
        observations,
    })
}

/// Sorts observations and checks every year of the request has a value.
fn complete_series(
    req: &IndicatorRequest,
    mut raw: Vec<(i32, Option<f64>)>,
) -> Result<IndicatorSeries> {
    raw.sort_by_key(|(y, _)| *y);
    raw.retain(|(y, _)| (req.start..=req.end).contains(y));
    raw.dedup_by_key(|(y, _)| *y);
    let mut observations = Vec::with_capacity(raw.len());
    let mut it = raw.into_iter().peekable();
    for year in req.start..=req.end {
        match it.peek() {
            Some(&(y, Some(v))) if y == year && v.is_finite() => {
                observations.push((year, v));
                it.next();
            }
            _ => {
                return Err(Error::GapInSeries {
                    indicator: req.indicator_id.clone(),
                    year,
                })
            }
        }
    }
    Ok(IndicatorSeries {
        indicator_id: req.indicator_id.clone(),
        observations,
    })
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub cache_dir: PathBuf,
    /// Never touch the network; a cache miss is an error.
    pub offline: bool,
    /// Ignore any cached copy and fetch again.
    pub refresh: bool,
}

impl FetchOptions {
    pub fn cache_path(&self, req: &IndicatorRequest) -> PathBuf {
        self.cache_dir.join(req.cache_file_name())
    }
}

fn read_cache(path: &Path, req: &IndicatorRequest) -> Result<IndicatorSeries> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let m = read_csv(bytes.as_slice())?;
    if m.dims() != 1 || m.labels()[0] != req.indicator_id {
        return Err(Error::Response(format!(
            "{}: cache file does not hold {}",
            path.display(),
            req.indicator_id
        )));
    }
    let observations: Vec<(i32, f64)> = m
        .times()
        .iter()
        .zip(m.column(0))
        .map(|(t, v)| (*t as i32, v))
        .collect();
    let expected = (req.end - req.start + 1) as usize;
    let first = observations.first().map(|o| o.0);
    if observations.len() != expected || first != Some(req.start) {
        return Err(Error::RangeMismatch(format!(
            "{}: expected years {}..={}",
            path.display(),
            req.start,
            req.end
        )));
    }
    Ok(IndicatorSeries {
        indicator_id: req.indicator_id.clone(),
        observations,
    })
}

/// Writes to a sibling temp file and renames it into place.
fn write_cache(path: &Path, series: &IndicatorSeries) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    let mut body = format!("year,{}\n", series.indicator_id);
    for (y, v) in &series.observations {
        body.push_str(&format!("{y},{v}\n"));
    }
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn fetch_indicator(
    req: &IndicatorRequest,
    opts: &FetchOptions,
    source: &dyn IndicatorSource,
) -> Result<IndicatorSeries> {
    let path = opts.cache_path(req);
    if !opts.refresh && path.is_file() {
        log::debug!("cache hit: {}", path.display());
        return read_cache(&path, req);
    }
    if opts.offline {
        return Err(Error::Network(format!(
            "{} for {} {}-{} is not cached at {} and offline mode is on",
            req.indicator_id,
            req.country_code,
            req.start,
            req.end,
            path.display()
        )));
    }
    let series = complete_series(req, source.fetch(req)?)?;
    write_cache(&path, &series)?;
    Ok(series)
}

/// Fetches several indicators concurrently, preserving request order.
pub fn fetch_all(
    reqs: &[IndicatorRequest],
    opts: &FetchOptions,
    source: &dyn IndicatorSource,
) -> Result<Vec<IndicatorSeries>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = reqs
            .iter()
            .map(|r| s.spawn(move || fetch_indicator(r, opts, source)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fetch thread panicked"))
            .collect()
    })
}

/// Joins indicator series over identical years into one matrix.
pub fn assemble_demo_matrix(series_list: &[IndicatorSeries]) -> Result<TimeSeriesMatrix> {
    let first = series_list.first().ok_or(Error::EmptyInput)?;
    let years: Vec<i32> = first.observations.iter().map(|o| o.0).collect();
    for s in &series_list[1..] {
        if s.observations.len() != years.len()
            || s.observations.iter().zip(&years).any(|(o, y)| o.0 != *y)
        {
            return Err(Error::RangeMismatch(format!(
                "{} has {} years, {} has {}",
                first.indicator_id,
                years.len(),
                s.indicator_id,
                s.observations.len()
            )));
        }
    }
    let labels = series_list.iter().map(|s| s.indicator_id.clone()).collect();
    let times = years.iter().map(|&y| f64::from(y)).collect();
    let rows = (0..years.len())
        .map(|j| series_list.iter().map(|s| s.observations[j].1).collect())
        .collect();
    TimeSeriesMatrix::new(labels, times, rows)
}

/// GDP per capita (current US$) and total population of the USA, 1960-2013.
pub fn demo_requests() -> Vec<IndicatorRequest> {
    [GDP_PER_CAPITA, POPULATION]
        .iter()
        .map(|id| IndicatorRequest::new("USA", id, 1960, 2013).expect("static request"))
        .collect()
}
