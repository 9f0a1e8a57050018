//! CSV ingestion.
//!
//! Rows hold `x1..xd` and optionally a final weight column. A first row
//! with any non-numeric field is a header; a header whose last name is `w`
//! or `weight` marks the weight column. Header-less files carry weights only
//! when the caller asks for them.

use std::path::{Path, PathBuf};

use super::CliError;
use crate::measure::WeightedSample;

#[derive(Debug, Clone)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub sample: WeightedSample,
    pub rows: usize,
    pub header: Option<Vec<String>>,
    pub weighted: bool,
    pub normalized: bool,
}

pub fn read_dataset(path: &Path, weighted: bool) -> Result<DatasetFile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut ds = parse_dataset(&text, weighted)
        .map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), ..e })?;
    ds.path = path.to_path_buf();
    Ok(ds)
}

pub fn parse_dataset(text: &str, weighted: bool) -> Result<DatasetFile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let fields: Vec<&str> = record.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Vec<Option<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        if rows.is_empty() && header.is_none() && parsed.iter().any(Option::is_none) {
            header = Some(fields.iter().map(|f| f.to_string()).collect());
            width = Some(fields.len());
            continue;
        }
        let mut row = Vec::with_capacity(fields.len());
        for (f, v) in fields.iter().zip(parsed) {
            match v {
                Some(v) if v.is_finite() => row.push(v),
                Some(_) => return Err(CliError::input(format!("line {line}: non-finite value {f:?}"))),
                None => return Err(CliError::input(format!("line {line}: cannot parse {f:?} as a number"))),
            }
        }
        match width {
            Some(w) if w != row.len() => {
                return Err(CliError::input(format!("line {line}: expected {w} columns, found {}", row.len())))
            }
            _ => width = Some(row.len()),
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::input("dataset has no data rows".into()));
    }
    let named_weight = header
        .as_ref()
        .and_then(|h| h.last())
        .is_some_and(|n| matches!(n.to_ascii_lowercase().as_str(), "w" | "weight"));
    let weighted = weighted || named_weight;
    let width = rows[0].len();
    if weighted && width < 2 {
        return Err(CliError::input("a weighted dataset needs at least one coordinate column".into()));
    }
    let (points, weights): (Vec<Vec<f64>>, Vec<f64>) = if weighted {
        rows.into_iter()
            .map(|mut r| {
                let w = r.pop().expect("weight column");
                (r, w)
            })
            .unzip()
    } else {
        let n = rows.len();
        (rows, vec![1.0; n])
    };
    let count = points.len();
    let sample = WeightedSample::new(points, weights)?;
    Ok(DatasetFile { path: PathBuf::new(), normalized: sample.was_normalized(), sample, rows: count, header, weighted })
}

/// Inline query points `"x,y;x,y"`.
pub fn parse_points(spec: &str, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    spec.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let v = parse_list(p)?;
            if v.len() != dim {
                return Err(CliError::input(format!(
                    "query point {p:?} has {} coordinates, dataset has {dim}",
                    v.len()
                )));
            }
            Ok(v)
        })
        .collect()
}

/// Comma-separated finite reals.
pub fn parse_list(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(CliError::input(format!("cannot parse {s:?} as a finite number"))),
        })
        .collect()
}

/// Rows of a matrix written `"a,b;c,d"`.
pub fn parse_matrix(spec: &str) -> Result<Vec<Vec<f64>>, CliError> {
    spec.split(';').map(str::trim).filter(|r| !r.is_empty()).map(parse_list).collect()
}
