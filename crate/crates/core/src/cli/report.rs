//! Machine-readable reports: JSON by default, CSV on request.

use serde::Serialize;

use crate::json::{format_real, to_json_string, Real, RegionJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthRecord {
    pub point: Vec<Real>,
    pub family: String,
    pub depth: Real,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MedianReport {
    pub generators: Vec<Vec<Real>>,
    pub lower: Vec<Real>,
    pub upper: Vec<Real>,
    pub ambient_lower: Vec<Real>,
    pub ambient_upper: Vec<Real>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub dim: usize,
    pub alpha_max: Real,
    pub bound: Real,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JensenReport {
    Median {
        function: String,
        m_star: Vec<Real>,
        f_m: Real,
        median_lo: Real,
        median_hi: Real,
        holds: bool,
        grid: usize,
    },
    General {
        function: String,
        family: String,
        alpha_max: Real,
        f_max: Real,
        argmax: Vec<Real>,
        q: Real,
        worst_gap: Real,
        holds: bool,
        grid: usize,
        evaluated: usize,
    },
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn reals(v: &[Real]) -> Vec<String> {
    v.iter().map(|r| format_real(r.0)).collect()
}

pub fn render_depths(records: &[DepthRecord], dim: usize, format: Format) -> String {
    match format {
        Format::Json => to_json_string(&records),
        Format::Csv => {
            let mut head: Vec<String> = (1..=dim).map(|k| format!("x{k}")).collect();
            head.extend(["family", "depth", "exact"].map(String::from));
            let mut out = csv_line(&head);
            for r in records {
                let mut row = reals(&r.point);
                row.extend([r.family.clone(), format_real(r.depth.0), r.exact.to_string()]);
                out += &csv_line(&row);
            }
            out
        }
    }
}

pub fn render_median(m: &MedianReport, format: Format) -> String {
    match format {
        Format::Json => to_json_string(m),
        Format::Csv => {
            let mut out =
                csv_line(&["coordinate", "lower", "upper", "ambient_lower", "ambient_upper"].map(String::from));
            for k in 0..m.lower.len() {
                out += &csv_line(&[
                    (k + 1).to_string(),
                    format_real(m.lower[k].0),
                    format_real(m.upper[k].0),
                    format_real(m.ambient_lower[k].0),
                    format_real(m.ambient_upper[k].0),
                ]);
            }
            out
        }
    }
}

pub fn render_region(r: &RegionJson, dim: usize, format: Format) -> String {
    match format {
        Format::Json => to_json_string(r),
        Format::Csv => {
            let mut out = csv_line(&(1..=dim).map(|k| format!("x{k}")).collect::<Vec<_>>());
            for v in &r.vertices {
                out += &csv_line(&reals(v));
            }
            out
        }
    }
}

pub fn render_bound(b: &BoundReport, format: Format) -> String {
    match format {
        Format::Json => to_json_string(b),
        Format::Csv => {
            csv_line(&["dim", "alpha_max", "bound", "holds"].map(String::from))
                + &csv_line(&[
                    b.dim.to_string(),
                    format_real(b.alpha_max.0),
                    format_real(b.bound.0),
                    b.holds.to_string(),
                ])
        }
    }
}

pub fn render_jensen(j: &JensenReport, format: Format) -> String {
    match format {
        Format::Json => to_json_string(j),
        Format::Csv => {
            let (lhs, rhs, holds) = match j {
                JensenReport::Median { f_m, median_lo, holds, .. } => (f_m, median_lo, holds),
                JensenReport::General { f_max, q, holds, .. } => (f_max, q, holds),
            };
            let kind = match j {
                JensenReport::Median { .. } => "median",
                JensenReport::General { .. } => "general",
            };
            csv_line(&["kind", "lhs", "rhs", "holds"].map(String::from))
                + &csv_line(&[kind.to_string(), format_real(lhs.0), format_real(rhs.0), holds.to_string()])
        }
    }
}
