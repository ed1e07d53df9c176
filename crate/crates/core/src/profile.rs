//! Column profiling: counts, missing and distinct values, numeric summary,
//! histogram and most frequent values.

use std::collections::HashSet;
use std::fmt::Write as _;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::render::aligned_table;
use crate::tabular::TableData;
use crate::tally::{tally, ValueCount};

pub const DEFAULT_NUMERIC_THRESHOLD: f64 = 0.95;
pub const HISTOGRAM_BUCKETS: usize = 10;
pub const TOP_VALUES: usize = 5;

/// Cells treated as missing, compared case-insensitively after trimming.
pub const MISSING_TOKENS: [&str; 5] = ["", "na", "nan", "null", "none"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InferredType {
    Integer,
    Real,
    Datetime,
    Text,
}

impl InferredType {
    pub fn as_str(&self) -> &'static str {
        match self {
            InferredType::Integer => "integer",
            InferredType::Real => "real",
            InferredType::Datetime => "datetime",
            InferredType::Text => "text",
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, InferredType::Integer | InferredType::Real)
    }
}

pub fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    MISSING_TOKENS.iter().any(|m| t.eq_ignore_ascii_case(m))
}

pub fn parse_integer(cell: &str) -> Option<i64> {
    cell.trim().parse().ok()
}

/// Finite reals only; `inf` and friends are text.
pub fn parse_real(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// ISO 8601 dates and date-times, with or without offset.
pub fn parse_datetime(cell: &str) -> bool {
    let s = cell.trim();
    if DateTime::parse_from_rfc3339(s).is_ok() {
        return true;
    }
    const NAIVE: [&str; 4] = [
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ];
    NAIVE.iter().any(|f| NaiveDateTime::parse_from_str(s, f).is_ok())
        || NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

/// The first of integer, real, datetime whose share of the non-missing
/// cells reaches `numeric_threshold`; text otherwise. All-missing columns
/// are text.
pub fn infer_column_type(cells: &[&str], numeric_threshold: f64) -> InferredType {
    assert!(
        numeric_threshold > 0.0 && numeric_threshold <= 1.0,
        "threshold must be in (0, 1]"
    );
    let present: Vec<&str> = cells.iter().copied().filter(|c| !is_missing(c)).collect();
    if present.is_empty() {
        return InferredType::Text;
    }
    let share = |pred: &dyn Fn(&str) -> bool| present.iter().filter(|c| pred(c)).count() as f64 / present.len() as f64;
    if share(&|c| parse_integer(c).is_some()) >= numeric_threshold {
        InferredType::Integer
    } else if share(&|c| parse_real(c).is_some()) >= numeric_threshold {
        InferredType::Real
    } else if share(&parse_datetime) >= numeric_threshold {
        InferredType::Datetime
    } else {
        InferredType::Text
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Sample standard deviation; absent with fewer than two values.
    pub std_dev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBucket {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    pub name: String,
    pub inferred: InferredType,
    pub count: u64,
    pub missing: u64,
    pub distinct: u64,
    pub numeric_summary: Option<NumericSummary>,
    pub histogram: Option<Vec<HistogramBucket>>,
    pub top_values: Vec<ValueCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableProfile {
    pub row_count: u64,
    pub column_profiles: Vec<ColumnProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFormat {
    Text,
    Json,
}

pub fn describe(table: &TableData) -> TableProfile {
    let column_profiles = table
        .header()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let cells: Vec<&str> = table.column(i).collect();
            profile_column(name, &cells, table.column_types()[i])
        })
        .collect();
    TableProfile {
        row_count: table.row_count() as u64,
        column_profiles,
    }
}

/// Min, max, mean and sample standard deviation. Values are scaled by the
/// largest magnitude first so that sums cannot overflow.
fn summarize(values: &[f64]) -> Option<NumericSummary> {
    let (&first, rest) = values.split_first()?;
    let (min, max) = rest.iter().fold((first, first), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let scale = min.abs().max(max.abs());
    if scale == 0.0 {
        return Some(NumericSummary {
            min,
            max,
            mean: 0.0,
            std_dev: (values.len() >= 2).then_some(0.0),
        });
    }
    let n = values.len() as f64;
    let mean_s = values.iter().map(|x| x / scale).sum::<f64>() / n;
    let std_dev = (values.len() >= 2).then(|| {
        let ss: f64 = values.iter().map(|x| (x / scale - mean_s).powi(2)).sum();
        (ss / (n - 1.0)).sqrt() * scale
    });
    Some(NumericSummary {
        min,
        max,
        mean: (mean_s * scale).clamp(min, max),
        std_dev,
    })
}

pub fn profile_column(name: &str, cells: &[&str], inferred: InferredType) -> ColumnProfile {
    let mut missing = 0u64;
    let mut seen: HashSet<&str> = HashSet::new();
    let mut present: Vec<&str> = Vec::with_capacity(cells.len());
    let mut numbers = Vec::new();
    for &cell in cells {
        if is_missing(cell) {
            missing += 1;
            continue;
        }
        seen.insert(cell);
        present.push(cell);
        if inferred.is_numeric() {
            if let Some(v) = parse_real(cell) {
                numbers.push(v);
            }
        }
    }
    let numeric_summary = if inferred.is_numeric() {
        summarize(&numbers)
    } else {
        None
    };
    let histogram = numeric_summary.as_ref().map(|s| histogram(&numbers, s.min, s.max));
    ColumnProfile {
        name: name.to_string(),
        inferred,
        count: cells.len() as u64,
        missing,
        distinct: seen.len() as u64,
        numeric_summary,
        histogram,
        top_values: tally(present, Some(TOP_VALUES)),
    }
}

/// Lower bound of bucket `i` of `HISTOGRAM_BUCKETS` equal-width buckets.
pub fn bucket_lower(min: f64, max: f64, i: usize) -> f64 {
    if i == 0 {
        return min;
    }
    if i >= HISTOGRAM_BUCKETS {
        return max;
    }
    // weighted form stays finite even when max - min would overflow
    let t = i as f64 / HISTOGRAM_BUCKETS as f64;
    (min * (1.0 - t) + max * t).clamp(min, max)
}

/// Equal-width buckets over `[min, max]`; the last bucket includes `max`.
/// A constant column gets a single bucket.
fn histogram(values: &[f64], min: f64, max: f64) -> Vec<HistogramBucket> {
    if min == max {
        return vec![HistogramBucket {
            lower: min,
            upper: max,
            count: values.len() as u64,
        }];
    }
    let k = HISTOGRAM_BUCKETS;
    let bounds: Vec<f64> = (0..k).map(|i| bucket_lower(min, max, i)).chain([max]).collect();
    let width = max / k as f64 - min / k as f64;
    let mut counts = vec![0u64; k];
    for &v in values {
        // estimate, then settle against the reported bounds so that every
        // value lies in [lower, upper) of its bucket
        let mut i = ((v / width - min / width).floor() as isize).clamp(0, k as isize - 1) as usize;
        while i > 0 && v < bounds[i] {
            i -= 1;
        }
        while i + 1 < k && v >= bounds[i + 1] {
            i += 1;
        }
        counts[i] += 1;
    }
    (0..k)
        .map(|i| HistogramBucket {
            lower: bounds[i],
            upper: bounds[i + 1],
            count: counts[i],
        })
        .collect()
}

pub fn render_profile(profile: &TableProfile, format: ProfileFormat) -> Vec<u8> {
    match format {
        ProfileFormat::Json => serde_json::to_vec_pretty(profile).expect("profile serializes"),
        ProfileFormat::Text => render_text(profile).into_bytes(),
    }
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

/// Layout: a `rows: N` line, a summary table with one line per column, then
/// per numeric column a histogram block, then per column its top values.
fn render_text(profile: &TableProfile) -> String {
    let mut out = format!("rows: {}\n\n", profile.row_count);
    let header = [
        "column", "type", "count", "missing", "distinct", "min", "max", "mean", "std_dev",
    ];
    let rows: Vec<Vec<String>> = profile
        .column_profiles
        .iter()
        .map(|c| {
            let (min, max, mean, std) = match &c.numeric_summary {
                Some(s) => (
                    num(s.min),
                    num(s.max),
                    num(s.mean),
                    s.std_dev.map(num).unwrap_or_else(|| "-".into()),
                ),
                None => ("-".into(), "-".into(), "-".into(), "-".into()),
            };
            vec![
                c.name.clone(),
                c.inferred.as_str().to_string(),
                c.count.to_string(),
                c.missing.to_string(),
                c.distinct.to_string(),
                min,
                max,
                mean,
                std,
            ]
        })
        .collect();
    out.push_str(&aligned_table(&header, &rows));

    for c in &profile.column_profiles {
        if let Some(hist) = &c.histogram {
            let _ = write!(out, "\nhistogram: {}\n", c.name);
            let rows: Vec<Vec<String>> = hist
                .iter()
                .map(|b| vec![num(b.lower), num(b.upper), b.count.to_string()])
                .collect();
            out.push_str(&aligned_table(&["lower", "upper", "count"], &rows));
        }
    }
    for c in &profile.column_profiles {
        if c.top_values.is_empty() {
            continue;
        }
        let _ = write!(out, "\ntop values: {}\n", c.name);
        let rows: Vec<Vec<String>> = c
            .top_values
            .iter()
            .map(|v| vec![v.value.clone(), v.count.to_string()])
            .collect();
        out.push_str(&aligned_table(&["value", "count"], &rows));
    }
    out
}
