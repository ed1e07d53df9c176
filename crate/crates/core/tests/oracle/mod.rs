//! Reference implementations used as test oracles. Deliberately naive.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use odrk_core::profile::{bucket_lower, is_missing, HISTOGRAM_BUCKETS, TOP_VALUES};
use odrk_core::profile::{ColumnProfile, InferredType, TableProfile};
use odrk_core::tabular::{parse_delimited, TableData};

/// Header plus the first and last `n` rows of a full parse.
pub fn full_parse_slices(bytes: &[u8], delimiter: char, n: usize) -> (Vec<String>, Vec<Vec<String>>, Vec<Vec<String>>) {
    let table = parse_delimited(bytes, delimiter, false).expect("fixture parses");
    let rows = table.records();
    let head = rows.iter().take(n).cloned().collect();
    let tail = rows[rows.len().saturating_sub(n)..].to_vec();
    (table.header().to_vec(), head, tail)
}

/// Two-pass column statistics, compared against the streaming profiler.
pub struct RefColumn {
    pub count: u64,
    pub missing: u64,
    pub distinct: u64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub std_dev: Option<f64>,
    pub histogram: Option<Vec<u64>>,
    pub top: Vec<(String, u64)>,
}

pub fn reference_column(cells: &[String], inferred: InferredType) -> RefColumn {
    let present: Vec<&String> = cells.iter().filter(|c| !is_missing(c)).collect();
    let mut distinct: Vec<&String> = present.clone();
    distinct.sort();
    distinct.dedup();

    let mut counts: HashMap<&str, u64> = HashMap::new();
    for c in &present {
        *counts.entry(c.as_str()).or_insert(0) += 1;
    }
    let mut top: Vec<(String, u64)> = counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    top.truncate(TOP_VALUES);

    let numeric = matches!(inferred, InferredType::Integer | InferredType::Real);
    let xs: Vec<f64> = if numeric {
        present
            .iter()
            .filter_map(|c| c.trim().parse::<f64>().ok())
            .filter(|x| x.is_finite())
            .collect()
    } else {
        Vec::new()
    };
    let (mut min, mut max, mut mean, mut std_dev, mut histogram) = (None, None, None, None, None);
    if !xs.is_empty() {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let n = xs.len() as f64;
        // work on x / s to keep sums of huge values finite
        let s = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let ms = xs.iter().map(|x| x / s).sum::<f64>() / n;
        let m = ms * s;
        if xs.len() >= 2 {
            let ss: f64 = xs.iter().map(|x| (x / s - ms) * (x / s - ms)).sum();
            std_dev = Some((ss / (n - 1.0)).sqrt() * s);
        }
        histogram = Some(if lo == hi {
            vec![xs.len() as u64]
        } else {
            let k = HISTOGRAM_BUCKETS;
            let mut h = vec![0u64; k];
            for &x in &xs {
                let mut slot = k - 1;
                for i in 0..k - 1 {
                    if x < bucket_lower(lo, hi, i + 1) {
                        slot = i;
                        break;
                    }
                }
                h[slot] += 1;
            }
            h
        });
        min = Some(lo);
        max = Some(hi);
        mean = Some(m);
    }
    RefColumn {
        count: cells.len() as u64,
        missing: (cells.len() - present.len()) as u64,
        distinct: distinct.len() as u64,
        min,
        max,
        mean,
        std_dev,
        histogram,
        top,
    }
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * scale.max(1.0)
}

/// Compare a profiled column with the reference; returns a description of
/// the first disagreement.
pub fn compare_column(got: &ColumnProfile, want: &RefColumn) -> Result<(), String> {
    let name = &got.name;
    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("{name}: {what} differs"))
        }
    };
    check(got.count == want.count, "count")?;
    check(got.missing == want.missing, "missing")?;
    check(got.distinct == want.distinct, "distinct")?;
    let top: Vec<(String, u64)> = got.top_values.iter().map(|v| (v.value.clone(), v.count)).collect();
    check(top == want.top, "top values")?;
    match (&got.numeric_summary, want.mean) {
        (None, None) => {}
        (Some(s), Some(mean)) => {
            check(s.min == want.min.unwrap() && s.max == want.max.unwrap(), "min/max")?;
            let scale = s.min.abs().max(s.max.abs());
            check(close(s.mean, mean, scale), "mean")?;
            match (s.std_dev, want.std_dev) {
                (None, None) => {}
                (Some(a), Some(b)) => check(close(a, b, scale), "std_dev")?,
                _ => return Err(format!("{name}: std_dev presence differs")),
            }
        }
        _ => return Err(format!("{name}: numeric summary presence differs")),
    }
    let hist = got
        .histogram
        .as_ref()
        .map(|h| h.iter().map(|b| b.count).collect::<Vec<_>>());
    check(hist == want.histogram, "histogram")?;
    Ok(())
}

pub fn compare_profile(table: &TableData, profile: &TableProfile) -> Result<(), String> {
    if profile.row_count != table.row_count() as u64 {
        return Err("row count differs".into());
    }
    if profile.column_profiles.len() != table.header().len() {
        return Err("column count differs".into());
    }
    for (i, col) in profile.column_profiles.iter().enumerate() {
        let cells: Vec<String> = table.column(i).map(str::to_string).collect();
        compare_column(col, &reference_column(&cells, col.inferred))?;
    }
    Ok(())
}

/// Cheap deterministic table generator shared by property tests.
pub fn table_text(header: &[String], rows: &[Vec<String>], delimiter: char) -> String {
    let quote = |s: &str| {
        if s.is_empty() || s.contains([delimiter, '"', '\n', '\r']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = r.iter().map(|c| quote(c)).collect();
        out.push_str(&cells.join(&delimiter.to_string()));
        out.push('\n');
    }
    out
}

/// Occurrences of each value, ordered like a value-count table.
pub fn brute_tally<'a>(values: impl Iterator<Item = &'a str>) -> Vec<(String, u64)> {
    let mut m: BTreeMap<String, u64> = BTreeMap::new();
    for v in values {
        *m.entry(v.to_string()).or_insert(0) += 1;
    }
    let mut out: Vec<(String, u64)> = m.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out
}
