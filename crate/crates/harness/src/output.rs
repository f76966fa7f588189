//! CSV and JSON persistence. Every CSV starts with a `schema_version`
//! column; bump [`SCHEMA_VERSION`] whenever a header changes.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lipopt_core::benchmarks::BenchmarkSpec;
use lipopt_core::RunTrace;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One row per (objective, optimizer, setting, rep).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub schema_version: u32,
    pub objective: String,
    pub dim: usize,
    pub domain: String,
    pub optimizer: String,
    /// Extra knob varied by an ablation, e.g. `m=16`; empty otherwise.
    pub setting: String,
    pub rep: usize,
    pub seed: u64,
    pub status: &'static str,
    pub evaluations: usize,
    pub final_best: Option<f64>,
    pub final_best_t: Option<usize>,
    pub total_proposals: Option<u64>,
    pub total_seconds: Option<f64>,
    pub objective_seconds: Option<f64>,
    pub trace_path: Option<String>,
    pub error: Option<String>,
}

/// Mean and sample standard deviation over the successful reps of a cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub schema_version: u32,
    pub objective: String,
    pub dim: usize,
    pub domain: String,
    pub optimizer: String,
    pub setting: String,
    pub reps: usize,
    pub reps_ok: usize,
    pub known_max: Option<f64>,
    pub mean_final_best: f64,
    pub std_final_best: f64,
    pub median_final_best: f64,
    pub mean_proposals: f64,
    pub mean_seconds: f64,
    pub std_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub schema_version: u32,
    pub t: usize,
    pub value: f64,
    pub best_so_far: f64,
    pub eps_t: f64,
    pub proposals: u64,
    pub elapsed_seconds: f64,
}

/// Columns whose values depend on wall-clock time.
pub const TIMING_COLUMNS: [&str; 5] = [
    "total_seconds",
    "objective_seconds",
    "mean_seconds",
    "std_seconds",
    "elapsed_seconds",
];

/// Writes `rows` with a header row, creating parent directories.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn trace_rows(trace: &RunTrace) -> Vec<TraceRow> {
    trace
        .records
        .iter()
        .map(|r| TraceRow {
            schema_version: SCHEMA_VERSION,
            t: r.t,
            value: r.value,
            best_so_far: r.best_so_far,
            eps_t: r.eps_t,
            proposals: r.proposals,
            elapsed_seconds: r.elapsed_seconds,
        })
        .collect()
}

/// Compact box description: `[lo,hi]^d` for cubes, `[a,b]x[c,d]x…` otherwise.
pub fn domain_string(spec: &BenchmarkSpec) -> String {
    let cube = spec.lower.iter().all(|&l| l == spec.lower[0]) && spec.upper.iter().all(|&u| u == spec.upper[0]);
    if cube {
        format!("[{},{}]^{}", spec.lower[0], spec.upper[0], spec.dim)
    } else {
        spec.lower
            .iter()
            .zip(&spec.upper)
            .map(|(l, u)| format!("[{l},{u}]"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// File-name-safe version of a label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn trace_path(dir: &Path, objective: &str, optimizer: &str, setting: &str, rep: usize) -> PathBuf {
    let mut name = format!("{}__{}", slug(objective), slug(optimizer));
    if !setting.is_empty() {
        name.push_str("__");
        name.push_str(&slug(setting));
    }
    dir.join("traces").join(format!("{name}__rep{rep}.csv"))
}

/// Reads a CSV back and blanks every timing column, for comparisons.
pub fn read_without_timing(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let timing: Vec<bool> = headers.iter().map(|h| TIMING_COLUMNS.contains(&h)).collect();
    let mut out = vec![headers.iter().map(String::from).collect()];
    for rec in r.records() {
        let rec = rec?;
        out.push(
            rec.iter()
                .zip(&timing)
                .map(|(v, &t)| if t { String::new() } else { v.to_string() })
                .collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lipopt_core::benchmarks::lookup;

    #[test]
    fn domains() {
        assert_eq!(domain_string(lookup("rosenbrock:3").unwrap().spec()), "[-2.048,2.048]^3");
        assert_eq!(domain_string(lookup("bukin_n6").unwrap().spec()), "[-15,-5]x[-3,3]");
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("ecpv2[lb+wm]"), "ecpv2_lb_wm_");
        assert_eq!(slug("m=8"), "m_8");
    }
}
