use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::archive::ArchiveEntry;
use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::objectives::Problem;

use super::config::{ExperimentConfig, OutputFormat};
use super::run::{median_gd_runs, RunResult};
use super::stats::{CellSamples, StatsReport};

pub const RUNS_CSV: &str = "runs.csv";
pub const RUNS_JSON: &str = "runs.json";
pub const TIMINGS_CSV: &str = "timings.csv";
pub const AGGREGATE_CSV: &str = "aggregate.csv";
pub const AGGREGATE_JSON: &str = "aggregate.json";
pub const PVALUES_CSV: &str = "pvalues.csv";
pub const META_JSON: &str = "meta.json";
pub const FRONTS_DIR: &str = "fronts";
pub const MEDIAN_FRONTS_DIR: &str = "median_fronts";

/// One row of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub seed: u64,
    pub hv: f64,
    pub gd: f64,
    pub nop: usize,
    /// Set on the run whose GD is the cell median.
    pub median_gd: bool,
}

impl RunRecord {
    pub fn metrics(&self) -> MetricReport {
        MetricReport {
            hv: self.hv,
            gd: self.gd,
            nop: self.nop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TimingRecord {
    algorithm: Algorithm,
    problem: Problem,
    seed: u64,
    seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FrontRow {
    f1: f64,
    f2: f64,
    position: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
}

pub fn records(results: &[RunResult]) -> Vec<RunRecord> {
    let medians = median_gd_runs(results);
    results
        .iter()
        .enumerate()
        .map(|(i, r)| RunRecord {
            algorithm: r.algorithm,
            problem: r.problem,
            seed: r.seed,
            hv: r.metrics.hv,
            gd: r.metrics.gd,
            nop: r.metrics.nop,
            median_gd: medians.contains(&i),
        })
        .collect()
}

/// Groups records into per-cell samples, in first-seen cell order.
pub fn samples(records: &[RunRecord]) -> Vec<CellSamples> {
    let mut cells: Vec<CellSamples> = Vec::new();
    for r in records {
        match cells
            .iter_mut()
            .find(|c| c.algorithm == r.algorithm && c.problem == r.problem)
        {
            Some(c) => c.runs.push(r.metrics()),
            None => cells.push(CellSamples {
                algorithm: r.algorithm,
                problem: r.problem,
                runs: vec![r.metrics()],
            }),
        }
    }
    cells
}

pub fn front_file_name(algorithm: Algorithm, problem: Problem, seed: u64) -> String {
    format!("{}_{}_{}.csv", algorithm.name(), problem.name(), seed)
}

pub fn median_front_file_name(algorithm: Algorithm, problem: Problem) -> String {
    format!("{}_{}.csv", algorithm.name(), problem.name())
}

/// Writes every artifact of an experiment under `dir` and returns the
/// aggregate. Everything except `timings.csv` is a pure function of the
/// config and the results.
pub fn export_results(
    dir: &Path,
    config: &ExperimentConfig,
    results: &[RunResult],
    format: OutputFormat,
) -> Result<StatsReport> {
    create_dir(dir)?;
    let fronts = dir.join(FRONTS_DIR);
    let medians = dir.join(MEDIAN_FRONTS_DIR);
    create_dir(&fronts)?;
    create_dir(&medians)?;

    let records = records(results);
    for (r, record) in results.iter().zip(&records) {
        write_front(
            &fronts.join(front_file_name(r.algorithm, r.problem, r.seed)),
            &r.front,
        )?;
        if record.median_gd {
            write_front(
                &medians.join(median_front_file_name(r.algorithm, r.problem)),
                &r.front,
            )?;
        }
    }
    let timings: Vec<TimingRecord> = results
        .iter()
        .map(|r| TimingRecord {
            algorithm: r.algorithm,
            problem: r.problem,
            seed: r.seed,
            seconds: r.duration.as_secs_f64(),
        })
        .collect();
    write_csv(
        &dir.join(TIMINGS_CSV),
        &timings,
        &["algorithm", "problem", "seed", "seconds"],
    )?;

    match format {
        OutputFormat::Csv => write_csv(&dir.join(RUNS_CSV), &records, RUN_HEADER)?,
        OutputFormat::Json => write_json(&dir.join(RUNS_JSON), &records)?,
    }
    let report = StatsReport::from_samples(&samples(&records))?;
    write_aggregate(dir, &report, format)?;

    let meta = Meta {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        seeds: config.seeds().collect(),
    };
    write_json(&dir.join(META_JSON), &meta)?;
    Ok(report)
}

const RUN_HEADER: &[&str] = &[
    "algorithm",
    "problem",
    "seed",
    "hv",
    "gd",
    "nop",
    "median_gd",
];

/// Writes `aggregate.csv` plus `pvalues.csv`, or `aggregate.json`.
pub fn write_aggregate(dir: &Path, report: &StatsReport, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(&dir.join(AGGREGATE_JSON), report),
        OutputFormat::Csv => {
            write_table_csv(&dir.join(AGGREGATE_CSV), report)?;
            write_pvalues_csv(&dir.join(PVALUES_CSV), report)
        }
    }
}

/// Reads the per-run records stored in `dir`, from `runs.csv` or, failing
/// that, `runs.json`.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let csv_path = dir.join(RUNS_CSV);
    if csv_path.exists() {
        let mut reader = csv::Reader::from_path(&csv_path)?;
        return reader
            .deserialize()
            .map(|row| row.map_err(Error::from))
            .collect();
    }
    let json_path = dir.join(RUNS_JSON);
    if json_path.exists() {
        let text = fs::read_to_string(&json_path).map_err(|e| Error::io(&json_path, e))?;
        return Ok(serde_json::from_str(&text)?);
    }
    Err(Error::Malformed {
        path: dir.to_path_buf(),
        reason: format!("neither {RUNS_CSV} nor {RUNS_JSON} found"),
    })
}

/// Reads a front file back as `(f1, f2, position-hex)` rows.
pub fn read_front(path: &Path) -> Result<Vec<(f64, f64, String)>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader
        .deserialize::<FrontRow>()
        .map(|row| {
            let row = row?;
            Ok((row.f1, row.f2, row.position))
        })
        .collect()
}

fn write_front(path: &Path, front: &[ArchiveEntry]) -> Result<()> {
    let rows: Vec<FrontRow> = front
        .iter()
        .map(|e| FrontRow {
            f1: e.objectives.f1,
            f2: e.objectives.f2,
            position: e.position.to_hex(),
        })
        .collect();
    write_csv(path, &rows, &["f1", "f2", "position"])
}

fn write_table_csv(path: &Path, report: &StatsReport) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["problem".to_string(), "metric".to_string()];
    for a in &report.algorithms {
        header.push(a.name().to_string());
        header.push(format!("{}_mark", a.name()));
    }
    writer.write_record(&header)?;
    for row in &report.table {
        let mut record = vec![
            row.problem.name().to_string(),
            row.metric.name().to_string(),
        ];
        for a in &report.algorithms {
            match row.cells.iter().find(|c| c.algorithm == *a) {
                Some(c) => {
                    record.push(format!("{}±{}", number(c.mean), number(c.sd)));
                    record.push(c.mark.label().to_string());
                }
                None => {
                    record.push(String::new());
                    record.push(String::new());
                }
            }
        }
        writer.write_record(&record)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn write_pvalues_csv(path: &Path, report: &StatsReport) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["problem", "metric", "a", "b", "p_value", "tier"])?;
    for t in &report.pairwise {
        writer.write_record([
            t.problem.name(),
            t.metric.name(),
            t.a.name(),
            t.b.name(),
            &t.p_value.to_string(),
            t.tier.label(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn number(x: f64) -> String {
    if x == 0.0 || x.abs() >= 0.01 {
        format!("{x:.4}")
    } else {
        format!("{x:.3e}")
    }
}

/// Serializes `rows`; writes just `header` when there are none.
fn write_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(!rows.is_empty())
        .from_path(path)?;
    if rows.is_empty() {
        writer.write_record(header)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n").map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(dir.to_path_buf())
}
