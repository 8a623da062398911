//! Batch execution of independent runs, summary statistics and file export.
//!
//! An experiment writes, under its output directory:
//!
//! - `runs.csv` (or `runs.json`): one row of metrics per run, with the
//!   median-GD run of each cell flagged;
//! - `timings.csv`: wall-clock seconds per run, kept apart so every other
//!   file is reproducible byte for byte;
//! - `fronts/<algorithm>_<problem>_<seed>.csv` and
//!   `median_fronts/<algorithm>_<problem>.csv`: columns `f1,f2,position`,
//!   with the position as MSB-first hex;
//! - `aggregate.csv` plus `pvalues.csv` (or `aggregate.json`);
//! - `meta.json`: the resolved config and the seeds used.

mod config;
mod export;
mod run;
mod stats;

pub use config::{ExperimentConfig, OutputFormat};
pub use export::{
    export_results, front_file_name, median_front_file_name, read_front, read_records, records,
    samples, write_aggregate, Meta, RunRecord, AGGREGATE_CSV, AGGREGATE_JSON, FRONTS_DIR,
    MEDIAN_FRONTS_DIR, META_JSON, PVALUES_CSV, RUNS_CSV, RUNS_JSON, TIMINGS_CSV,
};
pub use run::{
    median_gd_runs, run_experiment, run_single, run_with_context, ProblemContext, RunResult,
};
pub use stats::{
    rank_sum_test, CellSamples, CellSummary, Mark, Metric, PairwiseTest, StatsReport, Summary,
    TableCell, TableRow, Tier, EXACT_RANK_SUM_LIMIT,
};
