//! Multi-seed experiment orchestration.
//!
//! `execute` runs every (optimizer, seed) cell of a configuration in a rayon
//! work pool — cells share no mutable state — and a single collector thread
//! then writes one trace CSV per cell plus a summary CSV, so the directory
//! layout is deterministic. A numeric failure in one cell is recorded in the
//! summary and leaves the other cells untouched.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use zo_opt::diagnostics::instrumented_run_from_state;
use zo_opt::optimizers::{run_from_state, OptimizerKind, OptimizerState, TraceRecord};
use zo_opt::sampler::PRNG_NAME;

use crate::config::ExperimentConfig;
use crate::trace_io::{self, fmt_f64, TraceMeta};
use crate::BenchError;

/// Gaps are clamped to this floor before entering log space.
pub const LOG_GAP_FLOOR: f64 = 1e-16;

/// Most records kept per trace file; longer runs are subsampled.
const MAX_RECORDS: u64 = 10_000;

/// Logging cadence: every iteration up to 10^4 iterations, then every
/// `ceil(iters / 10^4)`-th.
pub fn record_stride(iters: u64) -> u64 {
    iters.div_ceil(MAX_RECORDS).max(1)
}

/// Keeps rows whose iteration is a multiple of `stride`, plus the final row.
pub fn subsample(records: Vec<TraceRecord>, stride: u64) -> Vec<TraceRecord> {
    if stride <= 1 || records.is_empty() {
        return records;
    }
    let last = records.len() - 1;
    records
        .into_iter()
        .enumerate()
        .filter(|(idx, r)| r.iter % stride == 0 || *idx == last)
        .map(|(_, r)| r)
        .collect()
}

/// Trapezoidal integral of `log10(max(gap, 1e-16))` over iteration number.
pub fn area_under_log_gap(records: &[TraceRecord]) -> f64 {
    let mut area = 0.0;
    for pair in records.windows(2) {
        let y0 = pair[0].gap.max(LOG_GAP_FLOOR).log10();
        let y1 = pair[1].gap.max(LOG_GAP_FLOOR).log10();
        let dx = (pair[1].iter - pair[0].iter) as f64;
        area += 0.5 * (y0 + y1) * dx;
    }
    area
}

/// Outcome of one (optimizer, seed) cell, with records at logging cadence.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub optimizer: OptimizerKind,
    pub optimizer_index: usize,
    pub seed: u64,
    pub records: Vec<TraceRecord>,
    pub error: Option<String>,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapStats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSummary {
    pub optimizer: OptimizerKind,
    pub seed_count: usize,
    pub failures: usize,
    pub final_gap: GapStats,
    /// Median over seeds of the per-seed [`area_under_log_gap`].
    pub area_under_log_gap: f64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: Vec<OptimizerSummary>,
}

impl RunSummary {
    pub fn row(&self, optimizer: OptimizerKind) -> Option<&OptimizerSummary> {
        self.rows.iter().find(|r| r.optimizer == optimizer)
    }
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub cells: Vec<CellResult>,
    pub summary: RunSummary,
    pub out_dir: PathBuf,
    pub trace_paths: Vec<PathBuf>,
    pub summary_path: PathBuf,
}

/// Runs all (optimizer, seed) cells of the configuration and persists traces
/// plus a summary CSV under `config.out_dir`.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentOutput, BenchError> {
    config.validate()?;
    let spec = config.objective()?;
    let hp = config.hyper_params()?;
    let est = config.estimator()?;
    let theta0 = config.theta0.resolve(&spec, config.dim);
    let stride = record_stride(config.iters);

    let cell_specs: Vec<(usize, OptimizerKind, u64)> = config
        .optimizers
        .iter()
        .enumerate()
        .flat_map(|(i, &opt)| config.seeds.iter().map(move |&seed| (i, opt, seed)))
        .collect();

    let cells: Vec<CellResult> = cell_specs
        .par_iter()
        .map(|&(optimizer_index, optimizer, seed)| -> Result<CellResult, BenchError> {
            let start = Instant::now();
            let state = match config.v0 {
                None => OptimizerState::new(optimizer, config.dim, hp)?,
                Some(v0) => OptimizerState::with_moments(
                    optimizer,
                    hp,
                    vec![0.0; config.dim],
                    vec![v0; config.dim],
                )?,
            };
            let trace = if config.diagnostics {
                instrumented_run_from_state(state, &spec, &est, &theta0, config.iters, seed)?
            } else {
                run_from_state(state, &spec, &est, &theta0, config.iters, seed)?
            };
            let error = trace
                .failure
                .as_ref()
                .map(|f| format!("iter {}: {}", f.iter, f.error));
            Ok(CellResult {
                optimizer,
                optimizer_index,
                seed,
                records: subsample(trace.records, stride),
                error,
                wall_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let summary = summarize(&cells, &config.optimizers);

    std::fs::create_dir_all(&config.out_dir).map_err(|e| BenchError::io(&config.out_dir, e))?;
    let mut trace_paths = Vec::with_capacity(cells.len());
    for cell in &cells {
        let path = config.out_dir.join(format!(
            "{}_{}_seed{}.csv",
            config.function.token(),
            cell.optimizer.token(),
            cell.seed
        ));
        let meta = TraceMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            prng: PRNG_NAME.to_string(),
            function: config.function.token().to_string(),
            dim: config.dim,
            optimizer: cell.optimizer.token().to_string(),
            optimizer_index: cell.optimizer_index,
            seed: cell.seed,
            iters: config.iters,
            stride,
            k: config.k,
            mu: config.mu,
            beta1: config.beta1,
            beta2: config.beta2,
            lr: config.lr,
            zeta: config.zeta,
            sigma: config.sigma,
            theta0: config.theta0.fill_value(&spec),
            v0: config.v0,
            diagnostics: config.diagnostics,
            error: cell.error.clone(),
        };
        trace_io::write_trace(&path, &meta, &cell.records)?;
        trace_paths.push(path);
    }
    // written last: its presence marks a complete output directory
    let summary_path = config.out_dir.join("summary.csv");
    write_summary(&summary_path, &summary)?;

    Ok(ExperimentOutput {
        cells,
        summary,
        out_dir: config.out_dir.clone(),
        trace_paths,
        summary_path,
    })
}

/// Builds the per-optimizer summary from cell results. Failed cells count as
/// failures and are excluded from the gap statistics.
pub fn summarize(cells: &[CellResult], optimizer_order: &[OptimizerKind]) -> RunSummary {
    let rows = optimizer_order
        .iter()
        .map(|&optimizer| {
            let mine: Vec<&CellResult> =
                cells.iter().filter(|c| c.optimizer == optimizer).collect();
            let failures = mine.iter().filter(|c| c.error.is_some()).count();
            let mut final_gaps: Vec<f64> = mine
                .iter()
                .filter(|c| c.error.is_none())
                .map(|c| c.records.last().expect("trace has baseline row").gap)
                .collect();
            let mut areas: Vec<f64> = mine
                .iter()
                .filter(|c| c.error.is_none())
                .map(|c| area_under_log_gap(&c.records))
                .collect();
            OptimizerSummary {
                optimizer,
                seed_count: mine.len(),
                failures,
                final_gap: gap_stats(&mut final_gaps),
                area_under_log_gap: median(&mut areas),
                wall_seconds: mine.iter().map(|c| c.wall_seconds).sum(),
            }
        })
        .collect();
    RunSummary { rows }
}

fn gap_stats(values: &mut [f64]) -> GapStats {
    if values.is_empty() {
        return GapStats {
            min: f64::NAN,
            median: f64::NAN,
            max: f64::NAN,
        };
    }
    values.sort_by(f64::total_cmp);
    GapStats {
        min: values[0],
        median: median_of_sorted(values),
        max: values[values.len() - 1],
    }
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    median_of_sorted(values)
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn write_summary(path: &Path, summary: &RunSummary) -> Result<(), BenchError> {
    let mut text = String::new();
    text.push_str("# zo-bench summary\n");
    text.push_str(
        "optimizer,seed_count,failures,final_gap_min,final_gap_median,final_gap_max,area_under_log_gap,wall_seconds\n",
    );
    for row in &summary.rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.optimizer.token(),
            row.seed_count,
            row.failures,
            fmt_f64(row.final_gap.min),
            fmt_f64(row.final_gap.median),
            fmt_f64(row.final_gap.max),
            fmt_f64(row.area_under_log_gap),
            fmt_f64(row.wall_seconds),
        ));
    }
    std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
}

/// Recomputes the summary statistics from the trace files alone; the
/// recomputable fields (gap statistics, areas) match the in-memory summary
/// bitwise because the serialization is lossless.
pub fn summary_from_dir(dir: &Path) -> Result<RunSummary, BenchError> {
    let traces = trace_io::load_traces(dir)?;
    if traces.is_empty() {
        return Err(BenchError::InvalidArgument(format!(
            "no trace files in {}",
            dir.display()
        )));
    }
    let mut optimizer_order: Vec<OptimizerKind> = Vec::new();
    let mut cells = Vec::with_capacity(traces.len());
    for (meta, records) in traces {
        let optimizer = OptimizerKind::parse_token(&meta.optimizer).ok_or_else(|| {
            BenchError::InvalidArgument(format!("unknown optimizer token `{}`", meta.optimizer))
        })?;
        if !optimizer_order.contains(&optimizer) {
            optimizer_order.push(optimizer);
        }
        cells.push(CellResult {
            optimizer,
            optimizer_index: meta.optimizer_index,
            seed: meta.seed,
            records,
            error: meta.error,
            wall_seconds: 0.0,
        });
    }
    Ok(summarize(&cells, &optimizer_order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(iter: u64, gap: f64) -> TraceRecord {
        TraceRecord {
            iter,
            fval: gap,
            gap,
            step_norm: 0.0,
            diagnostics: None,
        }
    }

    #[test]
    fn stride_is_one_up_to_ten_thousand() {
        assert_eq!(record_stride(0), 1);
        assert_eq!(record_stride(10_000), 1);
        assert_eq!(record_stride(10_001), 2);
        assert_eq!(record_stride(100_000), 10);
    }

    #[test]
    fn subsample_keeps_baseline_and_final_rows() {
        let records: Vec<TraceRecord> = (0..=11).map(|i| record(i, 1.0)).collect();
        let kept = subsample(records, 5);
        let iters: Vec<u64> = kept.iter().map(|r| r.iter).collect();
        assert_eq!(iters, vec![0, 5, 10, 11]);
    }

    #[test]
    fn area_of_flat_gap_is_log_times_span() {
        let records: Vec<TraceRecord> = (0..=10).map(|i| record(i, 100.0)).collect();
        let area = area_under_log_gap(&records);
        assert!((area - 2.0 * 10.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_gap_is_floored_not_infinite() {
        let records = vec![record(0, 1.0), record(1, 0.0)];
        let area = area_under_log_gap(&records);
        assert!(area.is_finite());
        assert!((area - 0.5 * (0.0 + -16.0)).abs() <= 1e-12);
    }

    #[test]
    fn median_conventions() {
        let mut odd = [3.0, 1.0, 2.0];
        assert_eq!(median(&mut odd), 2.0);
        let mut even = [4.0, 1.0, 2.0, 3.0];
        assert_eq!(median(&mut even), 2.5);
        let stats = gap_stats(&mut [2.0, 1.0, 3.0]);
        assert!(stats.min <= stats.median && stats.median <= stats.max);
    }
}
