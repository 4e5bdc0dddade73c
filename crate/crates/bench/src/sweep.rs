//! β1 sweep: one full experiment per β1 value, tabulating the final median
//! optimality gap.

use zo_opt::optimizers::OptimizerKind;

use crate::config::ExperimentConfig;
use crate::runner::execute;
use crate::trace_io::fmt_f64;
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta1: f64,
    pub median_final_gap: f64,
}

/// Runs `execute` once per β1 value (each into its own subdirectory of the
/// base output directory) and writes `sweep_beta1.csv` with the table.
/// Requires the configuration to select exactly `r-adazo`.
pub fn beta1_sweep(base: &ExperimentConfig, values: &[f64]) -> Result<Vec<SweepRow>, BenchError> {
    if values.is_empty() {
        return Err(BenchError::InvalidArgument(
            "sweep needs at least one beta1 value".into(),
        ));
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() || !(0.0..1.0).contains(v) {
            return Err(BenchError::config("values", format!("beta1 {v} not in [0, 1)")));
        }
        if values[..i].contains(v) {
            return Err(BenchError::config("values", format!("duplicate beta1 {v}")));
        }
    }
    if base.optimizers != [OptimizerKind::RAdaZO] {
        return Err(BenchError::config(
            "optimizer",
            "beta1 sweep requires exactly the r-adazo optimizer",
        ));
    }

    let mut rows = Vec::with_capacity(values.len());
    for &beta1 in values {
        let mut config = base.clone();
        config.beta1 = beta1;
        config.out_dir = base.out_dir.join(format!("beta1_{beta1}"));
        let output = execute(&config)?;
        let row = output
            .summary
            .row(OptimizerKind::RAdaZO)
            .expect("r-adazo summary row exists");
        rows.push(SweepRow {
            beta1,
            median_final_gap: row.final_gap.median,
        });
    }

    std::fs::create_dir_all(&base.out_dir).map_err(|e| BenchError::io(&base.out_dir, e))?;
    let table_path = base.out_dir.join("sweep_beta1.csv");
    let mut text = String::from("beta1,median_final_gap\n");
    for row in &rows {
        text.push_str(&format!(
            "{},{}\n",
            fmt_f64(row.beta1),
            fmt_f64(row.median_final_gap)
        ));
    }
    std::fs::write(&table_path, text).map_err(|e| BenchError::io(&table_path, e))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_config(out: &std::path::Path) -> ExperimentConfig {
        ExperimentConfig {
            optimizers: vec![OptimizerKind::RAdaZO],
            dim: 5,
            iters: 10,
            seeds: vec![1, 2],
            out_dir: out.to_path_buf(),
            ..Default::default()
        }
    }

    #[test]
    fn rejects_empty_duplicate_and_out_of_range_values() {
        let dir = std::env::temp_dir().join("zo-bench-sweep-validate");
        let config = sweep_config(&dir);
        assert!(matches!(
            beta1_sweep(&config, &[]),
            Err(BenchError::InvalidArgument(_))
        ));
        assert!(beta1_sweep(&config, &[0.5, 0.5]).is_err());
        assert!(beta1_sweep(&config, &[1.0]).is_err());
    }

    #[test]
    fn rejects_configs_not_pinned_to_radazo() {
        let dir = std::env::temp_dir().join("zo-bench-sweep-validate2");
        let mut config = sweep_config(&dir);
        config.optimizers = vec![OptimizerKind::RAdaZO, OptimizerKind::ZoAdaMM];
        assert!(matches!(
            beta1_sweep(&config, &[0.9]),
            Err(BenchError::Config { field, .. }) if field == "optimizer"
        ));
    }

    #[test]
    fn single_value_degenerates_to_execute() {
        let dir = std::env::temp_dir().join(format!("zo-bench-sweep-{}", std::process::id()));
        let config = sweep_config(&dir);
        let rows = beta1_sweep(&config, &[0.9]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].beta1, 0.9);
        assert!(rows[0].median_final_gap.is_finite());
        assert!(dir.join("sweep_beta1.csv").exists());
        assert!(dir.join("beta1_0.9").join("summary.csv").exists());
        std::fs::remove_dir_all(&dir).ok();
    }
}
