//! Trace CSV persistence.
//!
//! A trace file is `#`-prefixed metadata lines (generator name, full
//! resolved configuration, seed — enough to replay the run from the file
//! alone), one column-header line, then one row per recorded iteration.
//! Reals are serialized with 17 significant digits, which round-trips every
//! finite `f64` exactly. Aborted runs append a final `# error=` line.

use std::io::Write;
use std::path::{Path, PathBuf};

use zo_opt::diagnostics::MomentDiagnostics;
use zo_opt::optimizers::TraceRecord;

use crate::BenchError;

pub const PLAIN_COLUMNS: &str = "iter,fval,gap,step_norm";
pub const DIAG_COLUMNS: &str = "iter,fval,gap,step_norm,cos_g,cos_m,relerr_v_ori,relerr_v_ours";

/// 17 significant digits: lossless for every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Everything needed to replay the run that produced a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub version: String,
    pub prng: String,
    pub function: String,
    pub dim: usize,
    pub optimizer: String,
    pub optimizer_index: usize,
    pub seed: u64,
    pub iters: u64,
    pub stride: u64,
    pub k: usize,
    pub mu: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub lr: f64,
    pub zeta: f64,
    pub sigma: f64,
    pub theta0: f64,
    pub v0: Option<f64>,
    pub diagnostics: bool,
    pub error: Option<String>,
}

pub fn write_trace(path: &Path, meta: &TraceMeta, records: &[TraceRecord]) -> Result<(), BenchError> {
    let mut text = String::new();
    text.push_str("# zo-bench trace\n");
    let mut kv = |key: &str, value: String| {
        text.push_str("# ");
        text.push_str(key);
        text.push('=');
        text.push_str(&value);
        text.push('\n');
    };
    kv("version", meta.version.clone());
    kv("prng", meta.prng.clone());
    kv("function", meta.function.clone());
    kv("dim", meta.dim.to_string());
    kv("optimizer", meta.optimizer.clone());
    kv("optimizer_index", meta.optimizer_index.to_string());
    kv("seed", meta.seed.to_string());
    kv("iters", meta.iters.to_string());
    kv("stride", meta.stride.to_string());
    kv("k", meta.k.to_string());
    kv("mu", fmt_f64(meta.mu));
    kv("beta1", fmt_f64(meta.beta1));
    kv("beta2", fmt_f64(meta.beta2));
    kv("lr", fmt_f64(meta.lr));
    kv("zeta", fmt_f64(meta.zeta));
    kv("sigma", fmt_f64(meta.sigma));
    kv("theta0", fmt_f64(meta.theta0));
    kv("v0", meta.v0.map_or_else(|| "none".into(), fmt_f64));
    kv("diagnostics", meta.diagnostics.to_string());

    text.push_str(if meta.diagnostics {
        DIAG_COLUMNS
    } else {
        PLAIN_COLUMNS
    });
    text.push('\n');

    let opt = |value: Option<f64>| value.map(fmt_f64).unwrap_or_default();
    for r in records {
        text.push_str(&r.iter.to_string());
        text.push(',');
        text.push_str(&fmt_f64(r.fval));
        text.push(',');
        text.push_str(&fmt_f64(r.gap));
        text.push(',');
        text.push_str(&fmt_f64(r.step_norm));
        if meta.diagnostics {
            let d = r.diagnostics;
            text.push(',');
            text.push_str(&opt(d.map(|d| d.cos_g)));
            text.push(',');
            text.push_str(&opt(d.and_then(|d| d.cos_m)));
            text.push(',');
            text.push_str(&opt(d.and_then(|d| d.relerr_v_ori)));
            text.push(',');
            text.push_str(&opt(d.and_then(|d| d.relerr_v_ours)));
        }
        text.push('\n');
    }
    if let Some(error) = &meta.error {
        text.push_str("# error=");
        text.push_str(error);
        text.push('\n');
    }

    let mut file = std::fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| BenchError::io(path, e))
}

pub fn read_trace(path: &Path) -> Result<(TraceMeta, Vec<TraceRecord>), BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let parse_err = |line: usize, message: String| BenchError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut meta_pairs = Vec::new();
    let mut error = None;
    let mut columns: Option<bool> = None; // Some(true) when diagnostics columns
    let mut records = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "error" {
                    error = Some(value.trim().to_string());
                } else {
                    meta_pairs.push((key.trim().to_string(), value.trim().to_string()));
                }
            }
            continue;
        }
        if columns.is_none() {
            columns = match line {
                PLAIN_COLUMNS => Some(false),
                DIAG_COLUMNS => Some(true),
                other => return Err(parse_err(lineno, format!("unexpected header `{other}`"))),
            };
            continue;
        }
        let with_diag = columns.unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if with_diag { 8 } else { 4 };
        if fields.len() != expected {
            return Err(parse_err(
                lineno,
                format!("expected {expected} fields, got {}", fields.len()),
            ));
        }
        let int = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(lineno, format!("bad integer `{s}`")))
        };
        let real = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("bad real `{s}`")))
        };
        let opt_real = |s: &str| -> Result<Option<f64>, BenchError> {
            if s.is_empty() {
                Ok(None)
            } else {
                real(s).map(Some)
            }
        };
        let diagnostics = if with_diag {
            opt_real(fields[4])?.map(|cos_g| -> Result<MomentDiagnostics, BenchError> {
                Ok(MomentDiagnostics {
                    cos_g,
                    cos_m: opt_real(fields[5])?,
                    relerr_v_ori: opt_real(fields[6])?,
                    relerr_v_ours: opt_real(fields[7])?,
                })
            })
            .transpose()?
        } else {
            None
        };
        records.push(TraceRecord {
            iter: int(fields[0])?,
            fval: real(fields[1])?,
            gap: real(fields[2])?,
            step_norm: real(fields[3])?,
            diagnostics,
        });
    }

    let lookup = |key: &str| -> Result<String, BenchError> {
        meta_pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| parse_err(0, format!("missing metadata key `{key}`")))
    };
    let meta_int = |key: &str| -> Result<u64, BenchError> {
        lookup(key)?
            .parse()
            .map_err(|_| parse_err(0, format!("bad integer metadata `{key}`")))
    };
    let meta_real = |key: &str| -> Result<f64, BenchError> {
        lookup(key)?
            .parse()
            .map_err(|_| parse_err(0, format!("bad real metadata `{key}`")))
    };

    let v0_raw = lookup("v0")?;
    let meta = TraceMeta {
        version: lookup("version")?,
        prng: lookup("prng")?,
        function: lookup("function")?,
        dim: meta_int("dim")? as usize,
        optimizer: lookup("optimizer")?,
        optimizer_index: meta_int("optimizer_index")? as usize,
        seed: meta_int("seed")?,
        iters: meta_int("iters")?,
        stride: meta_int("stride")?,
        k: meta_int("k")? as usize,
        mu: meta_real("mu")?,
        beta1: meta_real("beta1")?,
        beta2: meta_real("beta2")?,
        lr: meta_real("lr")?,
        zeta: meta_real("zeta")?,
        sigma: meta_real("sigma")?,
        theta0: meta_real("theta0")?,
        v0: if v0_raw == "none" {
            None
        } else {
            Some(
                v0_raw
                    .parse()
                    .map_err(|_| parse_err(0, "bad real metadata `v0`".into()))?,
            )
        },
        diagnostics: lookup("diagnostics")? == "true",
        error,
    };
    Ok((meta, records))
}

/// Loads every trace in a directory (`summary.csv` and non-CSV files are
/// skipped), sorted by `(optimizer_index, seed)`.
pub fn load_traces(dir: &Path) -> Result<Vec<(TraceMeta, Vec<TraceRecord>)>, BenchError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| BenchError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|ext| ext == "csv")
                && p.file_name().is_some_and(|n| n != "summary.csv")
        })
        .collect();
    paths.sort();
    let mut traces = Vec::with_capacity(paths.len());
    for path in paths {
        traces.push(read_trace(&path)?);
    }
    traces.sort_by_key(|(meta, _)| (meta.optimizer_index, meta.seed));
    Ok(traces)
}
