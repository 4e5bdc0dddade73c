//! Experiment configuration: defaults, config-file parsing, and resolution
//! of CLI flags over file values over built-in defaults.
//!
//! Config files are flat `key=value` text mirroring the long flag names;
//! `#` starts a comment. List-valued keys (`optimizer`, `seed`) accept
//! comma-separated values and may be repeated.

use std::path::{Path, PathBuf};

use zo_opt::{
    EstimatorConfig, HyperParams, NoiseModel, ObjectiveKind, ObjectiveSpec, OptimizerKind,
};

use crate::BenchError;

pub const DEFAULT_BETA1: f64 = 0.9;
pub const DEFAULT_BETA2: f64 = 0.99;
pub const DEFAULT_K: usize = 10;
pub const DEFAULT_LR: f64 = 0.001;
pub const DEFAULT_MU: f64 = 0.005;
pub const DEFAULT_ZETA: f64 = 1e-8;
pub const DEFAULT_DIM: usize = 1000;
pub const DEFAULT_ITERS: u64 = 10_000;
pub const DEFAULT_SEEDS: [u64; 3] = [1, 2, 3];
pub const DEFAULT_OUT: &str = "zo-bench-out";

/// How θ₀ is filled: the per-function default (all-twos, all-threes for
/// levy) or a constant supplied on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta0Policy {
    PerFunctionDefault,
    Constant(f64),
}

impl Theta0Policy {
    pub fn fill_value(&self, spec: &ObjectiveSpec) -> f64 {
        match self {
            Theta0Policy::PerFunctionDefault => spec.default_theta0()[0],
            Theta0Policy::Constant(c) => *c,
        }
    }

    pub fn resolve(&self, spec: &ObjectiveSpec, dim: usize) -> Vec<f64> {
        vec![self.fill_value(spec); dim]
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: ObjectiveKind,
    pub dim: usize,
    pub optimizers: Vec<OptimizerKind>,
    pub beta1: f64,
    pub beta2: f64,
    pub lr: f64,
    pub zeta: f64,
    pub mu: f64,
    pub k: usize,
    pub iters: u64,
    pub seeds: Vec<u64>,
    pub theta0: Theta0Policy,
    pub sigma: f64,
    pub v0: Option<f64>,
    pub diagnostics: bool,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            function: ObjectiveKind::Quadratic,
            dim: DEFAULT_DIM,
            optimizers: OptimizerKind::ALL.to_vec(),
            beta1: DEFAULT_BETA1,
            beta2: DEFAULT_BETA2,
            lr: DEFAULT_LR,
            zeta: DEFAULT_ZETA,
            mu: DEFAULT_MU,
            k: DEFAULT_K,
            iters: DEFAULT_ITERS,
            seeds: DEFAULT_SEEDS.to_vec(),
            theta0: Theta0Policy::PerFunctionDefault,
            sigma: 0.0,
            v0: None,
            diagnostics: false,
            out_dir: PathBuf::from(DEFAULT_OUT),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        self.hyper_params()?;
        self.estimator()?;
        self.objective()?;
        if self.seeds.is_empty() {
            return Err(BenchError::config("seed", "need at least one seed"));
        }
        if has_duplicates(&self.seeds) {
            return Err(BenchError::config("seed", "seeds must be distinct"));
        }
        if self.optimizers.is_empty() {
            return Err(BenchError::config("optimizer", "need at least one optimizer"));
        }
        if has_duplicates(&self.optimizers) {
            return Err(BenchError::config("optimizer", "optimizers must be distinct"));
        }
        if let Theta0Policy::Constant(c) = self.theta0 {
            if !c.is_finite() {
                return Err(BenchError::config("theta0", "must be finite"));
            }
        }
        if let Some(v0) = self.v0 {
            if !v0.is_finite() || v0 < 0.0 {
                return Err(BenchError::config("v0", "must be finite and nonnegative"));
            }
        }
        Ok(())
    }

    pub fn hyper_params(&self) -> Result<HyperParams, BenchError> {
        HyperParams::new(self.beta1, self.beta2, self.lr, self.zeta).map_err(map_core_field)
    }

    pub fn estimator(&self) -> Result<EstimatorConfig, BenchError> {
        EstimatorConfig::new(self.mu, self.k).map_err(map_core_field)
    }

    pub fn objective(&self) -> Result<ObjectiveSpec, BenchError> {
        let spec = ObjectiveSpec::new(self.function, self.dim)
            .map_err(|e| BenchError::config("dim", e.to_string()))?;
        let noise =
            NoiseModel::additive_uniform(self.sigma).map_err(|e| BenchError::config("sigma", e.to_string()))?;
        Ok(spec.with_noise(noise))
    }
}

/// Maps a core validation error onto the CLI field it came from.
fn map_core_field(err: zo_opt::Error) -> BenchError {
    match &err {
        zo_opt::Error::InvalidArgument { name, message } => {
            let field = match *name {
                "eta" => "lr",
                other => other,
            };
            BenchError::config(field, message.clone())
        }
        other => BenchError::config("config", other.to_string()),
    }
}

fn has_duplicates<T: PartialEq>(items: &[T]) -> bool {
    items
        .iter()
        .enumerate()
        .any(|(i, x)| items[..i].contains(x))
}

/// Unresolved option bundle: one layer of the CLI-over-file-over-defaults
/// resolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    pub function: Option<String>,
    pub optimizers: Vec<String>,
    pub dim: Option<usize>,
    pub iters: Option<u64>,
    pub seeds: Vec<u64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub lr: Option<f64>,
    pub mu: Option<f64>,
    pub k: Option<usize>,
    pub zeta: Option<f64>,
    pub sigma: Option<f64>,
    pub theta0: Option<f64>,
    pub v0: Option<f64>,
    pub diagnostics: Option<bool>,
    pub out: Option<PathBuf>,
}

/// Parses a flat `key=value` config file.
pub fn parse_config_file(path: &Path) -> Result<ConfigOverlay, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let mut overlay = ConfigOverlay::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| BenchError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err("expected key=value".into()))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| parse_err(format!("invalid {what}: {value}"));
        match key {
            "function" => overlay.function = Some(value.to_string()),
            "optimizer" => overlay
                .optimizers
                .extend(value.split(',').map(|s| s.trim().to_string())),
            "dim" => overlay.dim = Some(value.parse().map_err(|_| bad("dim"))?),
            "iters" => overlay.iters = Some(value.parse().map_err(|_| bad("iters"))?),
            "seed" => {
                for s in value.split(',') {
                    overlay.seeds.push(s.trim().parse().map_err(|_| bad("seed"))?);
                }
            }
            "beta1" => overlay.beta1 = Some(value.parse().map_err(|_| bad("beta1"))?),
            "beta2" => overlay.beta2 = Some(value.parse().map_err(|_| bad("beta2"))?),
            "lr" => overlay.lr = Some(value.parse().map_err(|_| bad("lr"))?),
            "mu" => overlay.mu = Some(value.parse().map_err(|_| bad("mu"))?),
            "k" => overlay.k = Some(value.parse().map_err(|_| bad("k"))?),
            "zeta" => overlay.zeta = Some(value.parse().map_err(|_| bad("zeta"))?),
            "sigma" => overlay.sigma = Some(value.parse().map_err(|_| bad("sigma"))?),
            "theta0" => overlay.theta0 = Some(value.parse().map_err(|_| bad("theta0"))?),
            "v0" => overlay.v0 = Some(value.parse().map_err(|_| bad("v0"))?),
            "diagnostics" => {
                overlay.diagnostics = Some(value.parse().map_err(|_| bad("diagnostics"))?)
            }
            "out" => overlay.out = Some(PathBuf::from(value)),
            other => {
                return Err(BenchError::config(
                    other,
                    "unknown configuration key".to_string(),
                ))
            }
        }
    }
    Ok(overlay)
}

/// Resolves CLI flags over optional file values over built-in defaults and
/// validates the result.
pub fn resolve(cli: ConfigOverlay, file: Option<ConfigOverlay>) -> Result<ExperimentConfig, BenchError> {
    let file = file.unwrap_or_default();
    let defaults = ExperimentConfig::default();

    let function_token = cli.function.or(file.function);
    let function = match function_token {
        Some(token) => ObjectiveKind::parse_token(&token)
            .ok_or_else(|| BenchError::config("function", format!("unknown function `{token}`")))?,
        None => defaults.function,
    };

    let optimizer_tokens = if !cli.optimizers.is_empty() {
        cli.optimizers
    } else {
        file.optimizers
    };
    let optimizers = if optimizer_tokens.is_empty() {
        defaults.optimizers
    } else {
        optimizer_tokens
            .iter()
            .map(|token| {
                OptimizerKind::parse_token(token).ok_or_else(|| {
                    BenchError::config("optimizer", format!("unknown optimizer `{token}`"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };

    let seeds = if !cli.seeds.is_empty() {
        cli.seeds
    } else if !file.seeds.is_empty() {
        file.seeds
    } else {
        defaults.seeds
    };

    let config = ExperimentConfig {
        function,
        dim: cli.dim.or(file.dim).unwrap_or(defaults.dim),
        optimizers,
        beta1: cli.beta1.or(file.beta1).unwrap_or(defaults.beta1),
        beta2: cli.beta2.or(file.beta2).unwrap_or(defaults.beta2),
        lr: cli.lr.or(file.lr).unwrap_or(defaults.lr),
        zeta: cli.zeta.or(file.zeta).unwrap_or(defaults.zeta),
        mu: cli.mu.or(file.mu).unwrap_or(defaults.mu),
        k: cli.k.or(file.k).unwrap_or(defaults.k),
        iters: cli.iters.or(file.iters).unwrap_or(defaults.iters),
        seeds,
        theta0: cli
            .theta0
            .or(file.theta0)
            .map_or(Theta0Policy::PerFunctionDefault, Theta0Policy::Constant),
        sigma: cli.sigma.or(file.sigma).unwrap_or(0.0),
        v0: cli.v0.or(file.v0),
        diagnostics: cli.diagnostics.or(file.diagnostics).unwrap_or(false),
        out_dir: cli.out.or(file.out).unwrap_or(defaults.out_dir),
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_flags_give_documented_defaults() {
        let config = resolve(ConfigOverlay::default(), None).unwrap();
        assert_eq!(config.beta1, 0.9);
        assert_eq!(config.beta2, 0.99);
        assert_eq!(config.k, 10);
        assert_eq!(config.lr, 0.001);
        assert_eq!(config.mu, 0.005);
        assert_eq!(config.zeta, 1e-8);
        assert_eq!(config.dim, 1000);
        assert_eq!(config.iters, 10_000);
        assert_eq!(config.seeds, vec![1, 2, 3]);
        assert_eq!(config.optimizers.len(), 5);
        assert_eq!(config.function, ObjectiveKind::Quadratic);
        assert!(!config.diagnostics);
    }

    #[test]
    fn out_of_range_beta1_names_the_field() {
        let cli = ConfigOverlay {
            beta1: Some(1.5),
            ..Default::default()
        };
        match resolve(cli, None).unwrap_err() {
            BenchError::Config { field, .. } => assert_eq!(field, "beta1"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn two_optimizer_selection() {
        let cli = ConfigOverlay {
            optimizers: vec!["r-adazo".into(), "zo-adamm".into()],
            ..Default::default()
        };
        let config = resolve(cli, None).unwrap();
        assert_eq!(
            config.optimizers,
            vec![OptimizerKind::RAdaZO, OptimizerKind::ZoAdaMM]
        );
    }

    #[test]
    fn duplicate_seeds_and_optimizers_are_rejected() {
        let cli = ConfigOverlay {
            seeds: vec![1, 1],
            ..Default::default()
        };
        assert!(matches!(
            resolve(cli, None),
            Err(BenchError::Config { field, .. }) if field == "seed"
        ));
        let cli = ConfigOverlay {
            optimizers: vec!["zo-sgd".into(), "zo-sgd".into()],
            ..Default::default()
        };
        assert!(matches!(
            resolve(cli, None),
            Err(BenchError::Config { field, .. }) if field == "optimizer"
        ));
    }

    #[test]
    fn cli_flags_override_file_values() {
        let file = ConfigOverlay {
            dim: Some(50),
            beta1: Some(0.5),
            optimizers: vec!["zo-sgd".into()],
            ..Default::default()
        };
        let cli = ConfigOverlay {
            beta1: Some(0.7),
            ..Default::default()
        };
        let config = resolve(cli, Some(file)).unwrap();
        assert_eq!(config.dim, 50);
        assert_eq!(config.beta1, 0.7);
        assert_eq!(config.optimizers, vec![OptimizerKind::ZoSgd]);
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("zo-bench-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(
            &path,
            "# comment\nfunction=levy\noptimizer=r-adazo,zo-adamm\nseed=4,5\ndim=64\ndiagnostics=true\n",
        )
        .unwrap();
        let overlay = parse_config_file(&path).unwrap();
        let config = resolve(ConfigOverlay::default(), Some(overlay)).unwrap();
        assert_eq!(config.function, ObjectiveKind::Levy);
        assert_eq!(config.seeds, vec![4, 5]);
        assert_eq!(config.dim, 64);
        assert!(config.diagnostics);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn unknown_config_key_is_an_error() {
        let dir = std::env::temp_dir().join("zo-bench-config-test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        std::fs::write(&path, "momentum=0.9\n").unwrap();
        assert!(matches!(
            parse_config_file(&path),
            Err(BenchError::Config { field, .. }) if field == "momentum"
        ));
        std::fs::remove_file(&path).ok();
    }
}
