//! Synthetic benchmark objectives with analytic gradients, known optima, and
//! an optional bounded additive noise model.
//!
//! All four functions share a global minimum value of zero:
//!
//! * `quadratic`:  `F(θ) = ½ Σ θ_i²`, minimized at the origin;
//! * `cubic`:      `F(θ) = Σ (|θ_i|³ + θ_i²/2)`, minimized at the origin
//!   (the `|θ|³` term is non-smooth at 0; the reported gradient is the
//!   subgradient with `sign(0) = 0`);
//! * `levy`:       the Levy function in `w_i = 1 + (θ_i - 1)/4`, with the
//!   inner sum running over coordinates `2..d-1`, minimized at all-ones;
//! * `rosenbrock`: `Σ [100 (θ_{i+1} - θ_i²)² + (1 - θ_i)²]`, minimized at
//!   all-ones.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sampler::RandomSource;

/// The four benchmark function families. Tokens double as CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    Quadratic,
    Cubic,
    Levy,
    Rosenbrock,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [
        ObjectiveKind::Quadratic,
        ObjectiveKind::Cubic,
        ObjectiveKind::Levy,
        ObjectiveKind::Rosenbrock,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ObjectiveKind::Quadratic => "quadratic",
            ObjectiveKind::Cubic => "cubic",
            ObjectiveKind::Levy => "levy",
            ObjectiveKind::Rosenbrock => "rosenbrock",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.token() == token)
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Observation-noise model for `f(θ; ξ) = F(θ) + ξ`.
///
/// `AdditiveUniform` draws `ξ` uniformly on `[-σ√3, σ√3]`, so the noise has
/// variance `σ²` and stays bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    None,
    AdditiveUniform { sigma: f64 },
}

impl NoiseModel {
    pub fn additive_uniform(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::invalid("sigma", "must be finite and nonnegative"));
        }
        if sigma == 0.0 {
            Ok(NoiseModel::None)
        } else {
            Ok(NoiseModel::AdditiveUniform { sigma })
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            NoiseModel::None => 0.0,
            NoiseModel::AdditiveUniform { sigma } => *sigma,
        }
    }

    /// One noise draw. `None` consumes nothing from the noise stream.
    pub fn sample(&self, rng: &mut RandomSource) -> f64 {
        match self {
            NoiseModel::None => 0.0,
            NoiseModel::AdditiveUniform { sigma } => {
                let half_width = sigma * 3.0_f64.sqrt();
                (2.0 * rng.noise_unit() - 1.0) * half_width
            }
        }
    }
}

/// Minimal interface the gradient estimator needs from an objective:
/// the noise-free value `F(θ)` and a noise draw realizing `f(θ; ξ)`.
pub trait Objective {
    fn dim(&self) -> usize;

    /// Noise-free value `F(θ)`. Callers guarantee `theta.len() == dim()`.
    fn value(&self, theta: &[f64]) -> f64;

    /// Draws one noise realization `ξ`; the default is noise-free.
    fn sample_noise(&self, _rng: &mut RandomSource) -> f64 {
        0.0
    }
}

/// Objectives that also expose the analytic gradient `∇F(θ)`.
pub trait DifferentiableObjective: Objective {
    fn gradient(&self, theta: &[f64]) -> Vec<f64>;
}

/// One of the four benchmark functions at a fixed dimension, plus noise.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    kind: ObjectiveKind,
    dim: usize,
    noise: NoiseModel,
}

impl ObjectiveSpec {
    /// Noise-free objective of dimension `dim >= 1`.
    pub fn new(kind: ObjectiveKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(ObjectiveSpec {
            kind,
            dim,
            noise: NoiseModel::None,
        })
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    /// Global minimum value; zero for every kind.
    pub fn optimum_value(&self) -> f64 {
        0.0
    }

    /// A point attaining the minimum.
    pub fn known_minimizer(&self) -> Vec<f64> {
        match self.kind {
            ObjectiveKind::Quadratic | ObjectiveKind::Cubic => vec![0.0; self.dim],
            ObjectiveKind::Levy | ObjectiveKind::Rosenbrock => vec![1.0; self.dim],
        }
    }

    /// Default initialization: all-twos, except all-threes for Levy.
    pub fn default_theta0(&self) -> Vec<f64> {
        let fill = match self.kind {
            ObjectiveKind::Levy => 3.0,
            _ => 2.0,
        };
        vec![fill; self.dim]
    }

    /// Noisy evaluation `f(θ; ξ) = F(θ) + ξ`, deterministic given the
    /// source state.
    pub fn eval(&self, theta: &[f64], rng: &mut RandomSource) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(self.value(theta) + self.noise.sample(rng))
    }

    /// Analytic gradient of the noise-free `F`; for `cubic` the subgradient
    /// with `sign(0) = 0`.
    pub fn true_gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        Ok(self.gradient(theta))
    }

    /// `F(θ) - min F`, clamped at zero against negative round-off.
    pub fn optimality_gap(&self, theta: &[f64]) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(gap_of(self.value(theta)))
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: theta.len(),
            });
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "theta" });
        }
        Ok(())
    }
}

pub(crate) fn gap_of(fval: f64) -> f64 {
    if fval < 0.0 {
        0.0
    } else {
        fval
    }
}

impl Objective for ObjectiveSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.dim);
        match self.kind {
            ObjectiveKind::Quadratic => quadratic_value(theta),
            ObjectiveKind::Cubic => cubic_value(theta),
            ObjectiveKind::Levy => levy_value(theta),
            ObjectiveKind::Rosenbrock => rosenbrock_value(theta),
        }
    }

    fn sample_noise(&self, rng: &mut RandomSource) -> f64 {
        self.noise.sample(rng)
    }
}

impl DifferentiableObjective for ObjectiveSpec {
    fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        debug_assert_eq!(theta.len(), self.dim);
        match self.kind {
            ObjectiveKind::Quadratic => theta.to_vec(),
            ObjectiveKind::Cubic => cubic_gradient(theta),
            ObjectiveKind::Levy => levy_gradient(theta),
            ObjectiveKind::Rosenbrock => rosenbrock_gradient(theta),
        }
    }
}

pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn quadratic_value(theta: &[f64]) -> f64 {
    0.5 * theta.iter().map(|x| x * x).sum::<f64>()
}

fn cubic_value(theta: &[f64]) -> f64 {
    theta
        .iter()
        .map(|x| x.abs().powi(3) + 0.5 * x * x)
        .sum::<f64>()
}

fn cubic_gradient(theta: &[f64]) -> Vec<f64> {
    theta.iter().map(|&x| 3.0 * x * x * sign(x) + x).collect()
}

fn levy_w(theta_i: f64) -> f64 {
    1.0 + (theta_i - 1.0) / 4.0
}

fn levy_value(theta: &[f64]) -> f64 {
    let d = theta.len();
    let w1 = levy_w(theta[0]);
    let mut total = (PI * w1).sin().powi(2);
    for &t in theta.get(1..d - 1).unwrap_or(&[]) {
        let w = levy_w(t);
        let s = (PI * w + 1.0).sin();
        total += (w - 1.0) * (w - 1.0) * (1.0 + 10.0 * s * s);
    }
    let wd = levy_w(theta[d - 1]);
    let s = (2.0 * PI * wd).sin();
    total += (wd - 1.0) * (wd - 1.0) * (1.0 + s * s);
    total
}

fn levy_gradient(theta: &[f64]) -> Vec<f64> {
    let d = theta.len();
    let mut grad = vec![0.0; d];
    // dw/dθ = 1/4 throughout
    let w1 = levy_w(theta[0]);
    grad[0] += 0.25 * PI * (2.0 * PI * w1).sin();
    for (i, &t) in theta.iter().enumerate().take(d.saturating_sub(1)).skip(1) {
        let w = levy_w(t);
        let s = (PI * w + 1.0).sin();
        grad[i] += 0.25
            * (2.0 * (w - 1.0) * (1.0 + 10.0 * s * s)
                + 10.0 * PI * (w - 1.0) * (w - 1.0) * (2.0 * (PI * w + 1.0)).sin());
    }
    let wd = levy_w(theta[d - 1]);
    let s = (2.0 * PI * wd).sin();
    grad[d - 1] += 0.25
        * (2.0 * (wd - 1.0) * (1.0 + s * s)
            + 2.0 * PI * (wd - 1.0) * (wd - 1.0) * (4.0 * PI * wd).sin());
    grad
}

fn rosenbrock_value(theta: &[f64]) -> f64 {
    theta
        .windows(2)
        .map(|w| {
            let head = w[1] - w[0] * w[0];
            let tail = 1.0 - w[0];
            100.0 * head * head + tail * tail
        })
        .sum::<f64>()
}

fn rosenbrock_gradient(theta: &[f64]) -> Vec<f64> {
    let d = theta.len();
    let mut grad = vec![0.0; d];
    for i in 0..d {
        if i + 1 < d {
            grad[i] += -400.0 * theta[i] * (theta[i + 1] - theta[i] * theta[i])
                - 2.0 * (1.0 - theta[i]);
        }
        if i > 0 {
            grad[i] += 200.0 * (theta[i] - theta[i - 1] * theta[i - 1]);
        }
    }
    grad
}
