//! Finite-difference gradient estimation from sphere-sampled probes, and
//! Monte-Carlo oracles for the ball-smoothed objective it is unbiased for.
//!
//! The estimate at `θ` is
//!
//! ```text
//! ĝ = (d / K) · Σ_k [ (f(θ + μ·u_k; ξ) - f(θ; ξ)) / μ ] · u_k
//! ```
//!
//! with `u_k` drawn i.i.d. uniformly from the unit sphere. The central value
//! `f(θ; ξ)` appears once in the formula, so it is evaluated once and shared
//! across all `K` directions: one estimate costs exactly `K + 1` objective
//! evaluations. The single noise realization `ξ` is likewise shared by every
//! evaluation of the estimate, matching the formula's single `ξ`; independent
//! draws per term would change the variance constant.
//!
//! `ĝ` is an unbiased estimate of `∇F_μ(θ)`, the gradient of the smoothing
//! `F_μ(θ) = E[F(θ + μ·u)]` over `u` uniform in the unit ball. The oracles
//! [`smoothed_value`] and [`smoothed_gradient_oracle`] estimate `F_μ` and
//! `∇F_μ` directly from ball samples; they exist for tests and diagnostics
//! and are never called on the optimization hot path.

use crate::error::{Error, Result};
use crate::objectives::{DifferentiableObjective, Objective};
use crate::sampler::{sample_ball, sample_sphere, Direction, RandomSource};

/// Smoothing radius `μ > 0` and direction count `K >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    mu: f64,
    k: usize,
}

impl EstimatorConfig {
    pub fn new(mu: f64, k: usize) -> Result<Self> {
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::invalid("mu", "must be finite and positive"));
        }
        if k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        Ok(EstimatorConfig { mu, k })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// A gradient estimate together with its evaluation cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    components: Vec<f64>,
    evaluations_used: usize,
}

impl GradientEstimate {
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    /// Objective evaluations consumed: `K + 1` per estimate.
    pub fn evaluations_used(&self) -> usize {
        self.evaluations_used
    }
}

/// Estimates the gradient at `theta` from `K` fresh sphere directions and a
/// fresh shared noise draw.
///
/// Stream use per call: one noise draw (none for noise-free objectives),
/// then `K` sphere samples from the direction stream, in that order.
pub fn estimate_gradient<O: Objective + ?Sized>(
    objective: &O,
    theta: &[f64],
    cfg: &EstimatorConfig,
    rng: &mut RandomSource,
) -> Result<GradientEstimate> {
    let d = objective.dim();
    if theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.len(),
        });
    }
    let xi = objective.sample_noise(rng);
    let directions = (0..cfg.k)
        .map(|_| sample_sphere(d, rng))
        .collect::<Result<Vec<_>>>()?;
    estimate_gradient_along(objective, theta, cfg.mu, &directions, xi)
}

/// Deterministic estimator core: the same finite-difference combination, with
/// the directions and the shared noise realization supplied by the caller.
pub fn estimate_gradient_along<O: Objective + ?Sized>(
    objective: &O,
    theta: &[f64],
    mu: f64,
    directions: &[Direction],
    xi: f64,
) -> Result<GradientEstimate> {
    let d = objective.dim();
    if theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.len(),
        });
    }
    if directions.is_empty() {
        return Err(Error::invalid("directions", "need at least one direction"));
    }
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::invalid("mu", "must be finite and positive"));
    }
    let f_center = objective.value(theta) + xi;
    if !f_center.is_finite() {
        return Err(Error::NonFiniteEvaluation {
            theta: theta.to_vec(),
        });
    }
    let mut acc = vec![0.0; d];
    let mut probe = vec![0.0; d];
    for u in directions {
        if u.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: u.len(),
            });
        }
        let u = u.components();
        for i in 0..d {
            probe[i] = theta[i] + mu * u[i];
        }
        let f_probe = objective.value(&probe) + xi;
        if !f_probe.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                theta: probe.clone(),
            });
        }
        let coeff = (f_probe - f_center) / mu;
        for i in 0..d {
            acc[i] += coeff * u[i];
        }
    }
    let scale = d as f64 / directions.len() as f64;
    for a in &mut acc {
        *a *= scale;
    }
    Ok(GradientEstimate {
        components: acc,
        evaluations_used: directions.len() + 1,
    })
}

/// Monte-Carlo estimate of the ball-smoothed value `F_μ(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedValue {
    pub mean: f64,
    pub std_error: f64,
}

pub fn smoothed_value<O: Objective + ?Sized>(
    objective: &O,
    theta: &[f64],
    mu: f64,
    n_samples: usize,
    rng: &mut RandomSource,
) -> Result<SmoothedValue> {
    let d = objective.dim();
    if theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.len(),
        });
    }
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::invalid("mu", "must be finite and positive"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("n_samples", "must be at least 1"));
    }
    let mut probe = vec![0.0; d];
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for n in 1..=n_samples {
        let u = sample_ball(d, rng)?;
        let u = u.components();
        for i in 0..d {
            probe[i] = theta[i] + mu * u[i];
        }
        let v = objective.value(&probe);
        let delta = v - mean;
        mean += delta / n as f64;
        m2 += delta * (v - mean);
    }
    let std_error = if n_samples > 1 {
        (m2 / (n_samples - 1) as f64 / n_samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(SmoothedValue { mean, std_error })
}

/// Monte-Carlo estimate of `∇F_μ(θ)` with per-coordinate standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedGradient {
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: usize,
}

/// Averages the analytic gradient over ball perturbations, which equals
/// `∇F_μ(θ)` by differentiation under the expectation. Test-support oracle
/// for unbiasedness checks; independent of the finite-difference path.
pub fn smoothed_gradient_oracle<O: DifferentiableObjective + ?Sized>(
    objective: &O,
    theta: &[f64],
    mu: f64,
    n_samples: usize,
    rng: &mut RandomSource,
) -> Result<SmoothedGradient> {
    let d = objective.dim();
    if theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.len(),
        });
    }
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::invalid("mu", "must be finite and positive"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("n_samples", "must be at least 1"));
    }
    let mut probe = vec![0.0; d];
    let mut mean = vec![0.0; d];
    let mut m2 = vec![0.0; d];
    for n in 1..=n_samples {
        let u = sample_ball(d, rng)?;
        let u = u.components();
        for i in 0..d {
            probe[i] = theta[i] + mu * u[i];
        }
        let grad = objective.gradient(&probe);
        for i in 0..d {
            let delta = grad[i] - mean[i];
            mean[i] += delta / n as f64;
            m2[i] += delta * (grad[i] - mean[i]);
        }
    }
    let std_error = if n_samples > 1 {
        m2.iter()
            .map(|s| (s / (n_samples - 1) as f64 / n_samples as f64).sqrt())
            .collect()
    } else {
        vec![0.0; d]
    };
    Ok(SmoothedGradient {
        mean,
        std_error,
        samples: n_samples,
    })
}
