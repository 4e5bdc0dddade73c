//! Zeroth-order optimization toolkit.
//!
//! Minimizes objectives from function evaluations alone: probe directions are
//! drawn from the unit sphere, a finite-difference combination of the probed
//! values estimates the gradient, and one of five gradient-free update rules
//! (`zo-sgd`, `zo-signsgd`, `zo-rmsprop`, `zo-adamm`, `r-adazo`) consumes the
//! estimates. The `r-adazo` rule drives its second moment with the squared
//! *first moment* rather than the squared raw estimate, exploiting the
//! variance reduction the first-moment average already performs on noisy
//! estimates.
//!
//! Everything is deterministic given a seed; see [`sampler`] for the stream
//! layout that keeps probe directions, observation noise, and diagnostics
//! from perturbing each other.
//!
//! ```
//! use zo_opt::{
//!     estimator::EstimatorConfig,
//!     objectives::{ObjectiveKind, ObjectiveSpec},
//!     optimizers::{run, HyperParams, OptimizerKind},
//! };
//!
//! let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 10)?;
//! let cfg = EstimatorConfig::new(0.005, 10)?;
//! let hp = HyperParams::new(0.9, 0.99, 0.001, 1e-8)?;
//! let trace = run(OptimizerKind::RAdaZO, &spec, &cfg, hp, &spec.default_theta0(), 200, 1)?;
//! assert!(trace.final_record().gap < trace.records[0].gap);
//! # Ok::<(), zo_opt::Error>(())
//! ```

pub mod diagnostics;
pub mod error;
pub mod estimator;
pub mod objectives;
pub mod optimizers;
pub mod sampler;

pub use error::{Error, Result};

/// Dense parameter vector θ.
pub type ParameterVector = Vec<f64>;

pub use diagnostics::{
    cosine_similarity, instrumented_run, relative_error, variance_reduction_ratio,
    MomentDiagnostics, ReferenceSecondMoment, VarianceReduction,
};
pub use estimator::{
    estimate_gradient, smoothed_gradient_oracle, smoothed_value, EstimatorConfig,
    GradientEstimate,
};
pub use objectives::{
    DifferentiableObjective, NoiseModel, Objective, ObjectiveKind, ObjectiveSpec,
};
pub use optimizers::{
    run, HyperParams, OptimizerKind, OptimizerState, RunTrace, TraceRecord,
};
pub use sampler::{sample_ball, sample_sphere, Direction, RandomSource, PRNG_NAME};
