//! The five gradient-free update rules behind one stepping interface.
//!
//! Per iteration, with estimate `g`, decay rates `β1, β2`, learning rate `η`
//! and stability constant `ζ` (all vector operations elementwise):
//!
//! * `zo-sgd`:     `θ ← θ - η·g`
//! * `zo-signsgd`: `θ ← θ - η·sign(g)`, with `sign(0) = 0`
//! * `zo-rmsprop`: `v ← β2·v + (1-β2)·g²;  θ ← θ - η·g/√(v+ζ)`
//! * `zo-adamm`:   `m ← β1·m + (1-β1)·g;  v ← β2·v + (1-β2)·g²;
//!   θ ← θ - η·m/√(v+ζ)`
//! * `r-adazo`:    `m ← β1·m + (1-β1)·g;  v ← β2·v + (1-β2)·m²;
//!   θ ← θ - η·m/√(v+ζ)`
//!
//! `r-adazo` squares the first moment instead of the raw estimate when
//! updating `v`: the first moment is a variance-reduced version of the
//! estimate, so the refined second moment tracks the landscape geometry more
//! stably and scales updates more aggressively once estimates agree.
//!
//! There is **no bias correction** in any rule — the usual `1 - β^t`
//! rescaling is deliberately absent because it would scale the early first
//! moments back up and forfeit their variance reduction. The guard `ζ` sits
//! inside the square root, `√(v + ζ)`, not outside.

use crate::diagnostics::MomentDiagnostics;
use crate::error::{Error, Result};
use crate::estimator::{estimate_gradient, EstimatorConfig};
use crate::objectives::{gap_of, sign, Objective, ObjectiveSpec};
use crate::sampler::RandomSource;

/// The five update rules. Tokens double as CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimizerKind {
    ZoSgd,
    ZoSignSgd,
    ZoRmsProp,
    ZoAdaMM,
    RAdaZO,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 5] = [
        OptimizerKind::ZoSgd,
        OptimizerKind::ZoSignSgd,
        OptimizerKind::ZoRmsProp,
        OptimizerKind::ZoAdaMM,
        OptimizerKind::RAdaZO,
    ];

    pub fn token(self) -> &'static str {
        match self {
            OptimizerKind::ZoSgd => "zo-sgd",
            OptimizerKind::ZoSignSgd => "zo-signsgd",
            OptimizerKind::ZoRmsProp => "zo-rmsprop",
            OptimizerKind::ZoAdaMM => "zo-adamm",
            OptimizerKind::RAdaZO => "r-adazo",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.token() == token)
    }

    /// Whether the rule maintains a first moment `m`.
    pub fn uses_first_moment(self) -> bool {
        matches!(self, OptimizerKind::ZoAdaMM | OptimizerKind::RAdaZO)
    }

    /// Whether the rule maintains a second moment `v`.
    pub fn uses_second_moment(self) -> bool {
        matches!(
            self,
            OptimizerKind::ZoRmsProp | OptimizerKind::ZoAdaMM | OptimizerKind::RAdaZO
        )
    }
}

impl std::fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Decay rates, learning rate and stability constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    beta1: f64,
    beta2: f64,
    eta: f64,
    zeta: f64,
}

impl HyperParams {
    pub fn new(beta1: f64, beta2: f64, eta: f64, zeta: f64) -> Result<Self> {
        if !beta1.is_finite() || !(0.0..1.0).contains(&beta1) {
            return Err(Error::invalid("beta1", "must lie in [0, 1)"));
        }
        if !beta2.is_finite() || !(0.0..1.0).contains(&beta2) {
            return Err(Error::invalid("beta2", "must lie in [0, 1)"));
        }
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::invalid("eta", "must be finite and positive"));
        }
        if !zeta.is_finite() || zeta < 0.0 {
            return Err(Error::invalid("zeta", "must be finite and nonnegative"));
        }
        Ok(HyperParams {
            beta1,
            beta2,
            eta,
            zeta,
        })
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }
}

/// Mutable per-run optimizer state: moments and the iteration counter.
///
/// `zo-sgd` and `zo-signsgd` never touch `m` or `v`; `zo-rmsprop` never
/// touches `m`. Every second-moment update is a convex combination of
/// squares, so `v` stays nonnegative throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    kind: OptimizerKind,
    hp: HyperParams,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl OptimizerState {
    /// State with the standard zero-initialized moments.
    pub fn new(kind: OptimizerKind, d: usize, hp: HyperParams) -> Result<Self> {
        Self::with_moments(kind, hp, vec![0.0; d], vec![0.0; d])
    }

    /// State with explicit initial moments; `v0` must be nonnegative
    /// componentwise (strictly positive `v0` matches the setting where the
    /// adaptive denominator never vanishes).
    pub fn with_moments(
        kind: OptimizerKind,
        hp: HyperParams,
        m0: Vec<f64>,
        v0: Vec<f64>,
    ) -> Result<Self> {
        if m0.is_empty() || m0.len() != v0.len() {
            return Err(Error::invalid("m0/v0", "must be nonempty and equal length"));
        }
        if m0.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "m0" });
        }
        if v0.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid("v0", "entries must be finite and >= 0"));
        }
        Ok(OptimizerState {
            kind,
            hp,
            m: m0,
            v: v0,
            t: 0,
        })
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn hyper_params(&self) -> &HyperParams {
        &self.hp
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// Completed steps.
    pub fn iteration(&self) -> u64 {
        self.t
    }

    pub fn first_moment(&self) -> Option<&[f64]> {
        self.kind.uses_first_moment().then_some(self.m.as_slice())
    }

    pub fn second_moment(&self) -> Option<&[f64]> {
        self.kind.uses_second_moment().then_some(self.v.as_slice())
    }

    /// Applies one update with estimate `g`, mutating the moments and the
    /// counter, and returns the new parameter vector.
    pub fn step(&mut self, theta: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        let d = self.m.len();
        if theta.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: theta.len(),
            });
        }
        if g.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: g.len(),
            });
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "gradient estimate",
            });
        }
        let HyperParams {
            beta1,
            beta2,
            eta,
            zeta,
        } = self.hp;
        let mut theta_new = vec![0.0; d];
        match self.kind {
            OptimizerKind::ZoSgd => {
                for i in 0..d {
                    theta_new[i] = theta[i] - eta * g[i];
                }
            }
            OptimizerKind::ZoSignSgd => {
                for i in 0..d {
                    theta_new[i] = theta[i] - eta * sign(g[i]);
                }
            }
            OptimizerKind::ZoRmsProp => {
                for i in 0..d {
                    self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * g[i] * g[i];
                    theta_new[i] = theta[i] - scaled_step(eta, g[i], self.v[i], zeta);
                }
            }
            OptimizerKind::ZoAdaMM => {
                for i in 0..d {
                    self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g[i];
                    self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * g[i] * g[i];
                    theta_new[i] = theta[i] - scaled_step(eta, self.m[i], self.v[i], zeta);
                }
            }
            OptimizerKind::RAdaZO => {
                for i in 0..d {
                    self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g[i];
                    self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * self.m[i] * self.m[i];
                    theta_new[i] = theta[i] - scaled_step(eta, self.m[i], self.v[i], zeta);
                }
            }
        }
        self.t += 1;
        Ok(theta_new)
    }
}

/// `η·u/√(v+ζ)`, with a zero numerator short-circuited so that a zero
/// estimate is a fixed point even when `v + ζ = 0`.
#[inline]
fn scaled_step(eta: f64, numerator: f64, v: f64, zeta: f64) -> f64 {
    if numerator == 0.0 {
        0.0
    } else {
        eta * numerator / (v + zeta).sqrt()
    }
}

/// One row of the per-iteration log. Row 0 is the θ₀ baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: u64,
    /// Noise-free objective value `F(θ)` after the step.
    pub fval: f64,
    /// `F(θ) - min F`, clamped at zero.
    pub gap: f64,
    /// `‖θ_t - θ_{t-1}‖`; zero for the baseline row.
    pub step_norm: f64,
    /// Present on instrumented runs, absent on plain ones and on row 0.
    pub diagnostics: Option<MomentDiagnostics>,
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    /// Iteration whose estimate or step failed (1-based).
    pub iter: u64,
    pub error: Error,
}

/// Trace of one run. On failure the records collected so far are retained
/// and `failure` marks the aborted iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub failure: Option<RunFailure>,
}

impl RunTrace {
    pub fn final_record(&self) -> &TraceRecord {
        self.records.last().expect("trace always has the baseline row")
    }
}

/// Per-step view handed to run observers after the state update.
pub struct StepEvent<'a> {
    /// 1-based iteration.
    pub iter: u64,
    /// Point the estimate was taken at.
    pub theta_before: &'a [f64],
    pub theta_after: &'a [f64],
    /// The gradient estimate `g_t`.
    pub estimate: &'a [f64],
    /// State after the update (`m_t`, `v_t`).
    pub state: &'a OptimizerState,
}

/// Runs `iters` iterations of estimate-then-step from zero-initialized
/// moments, recording one [`TraceRecord`] per iteration plus the baseline.
/// Fully deterministic given the seed.
pub fn run(
    kind: OptimizerKind,
    spec: &ObjectiveSpec,
    cfg: &EstimatorConfig,
    hp: HyperParams,
    theta0: &[f64],
    iters: u64,
    seed: u64,
) -> Result<RunTrace> {
    let state = OptimizerState::new(kind, spec.dim(), hp)?;
    run_from_state(state, spec, cfg, theta0, iters, seed)
}

/// As [`run`], starting from an explicit state (custom `m0`/`v0`).
pub fn run_from_state(
    state: OptimizerState,
    spec: &ObjectiveSpec,
    cfg: &EstimatorConfig,
    theta0: &[f64],
    iters: u64,
    seed: u64,
) -> Result<RunTrace> {
    run_observed(state, spec, cfg, theta0, iters, seed, |_| None)
}

/// The run loop with an observation hook. The observer is called after each
/// step and may attach diagnostics to the record; it receives read-only
/// views, so observed and plain runs follow bitwise identical trajectories.
pub fn run_observed<F>(
    mut state: OptimizerState,
    spec: &ObjectiveSpec,
    cfg: &EstimatorConfig,
    theta0: &[f64],
    iters: u64,
    seed: u64,
    mut observer: F,
) -> Result<RunTrace>
where
    F: FnMut(&StepEvent<'_>) -> Option<MomentDiagnostics>,
{
    let d = spec.dim();
    if state.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: state.dim(),
        });
    }
    if theta0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta0.len(),
        });
    }
    if theta0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { what: "theta0" });
    }

    let mut rng = RandomSource::new(seed);
    let mut theta = theta0.to_vec();
    let mut records = Vec::with_capacity(iters as usize + 1);
    records.push(baseline_record(spec, &theta));

    let mut failure = None;
    for t in 1..=iters {
        let g = match estimate_gradient(spec, &theta, cfg, &mut rng) {
            Ok(g) => g,
            Err(error) => {
                failure = Some(RunFailure { iter: t, error });
                break;
            }
        };
        let theta_new = match state.step(&theta, g.components()) {
            Ok(theta_new) => theta_new,
            Err(error) => {
                failure = Some(RunFailure { iter: t, error });
                break;
            }
        };
        let step_norm = theta_new
            .iter()
            .zip(&theta)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let diagnostics = observer(&StepEvent {
            iter: t,
            theta_before: &theta,
            theta_after: &theta_new,
            estimate: g.components(),
            state: &state,
        });
        theta = theta_new;
        let fval = spec.value(&theta);
        records.push(TraceRecord {
            iter: t,
            fval,
            gap: gap_of(fval),
            step_norm,
            diagnostics,
        });
    }
    Ok(RunTrace { records, failure })
}

fn baseline_record(spec: &ObjectiveSpec, theta: &[f64]) -> TraceRecord {
    let fval = spec.value(theta);
    TraceRecord {
        iter: 0,
        fval,
        gap: gap_of(fval),
        step_norm: 0.0,
        diagnostics: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::ObjectiveKind;

    fn hp(beta1: f64, beta2: f64, eta: f64, zeta: f64) -> HyperParams {
        HyperParams::new(beta1, beta2, eta, zeta).unwrap()
    }

    #[test]
    fn hand_derived_single_steps() {
        let h = hp(0.9, 0.99, 0.1, 0.0);

        let mut radazo = OptimizerState::new(OptimizerKind::RAdaZO, 1, h).unwrap();
        let theta = radazo.step(&[0.0], &[2.0]).unwrap();
        // m = 0.2, v = 0.01·0.04 = 4e-4, step = 0.1·0.2/0.02 = 1.0
        assert!((radazo.first_moment().unwrap()[0] - 0.2).abs() <= 1e-12);
        assert!((radazo.second_moment().unwrap()[0] - 4e-4).abs() <= 1e-12);
        assert!((theta[0] - (-1.0)).abs() <= 1e-12);

        let mut adamm = OptimizerState::new(OptimizerKind::ZoAdaMM, 1, h).unwrap();
        let theta = adamm.step(&[0.0], &[2.0]).unwrap();
        // m = 0.2, v = 0.01·4 = 0.04, step = 0.1·0.2/0.2 = 0.1
        assert!((adamm.first_moment().unwrap()[0] - 0.2).abs() <= 1e-12);
        assert!((adamm.second_moment().unwrap()[0] - 0.04).abs() <= 1e-12);
        assert!((theta[0] - (-0.1)).abs() <= 1e-12);
    }

    #[test]
    fn zero_estimate_is_a_fixed_point() {
        for kind in OptimizerKind::ALL {
            let mut state = OptimizerState::new(kind, 3, hp(0.9, 0.99, 0.5, 0.0)).unwrap();
            let theta = state.step(&[1.0, -2.0, 0.5], &[0.0; 3]).unwrap();
            assert_eq!(theta, vec![1.0, -2.0, 0.5], "{kind}");
            assert!(state.m.iter().all(|&x| x == 0.0));
            assert!(state.v.iter().all(|&x| x == 0.0));
            assert_eq!(state.iteration(), 1);
        }
    }

    #[test]
    fn constant_estimate_first_moment_closed_form() {
        // with constant g, m_t = (1 - β1^t)·g
        let beta1 = 0.9;
        let g = [1.7, -0.4];
        let mut state = OptimizerState::new(OptimizerKind::ZoAdaMM, 2, hp(beta1, 0.99, 0.01, 1e-8)).unwrap();
        let mut theta = vec![0.0, 0.0];
        for t in 1..=50u32 {
            theta = state.step(&theta, &g).unwrap();
            let expected = 1.0 - beta1.powi(t as i32);
            for (m, gi) in state.first_moment().unwrap().iter().zip(&g) {
                assert!((m - expected * gi).abs() <= 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn first_step_magnitude_is_capped() {
        // with ζ=0, v0=0 the first step is at most η/√(1-β2) per coordinate
        let h = hp(0.9, 0.99, 0.003, 0.0);
        let cap = h.eta() / (1.0 - h.beta2()).sqrt();
        let g = [3.5, -0.02, 120.0, 1e-7];
        for kind in [
            OptimizerKind::ZoRmsProp,
            OptimizerKind::ZoAdaMM,
            OptimizerKind::RAdaZO,
        ] {
            let mut state = OptimizerState::new(kind, 4, h).unwrap();
            let theta = state.step(&[0.0; 4], &g).unwrap();
            for x in &theta {
                assert!(x.abs() <= cap * (1.0 + 1e-12), "{kind}: {x} vs cap {cap}");
            }
        }
    }

    #[test]
    fn sgd_is_linear_and_signsgd_is_scale_invariant() {
        let h = hp(0.0, 0.0, 0.25, 0.0);
        let g = [0.3, -1.2, 8.0];
        let c = 3.7;
        let scaled: Vec<f64> = g.iter().map(|x| c * x).collect();

        let mut a = OptimizerState::new(OptimizerKind::ZoSgd, 3, h).unwrap();
        let mut b = OptimizerState::new(OptimizerKind::ZoSgd, 3, h).unwrap();
        let ta = a.step(&[0.0; 3], &g).unwrap();
        let tb = b.step(&[0.0; 3], &scaled).unwrap();
        for (x, y) in ta.iter().zip(&tb) {
            assert!((c * x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }

        let mut a = OptimizerState::new(OptimizerKind::ZoSignSgd, 3, h).unwrap();
        let mut b = OptimizerState::new(OptimizerKind::ZoSignSgd, 3, h).unwrap();
        let ta = a.step(&[0.0; 3], &g).unwrap();
        let tb = b.step(&[0.0; 3], &scaled).unwrap();
        assert_eq!(ta, tb);
    }

    #[test]
    fn sgd_family_leaves_moments_untouched() {
        for kind in [OptimizerKind::ZoSgd, OptimizerKind::ZoSignSgd] {
            let mut state = OptimizerState::new(kind, 2, hp(0.9, 0.99, 0.1, 1e-8)).unwrap();
            state.step(&[1.0, 1.0], &[5.0, -5.0]).unwrap();
            assert_eq!(state.m, vec![0.0, 0.0]);
            assert_eq!(state.v, vec![0.0, 0.0]);
            assert!(state.first_moment().is_none());
            assert!(state.second_moment().is_none());
        }
        let mut state = OptimizerState::new(OptimizerKind::ZoRmsProp, 2, hp(0.9, 0.99, 0.1, 1e-8)).unwrap();
        state.step(&[1.0, 1.0], &[5.0, -5.0]).unwrap();
        assert_eq!(state.m, vec![0.0, 0.0]);
        assert!(state.first_moment().is_none());
    }

    #[test]
    fn state_validation() {
        let h = hp(0.9, 0.99, 0.1, 0.0);
        assert!(OptimizerState::with_moments(
            OptimizerKind::RAdaZO,
            h,
            vec![0.0; 2],
            vec![1e-6; 2]
        )
        .is_ok());
        assert!(OptimizerState::with_moments(
            OptimizerKind::RAdaZO,
            h,
            vec![0.0; 2],
            vec![1e-6, -1.0]
        )
        .is_err());
        assert!(HyperParams::new(1.0, 0.99, 0.1, 0.0).is_err());
        assert!(HyperParams::new(-0.1, 0.99, 0.1, 0.0).is_err());
        assert!(HyperParams::new(0.9, 1.5, 0.1, 0.0).is_err());
        assert!(HyperParams::new(0.9, 0.99, 0.0, 0.0).is_err());
        assert!(HyperParams::new(0.9, 0.99, 0.1, -1.0).is_err());
    }

    #[test]
    fn step_rejects_bad_inputs() {
        let mut state = OptimizerState::new(OptimizerKind::ZoSgd, 2, hp(0.0, 0.0, 0.1, 0.0)).unwrap();
        assert!(state.step(&[0.0; 3], &[0.0; 2]).is_err());
        assert!(state.step(&[0.0; 2], &[0.0; 3]).is_err());
        assert!(state.step(&[0.0; 2], &[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn run_is_deterministic_and_finite() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 10).unwrap();
        let cfg = EstimatorConfig::new(0.005, 10).unwrap();
        let h = hp(0.9, 0.99, 0.001, 1e-8);
        let theta0 = spec.default_theta0();
        let a = run(OptimizerKind::RAdaZO, &spec, &cfg, h, &theta0, 100, 7).unwrap();
        let b = run(OptimizerKind::RAdaZO, &spec, &cfg, h, &theta0, 100, 7).unwrap();
        assert!(a.failure.is_none());
        assert_eq!(a.records.len(), 101);
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.fval.to_bits(), rb.fval.to_bits());
            assert_eq!(ra.gap.to_bits(), rb.gap.to_bits());
            assert_eq!(ra.step_norm.to_bits(), rb.step_norm.to_bits());
        }
        for r in &a.records {
            assert!(r.gap.is_finite() && r.gap > 0.0);
        }
    }

    #[test]
    fn zero_iterations_give_baseline_only() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Cubic, 4).unwrap();
        let cfg = EstimatorConfig::new(0.01, 2).unwrap();
        let trace = run(
            OptimizerKind::ZoSgd,
            &spec,
            &cfg,
            hp(0.0, 0.0, 0.1, 0.0),
            &[1.0; 4],
            0,
            1,
        )
        .unwrap();
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.records[0].iter, 0);
    }

    #[test]
    fn diverging_run_keeps_partial_trace_with_marker() {
        // a huge learning rate overflows the quadratic after one step
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 4).unwrap();
        let cfg = EstimatorConfig::new(0.005, 2).unwrap();
        let trace = run(
            OptimizerKind::ZoSgd,
            &spec,
            &cfg,
            hp(0.0, 0.0, 1e300, 0.0),
            &[2.0; 4],
            50,
            3,
        )
        .unwrap();
        let failure = trace.failure.expect("run must abort");
        assert!(failure.iter >= 1);
        assert!(matches!(failure.error, Error::NonFiniteEvaluation { .. }));
        assert!(!trace.records.is_empty());
        assert!((trace.records.len() as u64) <= failure.iter + 1);
    }

    #[test]
    fn beta1_zero_makes_radazo_and_adamm_coincide() {
        let h = hp(0.0, 0.99, 0.01, 1e-8);
        let mut radazo = OptimizerState::new(OptimizerKind::RAdaZO, 3, h).unwrap();
        let mut adamm = OptimizerState::new(OptimizerKind::ZoAdaMM, 3, h).unwrap();
        let mut ta = vec![0.5, -1.0, 2.0];
        let mut tb = ta.clone();
        let mut rng = RandomSource::new(13);
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 3).unwrap();
        let cfg = EstimatorConfig::new(0.01, 2).unwrap();
        for _ in 0..20 {
            let g = estimate_gradient(&spec, &ta, &cfg, &mut rng).unwrap();
            ta = radazo.step(&ta, g.components()).unwrap();
            tb = adamm.step(&tb, g.components()).unwrap();
            for (x, y) in ta.iter().zip(&tb) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            for (x, y) in radazo.v.iter().zip(&adamm.v) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
