//! Moment-quality measurements: how well the gradient estimate and the first
//! moment align with the true gradient, how close each second-moment variant
//! tracks its noise-free reference, and how much variance the first-moment
//! average removes at a fixed point.

use crate::error::{Error, Result};
use crate::estimator::{estimate_gradient, EstimatorConfig};
use crate::objectives::{DifferentiableObjective, Objective, ObjectiveSpec};
use crate::optimizers::{
    run_observed, HyperParams, OptimizerKind, OptimizerState, RunTrace, StepEvent,
};
use crate::sampler::RandomSource;

/// Per-iteration moment diagnostics. Fields whose moment the optimizer does
/// not maintain are absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDiagnostics {
    /// Cosine of the gradient estimate `g_t` against the true gradient at
    /// the pre-step point.
    pub cos_g: f64,
    /// Cosine of the first moment `m_t` against the same true gradient.
    pub cos_m: Option<f64>,
    /// Relative error of the `g²`-driven second moment against the
    /// true-gradient reference recursion.
    pub relerr_v_ori: Option<f64>,
    /// Relative error of the `m²`-driven second moment against the same
    /// reference.
    pub relerr_v_ours: Option<f64>,
}

/// `⟨a,b⟩ / (‖a‖·‖b‖)`, clamped to `[-1, 1]`; zero when either norm is below
/// 1e-300.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(cosine_unchecked(a, b))
}

fn cosine_unchecked(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na2 = 0.0;
    let mut nb2 = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na2 += x * x;
        nb2 += y * y;
    }
    if na2.sqrt() < 1e-300 || nb2.sqrt() < 1e-300 {
        return 0.0;
    }
    (dot / (na2 * nb2).sqrt()).clamp(-1.0, 1.0)
}

/// `‖v_est - v_ref‖ / ‖v_ref‖` in Euclidean norms.
pub fn relative_error(v_est: &[f64], v_ref: &[f64]) -> Result<f64> {
    if v_est.len() != v_ref.len() {
        return Err(Error::DimensionMismatch {
            expected: v_ref.len(),
            actual: v_est.len(),
        });
    }
    let ref_norm = norm(v_ref);
    if ref_norm == 0.0 {
        return Err(Error::ZeroReferenceNorm);
    }
    let diff = v_est
        .iter()
        .zip(v_ref)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(diff / ref_norm)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// The noise-free comparator for second moments: the same exponential moving
/// average, driven by the squared true gradient along the realized
/// trajectory. Starts at zero and stays nonnegative componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSecondMoment {
    v: Vec<f64>,
    beta2: f64,
}

impl ReferenceSecondMoment {
    pub fn new(d: usize, beta2: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if !beta2.is_finite() || !(0.0..1.0).contains(&beta2) {
            return Err(Error::invalid("beta2", "must lie in [0, 1)"));
        }
        Ok(ReferenceSecondMoment {
            v: vec![0.0; d],
            beta2,
        })
    }

    /// Advances `v ← β2·v + (1-β2)·(∇F)²`.
    pub fn update(&mut self, true_gradient: &[f64]) -> Result<()> {
        if true_gradient.len() != self.v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.v.len(),
                actual: true_gradient.len(),
            });
        }
        for (v, g) in self.v.iter_mut().zip(true_gradient) {
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }
}

/// Measured versus predicted variance ratio of the first-moment average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReduction {
    /// Empirical `Var(m_i)/Var(g_i)` averaged over coordinates.
    pub measured: f64,
    /// `(1 - β1) / (1 + β1)`, the stationary ratio for i.i.d. estimates.
    pub predicted: f64,
}

/// Smallest burn-in admitted by [`variance_reduction_ratio`]: enough steps
/// that `β1^t` has decayed to about 5e-5, suppressing the initialization
/// term.
pub fn minimum_burn_in(beta1: f64) -> usize {
    (10.0 / (1.0 - beta1)).ceil() as usize
}

/// Runs the first-moment average `m ← β1·m + (1-β1)·g` on i.i.d. estimates
/// at a fixed `theta` and measures the stationary variance ratio of `m`
/// against `g`, per coordinate, over `n_measure` post-burn-in samples.
///
/// Holding `theta` fixed isolates the variance of the average from the bias
/// a moving trajectory would add.
pub fn variance_reduction_ratio<O: Objective + ?Sized>(
    objective: &O,
    theta: &[f64],
    cfg: &EstimatorConfig,
    beta1: f64,
    n_burn: usize,
    n_measure: usize,
    rng: &mut RandomSource,
) -> Result<VarianceReduction> {
    let d = objective.dim();
    if theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.len(),
        });
    }
    if !beta1.is_finite() || !(0.0..1.0).contains(&beta1) {
        return Err(Error::invalid("beta1", "must lie in [0, 1)"));
    }
    if n_measure < 100 {
        return Err(Error::invalid(
            "n_measure",
            "need at least 100 samples for a meaningful variance estimate",
        ));
    }
    let required = minimum_burn_in(beta1);
    if n_burn < required {
        return Err(Error::invalid(
            "n_burn",
            format!("need at least {required} burn-in steps for beta1 = {beta1}"),
        ));
    }

    let mut m = vec![0.0; d];
    let mut stats_m = Welford::new(d);
    let mut stats_g = Welford::new(d);
    for step in 0..(n_burn + n_measure) {
        let g = estimate_gradient(objective, theta, cfg, rng)?;
        let g = g.components();
        for i in 0..d {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        }
        if step >= n_burn {
            stats_m.push(&m);
            stats_g.push(g);
        }
    }
    let var_m = stats_m.variances();
    let var_g = stats_g.variances();
    let mut ratio_sum = 0.0;
    for i in 0..d {
        if var_g[i] == 0.0 {
            return Err(Error::invalid(
                "objective",
                "estimates have zero variance; ratio undefined",
            ));
        }
        ratio_sum += var_m[i] / var_g[i];
    }
    Ok(VarianceReduction {
        measured: ratio_sum / d as f64,
        predicted: (1.0 - beta1) / (1.0 + beta1),
    })
}

/// Per-coordinate running mean and M2 accumulator.
struct Welford {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Welford {
    fn new(d: usize) -> Self {
        Welford {
            n: 0,
            mean: vec![0.0; d],
            m2: vec![0.0; d],
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for (i, &value) in x.iter().enumerate() {
            let delta = value - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (value - self.mean[i]);
        }
    }

    fn variances(&self) -> Vec<f64> {
        assert!(self.n >= 2);
        self.m2.iter().map(|s| s / (self.n - 1) as f64).collect()
    }
}

/// As [`crate::optimizers::run`], additionally recording per-iteration
/// diagnostics against the true gradient. Diagnostics are computed from
/// read-only views and a separate reference recursion, so the trajectory is
/// bitwise identical to the uninstrumented run with the same seed.
///
/// Relative-error fields are absent while the reference recursion is still
/// identically zero (a run started exactly at a stationary point).
pub fn instrumented_run(
    kind: OptimizerKind,
    spec: &ObjectiveSpec,
    cfg: &EstimatorConfig,
    hp: HyperParams,
    theta0: &[f64],
    iters: u64,
    seed: u64,
) -> Result<RunTrace> {
    let state = OptimizerState::new(kind, spec.dim(), hp)?;
    instrumented_run_from_state(state, spec, cfg, theta0, iters, seed)
}

/// As [`instrumented_run`], starting from an explicit state.
pub fn instrumented_run_from_state(
    state: OptimizerState,
    spec: &ObjectiveSpec,
    cfg: &EstimatorConfig,
    theta0: &[f64],
    iters: u64,
    seed: u64,
) -> Result<RunTrace> {
    let d = spec.dim();
    let kind = state.kind();
    let beta2 = state.hyper_params().beta2();
    let mut v_ref = ReferenceSecondMoment::new(d, beta2)?;
    // Shadow recursions so both second-moment variants are observable on the
    // same trajectory regardless of which one the optimizer integrates:
    // r-adazo carries the m²-recursion live and shadows the g²-one, zo-adamm
    // the other way around. Both start from the run's own v0.
    let mut shadow = state
        .second_moment()
        .filter(|_| kind.uses_first_moment())
        .map(|v| v.to_vec());

    run_observed(state, spec, cfg, theta0, iters, seed, |event: &StepEvent<'_>| {
        let grad = spec.gradient(event.theta_before);
        v_ref
            .update(&grad)
            .expect("reference dimension fixed at construction");
        let cos_g = cosine_unchecked(event.estimate, &grad);
        let mut cos_m = None;
        let mut v_ori: Option<&[f64]> = None;
        let mut v_ours: Option<&[f64]> = None;
        if let Some(m) = event.state.first_moment() {
            cos_m = Some(cosine_unchecked(m, &grad));
            let live = event.state.second_moment().expect("m implies v");
            let sh = shadow.as_mut().expect("shadow exists when m does");
            match event.state.kind() {
                OptimizerKind::RAdaZO => {
                    advance_ema(sh, beta2, event.estimate);
                    v_ours = Some(live);
                    v_ori = Some(sh.as_slice());
                }
                OptimizerKind::ZoAdaMM => {
                    advance_ema(sh, beta2, m);
                    v_ori = Some(live);
                    v_ours = Some(sh.as_slice());
                }
                _ => unreachable!("only adamm and r-adazo carry a first moment"),
            }
        } else if let Some(live) = event.state.second_moment() {
            v_ori = Some(live);
        }
        let against_ref = |v: Option<&[f64]>| {
            v.and_then(|v| relative_error(v, v_ref.values()).ok())
        };
        Some(MomentDiagnostics {
            cos_g,
            cos_m,
            relerr_v_ori: against_ref(v_ori),
            relerr_v_ours: against_ref(v_ours),
        })
    })
}

fn advance_ema(v: &mut [f64], beta2: f64, driver: &[f64]) {
    for (vi, x) in v.iter_mut().zip(driver) {
        *vi = beta2 * *vi + (1.0 - beta2) * x * x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{ObjectiveKind, ObjectiveSpec};
    use crate::optimizers::run;

    #[test]
    fn cosine_hand_values() {
        assert_eq!(cosine_similarity(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine_similarity(&[1.0, 1.0], &[-1.0, -1.0]).unwrap(), -1.0);
        assert_eq!(cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 0.0);
        assert!(cosine_similarity(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn relative_error_hand_values() {
        let v = [1.0, 2.0, 2.0];
        assert_eq!(relative_error(&v, &v).unwrap(), 0.0);
        let doubled: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
        assert_eq!(relative_error(&doubled, &v).unwrap(), 1.0);
        assert_eq!(relative_error(&[0.0; 3], &v).unwrap(), 1.0);
        assert_eq!(relative_error(&v, &[0.0; 3]), Err(Error::ZeroReferenceNorm));
        assert!(relative_error(&[1.0], &v).is_err());
    }

    #[test]
    fn reference_recursion_hand_values() {
        let mut r = ReferenceSecondMoment::new(2, 0.5).unwrap();
        r.update(&[2.0, 0.0]).unwrap();
        assert_eq!(r.values(), &[2.0, 0.0]);
        r.update(&[0.0, 4.0]).unwrap();
        assert_eq!(r.values(), &[1.0, 8.0]);
        assert!(r.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn ratio_is_exactly_one_for_beta1_zero() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 5).unwrap();
        let cfg = EstimatorConfig::new(0.01, 1).unwrap();
        let mut rng = RandomSource::new(21);
        let vr = variance_reduction_ratio(&spec, &[1.0; 5], &cfg, 0.0, 10, 150, &mut rng).unwrap();
        assert_eq!(vr.measured, 1.0);
        assert_eq!(vr.predicted, 1.0);
    }

    #[test]
    fn ratio_argument_validation() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 3).unwrap();
        let cfg = EstimatorConfig::new(0.01, 1).unwrap();
        let mut rng = RandomSource::new(0);
        assert!(
            variance_reduction_ratio(&spec, &[1.0; 3], &cfg, 0.5, 20, 99, &mut rng).is_err()
        );
        assert!(
            variance_reduction_ratio(&spec, &[1.0; 3], &cfg, 0.5, 19, 500, &mut rng).is_err()
        );
        assert!(
            variance_reduction_ratio(&spec, &[1.0; 3], &cfg, 1.0, 1000, 500, &mut rng).is_err()
        );
        assert_eq!(minimum_burn_in(0.5), 20);
        assert!(minimum_burn_in(0.9) >= 100);
    }

    #[test]
    fn instrumented_trajectory_matches_plain_run_bitwise() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 20).unwrap();
        let cfg = EstimatorConfig::new(0.005, 5).unwrap();
        let hp = HyperParams::new(0.9, 0.99, 0.001, 1e-8).unwrap();
        let theta0 = spec.default_theta0();
        for kind in OptimizerKind::ALL {
            let plain = run(kind, &spec, &cfg, hp, &theta0, 50, 17).unwrap();
            let inst = instrumented_run(kind, &spec, &cfg, hp, &theta0, 50, 17).unwrap();
            assert_eq!(plain.records.len(), inst.records.len());
            for (p, i) in plain.records.iter().zip(&inst.records) {
                assert_eq!(p.fval.to_bits(), i.fval.to_bits(), "{kind}");
                assert_eq!(p.step_norm.to_bits(), i.step_norm.to_bits(), "{kind}");
            }
        }
    }

    #[test]
    fn first_iteration_cosines_coincide() {
        // m1 is a positive multiple of g1 when m0 = 0
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 30).unwrap();
        let cfg = EstimatorConfig::new(0.005, 3).unwrap();
        let hp = HyperParams::new(0.9, 0.99, 0.001, 1e-8).unwrap();
        let trace =
            instrumented_run(OptimizerKind::RAdaZO, &spec, &cfg, hp, &spec.default_theta0(), 1, 5)
                .unwrap();
        let diag = trace.records[1].diagnostics.unwrap();
        assert!((diag.cos_m.unwrap() - diag.cos_g).abs() <= 1e-12);
    }

    #[test]
    fn diagnostic_fields_match_optimizer_capabilities() {
        let spec = ObjectiveSpec::new(ObjectiveKind::Quadratic, 8).unwrap();
        let cfg = EstimatorConfig::new(0.01, 2).unwrap();
        let hp = HyperParams::new(0.9, 0.99, 0.001, 1e-8).unwrap();
        let theta0 = spec.default_theta0();
        let cases = [
            (OptimizerKind::ZoSgd, false, false, false),
            (OptimizerKind::ZoSignSgd, false, false, false),
            (OptimizerKind::ZoRmsProp, false, true, false),
            (OptimizerKind::ZoAdaMM, true, true, true),
            (OptimizerKind::RAdaZO, true, true, true),
        ];
        for (kind, has_m, has_ori, has_ours) in cases {
            let trace = instrumented_run(kind, &spec, &cfg, hp, &theta0, 3, 2).unwrap();
            let diag = trace.records[2].diagnostics.unwrap();
            assert_eq!(diag.cos_m.is_some(), has_m, "{kind}");
            assert_eq!(diag.relerr_v_ori.is_some(), has_ori, "{kind}");
            assert_eq!(diag.relerr_v_ours.is_some(), has_ours, "{kind}");
            assert!(diag.cos_g.abs() <= 1.0);
        }
    }
}
