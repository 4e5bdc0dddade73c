//! Seeded sampling of unit-sphere and unit-ball direction vectors.
//!
//! All randomness in this crate flows through [`RandomSource`], which wraps
//! the portable ChaCha8 stream cipher (recorded in trace files as
//! [`PRNG_NAME`]). A source owns two independent ChaCha streams derived from
//! the same 64-bit seed:
//!
//! * the **direction stream**, consumed by [`sample_sphere`] and
//!   [`sample_ball`], and
//! * the **noise stream**, consumed by objective noise models.
//!
//! Keeping the streams apart means toggling observation noise (or any future
//! diagnostic sampling) never perturbs the sequence of probe directions, so
//! optimization paths stay comparable across configurations.
//!
//! Draw accounting (replayability): each standard normal is produced by a
//! Box-Muller pair built from exactly two `u64` draws, so one sphere sample in
//! dimension `d` consumes `2 * ceil(d / 2)` draws from the direction stream
//! (for odd `d` the second normal of the final pair is discarded), and one
//! ball sample consumes one additional draw for the radius. The astronomically
//! unlikely all-zeros normal vector is resampled, repeating the whole block.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Name of the pseudo-random generator, recorded in trace headers so that
/// golden traces are tied to a fixed, portable algorithm.
pub const PRNG_NAME: &str = "chacha8";

/// ChaCha streams reserved per run index; streams 2 and 3 are spare.
const STREAMS_PER_RUN: u64 = 4;
const DIRECTION_CHANNEL: u64 = 0;
const NOISE_CHANNEL: u64 = 1;

fn channel_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    // seed_from_u64 expands the seed with SplitMix64; set_stream selects one
    // of 2^64 independent ChaCha streams under the same key.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic, replayable source of randomness for one experiment run.
///
/// Two sources built from the same `(seed, run_index)` produce bitwise
/// identical sample sequences. Parallel runs derive independent sources from
/// `(base_seed, run_index)`; a source is single-owner and never shared
/// between concurrent tasks.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    run_index: u64,
    directions: ChaCha8Rng,
    noise: ChaCha8Rng,
}

impl RandomSource {
    /// Source for a standalone run (`run_index` 0).
    pub fn new(seed: u64) -> Self {
        Self::for_run(seed, 0)
    }

    /// Source for run `run_index` of an experiment with base seed `seed`.
    ///
    /// Run `r` uses ChaCha streams `4r` (directions) and `4r + 1` (noise).
    pub fn for_run(seed: u64, run_index: u64) -> Self {
        let base = run_index.wrapping_mul(STREAMS_PER_RUN);
        RandomSource {
            seed,
            run_index,
            directions: channel_rng(seed, base + DIRECTION_CHANNEL),
            noise: channel_rng(seed, base + NOISE_CHANNEL),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn run_index(&self) -> u64 {
        self.run_index
    }

    pub(crate) fn direction_u64(&mut self) -> u64 {
        self.directions.next_u64()
    }

    /// One draw from the noise stream, uniform on `[0, 1)`.
    ///
    /// Public so that user-defined objectives can implement
    /// [`Objective::sample_noise`](crate::objectives::Objective::sample_noise)
    /// without touching the direction stream.
    pub fn noise_unit(&mut self) -> f64 {
        unit_halfopen(self.noise.next_u64())
    }
}

/// `[0, 1)` with 53 bits of precision.
fn unit_halfopen(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `(0, 1]` with 53 bits of precision; safe to pass to `ln`.
fn unit_open_high(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A probe direction: unit-norm for sphere samples, norm at most one for
/// ball samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Wraps an externally supplied unit vector, checking `‖u‖ = 1` to 1e-9.
    pub fn unit(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = norm(&components);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "components",
                format!("expected a unit vector, got norm {norm}"),
            ));
        }
        Ok(Direction(components))
    }

    fn from_raw(components: Vec<f64>) -> Self {
        Direction(components)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn into_components(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Fills `buf` with standard normals from the direction stream, one
/// Box-Muller pair per two slots.
fn fill_standard_normals(buf: &mut [f64], rng: &mut RandomSource) {
    let mut i = 0;
    while i < buf.len() {
        let u1 = unit_open_high(rng.direction_u64());
        let u2 = unit_halfopen(rng.direction_u64());
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
        buf[i] = radius * cos;
        if i + 1 < buf.len() {
            buf[i + 1] = radius * sin;
        }
        i += 2;
    }
}

/// Draws a vector uniformly distributed on the unit sphere `S^{d-1}`:
/// a standard-normal vector normalized to unit length.
pub fn sample_sphere(d: usize, rng: &mut RandomSource) -> Result<Direction> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut components = vec![0.0; d];
    loop {
        fill_standard_normals(&mut components, rng);
        let norm = norm(&components);
        if norm > 0.0 {
            for c in &mut components {
                *c /= norm;
            }
            return Ok(Direction::from_raw(components));
        }
        // all-zeros draw: resample
    }
}

/// Draws a vector uniformly distributed in the closed unit ball `B^d`:
/// a sphere sample scaled by `U^(1/d)` with `U` uniform on `(0, 1]`.
pub fn sample_ball(d: usize, rng: &mut RandomSource) -> Result<Direction> {
    let sphere = sample_sphere(d, rng)?;
    let u = unit_open_high(rng.direction_u64());
    let radius = (u.ln() / d as f64).exp();
    let mut components = sphere.into_components();
    for c in &mut components {
        *c *= radius;
    }
    // guard the norm-at-most-one invariant against last-ulp rounding
    let norm = norm(&components);
    if norm > 1.0 {
        for c in &mut components {
            *c /= norm;
        }
    }
    Ok(Direction::from_raw(components))
}
