//! Reproducible Monte Carlo plumbing: per-trial random streams, Wilson
//! score intervals and the shared attack/experiment report.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Recorded in every report. Trial `i` draws from ChaCha20 keyed by
/// `seed_from_u64(seed)` on stream `i`.
pub const GENERATOR_ID: &str = "chacha20:seed_from_u64:stream=trial";

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Counts successful trials. The result does not depend on how rayon
/// schedules the work.
pub fn count_successes<F>(trials: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha20Rng) -> bool + Sync,
{
    (0..trials)
        .into_par_iter()
        .filter(|&i| trial(&mut trial_rng(seed, i)))
        .count() as u64
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Whether `paper_floor` is a lower bound the attack must reach or an upper
/// bound the experiment must stay under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Floor,
    Ceiling,
}

/// Outcome of an attack or experiment run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackReport {
    pub attack: String,
    pub code: String,
    pub k_bits: u32,
    pub sigma_bits: u32,
    pub n_bits: u32,
    pub t: u64,
    pub trials: u64,
    /// Every outcome was enumerated rather than sampled.
    pub exhaustive: bool,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub paper_floor: f64,
    pub bound_kind: BoundKind,
    pub pass: bool,
    pub seed: Option<u64>,
    pub generator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query_budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries_used: Option<u64>,
}

/// Code dimensions for a report, in bits.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dims {
    pub k_bits: u32,
    pub sigma_bits: u32,
    pub n_bits: u32,
}

impl AttackReport {
    /// Builds a report. Sampled runs pass when the estimate clears the bound
    /// within three Wilson half-widths; exhaustive runs compare exactly.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        attack: &str,
        code: String,
        dims: Dims,
        t: u64,
        trials: u64,
        successes: u64,
        exhaustive: bool,
        bound: f64,
        bound_kind: BoundKind,
        seed: Option<u64>,
    ) -> Self {
        let estimate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let (ci_low, ci_high) = if exhaustive {
            (estimate, estimate)
        } else {
            wilson_interval(successes, trials, Z_99)
        };
        let tolerance = 3.0 * (ci_high - ci_low) / 2.0;
        let pass = match bound_kind {
            BoundKind::Floor => estimate >= bound - tolerance,
            BoundKind::Ceiling => estimate <= bound + tolerance,
        };
        Self {
            attack: attack.to_string(),
            code,
            k_bits: dims.k_bits,
            sigma_bits: dims.sigma_bits,
            n_bits: dims.n_bits,
            t,
            trials,
            exhaustive,
            successes,
            estimate,
            ci_low,
            ci_high,
            paper_floor: bound,
            bound_kind,
            pass,
            seed,
            generator: GENERATOR_ID.to_string(),
            query_budget: None,
            queries_used: None,
        }
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}
