//! Pairwise-independent line families `A y_i + B` over GF(2^w).

use num_rational::Ratio;
use rand::Rng;

use crate::error::{usage, AmdError, Result};
use crate::field::{FieldKind, FieldSpec};
use crate::stats::{count_successes, AttackReport, BoundKind, Dims};
use crate::util::check_budget;

/// `t p - t^2 p^2 / 2`, a lower bound on the union of `t` pairwise
/// independent events of probability `p` each.
pub fn bonferroni_lower_bound(t: u64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return usage(format!("p must lie in (0, 1), got {p}"));
    }
    if t == 0 {
        return usage("t must be at least 1");
    }
    let t = t as f64;
    Ok(t * p - t * t * p * p / 2.0)
}

/// The probes `y_1, ..., y_t`: the first `t` nonzero field elements.
pub fn canonical_probes(spec: &FieldSpec, t: u64) -> Result<Vec<u64>> {
    if t >= spec.order() {
        return usage(format!(
            "{t} distinct nonzero probes do not fit in a field of order {}",
            spec.order()
        ));
    }
    Ok((1..=t).collect())
}

fn require_binary(spec: &FieldSpec) -> Result<()> {
    if spec.kind() != FieldKind::Binary {
        return usage(format!("line families live in binary fields, got {spec}"));
    }
    Ok(())
}

/// One draw of `(A, B)` together with fixed distinct probes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFamily {
    spec: FieldSpec,
    a: u64,
    b: u64,
    probes: Vec<u64>,
}

impl LineFamily {
    pub fn new(spec: FieldSpec, a: u64, b: u64, probes: Vec<u64>) -> Result<Self> {
        require_binary(&spec)?;
        if a >= spec.order() || b >= spec.order() {
            return usage("line coefficients out of range");
        }
        let mut sorted = probes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != probes.len() {
            return usage("probes must be pairwise distinct");
        }
        if probes.iter().any(|&y| y >= spec.order()) {
            return usage("probe out of range");
        }
        Ok(Self { spec, a, b, probes })
    }

    /// Uniform, independent `A` and `B` with the canonical probes.
    pub fn sample(spec: FieldSpec, probes: &[u64], rng: &mut impl Rng) -> Self {
        let q = spec.order();
        Self {
            spec,
            a: rng.gen_range(0..q),
            b: rng.gen_range(0..q),
            probes: probes.to_vec(),
        }
    }

    pub fn t(&self) -> usize {
        self.probes.len()
    }

    /// `A y_i + B`, zero-based `i`.
    pub fn point(&self, i: usize) -> u64 {
        self.spec
            .add_raw(self.spec.mul_raw(self.a, self.probes[i]), self.b)
    }

    pub fn points(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.probes.len()).map(|i| self.point(i))
    }
}

/// How to measure a hit rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// All `N^2` choices of `(A, B)`.
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

const MAX_EXHAUSTIVE_PAIRS: u128 = 1 << 32;

/// Probability over `(A, B)` that some probe lands in `target`, checked
/// against the Bonferroni floor `t|S|/N - t^2 |S|^2 / (2 N^2)`.
pub fn line_family_hit_rate(spec: &FieldSpec, t: u64, target: &[u64], mode: Mode) -> Result<AttackReport> {
    require_binary(spec)?;
    let n = spec.order();
    if t > n {
        return usage(format!("t = {t} exceeds the field order {n}"));
    }
    let probes = canonical_probes(spec, t)?;
    let mut member = vec![false; n as usize];
    for &s in target {
        if s >= n {
            return usage("target element out of range");
        }
        member[s as usize] = true;
    }
    let size = member.iter().filter(|&&m| m).count() as u64;
    let hit = |fam: &LineFamily| fam.points().any(|p| member[p as usize]);
    let dims = Dims {
        n_bits: spec.degree(),
        ..Dims::default()
    };
    let code = format!("{spec} |S|={size}");

    let (trials, successes, exhaustive, seed) = match mode {
        Mode::Exhaustive => {
            let pairs = n as u128 * n as u128;
            check_budget("exhaustive line family", pairs, MAX_EXHAUSTIVE_PAIRS)?;
            let successes = count_exhaustive(spec, &probes, &hit);
            (pairs as u64, successes, true, None)
        }
        Mode::Sampled { trials, seed } => {
            let successes = count_successes(trials, seed, |rng| hit(&LineFamily::sample(*spec, &probes, rng)));
            (trials, successes, false, Some(seed))
        }
    };

    let floor = match size {
        0 => 0.0,
        s if s == n => 1.0,
        s => bonferroni_lower_bound(t, s as f64 / n as f64)?,
    };
    let mut report = AttackReport::new("line-family", code, dims, t, trials, successes, exhaustive, floor, BoundKind::Floor, seed);
    if exhaustive && size > 0 && size < n {
        // exact: successes / N^2 >= (2 t S N - t^2 S^2) / (2 N^2)
        let (t, s, nn) = (t as i128, size as i128, n as i128);
        report.pass = 2 * successes as i128 >= 2 * t * s * nn - t * t * s * s;
    }
    Ok(report)
}

fn count_exhaustive(spec: &FieldSpec, probes: &[u64], hit: &(dyn Fn(&LineFamily) -> bool + Sync)) -> u64 {
    use rayon::prelude::*;
    let n = spec.order();
    (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .filter(|&b| {
                    hit(&LineFamily {
                        spec: *spec,
                        a,
                        b,
                        probes: probes.to_vec(),
                    })
                })
                .count() as u64
        })
        .sum()
}

/// `Pr_{A,B}[A y_i + B = a, A y_j + B = b]`, by enumerating `(A, B)`.
pub fn joint_probe_probability(spec: &FieldSpec, yi: u64, yj: u64, a: u64, b: u64) -> Ratio<u128> {
    let n = spec.order();
    let mut count = 0u128;
    for aa in 0..n {
        for bb in 0..n {
            let pi = spec.add_raw(spec.mul_raw(aa, yi), bb);
            let pj = spec.add_raw(spec.mul_raw(aa, yj), bb);
            if pi == a && pj == b {
                count += 1;
            }
        }
    }
    Ratio::new(count, n as u128 * n as u128)
}

/// Verifies that for every pair of distinct probes the map
/// `(A, B) -> (A y_i + B, A y_j + B)` hits each `(a, b)` exactly once, i.e.
/// every joint probability is `1/N^2`.
pub fn pairwise_independence_check(spec: &FieldSpec, probes: &[u64]) -> Result<bool> {
    require_binary(spec)?;
    let n = spec.order();
    check_budget(
        "pairwise independence",
        (n as u128).pow(2) * (probes.len() as u128).pow(2),
        1 << 32,
    )?;
    for (i, &yi) in probes.iter().enumerate() {
        for &yj in &probes[i + 1..] {
            if yi == yj {
                return Err(AmdError::Usage("probes must be pairwise distinct".into()));
            }
            let mut seen = vec![false; (n * n) as usize];
            for a in 0..n {
                for b in 0..n {
                    let pi = spec.add_raw(spec.mul_raw(a, yi), b);
                    let pj = spec.add_raw(spec.mul_raw(a, yj), b);
                    let cell = (pi * n + pj) as usize;
                    if seen[cell] {
                        return Ok(false);
                    }
                    seen[cell] = true;
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bonferroni_examples() {
        assert!((bonferroni_lower_bound(2, 0.25).unwrap() - 0.375).abs() < 1e-15);
        assert!((bonferroni_lower_bound(1, 0.5).unwrap() - 0.375).abs() < 1e-15);
        assert!((bonferroni_lower_bound(16, 1.0 / 16.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(bonferroni_lower_bound(2, 0.0).is_err());
        assert!(bonferroni_lower_bound(2, 1.0).is_err());
        assert!(bonferroni_lower_bound(0, 0.5).is_err());
    }

    #[test]
    fn empty_target_never_hits() {
        let spec = FieldSpec::binary(4).unwrap();
        let r = line_family_hit_rate(&spec, 4, &[], Mode::Exhaustive).unwrap();
        assert_eq!(r.successes, 0);
        assert!(r.pass);
    }

    #[test]
    fn single_probe_hits_at_density() {
        let spec = FieldSpec::binary(4).unwrap();
        for target in [vec![3u64], vec![0, 5, 9], (0..8).collect()] {
            let r = line_family_hit_rate(&spec, 1, &target, Mode::Exhaustive).unwrap();
            assert_eq!(Ratio::new(r.successes as u128, 256), Ratio::new(target.len() as u128, 16));
        }
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let spec = FieldSpec::binary(6).unwrap();
        let target: Vec<u64> = (0..8).collect();
        let a = line_family_hit_rate(&spec, 4, &target, Mode::Sampled { trials: 5000, seed: 9 }).unwrap();
        let b = line_family_hit_rate(&spec, 4, &target, Mode::Sampled { trials: 5000, seed: 9 }).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }

    #[test]
    fn hit_rate_dominates_bonferroni_exhaustively() {
        let spec = FieldSpec::binary(5).unwrap();
        for t in [1u64, 2, 4, 7] {
            for size in [1u64, 3, 6, 11] {
                let target: Vec<u64> = (0..size).map(|i| (i * 7 + 3) % 32).collect();
                let r = line_family_hit_rate(&spec, t, &target, Mode::Exhaustive).unwrap();
                assert!(r.pass, "t={t} size={size}: {r:?}");
            }
        }
    }

    #[test]
    fn too_many_probes() {
        let spec = FieldSpec::binary(2).unwrap();
        assert!(line_family_hit_rate(&spec, 5, &[1], Mode::Exhaustive).is_err());
        assert!(line_family_hit_rate(&FieldSpec::prime(5).unwrap(), 1, &[1], Mode::Exhaustive).is_err());
    }

    #[test]
    fn pairwise_independence_small_fields() {
        let gf2 = FieldSpec::binary(1).unwrap();
        // N = 2 allows probes {0, 1}
        assert!(pairwise_independence_check(&gf2, &[0, 1]).unwrap());
        let gf16 = FieldSpec::binary(4).unwrap();
        assert!(pairwise_independence_check(&gf16, &canonical_probes(&gf16, 4).unwrap()).unwrap());
        for (a, b) in [(0u64, 0u64), (3, 9), (15, 1), (7, 7)] {
            assert_eq!(joint_probe_probability(&gf16, 1, 2, a, b), Ratio::new(1, 256));
        }
        // the same probe twice cannot land on two different values
        assert_eq!(joint_probe_probability(&gf16, 3, 3, 1, 2), Ratio::from_integer(0));
        assert!(pairwise_independence_check(&gf16, &[2, 2]).is_err());
    }

    #[test]
    fn line_family_rejects_repeated_probes() {
        let spec = FieldSpec::binary(3).unwrap();
        assert!(LineFamily::new(spec, 1, 2, vec![1, 1]).is_err());
        let fam = LineFamily::new(spec, 2, 1, vec![1, 2, 3]).unwrap();
        assert_eq!(fam.points().collect::<Vec<_>>(), vec![3, 5, 7]);
    }
}
