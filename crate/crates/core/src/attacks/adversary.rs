//! Leak-then-tamper adversaries against bit codes.
//!
//! Each adversary sees a short leak `Z` of the codeword, then picks an
//! additive (XOR) offset. It succeeds when the tampered codeword decodes to
//! a message other than the original and is not rejected.

use rand::Rng;

use super::bitcode::BitCodeAdapter;
use super::line::canonical_probes;
use crate::entropy::bounded_leakage_admissible;
use crate::error::{usage, AmdError, Result};
use crate::field::FieldSpec;
use crate::stats::{count_successes, AttackReport, BoundKind, Dims};
use crate::util::check_budget;

/// Largest probe count materialized per trial.
pub const MAX_PROBES: u64 = 1 << 16;

/// Trial count and seed for a Monte Carlo run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub trials: u64,
    pub seed: u64,
}

fn dims(code: &BitCodeAdapter) -> Dims {
    Dims {
        k_bits: code.k_bits(),
        sigma_bits: code.sigma_bits(),
        n_bits: code.n_bits(),
    }
}

/// `2^floor((n-k)/2)`, the probe count of the strong-code attacks.
pub fn strong_probe_count(code: &BitCodeAdapter) -> Result<u64> {
    let gap = code.n_bits() - code.k_bits();
    if gap == 0 {
        return Err(AmdError::Inapplicable("n = k leaves no room for probes".into()));
    }
    Ok(1u64 << (gap / 2))
}

/// `(n-k) / (2n)`: the rate at which a leak over `2^((n-k)/2)` indices fits.
pub fn strong_default_rho(code: &BitCodeAdapter) -> f64 {
    let (k, n) = (code.k_bits() as f64, code.n_bits() as f64);
    (n - k) / (2.0 * n)
}

fn require_admissible(labels: u64, rho: f64, code: &BitCodeAdapter) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return usage(format!("rho must lie in [0, 1], got {rho}"));
    }
    if !bounded_leakage_admissible(labels as u128, rho, code.n_bits() as usize, 2) {
        return usage(format!(
            "a leak with {labels} values exceeds the budget rho={rho} over {} bits",
            code.n_bits()
        ));
    }
    Ok(())
}

fn wrong_accept(code: &BitCodeAdapter, c: u64, m: u64) -> bool {
    matches!(code.decode(c), Some(d) if d != m)
}

/// The first codeword, in numeric order, decoding to a message other than `m`.
pub fn first_foreign_codeword(code: &BitCodeAdapter, m: u64) -> Result<Option<u64>> {
    check_budget("codeword scan", 1u128 << code.n_bits(), 1 << 32)?;
    Ok((0..1u64 << code.n_bits()).find(|&c| wrong_accept(code, c, m)))
}

/// The small-support attack. `Z` names a probe `i` whose randomness
/// `A y_i + B` re-encodes to the observed codeword `C`; the offset then
/// moves `Enc(m, A y_Z + B)` onto a fixed foreign codeword `c*`.
pub fn strong_attack_case1(code: &BitCodeAdapter, m: u64, run: Sampling, rho: Option<f64>) -> Result<AttackReport> {
    let t = strong_probe_count(code)?;
    let rho = rho.unwrap_or_else(|| strong_default_rho(code));
    require_admissible(t, rho, code)?;
    let support = code.support(m)?;
    if support.len() as u64 > t {
        return Err(AmdError::Inapplicable(format!(
            "message {m:#x} has {} codewords, more than t = {t}",
            support.len()
        )));
    }
    let sigma = code.sigma_bits();
    if sigma == 0 || t >= 1u64 << sigma {
        return Err(AmdError::Inapplicable(format!(
            "{t} distinct nonzero probes need more than {sigma} bits of randomness"
        )));
    }
    let c_star = first_foreign_codeword(code, m)?
        .ok_or_else(|| AmdError::Inapplicable(format!("no codeword decodes to a message other than {m:#x}")))?;
    let rspec = FieldSpec::binary(sigma)?;
    let probes = canonical_probes(&rspec, t)?;
    let n = rspec.order();

    let successes = count_successes(run.trials, run.seed, |rng| {
        let r = rng.gen_range(0..n);
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let c = code.encode(m, r);
        let line = |y: u64| rspec.add_raw(rspec.mul_raw(a, y), b);
        let z = probes.iter().position(|&y| code.encode(m, line(y)) == c).unwrap_or(0);
        let offset = code.encode(m, line(probes[z])) ^ c_star;
        wrong_accept(code, c ^ offset, m)
    });
    Ok(AttackReport::new(
        "strong-case1",
        code.name().to_string(),
        dims(code),
        t,
        run.trials,
        successes,
        false,
        3.0 / 16.0,
        BoundKind::Floor,
        Some(run.seed),
    ))
}

/// Exact probability, over uniform `R` and all `(A, B)`, that some probe
/// re-encodes to `Enc(m, R)`. The floor is `3/8 * Pr[C in G]`, where `G`
/// holds the codewords with at least `2^sigma / (2t)` preimages.
pub fn case1_line_hit_rate(code: &BitCodeAdapter, m: u64) -> Result<AttackReport> {
    let t = strong_probe_count(code)?;
    let sigma = code.sigma_bits();
    if sigma == 0 || t >= 1u64 << sigma {
        return Err(AmdError::Inapplicable(format!(
            "{t} distinct nonzero probes need more than {sigma} bits of randomness"
        )));
    }
    let rspec = FieldSpec::binary(sigma)?;
    let n = rspec.order();
    check_budget("case-1 line enumeration", (n as u128).pow(3) * t as u128, 1 << 32)?;
    let probes = canonical_probes(&rspec, t)?;
    let support = code.support(m)?;
    let words: Vec<u64> = (0..n).map(|r| code.encode(m, r)).collect();

    let mut successes = 0u64;
    let mut good_mass = 0u64;
    for &(c, count) in &support {
        if 2 * t * count >= n {
            good_mass += count;
        }
        let mut hits = 0u64;
        for a in 0..n {
            for b in 0..n {
                if probes.iter().any(|&y| words[rspec.add_raw(rspec.mul_raw(a, y), b) as usize] == c) {
                    hits += 1;
                }
            }
        }
        successes += count * hits;
    }
    let trials = n * n * n;
    let floor = 3.0 / 8.0 * good_mass as f64 / n as f64;
    let mut report = AttackReport::new(
        "case1-line-hit",
        code.name().to_string(),
        dims(code),
        t,
        trials,
        successes,
        true,
        floor,
        BoundKind::Floor,
        None,
    );
    // successes / n^3 >= 3 good_mass / (8 n)
    report.pass = 8 * successes as u128 >= 3 * good_mass as u128 * (n as u128 * n as u128);
    Ok(report)
}

/// `1/2 - 1/2^(2k+1)`.
pub fn line_attack_floor(k_bits: u32) -> f64 {
    0.5 - 0.5f64.powi(2 * k_bits as i32 + 1)
}

fn code_field(code: &BitCodeAdapter) -> Result<FieldSpec> {
    FieldSpec::binary(code.n_bits())
}

/// Index of the first probe whose offset is a wrong accept, or zero.
fn probe_attack(code: &BitCodeAdapter, cspec: &FieldSpec, probes: &[u64], c: u64, m: u64, a: u64, b: u64) -> bool {
    let line = |y: u64| cspec.add_raw(cspec.mul_raw(a, y), b);
    let z = probes.iter().position(|&y| wrong_accept(code, c ^ line(y), m)).unwrap_or(0);
    wrong_accept(code, c ^ line(probes[z]), m)
}

/// The random-line attack for codes with large supports: the code space is
/// GF(2^n), `Z` names the first probe `i` with `Dec(C + A y_i + B)` a wrong
/// accept, and the offset is `A y_Z + B`.
pub fn strong_attack_case2(code: &BitCodeAdapter, m: u64, run: Sampling, rho: Option<f64>) -> Result<AttackReport> {
    let t = strong_probe_count(code)?;
    check_budget("case-2 probes", t as u128, MAX_PROBES as u128)?;
    let rho = rho.unwrap_or_else(|| strong_default_rho(code));
    require_admissible(t, rho, code)?;
    let all = 1u128 << (code.k_bits() + code.sigma_bits());
    let messages: Vec<u64> = if all <= 1 << 24 { (0..1u64 << code.k_bits()).collect() } else { vec![m] };
    for &msg in &messages {
        let size = code.support(msg)?.len() as u64;
        if size < t {
            return Err(AmdError::Inapplicable(format!(
                "message {msg:#x} has only {size} codewords, fewer than t = {t}"
            )));
        }
    }
    let cspec = code_field(code)?;
    let probes = canonical_probes(&cspec, t)?;
    let n = cspec.order();
    let sigma_range = 1u64 << code.sigma_bits();

    let successes = count_successes(run.trials, run.seed, |rng| {
        let r = rng.gen_range(0..sigma_range);
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        probe_attack(code, &cspec, &probes, code.encode(m, r), m, a, b)
    });
    Ok(AttackReport::new(
        "strong-case2",
        code.name().to_string(),
        dims(code),
        t,
        run.trials,
        successes,
        false,
        line_attack_floor(code.k_bits()),
        BoundKind::Floor,
        Some(run.seed),
    ))
}

fn require_deterministic(code: &BitCodeAdapter) -> Result<()> {
    if code.sigma_bits() != 0 {
        return usage(format!("{} is randomized; weak attacks need a deterministic code", code.name()));
    }
    Ok(())
}

/// `1 - k/n`.
pub fn weak_line_default_rho(code: &BitCodeAdapter) -> f64 {
    1.0 - code.k_bits() as f64 / code.n_bits() as f64
}

/// The line attack on a deterministic code with `t = 2^(n-k)` probes,
/// over a uniform message.
pub fn weak_attack_line(code: &BitCodeAdapter, run: Sampling, rho: Option<f64>) -> Result<AttackReport> {
    require_deterministic(code)?;
    let gap = code.n_bits() - code.k_bits();
    if gap == 0 {
        return Err(AmdError::Inapplicable("n = k leaves no room for probes".into()));
    }
    let t = 1u128 << gap;
    check_budget("weak line probes", t, MAX_PROBES as u128)?;
    let t = t as u64;
    let rho = rho.unwrap_or_else(|| weak_line_default_rho(code));
    require_admissible(t, rho, code)?;
    let cspec = code_field(code)?;
    let probes = canonical_probes(&cspec, t)?;
    let n = cspec.order();
    let messages = 1u64 << code.k_bits();

    let successes = count_successes(run.trials, run.seed, |rng| {
        let m = rng.gen_range(0..messages);
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        probe_attack(code, &cspec, &probes, code.encode(m, 0), m, a, b)
    });
    Ok(AttackReport::new(
        "weak-line",
        code.name().to_string(),
        dims(code),
        t,
        run.trials,
        successes,
        false,
        line_attack_floor(code.k_bits()),
        BoundKind::Floor,
        Some(run.seed),
    ))
}

/// Leaks `Z = Dec(C)` and shifts the codeword onto `Enc(Z + 1)`. Enumerates
/// every message; needs `rho >= k/n`.
pub fn weak_attack_trivial(code: &BitCodeAdapter, rho: Option<f64>) -> Result<AttackReport> {
    require_deterministic(code)?;
    let messages = 1u128 << code.k_bits();
    check_budget("trivial attack messages", messages, 1 << 24)?;
    let rho = rho.unwrap_or(code.k_bits() as f64 / code.n_bits() as f64);
    require_admissible(messages as u64, rho, code)?;
    let messages = messages as u64;
    let successes = (0..messages)
        .filter(|&m| {
            let c = code.encode(m, 0);
            let z = code.decode(c).unwrap_or(m);
            let target = (z + 1) % messages;
            let offset = code.encode(z, 0) ^ code.encode(target, 0);
            code.decode(c ^ offset) == Some(target) && target != m
        })
        .count() as u64;
    Ok(AttackReport::new(
        "weak-trivial",
        code.name().to_string(),
        dims(code),
        messages,
        messages,
        successes,
        true,
        1.0,
        BoundKind::Floor,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::StrongAmdParams;

    const RUN: Sampling = Sampling { trials: 20_000, seed: 2024 };

    fn gf8_strong() -> BitCodeAdapter {
        BitCodeAdapter::from_code(StrongAmdParams::new(FieldSpec::binary(3).unwrap(), 1, 1).unwrap()).unwrap()
    }

    #[test]
    fn floors() {
        assert_eq!(line_attack_floor(1), 0.375);
        assert_eq!(line_attack_floor(3), 0.5 - 1.0 / 128.0);
    }

    #[test]
    fn case1_on_degenerate_code() {
        let code = BitCodeAdapter::degenerate(4, 8, 6).unwrap();
        let r = strong_attack_case1(&code, 3, RUN, None).unwrap();
        assert_eq!(r.t, 16);
        assert!(r.pass, "{r:?}");
        assert!(r.estimate >= 3.0 / 16.0);
    }

    #[test]
    fn case1_rejects_injective_code() {
        let code = BitCodeAdapter::plain_randomized(2, 8).unwrap();
        assert!(matches!(strong_attack_case1(&code, 1, RUN, None), Err(AmdError::Inapplicable(_))));
    }

    #[test]
    fn case1_needs_a_foreign_codeword() {
        // one message only: nothing else to decode to
        let code = BitCodeAdapter::new("single", 1, 4, 3, |_, _| 0, |c| (c == 0).then_some(0)).unwrap();
        assert!(matches!(strong_attack_case1(&code, 0, RUN, None), Err(AmdError::Inapplicable(_))));
    }

    #[test]
    fn case1_exact_hit_rate_support_t() {
        // support exactly t = 4 codewords, uniform preimages
        let code = BitCodeAdapter::new(
            "support-4",
            2,
            4,
            6,
            |m, r| m | ((r & 3) << 2),
            |c| (c >> 4 == 0).then_some(c & 3),
        )
        .unwrap();
        let r = case1_line_hit_rate(&code, 1).unwrap();
        assert_eq!(r.t, 4);
        assert!(r.pass, "{r:?}");
        assert!(r.estimate >= 0.375);
    }

    #[test]
    fn case2_on_strong_code() {
        let r = strong_attack_case2(&gf8_strong(), 5, RUN, None).unwrap();
        assert_eq!((r.k_bits, r.n_bits, r.t), (3, 9, 8));
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn case2_rejects_small_support() {
        let code = BitCodeAdapter::degenerate(2, 6, 4).unwrap();
        assert!(matches!(strong_attack_case2(&code, 0, RUN, None), Err(AmdError::Inapplicable(_))));
    }

    #[test]
    fn zero_gap_is_inapplicable() {
        let code = BitCodeAdapter::plain_randomized(4, 0).unwrap();
        assert!(matches!(strong_probe_count(&code), Err(AmdError::Inapplicable(_))));
    }

    #[test]
    fn leak_budget_enforced() {
        assert!(matches!(strong_attack_case2(&gf8_strong(), 0, RUN, Some(0.1)), Err(AmdError::Usage(_))));
        let cube = BitCodeAdapter::cube_weak(4).unwrap();
        assert!(matches!(weak_attack_trivial(&cube, Some(0.4)), Err(AmdError::Usage(_))));
        assert!(matches!(weak_attack_line(&cube, RUN, Some(0.25)), Err(AmdError::Usage(_))));
    }

    #[test]
    fn weak_attacks_on_cube_code() {
        let cube = BitCodeAdapter::cube_weak(4).unwrap();
        let line = weak_attack_line(&cube, RUN, None).unwrap();
        assert_eq!(line.t, 16);
        assert!(line.pass, "{line:?}");
        let trivial = weak_attack_trivial(&cube, None).unwrap();
        assert_eq!(trivial.successes, trivial.trials);
        assert_eq!(trivial.estimate, 1.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = strong_attack_case2(&gf8_strong(), 1, Sampling { trials: 3000, seed: 5 }, None).unwrap();
        let b = strong_attack_case2(&gf8_strong(), 1, Sampling { trials: 3000, seed: 5 }, None).unwrap();
        assert_eq!(a, b);
    }
}
