//! Ground-truth security by exhaustive enumeration.
//!
//! Two independent routes compute the leakage-free error of the strong
//! construction: [`exact_strong_delta`] factors the offset space per
//! randomness coordinate (decoding checks each tag symbol separately, so
//! the wrong-accept count for an offset is a product of per-coordinate
//! counts), while [`brute_force_delta`] decodes every tampered codeword of
//! an arbitrary [`AmdCode`]. [`optimal_leaky_delta`] computes the best
//! adversary advantage against a fixed leakage map: for each leak value it
//! picks the offset with the most wrong accepts. Deterministic offsets are
//! enough because the advantage is linear in the adversary's randomness.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::codec::{
    eval_f_raw, strong_delta_bound, strong_delta_bound_exact, weak_delta_bound, weak_delta_bound_exact, AmdCode,
    AmdKind, StrongAmdParams, WeakAmdParams,
};
use crate::entropy::{is_admissible, leak_samples, leakage_ratio, CodewordSource, LeakageMap, FLOAT_TOLERANCE};
use crate::error::{AmdError, Result};
use crate::util::{check_budget, count_vectors, for_each_vector, index_to_vector};

/// Outcome of an exact security evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct SecurityReport {
    pub kind: AmdKind,
    pub code: String,
    pub q: u64,
    pub k: usize,
    pub sigma: usize,
    pub n: usize,
    pub delta_exact: Ratio<u128>,
    pub delta_bound: f64,
    pub pass: bool,
    /// Message attaining the maximum (strong codes only).
    pub worst_message: Option<Vec<u64>>,
    pub worst_offset: Vec<u64>,
    pub method: &'static str,
}

impl SecurityReport {
    pub fn delta_f64(&self) -> f64 {
        ratio_f64(&self.delta_exact)
    }
}

pub fn ratio_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Serialize)]
struct SecurityReportJson<'a> {
    kind: AmdKind,
    code: &'a str,
    q: u64,
    k: usize,
    sigma: usize,
    n: usize,
    delta_exact_num: u128,
    delta_exact_den: u128,
    delta_exact: f64,
    delta_bound: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_message: Option<&'a [u64]>,
    worst_offset: &'a [u64],
    method: &'a str,
}

impl Serialize for SecurityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SecurityReportJson {
            kind: self.kind,
            code: &self.code,
            q: self.q,
            k: self.k,
            sigma: self.sigma,
            n: self.n,
            delta_exact_num: *self.delta_exact.numer(),
            delta_exact_den: *self.delta_exact.denom(),
            delta_exact: self.delta_f64(),
            delta_bound: self.delta_bound,
            pass: self.pass,
            worst_message: self.worst_message.as_deref(),
            worst_offset: &self.worst_offset,
            method: self.method,
        }
        .serialize(s)
    }
}

/// The encodings that a fixed offset turns into wrong accepts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadSet {
    pub offset: Vec<u64>,
    pub message: Option<Vec<u64>>,
    pub members: Vec<Vec<u64>>,
}

/// Work needed by [`exact_strong_delta`].
pub fn strong_structured_work(params: &StrongAmdParams) -> u128 {
    let q = params.spec().order();
    count_vectors(q, 2 * params.k()).saturating_mul((q as u128) * (q as u128))
}

/// Largest per-coordinate wrong-accept count for message `m` shifted by
/// `alpha`, with the (beta, gamma) attaining it.
fn best_coordinate(params: &StrongAmdParams, base: &[u64], shifted: &[u64], hist: &mut [u32]) -> (u32, u64, u64) {
    let spec = params.spec();
    let q = spec.order();
    let f_base: Vec<u64> = (0..q).map(|a| eval_f_raw(&spec, base, a)).collect();
    let f_shift: Vec<u64> = (0..q).map(|a| eval_f_raw(&spec, shifted, a)).collect();
    let mut best = (0u32, 0u64, 0u64);
    for beta in 0..q {
        hist.iter_mut().for_each(|h| *h = 0);
        for a in 0..q {
            // tag check passes iff f(m + alpha, a + beta) = f(m, a) + gamma
            let gamma = spec.sub_raw(f_shift[spec.add_raw(a, beta) as usize], f_base[a as usize]);
            hist[gamma as usize] += 1;
        }
        for (gamma, &c) in hist.iter().enumerate() {
            if c > best.0 {
                best = (c, beta, gamma as u64);
            }
        }
    }
    best
}

/// Exact leakage-free error of the strong construction, maximised over all
/// messages and offsets, compared against `((k+1)/q)^sigma`.
pub fn exact_strong_delta(params: &StrongAmdParams, budget: u128) -> Result<SecurityReport> {
    check_budget("exact strong delta", strong_structured_work(params), budget)?;
    let spec = params.spec();
    let q = spec.order();
    let (k, sigma) = (params.k(), params.sigma());
    let messages = count_vectors(q, k);

    // (count, message index, alpha index, beta, gamma); ties go to the
    // lexicographically first (message, alpha)
    let best = (0..messages)
        .into_par_iter()
        .map(|mi| {
            let m = index_to_vector(mi, q, k);
            let mut hist = vec![0u32; q as usize];
            let mut local = (0u32, mi, 0u128, 0u64, 0u64);
            for ai in 1..messages {
                let alpha = index_to_vector(ai, q, k);
                let shifted: Vec<u64> = m.iter().zip(&alpha).map(|(a, b)| spec.add_raw(*a, *b)).collect();
                let (c, beta, gamma) = best_coordinate(params, &m, &shifted, &mut hist);
                if c > local.0 {
                    local = (c, mi, ai, beta, gamma);
                }
            }
            local
        })
        .reduce(
            || (0, u128::MAX, 0, 0, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (count, mi, ai, beta, gamma) = best;
    let delta = Ratio::new((count as u128).pow(sigma as u32), (q as u128).pow(sigma as u32));
    let mut offset = index_to_vector(ai, q, k);
    offset.extend(std::iter::repeat_n(beta, sigma));
    offset.extend(std::iter::repeat_n(gamma, sigma));
    Ok(SecurityReport {
        kind: AmdKind::Strong,
        code: params.describe(),
        q,
        k,
        sigma,
        n: params.n(),
        delta_exact: delta,
        delta_bound: strong_delta_bound(params, 0.0),
        pass: delta <= strong_delta_bound_exact(params),
        worst_message: Some(index_to_vector(mi, q, k)),
        worst_offset: offset,
        method: "per-coordinate enumeration",
    })
}

/// Work needed by [`brute_force_delta`]: every offset against every
/// (message, randomness) pair.
pub fn brute_force_work(code: &dyn AmdCode) -> u128 {
    let q = code.field().order();
    count_vectors(q, code.codeword_len())
        .saturating_mul(count_vectors(q, code.message_len()))
        .saturating_mul(count_vectors(q, code.randomness_len()))
}

struct Encodings {
    messages: Vec<Vec<u64>>,
    // codewords[message][randomness]
    codewords: Vec<Vec<Vec<u64>>>,
}

fn all_encodings(code: &dyn AmdCode) -> Encodings {
    let q = code.field().order();
    let mut messages = Vec::new();
    let mut codewords = Vec::new();
    let mut buf = vec![0; code.codeword_len()];
    for_each_vector(q, code.message_len(), |m| {
        let mut row = Vec::new();
        for_each_vector(q, code.randomness_len(), |r| {
            code.encode_into(m, r, &mut buf);
            row.push(buf.clone());
        });
        messages.push(m.to_vec());
        codewords.push(row);
    });
    Encodings { messages, codewords }
}

/// Whether `Dec(c + offset)` is a message other than `m`.
fn wrong_accept(code: &dyn AmdCode, c: &[u64], offset: &[u64], m: &[u64], tampered: &mut [u64], dec: &mut [u64]) -> bool {
    let spec = code.field();
    for ((t, a), b) in tampered.iter_mut().zip(c).zip(offset) {
        *t = spec.add_raw(*a, *b);
    }
    code.decode_into(tampered, dec) && dec != m
}

/// `(delta, worst message, worst offset)`.
pub type BruteForceResult = (Ratio<u128>, Option<Vec<u64>>, Vec<u64>);

/// Exact leakage-free error of any small code by decoding every tampered
/// codeword.
///
/// Strong: `max_{m, offset} #{r : Dec(Enc(m, r) + offset) not in {m, bot}} / q^sigma`.
/// Weak: `max_offset #{m : Dec(Enc(m) + offset) not in {m, bot}} / q^k`.
pub fn brute_force_delta(code: &dyn AmdCode, kind: AmdKind, budget: u128) -> Result<BruteForceResult> {
    check_budget("brute-force delta", brute_force_work(code), budget)?;
    let q = code.field().order();
    let n = code.codeword_len();
    let enc = all_encodings(code);
    let offsets = count_vectors(q, n);
    let denom = match kind {
        AmdKind::Strong => count_vectors(q, code.randomness_len()),
        AmdKind::Weak => count_vectors(q, code.message_len() + code.randomness_len()),
    };

    // (count, offset index, message index)
    let best = (0..offsets)
        .into_par_iter()
        .map_init(
            || (vec![0u64; n], vec![0u64; code.message_len()]),
            |(tampered, dec), oi| {
                let offset = index_to_vector(oi, q, n);
                match kind {
                    AmdKind::Strong => {
                        let mut local = (0u64, oi, 0usize);
                        for (mi, row) in enc.codewords.iter().enumerate() {
                            let m = &enc.messages[mi];
                            let c = row.iter().filter(|c| wrong_accept(code, c, &offset, m, tampered, dec)).count() as u64;
                            if c > local.0 {
                                local = (c, oi, mi);
                            }
                        }
                        local
                    }
                    AmdKind::Weak => {
                        let mut c = 0u64;
                        for (mi, row) in enc.codewords.iter().enumerate() {
                            let m = &enc.messages[mi];
                            c += row.iter().filter(|cw| wrong_accept(code, cw, &offset, m, tampered, dec)).count() as u64;
                        }
                        (c, oi, 0)
                    }
                }
            },
        )
        .reduce(
            || (0, u128::MAX, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (count, oi, mi) = best;
    let offset = index_to_vector(if oi == u128::MAX { 0 } else { oi }, q, n);
    let worst_message = match kind {
        AmdKind::Strong => Some(enc.messages[mi].clone()),
        AmdKind::Weak => None,
    };
    Ok((Ratio::new(count as u128, denom), worst_message, offset))
}

/// Exact weak error `max_offset Pr_M[Dec(Enc(M) + offset) not in {M, bot}]`,
/// compared against `1/q`.
pub fn exact_weak_delta(params: &WeakAmdParams, budget: u128) -> Result<SecurityReport> {
    let (delta, _, offset) = brute_force_delta(params, AmdKind::Weak, budget)?;
    Ok(SecurityReport {
        kind: AmdKind::Weak,
        code: params.describe(),
        q: params.spec().order(),
        k: params.k(),
        sigma: 0,
        n: params.n(),
        delta_exact: delta,
        delta_bound: weak_delta_bound(params, 0.0),
        pass: delta <= weak_delta_bound_exact(params),
        worst_message: None,
        worst_offset: offset,
        method: "brute force",
    })
}

/// Brute-force counterpart of [`exact_strong_delta`] for cross-checking.
pub fn brute_force_strong_delta(params: &StrongAmdParams, budget: u128) -> Result<SecurityReport> {
    let (delta, worst_message, offset) = brute_force_delta(params, AmdKind::Strong, budget)?;
    Ok(SecurityReport {
        kind: AmdKind::Strong,
        code: params.describe(),
        q: params.spec().order(),
        k: params.k(),
        sigma: params.sigma(),
        n: params.n(),
        delta_exact: delta,
        delta_bound: strong_delta_bound(params, 0.0),
        pass: delta <= strong_delta_bound_exact(params),
        worst_message,
        worst_offset: offset,
        method: "brute force",
    })
}

/// `BAD(m, offset)` for strong codes (`message = Some`) or `BAD(offset)` for
/// weak codes (`message = None`, all messages).
pub fn bad_set(code: &dyn AmdCode, message: Option<&[u64]>, offset: &[u64]) -> Result<BadSet> {
    if offset.len() != code.codeword_len() {
        return Err(AmdError::Usage("offset length does not match the code".into()));
    }
    let q = code.field().order();
    let mut members = Vec::new();
    let mut buf = vec![0; code.codeword_len()];
    let mut tampered = vec![0; code.codeword_len()];
    let mut dec = vec![0; code.message_len()];
    let mut visit = |m: &[u64]| {
        for_each_vector(q, code.randomness_len(), |r| {
            code.encode_into(m, r, &mut buf);
            if wrong_accept(code, &buf, offset, m, &mut tampered, &mut dec) {
                members.push(buf.clone());
            }
        });
    };
    match message {
        Some(m) => visit(m),
        None => for_each_vector(q, code.message_len(), visit),
    }
    Ok(BadSet {
        offset: offset.to_vec(),
        message: message.map(|m| m.to_vec()),
        members,
    })
}

/// Optimal advantage against one fixed message (strong) or the uniform
/// message (weak) under a leak, as an exact fraction, with the number of
/// leak values observed.
fn optimal_for_source(source: CodewordSource<'_>, leak: &LeakageMap) -> Result<Ratio<u128>> {
    let code = source.code();
    let q = code.field().order();
    let n = code.codeword_len();
    let samples = leak_samples(source, leak)?;
    let total = samples.len() as u128;

    let mut by_leak: std::collections::BTreeMap<u64, Vec<usize>> = std::collections::BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        by_leak.entry(s.leak).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = by_leak.into_values().collect();
    let offsets = count_vectors(q, n);

    let mut wins: u128 = 0;
    for group in &groups {
        let best = (0..offsets)
            .into_par_iter()
            .map_init(
                || (vec![0u64; n], vec![0u64; code.message_len()]),
                |(tampered, dec), oi| {
                    let offset = index_to_vector(oi, q, n);
                    group
                        .iter()
                        .filter(|&&i| {
                            let s = &samples[i];
                            wrong_accept(code, &s.codeword, &offset, &s.message, tampered, dec)
                        })
                        .count() as u128
                },
            )
            .max()
            .unwrap_or(0);
        wins += best;
    }
    Ok(Ratio::new(wins, total))
}

/// Work needed by [`optimal_leaky_delta`].
pub fn leaky_work(code: &dyn AmdCode, leak: &LeakageMap) -> u128 {
    brute_force_work(code).saturating_mul(leak.aux_size() as u128)
}

/// Per-message detail of a leaky evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct LeakyPoint {
    /// `None` for weak codes.
    pub message: Option<Vec<u64>>,
    pub advantage: Ratio<u128>,
    /// `2^deficiency`, i.e. `q^(rho n)` at the measured leakage rate.
    pub leakage_ratio: Ratio<u128>,
}

/// The exactly optimal adversary advantage under `leak`, maximised over
/// messages for strong codes.
///
/// `delta_bound` in the report is `delta_0 * 2^deficiency` at the measured
/// deficiency, and `pass` compares exactly per message.
pub fn optimal_leaky_delta(code: &dyn AmdCode, kind: AmdKind, leak: &LeakageMap, budget: u128) -> Result<(SecurityReport, Vec<LeakyPoint>)> {
    check_budget("optimal leaky delta", leaky_work(code, leak), budget)?;
    let (delta0, _, _) = brute_force_delta(code, kind, budget)?;
    let q = code.field().order();
    let mut points = Vec::new();
    match kind {
        AmdKind::Strong => {
            let mut msgs = Vec::new();
            for_each_vector(q, code.message_len(), |m| msgs.push(m.to_vec()));
            for m in msgs {
                let source = CodewordSource::FixedMessage { code, message: &m };
                points.push(LeakyPoint {
                    advantage: optimal_for_source(source, leak)?,
                    leakage_ratio: leakage_ratio(source, leak)?,
                    message: Some(m),
                });
            }
        }
        AmdKind::Weak => {
            let source = CodewordSource::UniformMessage { code };
            points.push(LeakyPoint {
                advantage: optimal_for_source(source, leak)?,
                leakage_ratio: leakage_ratio(source, leak)?,
                message: None,
            });
        }
    }
    let worst = points
        .iter()
        .fold(None::<&LeakyPoint>, |acc, p| match acc {
            Some(a) if a.advantage >= p.advantage => Some(a),
            _ => Some(p),
        })
        .expect("at least one message");
    let max_ratio = points.iter().map(|p| p.leakage_ratio).max().expect("nonempty");
    let pass = points.iter().all(|p| p.advantage <= delta0 * p.leakage_ratio);
    let report = SecurityReport {
        kind,
        code: format!("{} | leak {}", code.describe(), leak.name()),
        q,
        k: code.message_len(),
        sigma: code.randomness_len(),
        n: code.codeword_len(),
        delta_exact: worst.advantage,
        delta_bound: ratio_f64(&(delta0 * max_ratio)),
        pass,
        worst_message: worst.message.clone(),
        worst_offset: Vec::new(),
        method: "optimal adversary per leak value",
    };
    Ok((report, points))
}

/// How the leakage rate of each map is chosen in an amplification check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RhoChoice {
    /// A fixed budget every map must satisfy; the bound is `q^(rho n) delta_0`.
    Fixed(f64),
    /// Each map's own deficiency over `n log2 q`; compared exactly.
    Measured,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplificationEntry {
    pub leak: String,
    pub rho: f64,
    pub optimal_delta: f64,
    pub bound: f64,
    /// `optimal_delta / bound`; at most 1 when the amplification bound holds.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplificationReport {
    pub code: String,
    pub delta0_num: u128,
    pub delta0_den: u128,
    pub entries: Vec<AmplificationEntry>,
    pub violations: usize,
    pub tightest_ratio: f64,
    pub pass: bool,
}

/// Checks `optimal_leaky_delta <= q^(rho n) delta_0` for every map in the
/// family, with `delta_0` the exact leakage-free error.
pub fn amplification_check(code: &dyn AmdCode, kind: AmdKind, family: &[LeakageMap], rho: RhoChoice, budget: u128) -> Result<AmplificationReport> {
    let (delta0, _, _) = brute_force_delta(code, kind, budget)?;
    let q = code.field().order();
    let n = code.codeword_len();
    let bits_per_rate = n as f64 * (q as f64).log2();
    let mut messages = Vec::new();
    match kind {
        AmdKind::Strong => for_each_vector(q, code.message_len(), |m| messages.push(Some(m.to_vec()))),
        AmdKind::Weak => messages.push(None),
    }

    let mut entries = Vec::new();
    for leak in family {
        if let RhoChoice::Fixed(r) = rho {
            for m in &messages {
                let source = match m {
                    Some(m) => CodewordSource::FixedMessage { code, message: m },
                    None => CodewordSource::UniformMessage { code },
                };
                if !is_admissible(source, leak, r, n, q)? {
                    return Err(AmdError::Usage(format!(
                        "leakage map {} exceeds the budget rho = {r}",
                        leak.name()
                    )));
                }
            }
        }
        let (report, points) = optimal_leaky_delta(code, kind, leak, budget)?;
        let entry = match rho {
            RhoChoice::Fixed(r) => {
                let bound = (q as f64).powf(r * n as f64) * ratio_f64(&delta0);
                let value = report.delta_f64();
                AmplificationEntry {
                    leak: leak.name().to_string(),
                    rho: r,
                    optimal_delta: value,
                    bound,
                    ratio: value / bound,
                    pass: value <= bound * (1.0 + FLOAT_TOLERANCE),
                }
            }
            RhoChoice::Measured => {
                let max_ratio = points.iter().map(|p| p.leakage_ratio).max().expect("nonempty");
                let deficiency = ratio_f64(&max_ratio).log2();
                let bound = delta0 * max_ratio;
                AmplificationEntry {
                    leak: leak.name().to_string(),
                    rho: deficiency / bits_per_rate,
                    optimal_delta: report.delta_f64(),
                    bound: ratio_f64(&bound),
                    ratio: report.delta_f64() / ratio_f64(&bound),
                    pass: report.pass,
                }
            }
        };
        entries.push(entry);
    }
    let violations = entries.iter().filter(|e| !e.pass).count();
    let tightest_ratio = entries.iter().map(|e| e.ratio).fold(0.0, f64::max);
    Ok(AmplificationReport {
        code: code.describe(),
        delta0_num: *delta0.numer(),
        delta0_den: *delta0.denom(),
        entries,
        violations,
        tightest_ratio,
        pass: violations == 0,
    })
}
