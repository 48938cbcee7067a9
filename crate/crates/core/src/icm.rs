//! AMD coding in the ideal cipher model: `Enc(m, r) = (m, f(m, r))` for a
//! public random permutation `f` on `F^(k+sigma)` with inverse access.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{Codeword, Message};
use crate::error::{usage, AmdError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::stats::{trial_rng, AttackReport, BoundKind, Dims};
use crate::util::{count_vectors, index_to_vector, vector_to_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Query {
    pub direction: Direction,
    pub input: u64,
    pub output: u64,
    /// Counted against the adversary's budget.
    pub charged: bool,
}

/// A uniformly random permutation of `[0, domain)`, sampled lazily.
///
/// Not thread-safe by design; each experiment trial owns its own oracle.
#[derive(Debug)]
pub struct PermutationOracle {
    domain: u64,
    forward: HashMap<u64, u64>,
    inverse: HashMap<u64, u64>,
    log: Vec<Query>,
    budget: Option<u64>,
    charged: u64,
    rng: ChaCha20Rng,
}

impl PermutationOracle {
    pub fn new(domain: u64, rng: ChaCha20Rng) -> Result<Self> {
        if domain == 0 {
            return usage("permutation domain must be nonempty");
        }
        Ok(Self {
            domain,
            forward: HashMap::new(),
            inverse: HashMap::new(),
            log: Vec::new(),
            budget: None,
            charged: 0,
            rng,
        })
    }

    pub fn with_seed(domain: u64, seed: u64) -> Result<Self> {
        Self::new(domain, ChaCha20Rng::seed_from_u64(seed))
    }

    /// Limits charged queries; going over raises a budget violation.
    pub fn set_budget(&mut self, budget: u64) {
        self.budget = Some(budget);
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn log(&self) -> &[Query] {
        &self.log
    }

    pub fn query_count(&self) -> usize {
        self.log.len()
    }

    pub fn charged_queries(&self) -> u64 {
        self.charged
    }

    fn check(&self, x: u64) -> Result<()> {
        if x >= self.domain {
            return usage(format!("oracle input {x} outside domain {}", self.domain));
        }
        Ok(())
    }

    // Rejection sampling over the unused values of `taken`'s key space.
    fn fresh(rng: &mut ChaCha20Rng, domain: u64, taken: &HashMap<u64, u64>) -> u64 {
        loop {
            let v = rng.gen_range(0..domain);
            if !taken.contains_key(&v) {
                return v;
            }
        }
    }

    fn charge(&mut self, charged: bool) -> Result<()> {
        if charged {
            self.charged += 1;
            if let Some(budget) = self.budget {
                if self.charged > budget {
                    return Err(AmdError::BudgetViolation { used: self.charged, budget });
                }
            }
        }
        Ok(())
    }

    fn forward_inner(&mut self, x: u64, charged: bool) -> Result<u64> {
        self.check(x)?;
        self.charge(charged)?;
        let y = match self.forward.get(&x) {
            Some(&y) => y,
            None => {
                let y = Self::fresh(&mut self.rng, self.domain, &self.inverse);
                self.forward.insert(x, y);
                self.inverse.insert(y, x);
                y
            }
        };
        self.log.push(Query { direction: Direction::Forward, input: x, output: y, charged });
        Ok(y)
    }

    fn inverse_inner(&mut self, y: u64, charged: bool) -> Result<u64> {
        self.check(y)?;
        self.charge(charged)?;
        let x = match self.inverse.get(&y) {
            Some(&x) => x,
            None => {
                let x = Self::fresh(&mut self.rng, self.domain, &self.forward);
                self.forward.insert(x, y);
                self.inverse.insert(y, x);
                x
            }
        };
        self.log.push(Query { direction: Direction::Inverse, input: y, output: x, charged });
        Ok(x)
    }

    /// `f(x)`, made by the honest encoder/decoder (not charged).
    pub fn forward(&mut self, x: u64) -> Result<u64> {
        self.forward_inner(x, false)
    }

    /// `f^-1(y)`, made by the honest encoder/decoder (not charged).
    pub fn inverse(&mut self, y: u64) -> Result<u64> {
        self.inverse_inner(y, false)
    }

    /// `f(x)` on behalf of the adversary or leakage function.
    pub fn adversary_forward(&mut self, x: u64) -> Result<u64> {
        self.forward_inner(x, true)
    }

    /// `f^-1(y)` on behalf of the adversary or leakage function.
    pub fn adversary_inverse(&mut self, y: u64) -> Result<u64> {
        self.inverse_inner(y, true)
    }

    /// Both tables agree at every populated point.
    pub fn is_consistent(&self) -> bool {
        self.forward.len() == self.inverse.len()
            && self.forward.iter().all(|(x, y)| self.inverse.get(y) == Some(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IcmParams {
    pub spec: FieldSpec,
    pub k: usize,
    pub sigma: usize,
    pub query_budget: u64,
    pub rho: f64,
}

impl IcmParams {
    pub fn new(spec: FieldSpec, k: usize, sigma: usize, query_budget: u64, rho: f64) -> Result<Self> {
        if k == 0 || sigma == 0 {
            return usage("k and sigma must be at least 1");
        }
        if !(0.0..=1.0).contains(&rho) {
            return usage(format!("rho must lie in [0, 1], got {rho}"));
        }
        if count_vectors(spec.order(), k + sigma) > 1 << 63 {
            return usage("permutation domain q^(k+sigma) exceeds 2^63");
        }
        Ok(Self { spec, k, sigma, query_budget, rho })
    }

    pub fn n(&self) -> usize {
        2 * self.k + self.sigma
    }

    /// `q^(k+sigma)`.
    pub fn domain(&self) -> u64 {
        count_vectors(self.spec.order(), self.k + self.sigma) as u64
    }

    /// Codeword symbols a rate-`rho` leak may reveal: `floor(rho n)`.
    pub fn leak_symbols(&self) -> usize {
        ((self.rho * self.n() as f64 + 1e-9).floor() as usize).min(self.k + self.sigma)
    }

    pub fn new_oracle(&self, rng: ChaCha20Rng) -> Result<PermutationOracle> {
        PermutationOracle::new(self.domain(), rng)
    }

    fn check_oracle(&self, oracle: &PermutationOracle) -> Result<()> {
        if oracle.domain() != self.domain() {
            return usage(format!(
                "oracle domain {} does not match q^(k+sigma) = {}",
                oracle.domain(),
                self.domain()
            ));
        }
        Ok(())
    }
}

/// `(m, f(m || r))` on raw residues.
pub fn encode_raw(params: &IcmParams, oracle: &mut PermutationOracle, m: &[u64], r: &[u64]) -> Result<Vec<u64>> {
    params.check_oracle(oracle)?;
    if m.len() != params.k || r.len() != params.sigma {
        return usage("message or randomness has the wrong length");
    }
    let q = params.spec.order();
    let input: Vec<u64> = m.iter().chain(r).copied().collect();
    let y = oracle.forward(vector_to_index(&input, q) as u64)?;
    let mut out = m.to_vec();
    out.extend(index_to_vector(y as u128, q, params.k + params.sigma));
    Ok(out)
}

/// Inverts the image block and accepts iff it carries the same message.
pub fn decode_raw(params: &IcmParams, oracle: &mut PermutationOracle, c: &[u64]) -> Result<Option<Vec<u64>>> {
    params.check_oracle(oracle)?;
    if c.len() != params.n() {
        return usage(format!("codeword has {} symbols, expected {}", c.len(), params.n()));
    }
    let q = params.spec.order();
    let (m, y) = c.split_at(params.k);
    let x = oracle.inverse(vector_to_index(y, q) as u64)?;
    let pre = index_to_vector(x as u128, q, params.k + params.sigma);
    Ok((pre[..params.k] == *m).then(|| m.to_vec()))
}

pub fn icm_encode(params: &IcmParams, oracle: &mut PermutationOracle, m: &Message, r: &[FieldElement]) -> Result<Codeword> {
    let rv: Vec<u64> = r.iter().map(FieldElement::value).collect();
    let out = encode_raw(params, oracle, &m.values(), &rv)?;
    Codeword::from_values(&params.spec, &out)
}

pub fn icm_decode(params: &IcmParams, oracle: &mut PermutationOracle, c: &Codeword) -> Result<Option<Message>> {
    match decode_raw(params, oracle, &c.values())? {
        Some(m) => Ok(Some(Message::from_values(&params.spec, &m)?)),
        None => Ok(None),
    }
}

/// `q^-k + t_q / q^(sigma - rho n)`.
pub fn icm_bound(params: &IcmParams) -> f64 {
    let q = params.spec.order() as f64;
    let exponent = params.sigma as f64 - params.rho * params.n() as f64;
    q.powf(-(params.k as f64)) + params.query_budget as f64 / q.powf(exponent)
}

/// `(kappa, rho_max)`: the code rate `k/(2k+sigma)` and the leakage rate
/// `sigma/(2k+sigma)` at which the bound's second term reaches `t_q`.
pub fn icm_rates(params: &IcmParams) -> (f64, f64) {
    let n = params.n() as f64;
    (params.k as f64 / n, params.sigma as f64 / n)
}

/// How the adversary spends its queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum IcmStrategy {
    /// No queries: shift the message and push the image block to a point
    /// nobody has queried.
    FreshGuess,
    /// Spend `queries` forward queries on codewords of another message and
    /// replay one of them, filling unknown image symbols from the leak.
    ReplayBestLeak { queries: u64 },
}

impl IcmStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            IcmStrategy::FreshGuess => "fresh-guess",
            IcmStrategy::ReplayBestLeak { .. } => "replay-best-leak",
        }
    }
}

fn add_vec(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| spec.add_raw(x, y)).collect()
}

fn sub_vec(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| spec.sub_raw(x, y)).collect()
}

/// One run of the tampering game for message zero. Returns whether the
/// tampered codeword decoded to another message, and the charged queries.
fn icm_trial(params: &IcmParams, strategy: IcmStrategy, rng: &mut ChaCha20Rng) -> Result<(bool, u64)> {
    let spec = params.spec;
    let q = spec.order();
    let (k, s) = (params.k, params.sigma);
    let mut oracle = params.new_oracle(ChaCha20Rng::from_seed(rng.gen()))?;
    oracle.set_budget(params.query_budget);

    let m = vec![0u64; k];
    let r: Vec<u64> = (0..s).map(|_| rng.gen_range(0..q)).collect();
    let c = encode_raw(params, &mut oracle, &m, &r)?;
    let y = &c[k..];
    // the leak: the first `leak_symbols` symbols of the image block
    let leak = &y[..params.leak_symbols()];

    let mut shift_m = vec![0u64; k];
    shift_m[0] = 1;
    let offset = match strategy {
        IcmStrategy::FreshGuess => {
            let mut dy = vec![0u64; k + s];
            dy[k + s - 1] = 1 + rng.gen_range(0..q - 1);
            [shift_m, dy].concat()
        }
        IcmStrategy::ReplayBestLeak { queries } => {
            let target_m = add_vec(&spec, &m, &shift_m);
            let mut best: Option<Vec<u64>> = None;
            for _ in 0..queries {
                let rr: Vec<u64> = (0..s).map(|_| rng.gen_range(0..q)).collect();
                let input: Vec<u64> = target_m.iter().chain(&rr).copied().collect();
                let yy = oracle.adversary_forward(vector_to_index(&input, q) as u64)?;
                let yy = index_to_vector(yy as u128, q, k + s);
                let score = yy.iter().zip(leak).filter(|(a, b)| a == b).count();
                let best_score = best
                    .as_ref()
                    .map_or(0, |b| b.iter().zip(leak).filter(|(a, b)| a == b).count());
                if best.is_none() || score > best_score {
                    best = Some(yy);
                }
            }
            // leaked symbols are shifted exactly; the rest are guessed
            let dy = match best {
                Some(target_y) => {
                    let mut guess: Vec<u64> = (0..k + s).map(|_| rng.gen_range(0..q)).collect();
                    guess[..leak.len()].copy_from_slice(leak);
                    sub_vec(&spec, &target_y, &guess)
                }
                None => {
                    let mut dy = vec![0u64; k + s];
                    dy[k + s - 1] = 1 + rng.gen_range(0..q - 1);
                    dy
                }
            };
            [shift_m, dy].concat()
        }
    };
    let tampered = add_vec(&spec, &c, &offset);
    let decoded = decode_raw(params, &mut oracle, &tampered)?;
    debug_assert!(oracle.is_consistent());
    Ok((matches!(decoded, Some(d) if d != m), oracle.charged_queries()))
}

/// Monte Carlo estimate of a strategy's success, checked against
/// [`icm_bound`] as a ceiling.
pub fn run_icm_experiment(params: &IcmParams, strategy: IcmStrategy, trials: u64, seed: u64) -> Result<AttackReport> {
    if let IcmStrategy::ReplayBestLeak { queries } = strategy {
        if queries > params.query_budget {
            return Err(AmdError::BudgetViolation { used: queries, budget: params.query_budget });
        }
    }
    let (successes, used) = (0..trials)
        .into_par_iter()
        .map(|i| icm_trial(params, strategy, &mut trial_rng(seed, i)))
        .try_fold(|| (0u64, 0u64), |(s, u), r| r.map(|(ok, used)| (s + ok as u64, u.max(used))))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1.max(b.1))))?;
    let bits = params.spec.symbol_bits();
    let dims = Dims {
        k_bits: params.k as u32 * bits,
        sigma_bits: params.sigma as u32 * bits,
        n_bits: params.n() as u32 * bits,
    };
    let code = format!("icm {} k={} sigma={}", params.spec, params.k, params.sigma);
    let mut report = AttackReport::new(
        &format!("icm-{}", strategy.name()),
        code,
        dims,
        params.query_budget,
        trials,
        successes,
        false,
        icm_bound(params),
        BoundKind::Ceiling,
        Some(seed),
    );
    report.query_budget = Some(params.query_budget);
    report.queries_used = Some(used);
    Ok(report)
}

/// Pearson statistic of a histogram against the uniform distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquared {
    pub statistic: f64,
    pub dof: u64,
    /// Wilson-Hilferty approximation of the 99.9% quantile.
    pub critical: f64,
    pub pass: bool,
}

pub fn chi_squared_uniform(counts: &[u64]) -> ChiSquared {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = counts.len() as u64 - 1;
    let d = dof as f64;
    let z = 3.090_232_306_167_813;
    let critical = d * (1.0 - 2.0 / (9.0 * d) + z * (2.0 / (9.0 * d)).sqrt()).powi(3);
    ChiSquared { statistic, dof, critical, pass: statistic <= critical }
}

/// Over `samples` fresh oracles, histograms `f(0)` after `prefill` other
/// points were queried, over the unused outputs only.
pub fn lazy_sampling_uniformity(domain: u64, prefill: u64, samples: u64, seed: u64) -> Result<ChiSquared> {
    if domain > 1 << 12 || prefill >= domain {
        return usage("uniformity check needs domain <= 2^12 and prefill < domain");
    }
    let mut counts = vec![0u64; domain as usize];
    let mut excluded = vec![false; domain as usize];
    for i in 0..samples {
        let mut oracle = PermutationOracle::new(domain, trial_rng(seed, i))?;
        // fix the prefill images so that the unused set is the same every time
        for x in 1..=prefill {
            oracle.forward.insert(x, x - 1);
            oracle.inverse.insert(x - 1, x);
        }
        counts[oracle.forward(0)? as usize] += 1;
    }
    for slot in excluded.iter_mut().take(prefill as usize) {
        *slot = true;
    }
    if counts.iter().zip(&excluded).any(|(&c, &e)| e && c > 0) {
        return Ok(ChiSquared { statistic: f64::INFINITY, dof: 0, critical: 0.0, pass: false });
    }
    let live: Vec<u64> = counts.into_iter().zip(excluded).filter(|(_, e)| !e).map(|(c, _)| c).collect();
    Ok(chi_squared_uniform(&live))
}
