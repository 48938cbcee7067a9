//! Exact min-entropy and average conditional min-entropy over finite,
//! explicitly listed distributions, and the leakage-budget check built on
//! top of them.
//!
//! Distributions built from enumeration carry integer counts and every
//! quantity derived from them is an exact fraction; distributions read from
//! JSON carry `f64` probabilities and comparisons use a `1e-9` tolerance.
//! All logarithms are base 2.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::codec::AmdCode;
use crate::error::{usage, AmdError, Result};
use crate::util::{check_budget, count_vectors, for_each_vector, vector_to_index};

pub const FLOAT_TOLERANCE: f64 = 1e-9;
const SUM_TOLERANCE: f64 = 1e-12;

/// A probability that is exact when it came from counting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Probability {
    Exact(Ratio<u128>),
    Real(f64),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Probability::Real(v) => *v,
        }
    }

    /// `-log2(p)`.
    pub fn bits(&self) -> f64 {
        match self {
            Probability::Exact(r) => (*r.denom() as f64).log2() - (*r.numer() as f64).log2(),
            Probability::Real(v) => -v.log2(),
        }
    }
}

#[derive(Clone, Debug)]
enum Weights {
    Counts { counts: Vec<u64>, total: u64 },
    Real(Vec<f64>),
}

impl Weights {
    fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return usage("distribution has no mass");
        }
        Ok(Weights::Counts { counts, total })
    }

    fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return usage("probabilities must be finite and nonnegative");
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return usage(format!("probabilities sum to {sum}, not 1"));
        }
        Ok(Weights::Real(probs))
    }

    fn len(&self) -> usize {
        match self {
            Weights::Counts { counts, .. } => counts.len(),
            Weights::Real(p) => p.len(),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Weights::Counts { .. })
    }

    fn probability(&self, i: usize) -> f64 {
        match self {
            Weights::Counts { counts, total } => counts[i] as f64 / *total as f64,
            Weights::Real(p) => p[i],
        }
    }

    /// Sum of the per-group maxima, over groups given by `group_of`.
    fn sum_of_group_maxima(&self, groups: usize, group_of: &[usize]) -> Probability {
        match self {
            Weights::Counts { counts, total } => {
                let mut best = vec![0u64; groups];
                for (i, &g) in group_of.iter().enumerate() {
                    best[g] = best[g].max(counts[i]);
                }
                let s: u128 = best.iter().map(|&b| b as u128).sum();
                Probability::Exact(Ratio::new(s, *total as u128))
            }
            Weights::Real(p) => {
                let mut best = vec![0f64; groups];
                for (i, &g) in group_of.iter().enumerate() {
                    best[g] = best[g].max(p[i]);
                }
                Probability::Real(best.iter().sum())
            }
        }
    }

    /// Marginal weights after merging entries with the same group.
    fn marginal(&self, groups: usize, group_of: &[usize]) -> Weights {
        match self {
            Weights::Counts { counts, total } => {
                let mut m = vec![0u64; groups];
                for (i, &g) in group_of.iter().enumerate() {
                    m[g] += counts[i];
                }
                Weights::Counts {
                    counts: m,
                    total: *total,
                }
            }
            Weights::Real(p) => {
                let mut m = vec![0f64; groups];
                for (i, &g) in group_of.iter().enumerate() {
                    m[g] += p[i];
                }
                Weights::Real(m)
            }
        }
    }

    fn max_probability(&self) -> Probability {
        let n = self.len();
        let groups: Vec<usize> = vec![0; n];
        self.sum_of_group_maxima(1, &groups)
    }
}

fn intern<L: Eq + Hash + Clone>(labels: &mut Vec<L>, index: &mut HashMap<L, usize>, l: &L) -> usize {
    if let Some(&i) = index.get(l) {
        return i;
    }
    let i = labels.len();
    labels.push(l.clone());
    index.insert(l.clone(), i);
    i
}

/// A finite distribution over labels of type `L`. Repeated labels are merged.
#[derive(Clone, Debug)]
pub struct FiniteDistribution<L> {
    labels: Vec<L>,
    weights: Weights,
}

impl<L: Eq + Hash + Clone> FiniteDistribution<L> {
    pub fn from_counts(outcomes: Vec<(L, u64)>) -> Result<Self> {
        let (labels, merged) = merge(outcomes.into_iter(), 0u64, |a, b| a + b);
        Ok(Self {
            labels,
            weights: Weights::from_counts(merged)?,
        })
    }

    pub fn from_probabilities(outcomes: Vec<(L, f64)>) -> Result<Self> {
        let (labels, merged) = merge(outcomes.into_iter(), 0f64, |a, b| a + b);
        Ok(Self {
            labels,
            weights: Weights::from_probs(merged)?,
        })
    }

    pub fn uniform(labels: Vec<L>) -> Result<Self> {
        Self::from_counts(labels.into_iter().map(|l| (l, 1)).collect())
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.weights.probability(i)
    }

    pub fn max_probability(&self) -> Probability {
        self.weights.max_probability()
    }
}

fn merge<L: Eq + Hash + Clone, W: Copy>(
    items: impl Iterator<Item = (L, W)>,
    zero: W,
    plus: impl Fn(W, W) -> W,
) -> (Vec<L>, Vec<W>) {
    let mut labels = Vec::new();
    let mut index = HashMap::new();
    let mut weights: Vec<W> = Vec::new();
    for (l, w) in items {
        let i = intern(&mut labels, &mut index, &l);
        if i == weights.len() {
            weights.push(zero);
        }
        weights[i] = plus(weights[i], w);
    }
    (labels, weights)
}

/// `H_inf(X) = -log2 max_x Pr[X = x]`.
pub fn min_entropy<L: Eq + Hash + Clone>(d: &FiniteDistribution<L>) -> Result<f64> {
    if d.labels.is_empty() {
        return usage("min-entropy of an empty distribution");
    }
    Ok(d.max_probability().bits())
}

/// A finite joint distribution of (X, Z). Repeated (x, z) pairs are merged.
#[derive(Clone, Debug)]
pub struct JointDistribution<X, Z> {
    xs: Vec<X>,
    zs: Vec<Z>,
    // per entry: (x index, z index)
    entries: Vec<(usize, usize)>,
    weights: Weights,
}

#[derive(Clone, Debug, Deserialize)]
struct JointRecord {
    x: serde_json::Value,
    z: serde_json::Value,
    p: f64,
}

fn label_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl JointDistribution<String, String> {
    /// Reads a JSON array of `{x, z, p}` records. Non-string labels are
    /// kept in their JSON text form.
    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<JointRecord> =
            serde_json::from_str(text).map_err(|e| AmdError::Parse(e.to_string()))?;
        Self::from_probabilities(
            records
                .into_iter()
                .map(|r| (label_text(&r.x), label_text(&r.z), r.p))
                .collect(),
        )
    }
}

impl<X: Eq + Hash + Clone, Z: Eq + Hash + Clone> JointDistribution<X, Z> {
    pub fn from_counts(entries: Vec<(X, Z, u64)>) -> Result<Self> {
        let (xs, zs, pairs, w) = Self::intern_all(entries, 0u64, |a, b| a + b);
        Ok(Self {
            xs,
            zs,
            entries: pairs,
            weights: Weights::from_counts(w)?,
        })
    }

    pub fn from_probabilities(entries: Vec<(X, Z, f64)>) -> Result<Self> {
        let (xs, zs, pairs, w) = Self::intern_all(entries, 0f64, |a, b| a + b);
        Ok(Self {
            xs,
            zs,
            entries: pairs,
            weights: Weights::from_probs(w)?,
        })
    }

    #[allow(clippy::type_complexity)]
    fn intern_all<W: Copy>(
        entries: Vec<(X, Z, W)>,
        zero: W,
        plus: impl Fn(W, W) -> W,
    ) -> (Vec<X>, Vec<Z>, Vec<(usize, usize)>, Vec<W>) {
        let (mut xs, mut zs) = (Vec::new(), Vec::new());
        let (mut xi, mut zi) = (HashMap::new(), HashMap::new());
        let mut pair_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (x, z, w) in entries {
            let a = intern(&mut xs, &mut xi, &x);
            let b = intern(&mut zs, &mut zi, &z);
            let slot = *pair_index.entry((a, b)).or_insert_with(|| {
                pairs.push((a, b));
                weights.push(zero);
                pairs.len() - 1
            });
            weights[slot] = plus(weights[slot], w);
        }
        (xs, zs, pairs, weights)
    }

    pub fn is_exact(&self) -> bool {
        self.weights.is_exact()
    }

    pub fn x_labels(&self) -> &[X] {
        &self.xs
    }

    pub fn z_labels(&self) -> &[Z] {
        &self.zs
    }

    /// Number of z labels carrying positive mass.
    pub fn z_support_size(&self) -> usize {
        let z_groups: Vec<usize> = self.entries.iter().map(|&(_, z)| z).collect();
        match self.weights.marginal(self.zs.len(), &z_groups) {
            Weights::Counts { counts, .. } => counts.iter().filter(|&&c| c > 0).count(),
            Weights::Real(p) => p.iter().filter(|&&v| v > 0.0).count(),
        }
    }

    /// `E_z [max_x Pr[X = x | Z = z]] = sum_z max_x Pr[X = x, Z = z]`.
    pub fn conditional_guessing_probability(&self) -> Probability {
        let z_groups: Vec<usize> = self.entries.iter().map(|&(_, z)| z).collect();
        self.weights.sum_of_group_maxima(self.zs.len(), &z_groups)
    }

    /// `max_x Pr[X = x]`.
    pub fn x_guessing_probability(&self) -> Probability {
        let x_groups: Vec<usize> = self.entries.iter().map(|&(x, _)| x).collect();
        self.weights
            .marginal(self.xs.len(), &x_groups)
            .max_probability()
    }

    /// `max_{x,z} Pr[X = x, Z = z]`.
    pub fn pair_guessing_probability(&self) -> Probability {
        self.weights.max_probability()
    }

    pub fn x_marginal(&self) -> FiniteDistribution<X> {
        let x_groups: Vec<usize> = self.entries.iter().map(|&(x, _)| x).collect();
        FiniteDistribution {
            labels: self.xs.clone(),
            weights: self.weights.marginal(self.xs.len(), &x_groups),
        }
    }

    /// Merge z labels through `coarsen`, keeping x untouched.
    pub fn coarsen_z<Z2: Eq + Hash + Clone>(&self, coarsen: impl Fn(&Z) -> Z2) -> JointDistribution<X, Z2> {
        match &self.weights {
            Weights::Counts { counts, .. } => JointDistribution::from_counts(
                self.entries
                    .iter()
                    .zip(counts)
                    .map(|(&(x, z), &c)| (self.xs[x].clone(), coarsen(&self.zs[z]), c))
                    .collect(),
            ),
            Weights::Real(p) => JointDistribution::from_probabilities(
                self.entries
                    .iter()
                    .zip(p)
                    .map(|(&(x, z), &w)| (self.xs[x].clone(), coarsen(&self.zs[z]), w))
                    .collect(),
            ),
        }
        .expect("coarsening preserves total mass")
    }
}

/// `H~_inf(X | Z) = -log2 E_z [max_x Pr[X = x | Z = z]]`.
pub fn avg_min_entropy<X: Eq + Hash + Clone, Z: Eq + Hash + Clone>(j: &JointDistribution<X, Z>) -> f64 {
    j.conditional_guessing_probability().bits()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRuleReport {
    /// `H~_inf(X | Z)`
    pub lhs: f64,
    /// `H_inf(X, Z) - lambda`
    pub mid: f64,
    /// `H_inf(X) - lambda`
    pub rhs: f64,
    /// `log2 |support(Z)|`
    pub lambda: f64,
    pub exact: bool,
    pub holds: bool,
}

/// Evaluates both sides of `H~_inf(X|Z) >= H_inf(X,Z) - lambda >= H_inf(X) - lambda`
/// with `lambda = log2 |support(Z)|`.
pub fn chain_rule_check<X: Eq + Hash + Clone, Z: Eq + Hash + Clone>(
    j: &JointDistribution<X, Z>,
) -> ChainRuleReport {
    let support = j.z_support_size() as u128;
    let lambda = (support as f64).log2();
    let cond = j.conditional_guessing_probability();
    let pair = j.pair_guessing_probability();
    let x_only = j.x_guessing_probability();
    let holds = match (cond, pair, x_only) {
        (Probability::Exact(c), Probability::Exact(p), Probability::Exact(x)) => {
            // 2^-lhs <= 2^-(mid) means c <= |supp Z| * p; mid >= rhs means p <= x
            c <= p * Ratio::from_integer(support) && p <= x
        }
        _ => {
            let (c, p, x) = (cond.to_f64(), pair.to_f64(), x_only.to_f64());
            c <= p * support as f64 * (1.0 + FLOAT_TOLERANCE) && p <= x * (1.0 + FLOAT_TOLERANCE)
        }
    };
    ChainRuleReport {
        lhs: cond.bits(),
        mid: pair.bits() - lambda,
        rhs: x_only.bits() - lambda,
        lambda,
        exact: j.is_exact(),
        holds,
    }
}

/// What a leakage function sees about one encoding.
///
/// For a regular code the message and randomness are functions of the
/// codeword, so exposing them changes nothing about what can be leaked.
pub struct LeakInput<'a> {
    pub message: &'a [u64],
    pub randomness: &'a [u64],
    pub codeword: &'a [u64],
}

type LeakFn = dyn Fn(&LeakInput<'_>, u64) -> u64 + Send + Sync;

/// A finite-range, possibly randomized, function of the codeword.
///
/// Randomized maps draw an auxiliary label uniformly from `0..aux_size`;
/// the label may also be shared with an adversary by the caller.
#[derive(Clone)]
pub struct LeakageMap {
    name: String,
    aux_size: u64,
    f: Arc<LeakFn>,
}

impl std::fmt::Debug for LeakageMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LeakageMap")
            .field("name", &self.name)
            .field("aux_size", &self.aux_size)
            .finish()
    }
}

impl LeakageMap {
    pub fn new(name: impl Into<String>, f: impl Fn(&LeakInput<'_>) -> u64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            aux_size: 1,
            f: Arc::new(move |input, _| f(input)),
        }
    }

    pub fn randomized(
        name: impl Into<String>,
        aux_size: u64,
        f: impl Fn(&LeakInput<'_>, u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            aux_size: aux_size.max(1),
            f: Arc::new(f),
        }
    }

    pub fn constant() -> Self {
        Self::new("constant", |_| 0)
    }

    /// Leaks the whole codeword.
    pub fn full_codeword(q: u64) -> Self {
        Self::new("full-codeword", move |i| {
            i.codeword.iter().fold(0u64, |acc, &s| acc.wrapping_mul(q).wrapping_add(s))
        })
    }

    /// Leaks randomness symbol `j`.
    pub fn randomness_symbol(j: usize) -> Self {
        Self::new(format!("randomness[{j}]"), move |i| i.randomness[j])
    }

    /// Leaks codeword symbol `j`.
    pub fn codeword_symbol(j: usize) -> Self {
        Self::new(format!("codeword[{j}]"), move |i| i.codeword[j])
    }

    /// Leaks `table[x_j]` for randomness symbol `j`, i.e. an arbitrary
    /// function of that symbol given by its value table.
    pub fn randomness_function(j: usize, table: Vec<u64>) -> Self {
        let name = format!(
            "randomness[{j}]->[{}]",
            table.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        );
        Self::new(name, move |i| table[i.randomness[j] as usize])
    }

    /// Leaks `table[index(x)]`, where `index(x)` reads the whole randomness
    /// vector as a base-`q` number, first symbol most significant.
    pub fn randomness_table(q: u64, table: Vec<u64>) -> Self {
        let name = format!(
            "randomness->[{}]",
            table.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        );
        Self::new(name, move |i| table[vector_to_index(i.randomness, q) as usize])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn aux_size(&self) -> u64 {
        self.aux_size
    }

    pub fn eval(&self, input: &LeakInput<'_>, aux: u64) -> u64 {
        (self.f)(input, aux)
    }
}

/// Every function from the randomness space `F^sigma` into `0..range`, as
/// leakage maps. There are `range^(q^sigma)` of them.
pub fn randomness_map_family(q: u64, sigma: usize, range: u64, budget: u128) -> Result<Vec<LeakageMap>> {
    let domain = count_vectors(q, sigma);
    if range == 0 || domain > 64 {
        return Err(AmdError::Usage(format!("cannot enumerate maps on a domain of {domain} points")));
    }
    let count = count_vectors(range, domain as usize);
    check_budget("leakage map family", count, budget)?;
    let mut family = Vec::with_capacity(count as usize);
    for_each_vector(range, domain as usize, |table| family.push(LeakageMap::randomness_table(q, table.to_vec())));
    Ok(family)
}

/// Which codeword distribution a leak is measured against.
#[derive(Clone, Copy)]
pub enum CodewordSource<'a> {
    /// `Enc(m, R)` for a fixed message and uniform randomness (strong codes).
    FixedMessage { code: &'a dyn AmdCode, message: &'a [u64] },
    /// `Enc(M, R)` for uniform message and randomness (weak codes have no R).
    UniformMessage { code: &'a dyn AmdCode },
}

impl<'a> CodewordSource<'a> {
    pub fn code(&self) -> &'a dyn AmdCode {
        match self {
            CodewordSource::FixedMessage { code, .. } | CodewordSource::UniformMessage { code } => *code,
        }
    }

    pub fn point_count(&self) -> u128 {
        let code = self.code();
        let q = code.field().order();
        let r = count_vectors(q, code.randomness_len());
        match self {
            CodewordSource::FixedMessage { .. } => r,
            CodewordSource::UniformMessage { .. } => r.saturating_mul(count_vectors(q, code.message_len())),
        }
    }
}

/// One equally weighted outcome of (encoding, leak).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakSample {
    pub message: Vec<u64>,
    pub randomness: Vec<u64>,
    pub codeword: Vec<u64>,
    pub aux: u64,
    pub leak: u64,
}

/// Largest number of (encoding, aux) points enumerated for one leak.
pub const MAX_LEAK_POINTS: u128 = 1 << 24;

/// Every (message, randomness, aux) outcome with its codeword and leak, each
/// carrying equal probability.
pub fn leak_samples(source: CodewordSource<'_>, leak: &LeakageMap) -> Result<Vec<LeakSample>> {
    let code = source.code();
    let points = source.point_count().saturating_mul(leak.aux_size as u128);
    check_budget("leak enumeration", points, MAX_LEAK_POINTS)?;
    let q = code.field().order();
    let mut out = Vec::with_capacity(points as usize);
    let mut codeword = vec![0; code.codeword_len()];
    let mut visit_message = |m: &[u64]| {
        for_each_vector(q, code.randomness_len(), |r| {
            code.encode_into(m, r, &mut codeword);
            for aux in 0..leak.aux_size {
                let input = LeakInput {
                    message: m,
                    randomness: r,
                    codeword: &codeword,
                };
                let z = leak.eval(&input, aux);
                out.push(LeakSample {
                    message: m.to_vec(),
                    randomness: r.to_vec(),
                    codeword: codeword.clone(),
                    aux,
                    leak: z,
                });
            }
        });
    };
    match source {
        CodewordSource::FixedMessage { message, .. } => {
            if message.len() != code.message_len() {
                return usage("fixed message has the wrong length");
            }
            visit_message(message)
        }
        CodewordSource::UniformMessage { .. } => for_each_vector(q, code.message_len(), visit_message),
    }
    Ok(out)
}

/// Exact joint distribution of (codeword, leak).
pub fn leak_joint(source: CodewordSource<'_>, leak: &LeakageMap) -> Result<JointDistribution<Vec<u64>, u64>> {
    let samples = leak_samples(source, leak)?;
    JointDistribution::from_counts(samples.into_iter().map(|s| (s.codeword, s.leak, 1)).collect())
}

/// `2^deficiency` as an exact fraction: the conditional guessing
/// probability of the codeword over its unconditional one.
pub fn leakage_ratio(source: CodewordSource<'_>, leak: &LeakageMap) -> Result<Ratio<u128>> {
    let joint = leak_joint(source, leak)?;
    match (joint.conditional_guessing_probability(), joint.x_guessing_probability()) {
        (Probability::Exact(c), Probability::Exact(x)) => Ok(c / x),
        _ => unreachable!("enumerated joints are exact"),
    }
}

/// `H_inf(C) - H~_inf(C | Z)` in bits.
pub fn leakage_deficiency(source: CodewordSource<'_>, leak: &LeakageMap) -> Result<f64> {
    let r = leakage_ratio(source, leak)?;
    Ok((*r.numer() as f64).log2() - (*r.denom() as f64).log2())
}

/// Whether the leak stays within `rho * n * log2 q` bits of deficiency.
pub fn is_admissible(source: CodewordSource<'_>, leak: &LeakageMap, rho: f64, n: usize, q: u64) -> Result<bool> {
    let deficiency = leakage_deficiency(source, leak)?;
    Ok(deficiency <= rho * n as f64 * (q as f64).log2() + FLOAT_TOLERANCE)
}

/// A leak with at most `label_count` values loses at most
/// `log2 label_count` bits, so it is admissible whenever that fits the budget.
pub fn bounded_leakage_admissible(label_count: u128, rho: f64, n: usize, q: u64) -> bool {
    (label_count.max(1) as f64).log2() <= rho * n as f64 * (q as f64).log2() + FLOAT_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{StrongAmdParams, WeakAmdParams};
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn min_entropy_examples() {
        let u8 = FiniteDistribution::uniform((0..8).collect()).unwrap();
        assert!(close(min_entropy(&u8).unwrap(), 3.0));
        let point = FiniteDistribution::from_counts(vec![("a", 1)]).unwrap();
        assert!(close(min_entropy(&point).unwrap(), 0.0));
        let skew = FiniteDistribution::from_probabilities(vec![(0, 0.5), (1, 0.25), (2, 0.25)]).unwrap();
        assert!(close(min_entropy(&skew).unwrap(), 1.0));
        let empty: FiniteDistribution<u8> = FiniteDistribution {
            labels: vec![],
            weights: Weights::Real(vec![]),
        };
        assert!(min_entropy(&empty).is_err());
        assert!(FiniteDistribution::from_probabilities(vec![(0, 0.5), (1, 0.4)]).is_err());
        assert!(FiniteDistribution::from_probabilities(vec![(0, 1.5), (1, -0.5)]).is_err());
    }

    fn two_bits(z: impl Fn(u8) -> u8) -> JointDistribution<u8, u8> {
        JointDistribution::from_counts((0..4u8).map(|x| (x, z(x), 1)).collect()).unwrap()
    }

    #[test]
    fn avg_min_entropy_examples() {
        assert!(close(avg_min_entropy(&two_bits(|x| x >> 1)), 1.0));
        assert!(close(avg_min_entropy(&two_bits(|_| 0)), 2.0));
        assert!(close(avg_min_entropy(&two_bits(|x| x)), 0.0));
        // Z independent of X: product of a skewed X and a uniform coin
        let mut e = Vec::new();
        for (x, px) in [(0u8, 0.5), (1, 0.25), (2, 0.25)] {
            for z in 0..2u8 {
                e.push((x, z, px * 0.5));
            }
        }
        let j = JointDistribution::from_probabilities(e).unwrap();
        assert!(close(avg_min_entropy(&j), min_entropy(&j.x_marginal()).unwrap()));
    }

    #[test]
    fn chain_rule_examples() {
        let r = chain_rule_check(&two_bits(|x| x >> 1));
        assert!(r.holds && r.exact);
        assert!(close(r.lhs, 1.0) && close(r.mid, 1.0) && close(r.rhs, 1.0));
        let r = chain_rule_check(&two_bits(|_| 7));
        assert!(r.holds);
        assert!(close(r.lambda, 0.0) && close(r.lhs, 2.0));
    }

    #[test]
    fn json_import() {
        let j = JointDistribution::from_json(
            r#"[{"x":"00","z":0,"p":0.25},{"x":"01","z":0,"p":0.25},
                {"x":"10","z":1,"p":0.25},{"x":"11","z":1,"p":0.25}]"#,
        )
        .unwrap();
        assert!(!j.is_exact());
        assert!(close(avg_min_entropy(&j), 1.0));
        assert!(JointDistribution::from_json(r#"[{"x":1,"z":1,"p":0.3}]"#).is_err());
        assert!(JointDistribution::from_json("{").is_err());
    }

    fn strong515() -> StrongAmdParams {
        StrongAmdParams::new(FieldSpec::prime(5).unwrap(), 1, 1).unwrap()
    }

    #[test]
    fn deficiency_examples() {
        let code = strong515();
        let m = [2u64];
        let src = CodewordSource::FixedMessage { code: &code, message: &m };
        assert!(close(leakage_deficiency(src, &LeakageMap::constant()).unwrap(), 0.0));
        let full = LeakageMap::full_codeword(5);
        assert!(close(leakage_deficiency(src, &full).unwrap(), 5f64.log2()));

        let code2 = StrongAmdParams::new(FieldSpec::prime(5).unwrap(), 1, 2).unwrap();
        let src2 = CodewordSource::FixedMessage { code: &code2, message: &m };
        let d = leakage_deficiency(src2, &LeakageMap::randomness_symbol(0)).unwrap();
        assert!(close(d, 5f64.log2()));
    }

    #[test]
    fn admissibility_examples() {
        let code = strong515();
        let m = [0u64];
        let src = CodewordSource::FixedMessage { code: &code, message: &m };
        let n = code.n();
        assert!(is_admissible(src, &LeakageMap::constant(), 0.01, n, 5).unwrap());
        let full = LeakageMap::full_codeword(5);
        // sigma / n = 1/3 is exactly the deficiency of the full leak
        assert!(is_admissible(src, &full, 1.0 / 3.0, n, 5).unwrap());
        assert!(!is_admissible(src, &full, 0.3, n, 5).unwrap());
    }

    #[test]
    fn oversized_enumeration_is_a_capacity_error() {
        let code = StrongAmdParams::new(FieldSpec::prime(251).unwrap(), 1, 4).unwrap();
        let m = [0u64];
        let src = CodewordSource::FixedMessage { code: &code, message: &m };
        assert!(matches!(
            leakage_deficiency(src, &LeakageMap::constant()),
            Err(AmdError::Capacity { .. })
        ));
    }

    #[test]
    fn weak_source_enumerates_messages() {
        let code = WeakAmdParams::new(FieldSpec::prime(5).unwrap(), 2).unwrap();
        let src = CodewordSource::UniformMessage { code: &code };
        assert_eq!(src.point_count(), 25);
        // leaking the first message symbol costs exactly log2 5 bits
        let d = leakage_deficiency(src, &LeakageMap::codeword_symbol(0)).unwrap();
        assert!(close(d, 5f64.log2()));
    }

    #[test]
    fn randomized_leak_with_aux() {
        // with probability 1/2 leak the symbol, else leak nothing
        let code = strong515();
        let m = [1u64];
        let src = CodewordSource::FixedMessage { code: &code, message: &m };
        let leak = LeakageMap::randomized("noisy", 2, |i, aux| if aux == 0 { i.randomness[0] } else { 99 });
        let r = leakage_ratio(src, &leak).unwrap();
        // guessing: 1/2 * 1 + 1/2 * 1/5 = 3/5, versus 1/5 unconditioned
        assert_eq!(r, Ratio::new(3, 1));
    }

    #[test]
    fn bounded_leakage_instances() {
        // one bit out of a 3-symbol GF(5) codeword
        assert!(bounded_leakage_admissible(2, 1.0 / (3.0 * 5f64.log2()), 3, 5));
        assert!(!bounded_leakage_admissible(4, 1.0 / (3.0 * 5f64.log2()), 3, 5));
        // and the chain rule makes that bound real: any 1-bit leak of the
        // codeword loses at most 1 bit
        let code = strong515();
        let m = [3u64];
        let src = CodewordSource::FixedMessage { code: &code, message: &m };
        for mask in 0u64..32 {
            let leak = LeakageMap::new("bit", move |i| (mask >> i.randomness[0]) & 1);
            assert!(leakage_deficiency(src, &leak).unwrap() <= 1.0 + 1e-12);
        }
    }

    fn joint_strategy() -> impl Strategy<Value = Vec<(u8, u8, u64)>> {
        (1usize..=16, 1usize..=8).prop_flat_map(|(nx, nz)| {
            proptest::collection::vec((0..nx as u8, 0..nz as u8, 1u64..50), 1..60)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn conditional_entropy_is_bounded(entries in joint_strategy()) {
            let j = JointDistribution::from_counts(entries).unwrap();
            let h = avg_min_entropy(&j);
            let hx = min_entropy(&j.x_marginal()).unwrap();
            prop_assert!(h >= -1e-12);
            prop_assert!(h <= hx + 1e-12);
            prop_assert!(chain_rule_check(&j).holds);
        }

        #[test]
        fn coarsening_never_decreases_entropy(entries in joint_strategy(), modulus in 1u8..5) {
            let j = JointDistribution::from_counts(entries).unwrap();
            let coarse = j.coarsen_z(|z| z % modulus);
            match (coarse.conditional_guessing_probability(), j.conditional_guessing_probability()) {
                (Probability::Exact(c), Probability::Exact(f)) => prop_assert!(c <= f),
                _ => prop_assert!(false),
            }
        }
    }
}
