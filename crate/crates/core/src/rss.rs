//! Ramp secret sharing and its composition with AMD codes.
//!
//! The ramp scheme is packed Shamir in coefficient form: a block of `L`
//! secret symbols sits in the top coefficients of
//! `p(X) = rho_0 + ... + rho_{t-1} X^{t-1} + s_0 X^t + ... + s_{L-1} X^{r-1}`
//! with `t` uniform low coefficients. Party `i` (1-based) holds `p(i mod q)`.
//! Any `t` evaluations of the low part are uniform, any `r` determine `p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{AmdCode, Message, StrongAmdParams};
use crate::error::{usage, AmdError, Result};
use crate::field::FieldSpec;
use crate::stats::{trial_rng, AttackReport, BoundKind, Dims};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RampParams {
    pub spec: FieldSpec,
    pub t_priv: usize,
    pub r: usize,
    pub n_shares: usize,
}

impl RampParams {
    pub fn new(spec: FieldSpec, t_priv: usize, r: usize, n_shares: usize) -> Result<Self> {
        if t_priv >= r {
            return usage(format!("privacy threshold {t_priv} must be below reconstruction threshold {r}"));
        }
        if r > n_shares {
            return usage(format!("{n_shares} shares cannot meet reconstruction threshold {r}"));
        }
        if n_shares as u64 > spec.order() {
            return usage(format!("{n_shares} shares need distinct points in {spec}"));
        }
        Ok(Self { spec, t_priv, r, n_shares })
    }

    /// Secret symbols per block, `r - t_priv`.
    pub fn block_len(&self) -> usize {
        self.r - self.t_priv
    }

    /// The evaluation point of party `index`.
    pub fn point(&self, index: usize) -> u64 {
        index as u64 % self.spec.order()
    }
}

/// One party's share: an evaluation per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Share {
    pub index: usize,
    pub values: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ShareRecord {
    index: usize,
    value: String,
    field: String,
}

/// JSON array of `{index, value, field}`, values comma-separated.
pub fn shares_to_json(shares: &[Share], spec: &FieldSpec) -> Result<String> {
    let records: Vec<ShareRecord> = shares
        .iter()
        .map(|s| ShareRecord {
            index: s.index,
            value: s.values.iter().map(|&v| spec.format_value(v)).collect::<Vec<_>>().join(","),
            field: spec.to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&records).map_err(|e| AmdError::Parse(e.to_string()))
}

pub fn shares_from_json(text: &str) -> Result<(FieldSpec, Vec<Share>)> {
    let records: Vec<ShareRecord> = serde_json::from_str(text).map_err(|e| AmdError::Parse(e.to_string()))?;
    let first = records.first().ok_or_else(|| AmdError::Parse("no shares".into()))?;
    let spec: FieldSpec = first.field.parse()?;
    let mut shares = Vec::with_capacity(records.len());
    for rec in &records {
        if rec.field != first.field {
            return Err(AmdError::Parse("shares mix different fields".into()));
        }
        let values = rec
            .value
            .split(',')
            .map(|v| spec.parse_value(v.trim()))
            .collect::<Result<Vec<_>>>()?;
        shares.push(Share { index: rec.index, values });
    }
    Ok((spec, shares))
}

fn eval_poly(spec: &FieldSpec, coeffs: &[u64], x: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| spec.add_raw(spec.mul_raw(acc, x), c))
}

/// Deals `secret` (a multiple of `L` symbols) block by block with the given
/// low coefficients, `t_priv` per block.
fn deal(secret: &[u64], params: &RampParams, randomness: &[u64]) -> Vec<Share> {
    let (t, l) = (params.t_priv, params.block_len());
    let blocks = secret.len() / l;
    let mut shares: Vec<Share> = (1..=params.n_shares)
        .map(|index| Share { index, values: Vec::with_capacity(blocks) })
        .collect();
    for b in 0..blocks {
        let coeffs: Vec<u64> = randomness[b * t..(b + 1) * t]
            .iter()
            .chain(&secret[b * l..(b + 1) * l])
            .copied()
            .collect();
        for share in shares.iter_mut() {
            share.values.push(eval_poly(&params.spec, &coeffs, params.point(share.index)));
        }
    }
    shares
}

fn check_secret(secret: &[u64], params: &RampParams) -> Result<()> {
    if secret.is_empty() || !secret.len().is_multiple_of(params.block_len()) {
        return usage(format!(
            "secret length {} is not a positive multiple of the block length {}",
            secret.len(),
            params.block_len()
        ));
    }
    if secret.iter().any(|&s| s >= params.spec.order()) {
        return usage("secret symbol outside the field");
    }
    Ok(())
}

pub fn ramp_share_with(secret: &[u64], params: &RampParams, rng: &mut impl Rng) -> Result<Vec<Share>> {
    check_secret(secret, params)?;
    let q = params.spec.order();
    let count = secret.len() / params.block_len() * params.t_priv;
    let randomness: Vec<u64> = (0..count).map(|_| rng.gen_range(0..q)).collect();
    Ok(deal(secret, params, &randomness))
}

/// Shares `secret`, a multiple of `L` symbols, one dealing per block.
pub fn ramp_share(secret: &[u64], params: &RampParams, seed: u64) -> Result<Vec<Share>> {
    ramp_share_with(secret, params, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// Shares with fixed low coefficients; zero randomness gives the share-side
/// image of an additive offset on the secret.
pub fn ramp_share_deterministic(secret: &[u64], params: &RampParams, randomness: &[u64]) -> Result<Vec<Share>> {
    check_secret(secret, params)?;
    if randomness.len() != secret.len() / params.block_len() * params.t_priv {
        return usage("wrong amount of dealing randomness");
    }
    Ok(deal(secret, params, randomness))
}

/// Solves `V c = y` for the Vandermonde matrix on `points`.
fn interpolate(spec: &FieldSpec, points: &[u64], ys: &[u64]) -> Result<Vec<u64>> {
    let n = points.len();
    let mut rows: Vec<Vec<u64>> = points
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = 1;
            for _ in 0..n {
                row.push(p);
                p = spec.mul_raw(p, x);
            }
            row.push(y);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| rows[i][col] != 0)
            .ok_or_else(|| AmdError::Usage("evaluation points are not distinct".into()))?;
        rows.swap(col, pivot);
        let inv = spec.inv_raw(rows[col][col])?;
        for v in rows[col].iter_mut() {
            *v = spec.mul_raw(*v, inv);
        }
        for i in 0..n {
            if i != col && rows[i][col] != 0 {
                let f = rows[i][col];
                let pivot_row = rows[col].clone();
                for (v, &p) in rows[i].iter_mut().zip(&pivot_row).skip(col) {
                    *v = spec.sub_raw(*v, spec.mul_raw(f, p));
                }
            }
        }
    }
    Ok(rows.into_iter().map(|row| row[n]).collect())
}

/// Recovers the secret from the first `r` shares given.
pub fn ramp_reconstruct(shares: &[Share], params: &RampParams) -> Result<Vec<u64>> {
    if shares.len() < params.r {
        return Err(AmdError::InsufficientShares { have: shares.len(), need: params.r });
    }
    let mut seen = vec![false; params.n_shares + 1];
    for s in shares {
        if s.index == 0 || s.index > params.n_shares {
            return usage(format!("share index {} outside 1..={}", s.index, params.n_shares));
        }
        if std::mem::replace(&mut seen[s.index], true) {
            return usage(format!("duplicate share index {}", s.index));
        }
    }
    let used = &shares[..params.r];
    let blocks = used[0].values.len();
    if used.iter().any(|s| s.values.len() != blocks) {
        return usage("shares carry different numbers of blocks");
    }
    let points: Vec<u64> = used.iter().map(|s| params.point(s.index)).collect();
    let mut secret = Vec::with_capacity(blocks * params.block_len());
    for b in 0..blocks {
        let ys: Vec<u64> = used.iter().map(|s| s.values[b]).collect();
        let coeffs = interpolate(&params.spec, &points, &ys)?;
        secret.extend_from_slice(&coeffs[params.t_priv..]);
    }
    Ok(secret)
}

/// Share-wise sum, used to apply additive tampering.
pub fn add_shares(spec: &FieldSpec, a: &[Share], b: &[Share]) -> Result<Vec<Share>> {
    if a.len() != b.len() {
        return usage("share lists differ in length");
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.index != y.index || x.values.len() != y.values.len() {
                return usage("share lists are not aligned");
            }
            let values = x.values.iter().zip(&y.values).map(|(&u, &v)| spec.add_raw(u, v)).collect();
            Ok(Share { index: x.index, values })
        })
        .collect()
}

/// `t_priv + floor(rho (r - t_priv))`.
pub fn leakage_tolerance(params: &RampParams, rho: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&rho) {
        return usage(format!("rho must lie in [0, 1), got {rho}"));
    }
    Ok(params.t_priv + (rho * params.block_len() as f64 + 1e-12).floor() as usize)
}

/// Fraction of the secret revealed by `a` shares: `(a - t)/(r - t)`, clamped.
pub fn leaked_fraction(params: &RampParams, a: usize) -> f64 {
    (a.saturating_sub(params.t_priv) as f64 / params.block_len() as f64).min(1.0)
}

fn check_spec(amd: &StrongAmdParams, ramp: &RampParams) -> Result<()> {
    if amd.spec() != ramp.spec {
        return usage(format!("AMD field {} differs from sharing field {}", amd.spec(), ramp.spec));
    }
    Ok(())
}

/// Symbols after zero-padding an AMD codeword to whole blocks.
pub fn padded_len(amd: &StrongAmdParams, ramp: &RampParams) -> usize {
    amd.n().div_ceil(ramp.block_len()) * ramp.block_len()
}

pub fn robust_share_with(m: &[u64], amd: &StrongAmdParams, ramp: &RampParams, rng: &mut impl Rng) -> Result<Vec<Share>> {
    check_spec(amd, ramp)?;
    if m.len() != amd.k() || m.iter().any(|&v| v >= amd.spec().order()) {
        return usage("message does not fit the AMD parameters");
    }
    let q = amd.spec().order();
    let x: Vec<u64> = (0..amd.sigma()).map(|_| rng.gen_range(0..q)).collect();
    let mut c = vec![0; padded_len(amd, ramp)];
    amd.encode_into(m, &x, &mut c[..amd.n()]);
    ramp_share_with(&c, ramp, rng)
}

/// AMD-encodes the message, pads the codeword with zeros to whole blocks
/// and shares it.
pub fn robust_share(m: &Message, amd: &StrongAmdParams, ramp: &RampParams, seed: u64) -> Result<Vec<Share>> {
    robust_share_with(&m.values(), amd, ramp, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// `Ok(None)` signals detected tampering; too few shares is an error.
pub fn robust_reconstruct_raw(shares: &[Share], amd: &StrongAmdParams, ramp: &RampParams) -> Result<Option<Vec<u64>>> {
    check_spec(amd, ramp)?;
    let c = ramp_reconstruct(shares, ramp)?;
    if c.len() != padded_len(amd, ramp) {
        return usage("shares do not match the AMD codeword length");
    }
    let mut m = vec![0; amd.k()];
    // nonzero padding is tampering as well
    let ok = c[amd.n()..].iter().all(|&v| v == 0) && amd.decode_into(&c[..amd.n()], &mut m);
    Ok(ok.then_some(m))
}

pub fn robust_reconstruct(shares: &[Share], amd: &StrongAmdParams, ramp: &RampParams) -> Result<Option<Message>> {
    match robust_reconstruct_raw(shares, amd, ramp)? {
        Some(m) => Ok(Some(Message::from_values(&amd.spec(), &m)?)),
        None => Ok(None),
    }
}

/// How the shares are tampered with in [`tamper_experiment`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Tamper {
    /// Adds the shares of `offset` (dealt with zero randomness), which
    /// shifts the reconstructed codeword by exactly `offset`.
    CodewordOffset { offset: Vec<u64> },
    /// Adds `delta` to block `block` of share `index`.
    ShareShift { index: usize, block: usize, delta: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RssReport {
    /// Successes count detected tamperings; the floor is `1 - delta`.
    pub tamper: AttackReport,
    pub honest_trials: u64,
    pub honest_ok: u64,
    pub delta_num: u128,
    pub delta_den: u128,
}

/// Shares `trials` encodings (of `message`, or of uniform messages), checks
/// the honest round trip, applies `tamper` and counts detections.
#[allow(clippy::too_many_arguments)]
pub fn tamper_experiment(
    amd: &StrongAmdParams,
    ramp: &RampParams,
    delta: num_rational::Ratio<u128>,
    message: Option<&[u64]>,
    tamper: &Tamper,
    trials: u64,
    seed: u64,
) -> Result<RssReport> {
    check_spec(amd, ramp)?;
    let spec = amd.spec();
    let q = spec.order();
    let padded = padded_len(amd, ramp);
    let shift = match tamper {
        Tamper::CodewordOffset { offset } => {
            if offset.len() != amd.n() || offset.iter().any(|&v| v >= q) {
                return usage("tamper offset must be a codeword-length vector");
            }
            let mut padded_offset = offset.clone();
            padded_offset.resize(padded, 0);
            let zeros = vec![0; padded / ramp.block_len() * ramp.t_priv];
            ramp_share_deterministic(&padded_offset, ramp, &zeros)?
        }
        Tamper::ShareShift { index, block, delta } => {
            let blocks = padded / ramp.block_len();
            if *index == 0 || *index > ramp.n_shares || *block >= blocks || *delta >= q {
                return usage("share shift out of range");
            }
            (1..=ramp.n_shares)
                .map(|i| Share {
                    index: i,
                    values: (0..blocks).map(|b| if i == *index && b == *block { *delta } else { 0 }).collect(),
                })
                .collect()
        }
    };
    if let Some(m) = message {
        if m.len() != amd.k() {
            return usage("message does not fit the AMD parameters");
        }
    }

    let outcome = |i: u64| -> Result<(bool, bool)> {
        let mut rng = trial_rng(seed, i);
        let m: Vec<u64> = match message {
            Some(m) => m.to_vec(),
            None => (0..amd.k()).map(|_| rng.gen_range(0..q)).collect(),
        };
        let shares = robust_share_with(&m, amd, ramp, &mut rng)?;
        let honest = robust_reconstruct_raw(&shares, amd, ramp)? == Some(m.clone());
        let tampered = add_shares(&spec, &shares, &shift)?;
        let detected = robust_reconstruct_raw(&tampered, amd, ramp)?.is_none();
        Ok((honest, detected))
    };
    let (honest_ok, detected) = (0..trials)
        .into_par_iter()
        .map(outcome)
        .try_fold(|| (0u64, 0u64), |(h, d), r| r.map(|(a, b)| (h + a as u64, d + b as u64)))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;

    let bits = spec.symbol_bits();
    let dims = Dims {
        k_bits: amd.k() as u32 * bits,
        sigma_bits: amd.sigma() as u32 * bits,
        n_bits: amd.n() as u32 * bits,
    };
    let code = format!(
        "{} in ({},{},{})-ramp",
        amd.describe(),
        ramp.t_priv,
        ramp.r,
        ramp.n_shares
    );
    let floor = 1.0 - *delta.numer() as f64 / *delta.denom() as f64;
    let report = AttackReport::new("rss-tamper", code, dims, 0, trials, detected, false, floor, BoundKind::Floor, Some(seed));
    Ok(RssReport {
        tamper: report,
        honest_trials: trials,
        honest_ok,
        delta_num: *delta.numer(),
        delta_den: *delta.denom(),
    })
}
