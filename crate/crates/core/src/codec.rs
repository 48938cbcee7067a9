//! The strong and weak AMD constructions, their closed-form error bounds
//! and the (rho, kappa) feasibility frontier.
//!
//! Strong code: `Enc(m, x) = (m, x, f(m, x_1), ..., f(m, x_sigma))` with
//! `f(m, a) = a^(k+2) + sum_i m_i a^i`. Weak code: `Enc(m) = (m, sum_j m_j^2)`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{usage, AmdError, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmdKind {
    Strong,
    Weak,
}

impl fmt::Display for AmdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmdKind::Strong => "strong",
            AmdKind::Weak => "weak",
        })
    }
}

impl std::str::FromStr for AmdKind {
    type Err = AmdError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(AmdKind::Strong),
            "weak" => Ok(AmdKind::Weak),
            other => usage(format!("unknown code kind {other:?}")),
        }
    }
}

/// A coding scheme over a finite field, viewed through raw residues.
///
/// `encode_into` must be injective in (message, randomness) for the
/// exhaustive oracles to report meaningful entropy figures, but nothing
/// here relies on it for correctness.
pub trait AmdCode: Sync {
    fn field(&self) -> FieldSpec;
    fn message_len(&self) -> usize;
    /// Zero for deterministic (weak) codes.
    fn randomness_len(&self) -> usize;
    fn codeword_len(&self) -> usize;
    fn encode_into(&self, message: &[u64], randomness: &[u64], out: &mut [u64]);
    /// Writes the decoded message and returns `true`, or returns `false`
    /// for a rejected codeword.
    fn decode_into(&self, codeword: &[u64], message: &mut [u64]) -> bool;
    fn describe(&self) -> String;
}

/// A message of k field symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Message(Vec<FieldElement>);

/// A codeword of n field symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Codeword(Vec<FieldElement>);

fn check_symbols(spec: &FieldSpec, values: &[u64]) -> Result<Vec<FieldElement>> {
    values.iter().map(|&v| spec.element(v)).collect()
}

fn common_field(symbols: &[FieldElement]) -> Result<Option<FieldSpec>> {
    let Some(first) = symbols.first() else {
        return Ok(None);
    };
    if symbols.iter().any(|s| s.spec() != first.spec()) {
        return usage("symbols drawn from different fields");
    }
    Ok(Some(first.spec()))
}

macro_rules! symbol_vector {
    ($ty:ident) => {
        impl $ty {
            pub fn new(symbols: Vec<FieldElement>) -> Result<Self> {
                common_field(&symbols)?;
                Ok(Self(symbols))
            }

            pub fn from_values(spec: &FieldSpec, values: &[u64]) -> Result<Self> {
                Ok(Self(check_symbols(spec, values)?))
            }

            pub fn symbols(&self) -> &[FieldElement] {
                &self.0
            }

            pub fn values(&self) -> Vec<u64> {
                self.0.iter().map(|e| e.value()).collect()
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Header line with the field, then the comma-separated symbols.
            pub fn to_text(&self, spec: &FieldSpec) -> String {
                format!("{}\n{}\n", spec, format_symbols(&self.0))
            }

            pub fn from_text(text: &str) -> Result<(FieldSpec, Self)> {
                let (spec, symbols) = parse_symbol_text(text)?;
                Ok((spec, Self(symbols)))
            }
        }
    };
}

symbol_vector!(Message);
symbol_vector!(Codeword);

impl Codeword {
    /// Component-wise field addition of an offset of the same length.
    pub fn add_offset(&self, offset: &Codeword) -> Result<Codeword> {
        if offset.len() != self.len() {
            return usage(format!(
                "offset length {} does not match codeword length {}",
                offset.len(),
                self.len()
            ));
        }
        let symbols = self
            .0
            .iter()
            .zip(&offset.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codeword(symbols))
    }
}

pub fn format_symbols(symbols: &[FieldElement]) -> String {
    symbols
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_symbol_text(text: &str) -> Result<(FieldSpec, Vec<FieldElement>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| AmdError::Parse("missing field header line".into()))?;
    let spec: FieldSpec = header.parse()?;
    let body = lines.next().unwrap_or("");
    if lines.next().is_some() {
        return Err(AmdError::Parse("trailing lines after symbol list".into()));
    }
    let symbols = if body.is_empty() {
        Vec::new()
    } else {
        body.split(',')
            .map(|t| spec.parse_element(t))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((spec, symbols))
}

/// Parameters (q, k, sigma) of the strong construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StrongAmdParams {
    spec: FieldSpec,
    k: usize,
    sigma: usize,
}

impl StrongAmdParams {
    pub fn new(spec: FieldSpec, k: usize, sigma: usize) -> Result<Self> {
        if k == 0 || sigma == 0 {
            return Err(AmdError::Parameter("k and sigma must be positive".into()));
        }
        if (k as u64) + 2 >= spec.order() {
            return Err(AmdError::Parameter(format!(
                "need k < q - 2, got k = {k} with q = {}",
                spec.order()
            )));
        }
        if spec.integer_image(k as u64 + 2) == 0 {
            return Err(AmdError::Parameter(format!(
                "field characteristic {} divides k + 2 = {}",
                spec.characteristic(),
                k + 2
            )));
        }
        Ok(Self { spec, k, sigma })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn n(&self) -> usize {
        self.k + 2 * self.sigma
    }
}

/// `a^(k+2) + sum_{i=1..k} m_i a^i`, evaluated by Horner's rule.
pub(crate) fn eval_f_raw(spec: &FieldSpec, message: &[u64], a: u64) -> u64 {
    let mut acc = a;
    for &m in message.iter().rev() {
        acc = spec.add_raw(spec.mul_raw(acc, a), m);
    }
    spec.mul_raw(acc, a)
}

fn check_message(spec: &FieldSpec, m: &Message, k: usize) -> Result<()> {
    if m.len() != k {
        return usage(format!("message has {} symbols, expected {k}", m.len()));
    }
    if m.symbols().iter().any(|s| s.spec() != *spec) {
        return usage(format!("message symbols are not in {spec}"));
    }
    Ok(())
}

fn check_codeword(spec: &FieldSpec, c: &Codeword, n: usize) -> Result<()> {
    if c.len() != n {
        return usage(format!("codeword has {} symbols, expected {n}", c.len()));
    }
    if c.symbols().iter().any(|s| s.spec() != *spec) {
        return usage(format!("codeword symbols are not in {spec}"));
    }
    Ok(())
}

pub fn eval_f(m: &Message, a: FieldElement, params: &StrongAmdParams) -> Result<FieldElement> {
    check_message(&params.spec, m, params.k)?;
    if a.spec() != params.spec {
        return usage("evaluation point is not in the code's field");
    }
    params.spec.element(eval_f_raw(&params.spec, &m.values(), a.value()))
}

pub fn strong_encode(m: &Message, x: &[FieldElement], params: &StrongAmdParams) -> Result<Codeword> {
    check_message(&params.spec, m, params.k)?;
    if x.len() != params.sigma {
        return usage(format!(
            "randomness has {} symbols, expected {}",
            x.len(),
            params.sigma
        ));
    }
    if x.iter().any(|s| s.spec() != params.spec) {
        return usage("randomness symbols are not in the code's field");
    }
    let xs: Vec<u64> = x.iter().map(|e| e.value()).collect();
    let mut out = vec![0; params.n()];
    params.encode_into(&m.values(), &xs, &mut out);
    Codeword::from_values(&params.spec, &out)
}

pub fn strong_decode(c: &Codeword, params: &StrongAmdParams) -> Result<Option<Message>> {
    check_codeword(&params.spec, c, params.n())?;
    let mut m = vec![0; params.k];
    if params.decode_into(&c.values(), &mut m) {
        Ok(Some(Message::from_values(&params.spec, &m)?))
    } else {
        Ok(None)
    }
}

impl AmdCode for StrongAmdParams {
    fn field(&self) -> FieldSpec {
        self.spec
    }
    fn message_len(&self) -> usize {
        self.k
    }
    fn randomness_len(&self) -> usize {
        self.sigma
    }
    fn codeword_len(&self) -> usize {
        self.n()
    }

    fn encode_into(&self, message: &[u64], randomness: &[u64], out: &mut [u64]) {
        let (k, s) = (self.k, self.sigma);
        out[..k].copy_from_slice(message);
        out[k..k + s].copy_from_slice(randomness);
        for (j, &x) in randomness.iter().enumerate() {
            out[k + s + j] = eval_f_raw(&self.spec, message, x);
        }
    }

    fn decode_into(&self, codeword: &[u64], message: &mut [u64]) -> bool {
        let (k, s) = (self.k, self.sigma);
        let m = &codeword[..k];
        let ok = (0..s).all(|j| eval_f_raw(&self.spec, m, codeword[k + j]) == codeword[k + s + j]);
        if ok {
            message.copy_from_slice(m);
        }
        ok
    }

    fn describe(&self) -> String {
        format!("strong {} k={} sigma={}", self.spec, self.k, self.sigma)
    }
}

/// Parameters (q, k) of the weak construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeakAmdParams {
    spec: FieldSpec,
    k: usize,
}

impl WeakAmdParams {
    pub fn new(spec: FieldSpec, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(AmdError::Parameter("k must be positive".into()));
        }
        if spec.characteristic() <= 2 {
            return Err(AmdError::Parameter(format!(
                "weak construction needs characteristic > 2, {spec} has characteristic {}",
                spec.characteristic()
            )));
        }
        Ok(Self { spec, k })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn n(&self) -> usize {
        self.k + 1
    }
}

pub(crate) fn eval_g_raw(spec: &FieldSpec, message: &[u64]) -> u64 {
    message
        .iter()
        .fold(0, |acc, &m| spec.add_raw(acc, spec.mul_raw(m, m)))
}

pub fn weak_encode(m: &Message, params: &WeakAmdParams) -> Result<Codeword> {
    check_message(&params.spec, m, params.k)?;
    let mut out = vec![0; params.n()];
    params.encode_into(&m.values(), &[], &mut out);
    Codeword::from_values(&params.spec, &out)
}

pub fn weak_decode(c: &Codeword, params: &WeakAmdParams) -> Result<Option<Message>> {
    check_codeword(&params.spec, c, params.n())?;
    let mut m = vec![0; params.k];
    if params.decode_into(&c.values(), &mut m) {
        Ok(Some(Message::from_values(&params.spec, &m)?))
    } else {
        Ok(None)
    }
}

impl AmdCode for WeakAmdParams {
    fn field(&self) -> FieldSpec {
        self.spec
    }
    fn message_len(&self) -> usize {
        self.k
    }
    fn randomness_len(&self) -> usize {
        0
    }
    fn codeword_len(&self) -> usize {
        self.n()
    }

    fn encode_into(&self, message: &[u64], _randomness: &[u64], out: &mut [u64]) {
        out[..self.k].copy_from_slice(message);
        out[self.k] = eval_g_raw(&self.spec, message);
    }

    fn decode_into(&self, codeword: &[u64], message: &mut [u64]) -> bool {
        let m = &codeword[..self.k];
        let ok = eval_g_raw(&self.spec, m) == codeword[self.k];
        if ok {
            message.copy_from_slice(m);
        }
        ok
    }

    fn describe(&self) -> String {
        format!("weak {} k={}", self.spec, self.k)
    }
}

/// `q^(rho (k + 2 sigma) - sigma) (k+1)^sigma`, unclamped.
pub fn strong_delta_bound(params: &StrongAmdParams, rho: f64) -> f64 {
    let q = params.spec.order() as f64;
    let exponent = rho * params.n() as f64 - params.sigma as f64;
    q.powf(exponent) * ((params.k + 1) as f64).powi(params.sigma as i32)
}

/// The leakage-free strong bound `((k+1)/q)^sigma` as an exact fraction.
pub fn strong_delta_bound_exact(params: &StrongAmdParams) -> Ratio<u128> {
    let num = (params.k as u128 + 1).pow(params.sigma as u32);
    let den = (params.spec.order() as u128).pow(params.sigma as u32);
    Ratio::new(num, den)
}

/// `q^(rho (k+1) - 1)`, unclamped.
pub fn weak_delta_bound(params: &WeakAmdParams, rho: f64) -> f64 {
    let q = params.spec.order() as f64;
    q.powf(rho * params.n() as f64 - 1.0)
}

pub fn weak_delta_bound_exact(params: &WeakAmdParams) -> Ratio<u128> {
    Ratio::new(1, params.spec.order() as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

// Slack for boundary points such as 2 * 0.35 + 0.3, which must count as
// sitting on the frontier rather than a rounding error below it.
const FRONTIER_EPS: f64 = 1e-12;

/// Whether leakage-resilient codes of the given kind exist at leakage rate
/// `rho` and code rate `kappa`: strong iff `2 rho + kappa < 1`, weak iff
/// `rho + kappa < 1` and `rho < kappa`.
pub fn feasible(kind: AmdKind, rho: f64, kappa: f64) -> Result<Feasibility> {
    let open_unit = |v: f64| v > 0.0 && v < 1.0;
    if !open_unit(rho) || !open_unit(kappa) {
        return usage(format!(
            "rho and kappa must lie in (0, 1), got rho = {rho}, kappa = {kappa}"
        ));
    }
    let ok = match kind {
        AmdKind::Strong => 2.0 * rho + kappa < 1.0 - FRONTIER_EPS,
        AmdKind::Weak => rho + kappa < 1.0 - FRONTIER_EPS && rho < kappa - FRONTIER_EPS,
    };
    Ok(if ok {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn msg(spec: &FieldSpec, v: &[u64]) -> Message {
        Message::from_values(spec, v).unwrap()
    }

    fn cw(spec: &FieldSpec, v: &[u64]) -> Codeword {
        Codeword::from_values(spec, v).unwrap()
    }

    /// Direct evaluation of the defining sum with naive powers.
    fn f_naive(spec: &FieldSpec, m: &[u64], a: u64) -> u64 {
        let mut acc = spec.pow_raw(a, m.len() as u64 + 2);
        for (i, &mi) in m.iter().enumerate() {
            acc = spec.add_raw(acc, spec.mul_raw(mi, spec.pow_raw(a, i as u64 + 1)));
        }
        acc
    }

    #[test]
    fn eval_f_examples() {
        let f5 = f(5);
        let p = StrongAmdParams::new(f5, 1, 1).unwrap();
        let a = f5.element(3).unwrap();
        assert_eq!(eval_f(&msg(&f5, &[2]), a, &p).unwrap().value(), 3);
        assert_eq!(eval_f(&msg(&f5, &[4]), f5.zero(), &p).unwrap().value(), 0);
        let f7 = f(7);
        let p = StrongAmdParams::new(f7, 2, 1).unwrap();
        let a = f7.element(2).unwrap();
        assert_eq!(eval_f(&msg(&f7, &[1, 1]), a, &p).unwrap().value(), 1);
    }

    #[test]
    fn horner_matches_naive_powers() {
        for spec in [f(7), f(11), FieldSpec::binary(4).unwrap()] {
            for m0 in 0..spec.order() {
                for m1 in 0..spec.order() {
                    for a in 0..spec.order() {
                        let m = [m0, m1];
                        assert_eq!(eval_f_raw(&spec, &m, a), f_naive(&spec, &m, a));
                    }
                }
            }
        }
    }

    #[test]
    fn strong_encode_decode_examples() {
        let f5 = f(5);
        let p = StrongAmdParams::new(f5, 1, 1).unwrap();
        let c = strong_encode(&msg(&f5, &[2]), &[f5.element(3).unwrap()], &p).unwrap();
        assert_eq!(c.values(), vec![2, 3, 3]);
        let c0 = strong_encode(&msg(&f5, &[0]), &[f5.zero()], &p).unwrap();
        assert_eq!(c0.values(), vec![0, 0, 0]);
        assert_eq!(strong_decode(&cw(&f5, &[2, 3, 3]), &p).unwrap(), Some(msg(&f5, &[2])));
        assert_eq!(strong_decode(&cw(&f5, &[2, 3, 4]), &p).unwrap(), None);
        assert_eq!(strong_decode(&cw(&f5, &[0, 0, 1]), &p).unwrap(), None);
        assert!(matches!(
            strong_decode(&cw(&f5, &[0, 0]), &p),
            Err(AmdError::Usage(_))
        ));
        assert!(strong_encode(&msg(&f5, &[1, 2]), &[f5.zero()], &p).is_err());
        assert!(strong_encode(&msg(&f5, &[1]), &[], &p).is_err());
    }

    #[test]
    fn weak_encode_decode_examples() {
        let f5 = f(5);
        let p = WeakAmdParams::new(f5, 2).unwrap();
        assert_eq!(weak_encode(&msg(&f5, &[1, 2]), &p).unwrap().values(), vec![1, 2, 0]);
        let f3 = f(3);
        let p3 = WeakAmdParams::new(f3, 1).unwrap();
        assert_eq!(weak_encode(&msg(&f3, &[0]), &p3).unwrap().values(), vec![0, 0]);
        let f7 = f(7);
        let p7 = WeakAmdParams::new(f7, 3).unwrap();
        assert_eq!(
            weak_encode(&msg(&f7, &[1, 2, 3]), &p7).unwrap().values(),
            vec![1, 2, 3, 0]
        );
        assert_eq!(weak_decode(&cw(&f5, &[1, 2, 0]), &p).unwrap(), Some(msg(&f5, &[1, 2])));
        assert_eq!(weak_decode(&cw(&f5, &[1, 2, 1]), &p).unwrap(), None);
        assert_eq!(weak_decode(&cw(&f3, &[0, 0]), &p3).unwrap(), Some(msg(&f3, &[0])));
        assert!(weak_decode(&cw(&f5, &[1, 2]), &p).is_err());
    }

    #[test]
    fn parameter_preconditions() {
        // k < q - 2
        assert!(StrongAmdParams::new(f(5), 3, 1).is_err());
        assert!(StrongAmdParams::new(f(5), 2, 1).is_ok());
        // characteristic 2 divides k + 2 = 4
        let gf4 = FieldSpec::binary(2).unwrap();
        assert!(matches!(
            StrongAmdParams::new(gf4, 2, 1),
            Err(AmdError::Parameter(_))
        ));
        // k = 1 over a binary field is allowed
        assert!(StrongAmdParams::new(FieldSpec::binary(3).unwrap(), 1, 1).is_ok());
        // characteristic 3 divides k + 2 = 3
        assert!(StrongAmdParams::new(f(3), 1, 1).is_err());
        assert!(StrongAmdParams::new(f(7), 0, 1).is_err());
        assert!(WeakAmdParams::new(gf4, 1).is_err());
        assert!(WeakAmdParams::new(f(2), 1).is_err());
        assert!(WeakAmdParams::new(f(3), 1).is_ok());
    }

    fn all_vectors(q: u64, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn round_trip_and_injectivity_exhaustive() {
        use std::collections::HashSet;
        for q in [5u64, 7] {
            let spec = f(q);
            for k in 1..=2 {
                for sigma in 1..=2 {
                    let p = StrongAmdParams::new(spec, k, sigma).unwrap();
                    let mut seen = HashSet::new();
                    let mut out = vec![0; p.n()];
                    let mut dec = vec![0; k];
                    for m in all_vectors(q, k) {
                        for x in all_vectors(q, sigma) {
                            p.encode_into(&m, &x, &mut out);
                            assert!(p.decode_into(&out, &mut dec));
                            assert_eq!(dec, m);
                            assert!(seen.insert(out.clone()));
                        }
                    }
                }
                let w = WeakAmdParams::new(spec, k).unwrap();
                let mut seen = HashSet::new();
                for m in all_vectors(q, k) {
                    let c = weak_encode(&msg(&spec, &m), &w).unwrap();
                    assert_eq!(weak_decode(&c, &w).unwrap().unwrap().values(), m);
                    assert!(seen.insert(c));
                }
            }
        }
    }

    #[test]
    fn additive_tamper_trichotomy_exhaustive() {
        // q = 5, k = 1, sigma = 1: every codeword against every offset
        let spec = f(5);
        let p = StrongAmdParams::new(spec, 1, 1).unwrap();
        let mut c = vec![0; 3];
        let mut dec = vec![0; 1];
        for m in 0..5 {
            for x in 0..5 {
                p.encode_into(&[m], &[x], &mut c);
                for off in all_vectors(5, 3) {
                    let t: Vec<u64> = c.iter().zip(&off).map(|(a, b)| spec.add_raw(*a, *b)).collect();
                    if p.decode_into(&t, &mut dec) {
                        let shifted = spec.add_raw(m, off[0]);
                        assert_eq!(dec[0], shifted);
                    }
                    if off.iter().all(|&o| o == 0) {
                        assert!(p.decode_into(&t, &mut dec));
                        assert_eq!(dec[0], m);
                    }
                }
            }
        }
        let w = WeakAmdParams::new(spec, 2).unwrap();
        let mut c = vec![0; 3];
        let mut dec = vec![0; 2];
        for m in all_vectors(5, 2) {
            w.encode_into(&m, &[], &mut c);
            for off in all_vectors(5, 3) {
                let t: Vec<u64> = c.iter().zip(&off).map(|(a, b)| spec.add_raw(*a, *b)).collect();
                if w.decode_into(&t, &mut dec) {
                    assert_eq!(dec, vec![spec.add_raw(m[0], off[0]), spec.add_raw(m[1], off[1])]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn zero_offset_never_changes_decode(m in 0u64..11, x0 in 0u64..11, x1 in 0u64..11, k2 in 0u64..11) {
            let spec = f(11);
            let p = StrongAmdParams::new(spec, 2, 2).unwrap();
            let mut out = vec![0; p.n()];
            p.encode_into(&[m, k2], &[x0, x1], &mut out);
            let c = Codeword::from_values(&spec, &out).unwrap();
            let zero = Codeword::from_values(&spec, &vec![0; p.n()]).unwrap();
            let d = strong_decode(&c.add_offset(&zero).unwrap(), &p).unwrap();
            prop_assert_eq!(d.map(|m| m.values()), Some(vec![m, k2]));
        }

        #[test]
        fn text_form_round_trips(values in proptest::collection::vec(0u64..8, 0..12)) {
            let spec = FieldSpec::binary(3).unwrap();
            let c = Codeword::from_values(&spec, &values).unwrap();
            let (spec2, back) = Codeword::from_text(&c.to_text(&spec)).unwrap();
            prop_assert_eq!(spec2, spec);
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn text_format_layout() {
        let spec = f(5);
        let c = cw(&spec, &[2, 3, 3]);
        assert_eq!(c.to_text(&spec), "GF(5)\n2,3,3\n");
        assert!(Codeword::from_text("GF(5)\n2,7\n").is_err());
        assert!(Codeword::from_text("").is_err());
    }

    #[test]
    fn strong_bound_examples() {
        let p = StrongAmdParams::new(f(5), 1, 1).unwrap();
        assert!((strong_delta_bound(&p, 0.0) - 0.4).abs() < 1e-12);
        assert_eq!(strong_delta_bound_exact(&p), Ratio::new(2, 5));
        let p = StrongAmdParams::new(f(7), 1, 2).unwrap();
        assert!((strong_delta_bound(&p, 0.0) - 4.0 / 49.0).abs() < 1e-12);
        let p = StrongAmdParams::new(f(5), 1, 1).unwrap();
        assert!((strong_delta_bound(&p, 1.0 / 3.0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn weak_bound_examples() {
        let p = WeakAmdParams::new(f(5), 2).unwrap();
        assert!((weak_delta_bound(&p, 0.0) - 0.2).abs() < 1e-12);
        assert!((weak_delta_bound(&p, 1.0 / 3.0) - 1.0).abs() < 1e-9);
        let p = WeakAmdParams::new(f(7), 1).unwrap();
        assert!((weak_delta_bound(&p, 0.0) - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(weak_delta_bound_exact(&p), Ratio::new(1, 7));
    }

    #[test]
    fn feasibility_examples() {
        use Feasibility::*;
        assert_eq!(feasible(AmdKind::Strong, 0.3, 0.3).unwrap(), Feasible);
        assert_eq!(feasible(AmdKind::Strong, 0.35, 0.3).unwrap(), Infeasible);
        assert_eq!(feasible(AmdKind::Weak, 0.4, 0.3).unwrap(), Infeasible);
        assert_eq!(feasible(AmdKind::Weak, 0.2, 0.3).unwrap(), Feasible);
        assert_eq!(feasible(AmdKind::Weak, 0.5, 0.5).unwrap(), Infeasible);
        assert!(feasible(AmdKind::Strong, 0.0, 0.5).is_err());
        assert!(feasible(AmdKind::Weak, 0.5, 1.0).is_err());
    }
}
