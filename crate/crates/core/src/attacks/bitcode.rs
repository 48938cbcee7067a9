use std::sync::Arc;

use crate::codec::AmdCode;
use crate::error::{usage, AmdError, Result};
use crate::field::{FieldKind, FieldSpec};
use crate::util::check_budget;

type EncodeFn = dyn Fn(u64, u64) -> u64 + Send + Sync;
type DecodeFn = dyn Fn(u64) -> Option<u64> + Send + Sync;

/// Widest codeword the adapter handles.
pub const MAX_BITS: u32 = 32;

/// A code `{0,1}^k x {0,1}^sigma -> {0,1}^n` on bit strings packed into
/// `u64`, bit `j` being the coefficient of `X^j` when the string is read as
/// an element of GF(2^len).
#[derive(Clone)]
pub struct BitCodeAdapter {
    name: String,
    k_bits: u32,
    sigma_bits: u32,
    n_bits: u32,
    encode: Arc<EncodeFn>,
    decode: Arc<DecodeFn>,
}

impl std::fmt::Debug for BitCodeAdapter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BitCodeAdapter")
            .field("name", &self.name)
            .field("k_bits", &self.k_bits)
            .field("sigma_bits", &self.sigma_bits)
            .field("n_bits", &self.n_bits)
            .finish()
    }
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn pack(symbols: &[u64], w: u32) -> u64 {
    symbols.iter().rev().fold(0u64, |acc, &s| (acc << w) | s)
}

fn unpack(mut bits: u64, w: u32, out: &mut [u64]) {
    for slot in out.iter_mut() {
        *slot = bits & mask(w);
        bits >>= w;
    }
}

impl BitCodeAdapter {
    pub fn new(
        name: impl Into<String>,
        k_bits: u32,
        sigma_bits: u32,
        n_bits: u32,
        encode: impl Fn(u64, u64) -> u64 + Send + Sync + 'static,
        decode: impl Fn(u64) -> Option<u64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if k_bits == 0 || n_bits > MAX_BITS || k_bits > n_bits || sigma_bits > MAX_BITS {
            return usage(format!(
                "unsupported bit dimensions k={k_bits} sigma={sigma_bits} n={n_bits} (n at most {MAX_BITS})"
            ));
        }
        Ok(Self {
            name: name.into(),
            k_bits,
            sigma_bits,
            n_bits,
            encode: Arc::new(encode),
            decode: Arc::new(decode),
        })
    }

    /// Views a code over GF(2^w) as a bit code, symbols packed little-endian.
    pub fn from_code<C: AmdCode + Clone + Send + 'static>(code: C) -> Result<Self> {
        let spec = code.field();
        if spec.kind() != FieldKind::Binary {
            return usage(format!("bit adaptation needs a binary field, got {spec}"));
        }
        let w = spec.degree();
        let (k, s, n) = (code.message_len(), code.randomness_len(), code.codeword_len());
        let name = code.describe();
        let enc_code = code.clone();
        let encode = move |m: u64, r: u64| {
            let mut mv = vec![0; k];
            let mut rv = vec![0; s];
            let mut out = vec![0; n];
            unpack(m, w, &mut mv);
            unpack(r, w, &mut rv);
            enc_code.encode_into(&mv, &rv, &mut out);
            pack(&out, w)
        };
        let decode = move |c: u64| {
            let mut cv = vec![0; n];
            let mut mv = vec![0; k];
            unpack(c, w, &mut cv);
            code.decode_into(&cv, &mut mv).then(|| pack(&mv, w))
        };
        Self::new(name, k as u32 * w, s as u32 * w, n as u32 * w, encode, decode)
    }

    /// `Enc(m, r) = m || 0^pad`, ignoring `r`: every message has a single
    /// codeword. Decoding rejects nonzero padding.
    pub fn degenerate(k_bits: u32, pad_bits: u32, sigma_bits: u32) -> Result<Self> {
        let n = k_bits + pad_bits;
        let km = mask(k_bits);
        Self::new(
            format!("degenerate(k={k_bits},pad={pad_bits},sigma={sigma_bits})"),
            k_bits,
            sigma_bits,
            n,
            move |m, _| m & km,
            move |c| (c >> k_bits == 0).then_some(c & km),
        )
    }

    /// `Enc(m, r) = m || r`: injective, support `2^sigma` for every message,
    /// no tamper detection.
    pub fn plain_randomized(k_bits: u32, sigma_bits: u32) -> Result<Self> {
        let (km, sm) = (mask(k_bits), mask(sigma_bits));
        Self::new(
            format!("plain(k={k_bits},sigma={sigma_bits})"),
            k_bits,
            sigma_bits,
            k_bits + sigma_bits,
            move |m, r| (m & km) | ((r & sm) << k_bits),
            move |c| Some(c & km),
        )
    }

    /// Deterministic `Enc(m) = m || m^3` over GF(2^w).
    pub fn cube_weak(w: u32) -> Result<Self> {
        let spec = FieldSpec::binary(w)?;
        let wm = mask(w);
        let cube = move |m: u64| spec.pow_raw(m, 3);
        Self::new(
            format!("cube-weak(GF(2^{w}))"),
            w,
            0,
            2 * w,
            move |m, _| (m & wm) | (cube(m & wm) << w),
            move |c| {
                let m = c & wm;
                (c >> w == cube(m)).then_some(m)
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k_bits(&self) -> u32 {
        self.k_bits
    }

    pub fn sigma_bits(&self) -> u32 {
        self.sigma_bits
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    pub fn encode(&self, m: u64, r: u64) -> u64 {
        (self.encode)(m & mask(self.k_bits), r & mask(self.sigma_bits))
    }

    pub fn decode(&self, c: u64) -> Option<u64> {
        (self.decode)(c & mask(self.n_bits))
    }

    /// Distinct codewords of `m` with their preimage counts, sorted.
    pub fn support(&self, m: u64) -> Result<Vec<(u64, u64)>> {
        check_budget("encoding support", 1u128 << self.sigma_bits, 1 << 24)?;
        let mut words: Vec<u64> = (0..1u64 << self.sigma_bits).map(|r| self.encode(m, r)).collect();
        words.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::new();
        for c in words {
            match out.last_mut() {
                Some((last, count)) if *last == c => *count += 1,
                _ => out.push((c, 1)),
            }
        }
        Ok(out)
    }

    /// Checks `Dec(Enc(m, r)) = m` on every `(m, r)`, or on a fixed grid of
    /// samples when the space is large.
    pub fn validate(&self) -> Result<()> {
        let total_bits = self.k_bits + self.sigma_bits;
        let step = if total_bits <= 20 { 1 } else { (1u64 << (total_bits - 20)) | 1 };
        let mut i = 0u64;
        while i < (1u64 << total_bits) {
            let m = i & mask(self.k_bits);
            let r = i >> self.k_bits;
            if self.decode(self.encode(m, r)) != Some(m) {
                return Err(AmdError::Parameter(format!(
                    "{}: decode(encode({m:#x}, {r:#x})) does not return the message",
                    self.name
                )));
            }
            i += step;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{StrongAmdParams, WeakAmdParams};

    #[test]
    fn packing_is_little_endian() {
        assert_eq!(pack(&[1, 2, 3], 3), 1 | (2 << 3) | (3 << 6));
        let mut out = [0; 3];
        unpack(1 | (2 << 3) | (3 << 6), 3, &mut out);
        assert_eq!(out, [1, 2, 3]);
    }

    #[test]
    fn strong_code_as_bits() {
        let params = StrongAmdParams::new(FieldSpec::binary(3).unwrap(), 1, 1).unwrap();
        let code = BitCodeAdapter::from_code(params).unwrap();
        assert_eq!((code.k_bits(), code.sigma_bits(), code.n_bits()), (3, 3, 9));
        code.validate().unwrap();
        for m in 0..8 {
            assert_eq!(code.support(m).unwrap().len(), 8);
        }
    }

    #[test]
    fn builtin_codes_round_trip() {
        for code in [
            BitCodeAdapter::degenerate(4, 6, 8).unwrap(),
            BitCodeAdapter::plain_randomized(3, 5).unwrap(),
            BitCodeAdapter::cube_weak(4).unwrap(),
        ] {
            code.validate().unwrap();
        }
        assert_eq!(BitCodeAdapter::degenerate(4, 6, 8).unwrap().support(5).unwrap(), vec![(5, 256)]);
        assert_eq!(BitCodeAdapter::plain_randomized(3, 5).unwrap().support(1).unwrap().len(), 32);
        // tampering the redundancy of the cube code is rejected
        let cube = BitCodeAdapter::cube_weak(4).unwrap();
        assert_eq!(cube.decode(cube.encode(6, 0) ^ (1 << 4)), None);
    }

    #[test]
    fn prime_fields_rejected() {
        let params = WeakAmdParams::new(FieldSpec::prime(5).unwrap(), 1).unwrap();
        assert!(BitCodeAdapter::from_code(params).is_err());
    }

    #[test]
    fn bad_adapter_detected() {
        let broken = BitCodeAdapter::new("broken", 2, 0, 4, |m, _| m, |_| Some(0)).unwrap();
        assert!(broken.validate().is_err());
    }
}
