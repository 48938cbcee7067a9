//! Arithmetic over prime fields GF(p) and binary extension fields GF(2^w).
//!
//! A [`FieldSpec`] is a small `Copy` value describing the field; a
//! [`FieldElement`] carries its canonical residue (or bitmask) together with
//! the spec it belongs to. Hot loops elsewhere in the crate work on raw `u64`
//! residues through the `FieldSpec` methods and only wrap results in
//! `FieldElement` at API boundaries.
//!
//! Element text form is the decimal residue for prime fields and a `0x`
//! hexadecimal bitmask for binary fields. Field headers read `GF(5)` or
//! `GF(2^3;0xb)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{usage, AmdError, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 32;

/// Lexicographically least irreducible polynomial over GF(2) of each degree
/// 1..=32, as bitmasks including the leading term.
pub const IRREDUCIBLE_POLYS: [u64; 32] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021,
    0x100001b, 0x2000009, 0x400001b, 0x8000027, 0x10000003, 0x20000005, 0x40000003, 0x80000009,
    0x10000008d,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Binary,
}

/// Description of a finite field: either GF(p) or GF(2^w) modulo a fixed
/// irreducible polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    // p for prime fields, the reduction polynomial for binary fields
    modulus: u64,
    degree: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Remainder of carry-less polynomial division over GF(2).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(mut a: u64, mut b: u64, modulus: u64, degree: u32) -> u64 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> degree) & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// Ben-Or irreducibility test: `p` of degree d is irreducible iff
/// gcd(p, x^(2^i) - x) = 1 for every i in 1..=d/2.
pub fn is_irreducible_gf2(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let d = poly_degree(p);
    if d == 1 {
        return true;
    }
    let x = 0b10u64;
    let mut power = x;
    for _ in 1..=d / 2 {
        power = poly_mulmod(power, power, p, d);
        if poly_gcd(p, power ^ x) != 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// GF(p). `p` must be prime and at most [`MAX_ORDER`].
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_ORDER {
            return Err(AmdError::Parameter(format!(
                "field order {p} exceeds 2^32"
            )));
        }
        if !is_prime(p) {
            return Err(AmdError::Parameter(format!("{p} is not prime")));
        }
        Ok(Self {
            kind: FieldKind::Prime,
            modulus: p,
            degree: 1,
        })
    }

    /// GF(2^w) with the shipped irreducible polynomial for degree `w`.
    pub fn binary(w: u32) -> Result<Self> {
        if !(1..=32).contains(&w) {
            return Err(AmdError::Parameter(format!(
                "binary field degree {w} outside 1..=32"
            )));
        }
        Ok(Self {
            kind: FieldKind::Binary,
            modulus: IRREDUCIBLE_POLYS[(w - 1) as usize],
            degree: w,
        })
    }

    /// GF(2^w) modulo a caller-chosen polynomial, which must be irreducible
    /// of degree exactly `w`.
    pub fn binary_with_poly(w: u32, poly: u64) -> Result<Self> {
        if !(1..=32).contains(&w) {
            return Err(AmdError::Parameter(format!(
                "binary field degree {w} outside 1..=32"
            )));
        }
        if poly == 0 || poly_degree(poly) != w {
            return Err(AmdError::Parameter(format!(
                "polynomial {poly:#x} does not have degree {w}"
            )));
        }
        if !is_irreducible_gf2(poly) {
            return Err(AmdError::Parameter(format!(
                "polynomial {poly:#x} is reducible over GF(2)"
            )));
        }
        Ok(Self {
            kind: FieldKind::Binary,
            modulus: poly,
            degree: w,
        })
    }

    /// Prime field for a prime `q`, binary field for a power of two.
    pub fn from_order(q: u64) -> Result<Self> {
        if q >= 2 && q.is_power_of_two() {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Field order q.
    pub fn order(&self) -> u64 {
        match self.kind {
            FieldKind::Prime => self.modulus,
            FieldKind::Binary => 1u64 << self.degree,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Prime => self.modulus,
            FieldKind::Binary => 2,
        }
    }

    /// Extension degree (1 for prime fields).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The prime p, or the reduction polynomial for binary fields.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Bits needed to store one symbol.
    pub fn symbol_bits(&self) -> u32 {
        match self.kind {
            FieldKind::Prime => 64 - (self.modulus - 1).leading_zeros(),
            FieldKind::Binary => self.degree,
        }
    }

    pub fn log2_order(&self) -> f64 {
        (self.order() as f64).log2()
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            FieldKind::Prime => {
                let s = a + b;
                if s >= self.modulus {
                    s - self.modulus
                } else {
                    s
                }
            }
            FieldKind::Binary => a ^ b,
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        match self.kind {
            FieldKind::Prime => {
                if a == 0 {
                    0
                } else {
                    self.modulus - a
                }
            }
            FieldKind::Binary => a,
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            FieldKind::Prime => ((a as u128 * b as u128) % self.modulus as u128) as u64,
            FieldKind::Binary => poly_mulmod(a, b, self.modulus, self.degree),
        }
    }

    pub fn pow_raw(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(AmdError::Domain("zero has no multiplicative inverse".into()));
        }
        Ok(match self.kind {
            FieldKind::Prime => {
                let (mut r0, mut r1) = (self.modulus as i128, a as i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let quot = r0 / r1;
                    (r0, r1) = (r1, r0 - quot * r1);
                    (t0, t1) = (t1, t0 - quot * t1);
                }
                t0.rem_euclid(self.modulus as i128) as u64
            }
            FieldKind::Binary => self.pow_raw(a, self.order() - 2),
        })
    }

    /// Reduce an integer into the field: `n mod p` for prime fields, the
    /// bitmask truncated to `w` bits for binary fields.
    pub fn from_integer(&self, n: u64) -> u64 {
        match self.kind {
            FieldKind::Prime => n % self.modulus,
            FieldKind::Binary => n & (self.order() - 1),
        }
    }

    /// The image of the integer `n` under the ring map Z -> F.
    pub fn integer_image(&self, n: u64) -> u64 {
        match self.kind {
            FieldKind::Prime => n % self.modulus,
            FieldKind::Binary => n & 1,
        }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.order() {
            return usage(format!("value {value} out of range for {self}"));
        }
        Ok(FieldElement { value, spec: *self })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            spec: *self,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            spec: *self,
        }
    }

    /// All q elements in canonical residue order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let spec = *self;
        (0..self.order()).map(move |value| FieldElement { value, spec })
    }

    pub fn format_value(&self, value: u64) -> String {
        match self.kind {
            FieldKind::Prime => value.to_string(),
            FieldKind::Binary => format!("{value:#x}"),
        }
    }

    pub fn parse_value(&self, text: &str) -> Result<u64> {
        let t = text.trim();
        let parsed = match self.kind {
            FieldKind::Prime => t.parse::<u64>().ok(),
            FieldKind::Binary => {
                let hex = t
                    .strip_prefix("0x")
                    .or_else(|| t.strip_prefix("0X"))
                    .unwrap_or(t);
                u64::from_str_radix(hex, 16).ok()
            }
        };
        match parsed {
            Some(v) if v < self.order() => Ok(v),
            Some(v) => Err(AmdError::Parse(format!("{v} out of range for {self}"))),
            None => Err(AmdError::Parse(format!("cannot parse {t:?} as an element of {self}"))),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let value = self.parse_value(text)?;
        Ok(FieldElement { value, spec: *self })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime => write!(f, "GF({})", self.modulus),
            FieldKind::Binary => write!(f, "GF(2^{};{:#x})", self.degree, self.modulus),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = AmdError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || AmdError::Parse(format!("malformed field header {s:?}"));
        let inner = s
            .trim()
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        if let Some(rest) = inner.strip_prefix("2^") {
            let (deg, poly) = match rest.split_once(';') {
                Some((d, p)) => (d, Some(p)),
                None => (rest, None),
            };
            let w: u32 = deg.trim().parse().map_err(|_| bad())?;
            match poly {
                Some(p) => {
                    let p = p.trim();
                    let hex = p.strip_prefix("0x").unwrap_or(p);
                    let poly = u64::from_str_radix(hex, 16).map_err(|_| bad())?;
                    FieldSpec::binary_with_poly(w, poly)
                }
                None => FieldSpec::binary(w),
            }
        } else {
            let p: u64 = inner.trim().parse().map_err(|_| bad())?;
            FieldSpec::prime(p)
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of a specific finite field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.spec != other.spec {
            return usage(format!(
                "cannot combine elements of {} and {}",
                self.spec, other.spec
            ));
        }
        Ok(())
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(&rhs)?;
        Ok(self.with(self.spec.add_raw(self.value, rhs.value)))
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(&rhs)?;
        Ok(self.with(self.spec.sub_raw(self.value, rhs.value)))
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(&rhs)?;
        Ok(self.with(self.spec.mul_raw(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(self.with(self.spec.inv_raw(self.value)?))
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        self.with(self.spec.pow_raw(self.value, exp))
    }

    fn with(&self, value: u64) -> FieldElement {
        FieldElement {
            value,
            spec: self.spec,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format_value(self.value))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// The operator impls panic on mismatched fields; use the `checked_*`
// methods or the free functions when the fields are not known to agree.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.spec.neg_raw(self.value))
    }
}

pub fn add(a: FieldElement, b: FieldElement) -> Result<FieldElement> {
    a.checked_add(b)
}

pub fn mul(a: FieldElement, b: FieldElement) -> Result<FieldElement> {
    a.checked_mul(b)
}

pub fn inv(a: FieldElement) -> Result<FieldElement> {
    a.inv()
}

pub fn enumerate(spec: &FieldSpec) -> Vec<FieldElement> {
    spec.elements().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &FieldSpec, v: u64) -> FieldElement {
        spec.element(v).unwrap()
    }

    /// Schoolbook product of two GF(2) polynomials followed by long
    /// division, independent of the shift-and-reduce multiplier.
    fn long_division_product(a: u64, b: u64, modulus: u64) -> u64 {
        let mut prod: u128 = 0;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u128) << i;
            }
        }
        let dm = 127 - (modulus as u128).leading_zeros();
        while prod != 0 && 127 - prod.leading_zeros() >= dm {
            let shift = 127 - prod.leading_zeros() - dm;
            prod ^= (modulus as u128) << shift;
        }
        prod as u64
    }

    #[test]
    fn prime_add_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(add(el(&f5, 3), el(&f5, 4)).unwrap().value(), 2);
        for a in f5.elements() {
            assert_eq!(a + f5.zero(), a);
        }
    }

    #[test]
    fn binary_add_is_xor() {
        let f8 = FieldSpec::binary(3).unwrap();
        assert_eq!((el(&f8, 0b101) + el(&f8, 0b011)).value(), 0b110);
    }

    #[test]
    fn mul_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(mul(el(&f5, 2), el(&f5, 3)).unwrap().value(), 1);
        let f8 = FieldSpec::binary(3).unwrap();
        assert_eq!(f8.modulus(), 0b1011);
        // x^2 * x = x^3 = x + 1 modulo x^3 + x + 1
        let prod = mul(el(&f8, 0b100), el(&f8, 0b010)).unwrap().value();
        assert_eq!(prod, long_division_product(0b100, 0b010, 0b1011));
        assert_eq!(prod, 0b011);
        for a in f8.elements() {
            assert_eq!(a * f8.one(), a);
        }
    }

    #[test]
    fn binary_mul_matches_long_division() {
        for w in [1u32, 2, 3, 4, 5, 8] {
            let f = FieldSpec::binary(w).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    assert_eq!(
                        f.mul_raw(a, b),
                        long_division_product(a, b, f.modulus()),
                        "w={w} a={a} b={b}"
                    );
                }
            }
        }
        let f = FieldSpec::binary(32).unwrap();
        for (a, b) in [(0xdead_beef, 0x1234_5678), (0xffff_ffff, 0xffff_ffff), (3, 1 << 31)] {
            assert_eq!(f.mul_raw(a, b), long_division_product(a, b, f.modulus()));
        }
    }

    #[test]
    fn inverse_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(inv(el(&f5, 2)).unwrap().value(), 3);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(inv(el(&f7, 3)).unwrap().value(), 5);
        let f8 = FieldSpec::binary(3).unwrap();
        assert_eq!(inv(f8.one()).unwrap().value(), 1);
        assert!(matches!(inv(f8.zero()), Err(AmdError::Domain(_))));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(add(f5.one(), f7.one()), Err(AmdError::Usage(_))));
        assert!(matches!(mul(f5.one(), f7.one()), Err(AmdError::Usage(_))));
        let b4 = FieldSpec::binary(2).unwrap();
        assert!(add(b4.one(), FieldSpec::prime(2).unwrap().one()).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let vals: Vec<u64> = enumerate(&f3).iter().map(|e| e.value()).collect();
        assert_eq!(vals, vec![0, 1, 2]);
        let f4 = FieldSpec::binary(2).unwrap();
        let vals: Vec<u64> = enumerate(&f4).iter().map(|e| e.value()).collect();
        assert_eq!(vals, vec![0b00, 0b01, 0b10, 0b11]);
        for spec in [f3, f4, FieldSpec::prime(251).unwrap()] {
            let all = enumerate(&spec);
            assert_eq!(all.len() as u64, spec.order());
            assert!(all.iter().enumerate().all(|(i, e)| e.value() == i as u64));
        }
    }

    fn small_fields() -> Vec<FieldSpec> {
        let mut v: Vec<FieldSpec> = [2u64, 3, 5, 7, 11, 13]
            .iter()
            .map(|&p| FieldSpec::prime(p).unwrap())
            .collect();
        v.extend((1..=4).map(|w| FieldSpec::binary(w).unwrap()));
        v
    }

    #[test]
    fn field_axioms_exhaustive_up_to_16() {
        for f in small_fields() {
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add_raw(a, f.neg_raw(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul_raw(a, f.inv_raw(a).unwrap()), 1, "{f} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.add_raw(a, b), f.add_raw(b, a));
                    assert_eq!(f.mul_raw(a, b), f.mul_raw(b, a));
                    for c in 0..q {
                        assert_eq!(
                            f.add_raw(f.add_raw(a, b), c),
                            f.add_raw(a, f.add_raw(b, c))
                        );
                        assert_eq!(
                            f.mul_raw(f.mul_raw(a, b), c),
                            f.mul_raw(a, f.mul_raw(b, c))
                        );
                        assert_eq!(
                            f.mul_raw(a, f.add_raw(b, c)),
                            f.add_raw(f.mul_raw(a, b), f.mul_raw(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_little_theorem_up_to_256() {
        let mut fields: Vec<FieldSpec> = (1..=8).map(|w| FieldSpec::binary(w).unwrap()).collect();
        fields.extend(
            (2..=256u64)
                .filter(|&p| is_prime(p))
                .map(|p| FieldSpec::prime(p).unwrap()),
        );
        for f in fields {
            for a in 1..f.order() {
                assert_eq!(f.pow_raw(a, f.order() - 1), 1, "{f} a={a}");
            }
        }
    }

    #[test]
    fn irreducible_table_is_lexicographically_least() {
        for w in 1..=32u32 {
            let shipped = IRREDUCIBLE_POLYS[(w - 1) as usize];
            assert_eq!(poly_degree(shipped), w);
            assert!(is_irreducible_gf2(shipped));
            let first = ((1u64 << w)..shipped).find(|&p| is_irreducible_gf2(p));
            assert_eq!(first, None, "degree {w}");
        }
    }

    #[test]
    fn constructor_checks() {
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(4_294_967_291).is_ok());
        assert!(FieldSpec::binary(0).is_err());
        assert!(FieldSpec::binary(33).is_err());
        // x^2 + 1 = (x + 1)^2
        assert!(FieldSpec::binary_with_poly(2, 0b101).is_err());
        assert!(FieldSpec::binary_with_poly(3, 0b1101).is_ok());
        assert!(FieldSpec::binary_with_poly(3, 0b111).is_err());
    }

    #[test]
    fn text_forms() {
        let f8 = FieldSpec::binary(3).unwrap();
        assert_eq!(f8.to_string(), "GF(2^3;0xb)");
        assert_eq!(el(&f8, 6).to_string(), "0x6");
        assert_eq!(f8.parse_element("0x6").unwrap().value(), 6);
        assert!(f8.parse_value("0x8").is_err());
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(el(&f5, 4).to_string(), "4");
        assert_eq!("GF(5)".parse::<FieldSpec>().unwrap(), f5);
        assert_eq!("GF(2^3)".parse::<FieldSpec>().unwrap(), f8);
        assert_eq!("GF(2^3;0xb)".parse::<FieldSpec>().unwrap(), f8);
        assert!("GF(6)".parse::<FieldSpec>().is_err());
        assert!("F5".parse::<FieldSpec>().is_err());
    }
}
