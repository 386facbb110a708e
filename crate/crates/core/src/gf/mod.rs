//! Finite-field arithmetic over GF(p) (p < 2^64) and GF(2^m) (m <= 127).
//!
//! Elements carry their [`FieldSpec`] so that mixing fields is caught at the
//! operation site. Arithmetic is plain and variable-time: this crate is a
//! simulator and MUST NOT be used to protect real data.

pub mod poly2;
mod table;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;
use thiserror::Error;

/// Largest supported binary extension degree.
pub const MAX_BINARY_DEGREE: u32 = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("unsupported field: p = {p}, m = {m}")]
    Unsupported { p: u64, m: u32 },
    #[error("reduction polynomial {0:#x} is not irreducible of the requested degree")]
    Reducible(u128),
    #[error("operands belong to different fields ({0} vs {1})")]
    SpecMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value:#x} is not canonical in {spec}")]
    NonCanonical { spec: FieldSpec, value: u128 },
    #[error("expected {expected} bytes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid hex: {0}")]
    BadHex(String),
}

/// Field parameters. For binary extension fields `modulus` holds the
/// reduction polynomial including the leading term; for prime fields it is 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    modulus: u128,
}

impl FieldSpec {
    /// GF(p) for a prime `p < 2^64`.
    pub fn prime(p: u64) -> Result<Self, GfError> {
        if !is_prime_u64(p) {
            return Err(GfError::NotPrime(p));
        }
        Ok(Self {
            p,
            m: 1,
            modulus: 0,
        })
    }

    /// GF(2^m) using the built-in reduction polynomial for degree `m`.
    pub fn binary(m: u32) -> Result<Self, GfError> {
        match m {
            1 => Self::prime(2),
            2..=MAX_BINARY_DEGREE => Self::binary_with_modulus(m, builtin_modulus(m)),
            _ => Err(GfError::Unsupported { p: 2, m }),
        }
    }

    /// GF(2^m) with an explicit reduction polynomial (leading term included).
    ///
    /// Irreducibility is checked by exhaustive factor search for `m <= 32` and
    /// by Rabin's test above that.
    pub fn binary_with_modulus(m: u32, modulus: u128) -> Result<Self, GfError> {
        if !(2..=MAX_BINARY_DEGREE).contains(&m) {
            return Err(GfError::Unsupported { p: 2, m });
        }
        if poly2::degree(modulus) != Some(m) {
            return Err(GfError::Reducible(modulus));
        }
        let irreducible = if m <= 32 {
            poly2::trial_division_irreducible(modulus)
        } else {
            poly2::rabin_irreducible(modulus)
        };
        if !irreducible {
            return Err(GfError::Reducible(modulus));
        }
        Ok(Self { p: 2, m, modulus })
    }

    /// GF(p^m). Extensions are only supported in characteristic 2.
    pub fn new(p: u64, m: u32) -> Result<Self, GfError> {
        match (p, m) {
            (_, 0) => Err(GfError::Unsupported { p, m }),
            (2, _) => Self::binary(m),
            (_, 1) => Self::prime(p),
            _ if !is_prime_u64(p) => Err(GfError::NotPrime(p)),
            _ => Err(GfError::Unsupported { p, m }),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Reduction polynomial, present only for GF(2^m) with m > 1.
    pub fn modulus(&self) -> Option<u128> {
        (self.modulus != 0).then_some(self.modulus)
    }

    fn is_binary_ext(&self) -> bool {
        self.modulus != 0
    }

    /// Field order `q = p^m`.
    pub fn order(&self) -> u128 {
        if self.is_binary_ext() {
            1u128 << self.m
        } else {
            self.p as u128
        }
    }

    /// log2(q), exact for binary fields.
    pub fn bits(&self) -> f64 {
        if self.is_binary_ext() {
            self.m as f64
        } else {
            (self.p as f64).log2()
        }
    }

    /// Bit width of the largest canonical value.
    fn value_bits(&self) -> u32 {
        if self.is_binary_ext() {
            self.m
        } else {
            128 - ((self.p - 1) as u128).leading_zeros()
        }
    }

    /// Serialized width in bytes.
    pub fn byte_len(&self) -> usize {
        (self.value_bits().max(1) as usize).div_ceil(8)
    }

    /// Width of the fixed hex form in characters.
    pub fn hex_width(&self) -> usize {
        2 * self.byte_len()
    }

    fn contains(&self, value: u128) -> bool {
        value < self.order()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            value: 1,
        }
    }

    /// Canonical element for `value`, rejecting out-of-range representatives.
    pub fn element(&self, value: u128) -> Result<FieldElement, GfError> {
        if self.contains(value) {
            Ok(FieldElement { spec: *self, value })
        } else {
            Err(GfError::NonCanonical { spec: *self, value })
        }
    }

    /// Image of the integer `n` under the ring map Z -> F (i.e. `n mod p`).
    pub fn from_integer(&self, n: u64) -> FieldElement {
        FieldElement {
            spec: *self,
            value: (n % self.p) as u128,
        }
    }

    /// Uniform element. Binary fields mask exactly `m` random bits; prime
    /// fields reject draws `>= p`.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let bits = self.value_bits();
        let mask = if bits >= 128 {
            u128::MAX
        } else {
            (1u128 << bits) - 1
        };
        loop {
            let hi = rng.next_u64() as u128;
            let lo = rng.next_u64() as u128;
            let v = ((hi << 64) | lo) & mask;
            if self.contains(v) {
                return FieldElement {
                    spec: *self,
                    value: v,
                };
            }
        }
    }

    /// Uniform non-zero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// Every element in value order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |v| FieldElement {
            spec: *self,
            value: v,
        })
    }

    pub fn deserialize(&self, bytes: &[u8]) -> Result<FieldElement, GfError> {
        let expected = self.byte_len();
        if bytes.len() != expected {
            return Err(GfError::WrongLength {
                expected,
                got: bytes.len(),
            });
        }
        let value = bytes.iter().fold(0u128, |acc, &b| (acc << 8) | b as u128);
        self.element(value)
    }

    pub fn parse_hex(&self, s: &str) -> Result<FieldElement, GfError> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.len() != self.hex_width() {
            return Err(GfError::BadHex(format!(
                "{s:?} is not {} hex digits",
                self.hex_width()
            )));
        }
        let bytes = decode_hex(s)?;
        self.deserialize(&bytes)
    }

    /// Parse a list of hex elements separated by commas or whitespace.
    pub fn parse_hex_list(&self, s: &str) -> Result<Vec<FieldElement>, GfError> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_hex(t))
            .collect()
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary_ext() {
            write!(f, "GF(2^{})", self.m)
        } else {
            write!(f, "GF({})", self.p)
        }
    }
}

/// Built-in reduction polynomial for GF(2^m), `2 <= m <= 127`.
pub fn builtin_modulus(m: u32) -> u128 {
    table::REDUCTION_POLYS[(m - 2) as usize].1
}

/// Degrees and polynomials of the built-in table.
pub fn builtin_moduli() -> impl Iterator<Item = (u32, u128)> {
    table::REDUCTION_POLYS.iter().copied()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u128,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Canonical representative: an integer below `p`, or the coefficient
    /// bitstring of a polynomial of degree below `m`.
    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, rhs: &Self) -> Result<(), GfError> {
        if self.spec == rhs.spec {
            Ok(())
        } else {
            Err(GfError::SpecMismatch(self.spec, rhs.spec))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, GfError> {
        self.same_field(rhs)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, GfError> {
        self.same_field(rhs)?;
        Ok(self.add_unchecked(&rhs.neg_inner()))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, GfError> {
        self.same_field(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, GfError> {
        self.same_field(rhs)?;
        Ok(self.mul_unchecked(&rhs.inv()?))
    }

    fn add_unchecked(&self, rhs: &Self) -> Self {
        let value = if self.spec.is_binary_ext() || self.spec.p == 2 {
            self.value ^ rhs.value
        } else {
            (self.value + rhs.value) % self.spec.p as u128
        };
        Self {
            spec: self.spec,
            value,
        }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let value = if self.spec.is_binary_ext() {
            poly2::mul_mod(self.value, rhs.value, self.spec.modulus)
        } else {
            // Both operands are below 2^64, so the product fits.
            (self.value * rhs.value) % self.spec.p as u128
        };
        Self {
            spec: self.spec,
            value,
        }
    }

    fn neg_inner(&self) -> Self {
        if self.spec.is_binary_ext() || self.spec.p == 2 || self.value == 0 {
            *self
        } else {
            Self {
                spec: self.spec,
                value: self.spec.p as u128 - self.value,
            }
        }
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self) -> Result<Self, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(self.spec.order() - 2))
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Big-endian, fixed width (`spec.byte_len()` bytes).
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.spec.byte_len();
        self.value.to_be_bytes()[16 - n..].to_vec()
    }

    /// Lowercase, fixed-width hex.
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.spec, self.to_hex())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

// Operator forms panic on mismatched fields; use the `checked_*` methods
// where operands come from untrusted input.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("field mismatch in +")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("field mismatch in -")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("field mismatch in *")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.neg_inner()
    }
}

/// Componentwise sum of equal-length vectors.
pub fn vec_add(a: &[FieldElement], b: &[FieldElement]) -> Result<Vec<FieldElement>, GfError> {
    if a.len() != b.len() {
        return Err(GfError::WrongLength {
            expected: a.len(),
            got: b.len(),
        });
    }
    a.iter().zip(b).map(|(x, y)| x.checked_add(y)).collect()
}

/// Componentwise difference of equal-length vectors.
pub fn vec_sub(a: &[FieldElement], b: &[FieldElement]) -> Result<Vec<FieldElement>, GfError> {
    if a.len() != b.len() {
        return Err(GfError::WrongLength {
            expected: a.len(),
            got: b.len(),
        });
    }
    a.iter().zip(b).map(|(x, y)| x.checked_sub(y)).collect()
}

pub fn vec_random<R: RngCore + ?Sized>(
    spec: &FieldSpec,
    len: usize,
    rng: &mut R,
) -> Vec<FieldElement> {
    (0..len).map(|_| spec.random(rng)).collect()
}

pub fn vec_zero(spec: &FieldSpec, len: usize) -> Vec<FieldElement> {
    vec![spec.zero(); len]
}

pub fn vec_to_hex(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(FieldElement::to_hex).collect()
}

pub fn vec_from_hex(spec: &FieldSpec, v: &[String]) -> Result<Vec<FieldElement>, GfError> {
    v.iter().map(|s| spec.parse_hex(s)).collect()
}

fn decode_hex(s: &str) -> Result<Vec<u8>, GfError> {
    if !s.len().is_multiple_of(2) {
        return Err(GfError::BadHex(s.to_string()));
    }
    (0..s.len())
        .step_by(2)
        .map(|i| {
            s.get(i..i + 2)
                .and_then(|pair| u8::from_str_radix(pair, 16).ok())
                .ok_or_else(|| GfError::BadHex(s.to_string()))
        })
        .collect()
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn gf7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn gf8() -> FieldSpec {
        FieldSpec::binary_with_modulus(3, 0b1011).unwrap()
    }

    #[test]
    fn prime_field_examples() {
        let f = gf7();
        let e = |v| f.element(v).unwrap();
        assert_eq!(e(3) + e(5), e(1));
        assert_eq!(e(3) * e(5), e(1));
        assert_eq!(e(3).inv().unwrap(), e(5));
        assert_eq!(e(2).pow(5), e(4));
        assert_eq!(e(4) + f.zero(), e(4));
        assert_eq!(e(4) * f.one(), e(4));
        assert_eq!(-e(3), e(4));
        assert_eq!(e(2) - e(5), e(4));
    }

    #[test]
    fn binary_field_examples() {
        let f = gf8();
        let e = |v| f.element(v).unwrap();
        assert_eq!(e(0b101) + e(0b011), e(0b110));
        assert_eq!(e(0b010) * e(0b100), e(0b011));
        assert_eq!(-e(0b101), e(0b101));
        assert_eq!(e(0b101) - e(0b011), e(0b101) + e(0b011));
        assert_eq!(e(0b110) * f.one(), e(0b110));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(gf7().zero().inv(), Err(GfError::DivisionByZero));
        assert_eq!(gf8().zero().inv(), Err(GfError::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let a = gf7().one();
        let b = gf8().one();
        assert!(matches!(a.checked_add(&b), Err(GfError::SpecMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(GfError::SpecMismatch(..))));
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(FieldSpec::prime(9), Err(GfError::NotPrime(9)));
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(18446744073709551557).is_ok()); // largest u64 prime
        assert!(FieldSpec::binary_with_modulus(3, 0b1001).is_err()); // x^3 + 1
        assert!(FieldSpec::binary_with_modulus(4, 0b1011).is_err()); // wrong degree
        assert!(matches!(
            FieldSpec::new(3, 2),
            Err(GfError::Unsupported { .. })
        ));
        assert!(FieldSpec::binary(128).is_err());
        assert_eq!(FieldSpec::new(2, 1).unwrap(), FieldSpec::prime(2).unwrap());
    }

    #[test]
    fn serialization_examples() {
        let f = FieldSpec::binary(8).unwrap();
        let a = f.element(0xa3).unwrap();
        assert_eq!(a.to_bytes(), vec![0xa3]);
        assert_eq!(a.to_hex(), "a3");
        assert_eq!(f.deserialize(&[0xa3]).unwrap(), a);
        assert!(matches!(
            gf7().deserialize(&[0x09]),
            Err(GfError::NonCanonical { .. })
        ));
        assert!(matches!(
            f.deserialize(&[0, 1]),
            Err(GfError::WrongLength { .. })
        ));
        let g86 = FieldSpec::binary(86).unwrap();
        assert_eq!(g86.byte_len(), 11);
        assert_eq!(g86.one().to_hex(), "0000000000000000000001");
        // high bits above x^85 must be zero
        assert!(g86.parse_hex("4000000000000000000000").is_err());
        assert!(g86.parse_hex("3fffffffffffffffffffff").is_ok());
    }

    #[test]
    fn random_gf2_stays_in_domain() {
        let f = FieldSpec::prime(2).unwrap();
        let mut rng = seeded(1);
        for _ in 0..1000 {
            assert!(f.random(&mut rng).value() < 2);
        }
    }

    #[test]
    fn random_gf2_86_golden_value() {
        let f = FieldSpec::binary(86).unwrap();
        let mut rng = seeded(0);
        let a = f.random(&mut rng);
        assert_eq!(a.to_hex(), GOLDEN_GF2_86_SEED0);
        assert_eq!(f.random(&mut seeded(0)), a);
    }

    const GOLDEN_GF2_86_SEED0: &str = "35f7b2fb65827e6efd22a8";

    #[test]
    fn random_gf7_chi_square() {
        // 6 degrees of freedom; critical value at alpha = 0.001 is 22.458.
        let f = gf7();
        let mut rng = seeded(42);
        let n = 100_000;
        let mut counts = [0u64; 7];
        for _ in 0..n {
            counts[f.random(&mut rng).value() as usize] += 1;
        }
        let expected = n as f64 / 7.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 22.458, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for (m, poly) in builtin_moduli() {
            assert_eq!(poly2::degree(poly), Some(m));
            assert!(poly2::rabin_irreducible(poly), "degree {m}");
            if m <= 20 {
                assert!(poly2::trial_division_irreducible(poly), "degree {m}");
            }
            FieldSpec::binary(m).unwrap();
        }
    }

    #[test]
    fn frobenius_on_builtin_fields() {
        let mut rng = seeded(7);
        for m in [2, 3, 8, 16, 31, 32, 33, 64, 86, 127] {
            let f = FieldSpec::binary(m).unwrap();
            for _ in 0..16 {
                let a = f.random(&mut rng);
                assert_eq!(a.pow(f.order()), a, "m = {m}");
            }
        }
    }

    #[test]
    fn miller_rabin_small_range() {
        let sieve: Vec<u64> = (0..2000u64)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        let mr: Vec<u64> = (0..2000u64).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, mr);
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
    }
}
