//! Algebraic manipulation detection code over `F^d x F x F`.
//!
//! A message `s in F^d` is encoded systematically as `(s, x, f(x, s))` with a
//! uniform `x` and tag polynomial `f(x, s) = x^(d+2) + sum_{i=1..d} s_i x^i`.
//! Decoding recomputes the tag and rejects on mismatch.

use std::fmt;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, FieldElement, FieldSpec, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmdError {
    #[error("message length d must be positive")]
    ZeroLength,
    #[error("characteristic {p} divides d + 2 = {d_plus_2}")]
    CharacteristicDividesLength { p: u64, d_plus_2: u64 },
    #[error("expected {expected} field elements, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("brute-force oracle would need {work} tag evaluations (limit {limit})")]
    OracleTooLarge { work: u128, limit: u128 },
    #[error("cannot plant {roots} roots: need distinct roots and a non-zero x shift")]
    BadRoots { roots: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmdParams {
    spec: FieldSpec,
    d: usize,
}

impl AmdParams {
    pub fn new(spec: FieldSpec, d: usize) -> Result<Self, AmdError> {
        if d == 0 {
            return Err(AmdError::ZeroLength);
        }
        let p = spec.characteristic();
        if (d as u64 + 2).is_multiple_of(p) {
            return Err(AmdError::CharacteristicDividesLength {
                p,
                d_plus_2: d as u64 + 2,
            });
        }
        Ok(Self { spec, d })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Message length in field elements.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Codeword length in field elements (`d + 2`).
    pub fn encoded_len(&self) -> usize {
        self.d + 2
    }

    /// Encoding overhead in bits: two field elements.
    pub fn overhead_bits(&self) -> f64 {
        2.0 * self.spec.bits()
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<(), AmdError> {
        if got == expected {
            Ok(())
        } else {
            Err(AmdError::LengthMismatch { expected, got })
        }
    }
}

/// `(s, x, tag)`; addition is componentwise over all `d + 2` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmdCodeword {
    pub s: Vec<FieldElement>,
    pub x: FieldElement,
    pub tag: FieldElement,
}

impl AmdCodeword {
    /// Flattened as `s_1..s_d, x, tag`.
    pub fn to_vec(&self) -> Vec<FieldElement> {
        let mut v = self.s.clone();
        v.push(self.x);
        v.push(self.tag);
        v
    }

    pub fn from_slice(params: &AmdParams, v: &[FieldElement]) -> Result<Self, AmdError> {
        params.check_len(v.len(), params.encoded_len())?;
        if let Some(bad) = v.iter().find(|e| e.spec() != params.spec) {
            return Err(GfError::SpecMismatch(params.spec, bad.spec()).into());
        }
        let d = params.d;
        Ok(Self {
            s: v[..d].to_vec(),
            x: v[d],
            tag: v[d + 1],
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AmdError> {
        if self.s.len() != other.s.len() {
            return Err(AmdError::LengthMismatch {
                expected: self.s.len(),
                got: other.s.len(),
            });
        }
        Ok(Self {
            s: gf::vec_add(&self.s, &other.s)?,
            x: self.x.checked_add(&other.x)?,
            tag: self.tag.checked_add(&other.tag)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.s.iter().all(FieldElement::is_zero) && self.x.is_zero() && self.tag.is_zero()
    }

    pub fn to_json(&self) -> CodewordJson {
        CodewordJson {
            s: gf::vec_to_hex(&self.s),
            x: self.x.to_hex(),
            tag: self.tag.to_hex(),
        }
    }

    pub fn from_json(params: &AmdParams, j: &CodewordJson) -> Result<Self, AmdError> {
        let spec = params.spec;
        params.check_len(j.s.len(), params.d)?;
        Ok(Self {
            s: gf::vec_from_hex(&spec, &j.s)?,
            x: spec.parse_hex(&j.x)?,
            tag: spec.parse_hex(&j.tag)?,
        })
    }
}

impl fmt::Display for AmdCodeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(FieldElement::to_hex).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Wire form `{"s": [hex...], "x": hex, "tag": hex}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordJson {
    pub s: Vec<String>,
    pub x: String,
    pub tag: String,
}

/// `f(x, s) = x^(d+2) + sum s_i x^i` by Horner's rule on the coefficient list
/// `1, 0, s_d, ..., s_1` followed by a final multiplication by `x`.
pub fn tag_eval(
    params: &AmdParams,
    x: &FieldElement,
    s: &[FieldElement],
) -> Result<FieldElement, AmdError> {
    params.check_len(s.len(), params.d)?;
    // x^(d+2) contributes 1 at degree d+1 of f/x, and there is no x^(d+1) term.
    let mut acc = x.checked_mul(&params.spec.one())?;
    for coef in s.iter().rev() {
        acc = acc.checked_mul(x)?.checked_add(coef)?;
    }
    Ok(acc.checked_mul(x)?)
}

pub fn amd_encode<R: RngCore + ?Sized>(
    params: &AmdParams,
    s: &[FieldElement],
    rng: &mut R,
) -> Result<AmdCodeword, AmdError> {
    let x = params.spec.random(rng);
    encode_with_x(params, s, x)
}

/// Deterministic encoding for a caller-chosen `x`.
pub fn encode_with_x(
    params: &AmdParams,
    s: &[FieldElement],
    x: FieldElement,
) -> Result<AmdCodeword, AmdError> {
    let tag = tag_eval(params, &x, s)?;
    Ok(AmdCodeword {
        s: s.to_vec(),
        x,
        tag,
    })
}

/// `Ok(Some(s))` when the tag verifies, `Ok(None)` (rejection) otherwise.
pub fn amd_decode(
    params: &AmdParams,
    c: &AmdCodeword,
) -> Result<Option<Vec<FieldElement>>, AmdError> {
    let expected = tag_eval(params, &c.x, &c.s)?;
    Ok((expected == c.tag).then(|| c.s.clone()))
}

/// Exact rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn le(&self, other: &Ratio) -> bool {
        self.num * other.den <= other.num * self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Work limit for [`delta_oracle`], in tag evaluations.
pub const ORACLE_WORK_LIMIT: u128 = 1 << 28;

/// Work needed by [`delta_oracle`]: `q^d` messages, `q^(d+2)` shifts, `q` values of `x`.
pub fn oracle_work(params: &AmdParams) -> u128 {
    let q = params.spec.order();
    let exp = 2 * params.d as u32 + 3;
    q.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Exhaustive worst case of `Pr_x[Decode(Encode(s; x) + delta) not in {s, bot}]`
/// over every message `s` and every non-zero shift `delta`.
pub fn delta_oracle(params: &AmdParams) -> Result<Ratio, AmdError> {
    let work = oracle_work(params);
    if work > ORACLE_WORK_LIMIT {
        return Err(AmdError::OracleTooLarge {
            work,
            limit: ORACLE_WORK_LIMIT,
        });
    }
    let spec = params.spec;
    let q = spec.order();
    let messages = all_vectors(&spec, params.d);
    let xs: Vec<FieldElement> = spec.elements().collect();
    // tags[i][x] = f(x, s_i), with x indexed by its canonical value.
    let tags: Vec<Vec<FieldElement>> = messages
        .iter()
        .map(|s| {
            xs.iter()
                .map(|x| tag_eval(params, x, s).expect("valid lengths"))
                .collect()
        })
        .collect();

    // A shift with zero message part decodes to `s` or bot, so only pairs
    // s != s' matter. For each (s, s', dx) the best tag shift is the most
    // frequent difference f(x + dx, s') - f(x, s) over x.
    let worst = (0..messages.len())
        .into_par_iter()
        .map(|i| {
            let mut counts = vec![0u32; xs.len()];
            let mut best = 0u32;
            for (j, moved) in tags.iter().enumerate() {
                if j == i {
                    continue;
                }
                for &dx in &xs {
                    counts.fill(0);
                    for (x, &t) in xs.iter().zip(&tags[i]) {
                        let diff = moved[(*x + dx).value() as usize] - t;
                        let c = &mut counts[diff.value() as usize];
                        *c += 1;
                        best = best.max(*c);
                    }
                }
            }
            best as u128
        })
        .max()
        .unwrap_or(0);
    Ok(Ratio::new(worst, q))
}

/// Whether shifting `c` by `delta` decodes to something other than `s` or bot.
pub fn undetected(
    params: &AmdParams,
    c: &AmdCodeword,
    delta: &AmdCodeword,
    s: &[FieldElement],
) -> bool {
    let shifted = c.checked_add(delta).expect("valid lengths");
    matches!(amd_decode(params, &shifted), Ok(Some(out)) if out != s)
}

/// Conjectured closed form `(d + 1) / q` for large fields. It is only
/// checked against [`delta_oracle`] at small parameters, never proven here.
pub fn conjectured_delta(params: &AmdParams) -> f64 {
    (params.d as f64 + 1.0) / params.spec.order() as f64
}

/// Every vector of `len` elements of a small field, in lexicographic order.
pub fn all_vectors(spec: &FieldSpec, len: usize) -> Vec<Vec<FieldElement>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                spec.elements().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Build a shift `delta = (ds, x_shift, dt)` such that, for the known message
/// `s`, the shifted codeword decodes to `s + ds` exactly when `x` is one of the
/// `d + 1` distinct `roots`.
///
/// With `a = x_shift`, the difference `f(x + a, s + ds) - f(x, s) - dt` is a
/// polynomial in `x` with leading term `(d+2) a x^(d+1)`; the free
/// coefficients `ds_d, ..., ds_1, dt` are solved top-down so it equals
/// `(d+2) a prod (x - r)`.
pub fn root_planting_shift(
    params: &AmdParams,
    s: &[FieldElement],
    x_shift: FieldElement,
    roots: &[FieldElement],
) -> Result<AmdCodeword, AmdError> {
    let spec = params.spec;
    let d = params.d;
    params.check_len(s.len(), d)?;
    let distinct = roots
        .iter()
        .enumerate()
        .all(|(k, r)| roots[..k].iter().all(|o| o != r));
    if roots.len() != d + 1 || !distinct || x_shift.is_zero() {
        return Err(AmdError::BadRoots { roots: roots.len() });
    }
    let lead = spec.from_integer(d as u64 + 2) * x_shift;

    // target = lead * prod (x - r), coefficients low to high, degree d+1.
    let mut target = vec![lead];
    for r in roots {
        target = poly_mul(&target, &[-*r, spec.one()]);
    }

    // binom[i] = coefficients of (x + a)^i for i = 0..=d+2.
    let mut binom = vec![vec![spec.one()]];
    for i in 1..=d + 2 {
        let next = poly_mul(&binom[i - 1], &[x_shift, spec.one()]);
        binom.push(next);
    }

    // Fixed part: (x+a)^(d+2) - x^(d+2).
    let mut fixed = binom[d + 2].clone();
    fixed[d + 2] = fixed[d + 2] - spec.one();

    // Solve s'_k for k = d..1 from the x^k coefficient, where
    // coef_k = fixed_k + sum_{i >= k} s'_i C(i,k) a^(i-k) - s_k.
    let mut s_new = vec![spec.zero(); d + 1]; // 1-based, index 0 unused
    for k in (1..=d).rev() {
        let mut rhs = target[k] - fixed[k] + s[k - 1];
        for (i, s_i) in s_new.iter().enumerate().skip(k + 1) {
            rhs = rhs - *s_i * binom[i][k];
        }
        s_new[k] = rhs;
    }
    // Constant term: fixed_0 + sum_i s'_i a^i - dt = target_0.
    let mut constant = fixed[0];
    for (i, s_i) in s_new.iter().enumerate().skip(1) {
        constant = constant + *s_i * binom[i][0];
    }
    let dt = constant - target[0];

    let ds: Vec<FieldElement> = (1..=d).map(|k| s_new[k] - s[k - 1]).collect();
    Ok(AmdCodeword {
        s: ds,
        x: x_shift,
        tag: dt,
    })
}

fn poly_mul(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let spec = a[0].spec();
    let mut out = vec![spec.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + *x * *y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn gf7_d3() -> AmdParams {
        AmdParams::new(FieldSpec::prime(7).unwrap(), 3).unwrap()
    }

    fn e7(v: u128) -> FieldElement {
        FieldSpec::prime(7).unwrap().element(v).unwrap()
    }

    /// Naive power-sum evaluation, independent of the Horner path.
    fn naive_tag(params: &AmdParams, x: FieldElement, s: &[FieldElement]) -> FieldElement {
        let mut acc = x.pow(params.d() as u128 + 2);
        for (i, si) in s.iter().enumerate() {
            acc = acc + *si * x.pow(i as u128 + 1);
        }
        acc
    }

    #[test]
    fn rejects_characteristic_dividing_length() {
        let gf2_8 = FieldSpec::binary(8).unwrap();
        assert!(matches!(
            AmdParams::new(gf2_8, 2),
            Err(AmdError::CharacteristicDividesLength { p: 2, d_plus_2: 4 })
        ));
        assert!(AmdParams::new(FieldSpec::prime(7).unwrap(), 5).is_err());
        assert!(AmdParams::new(gf2_8, 3).is_ok());
        assert_eq!(AmdParams::new(gf2_8, 0), Err(AmdError::ZeroLength));
    }

    #[test]
    fn tag_examples() {
        let p = gf7_d3();
        let zero = vec![e7(0); 3];
        assert_eq!(tag_eval(&p, &e7(2), &zero).unwrap(), e7(4));
        let s = vec![e7(3), e7(6), e7(1)];
        assert_eq!(tag_eval(&p, &e7(0), &s).unwrap(), e7(0));
        assert!(matches!(
            tag_eval(&p, &e7(1), &zero[..2]),
            Err(AmdError::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn horner_matches_naive_evaluation() {
        let gf8 = FieldSpec::binary(3).unwrap();
        let mut rng = seeded(11);
        for d in [1usize, 3, 5] {
            let p = AmdParams::new(gf8, d).unwrap();
            for _ in 0..200 {
                let x = gf8.random(&mut rng);
                let s = gf::vec_random(&gf8, d, &mut rng);
                assert_eq!(tag_eval(&p, &x, &s).unwrap(), naive_tag(&p, x, &s));
            }
        }
        let big = AmdParams::new(FieldSpec::binary(86).unwrap(), 3).unwrap();
        for _ in 0..50 {
            let x = big.spec().random(&mut rng);
            let s = gf::vec_random(&big.spec(), 3, &mut rng);
            assert_eq!(tag_eval(&big, &x, &s).unwrap(), naive_tag(&big, x, &s));
        }
    }

    #[test]
    fn decode_examples() {
        let p = gf7_d3();
        let zero = vec![e7(0); 3];
        let good = AmdCodeword {
            s: zero.clone(),
            x: e7(2),
            tag: e7(4),
        };
        assert_eq!(amd_decode(&p, &good).unwrap(), Some(zero.clone()));
        let bad = AmdCodeword {
            tag: e7(5),
            ..good.clone()
        };
        assert_eq!(amd_decode(&p, &bad).unwrap(), None);
        let short = AmdCodeword {
            s: zero[..2].to_vec(),
            ..good
        };
        assert!(amd_decode(&p, &short).is_err());
    }

    #[test]
    fn appendix_preset_encodes_to_five_elements() {
        let p = AmdParams::new(FieldSpec::binary(86).unwrap(), 3).unwrap();
        let mut rng = seeded(3);
        let s = gf::vec_random(&p.spec(), 3, &mut rng);
        let c = amd_encode(&p, &s, &mut rng).unwrap();
        assert_eq!(c.to_vec().len(), 5);
        assert_eq!(amd_decode(&p, &c).unwrap(), Some(s));
        assert_eq!(p.encoded_len() - p.d(), 2);
        assert_eq!(p.overhead_bits(), 172.0);
    }

    #[test]
    fn fresh_x_per_encoding() {
        let p = AmdParams::new(FieldSpec::binary(16).unwrap(), 3).unwrap();
        let s = vec![p.spec().one(); 3];
        let trials = 2000;
        let equal = (0..trials)
            .filter(|&t| {
                let a = amd_encode(&p, &s, &mut seeded(2 * t)).unwrap();
                let b = amd_encode(&p, &s, &mut seeded(2 * t + 1)).unwrap();
                a.x == b.x
            })
            .count();
        // Expected 2000 / 65536 ~ 0.03 collisions.
        assert!(equal <= 2, "{equal} collisions");
    }

    #[test]
    fn oracle_guard() {
        let p = AmdParams::new(FieldSpec::binary(8).unwrap(), 3).unwrap();
        assert!(matches!(
            delta_oracle(&p),
            Err(AmdError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn zero_shift_never_fails() {
        let p = AmdParams::new(FieldSpec::binary(3).unwrap(), 1).unwrap();
        let zero = AmdCodeword::from_slice(&p, &gf::vec_zero(&p.spec(), 3)).unwrap();
        for s in all_vectors(&p.spec(), 1) {
            for x in p.spec().elements() {
                let c = encode_with_x(&p, &s, x).unwrap();
                assert!(!undetected(&p, &c, &zero, &s));
            }
        }
    }

    #[test]
    fn planted_roots_hit_exactly_the_roots() {
        for (spec, d) in [
            (FieldSpec::prime(7).unwrap(), 1usize),
            (FieldSpec::prime(7).unwrap(), 3),
            (FieldSpec::binary(3).unwrap(), 1),
            (FieldSpec::binary(4).unwrap(), 3),
        ] {
            let p = AmdParams::new(spec, d).unwrap();
            let mut rng = seeded(9);
            let s = gf::vec_random(&spec, d, &mut rng);
            let roots: Vec<FieldElement> = spec.elements().skip(1).take(d + 1).collect();
            let a = spec.random_nonzero(&mut rng);
            let delta = root_planting_shift(&p, &s, a, &roots).unwrap();
            for x in spec.elements() {
                let c = encode_with_x(&p, &s, x).unwrap();
                let shifted = c.checked_add(&delta).unwrap();
                let accepted = amd_decode(&p, &shifted).unwrap().is_some();
                assert_eq!(accepted, roots.contains(&x), "{spec} d={d} x={x}");
            }
        }
    }
}
