//! Linear secret sharing (additive n-of-n, Shamir t-of-n) and the robust
//! composition `Share*(s) = Share(Encode(s))`, `Recover*(S) = Decode(Recover(S))`.
//!
//! Vector secrets are shared coordinate by coordinate. Shares are indexed
//! `0..n`; Shamir share `i` is the evaluation at the point `i + 1`.

use std::collections::BTreeSet;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amd::{self, AmdCodeword, AmdError, AmdParams};
use crate::gf::{self, FieldElement, FieldSpec, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SssError {
    #[error("invalid access structure: n = {n}, t = {t}")]
    BadStructure { n: usize, t: usize },
    #[error("threshold sharing needs n < q (n = {n}, q = {q})")]
    FieldTooSmall { n: usize, q: u128 },
    #[error("secret must be non-empty")]
    EmptySecret,
    #[error("expected {expected} shares, got {got}")]
    WrongShareCount { expected: usize, got: usize },
    #[error("share entries have inconsistent lengths")]
    InconsistentLengths,
    #[error(transparent)]
    Amd(#[from] AmdError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Additive,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessStructure {
    kind: SchemeKind,
    n: usize,
    t: usize,
}

impl AccessStructure {
    pub fn additive(n: usize) -> Result<Self, SssError> {
        if n == 0 {
            return Err(SssError::BadStructure { n, t: n });
        }
        Ok(Self {
            kind: SchemeKind::Additive,
            n,
            t: n,
        })
    }

    pub fn threshold(t: usize, n: usize) -> Result<Self, SssError> {
        if t == 0 || t > n {
            return Err(SssError::BadStructure { n, t });
        }
        Ok(Self {
            kind: SchemeKind::Threshold,
            n,
            t,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Whether the share indices in `set` determine the secret.
    pub fn is_qualified(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().filter(|&&i| i < self.n).count() >= self.t
    }

    /// Largest number of shares an unqualified coalition may hold.
    pub fn max_unqualified(&self) -> usize {
        self.t - 1
    }

    pub fn check_field(&self, spec: &FieldSpec) -> Result<(), SssError> {
        if self.kind == SchemeKind::Threshold && self.n as u128 >= spec.order() {
            return Err(SssError::FieldTooSmall {
                n: self.n,
                q: spec.order(),
            });
        }
        Ok(())
    }
}

/// `n` slots, each holding a share or `None` for bot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareVector {
    pub entries: Vec<Option<Vec<FieldElement>>>,
}

impl ShareVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Common length of the present entries.
    pub fn entry_len(&self) -> Result<Option<usize>, SssError> {
        let mut lens = self.entries.iter().flatten().map(Vec::len);
        match lens.next() {
            None => Ok(None),
            Some(first) if lens.all(|l| l == first) => Ok(Some(first)),
            Some(_) => Err(SssError::InconsistentLengths),
        }
    }

    /// Entry-wise sum with bot absorbing: `bot + x = x + bot = bot`.
    pub fn checked_add(&self, other: &ShareVector) -> Result<ShareVector, SssError> {
        if self.len() != other.len() {
            return Err(SssError::WrongShareCount {
                expected: self.len(),
                got: other.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => gf::vec_add(a, b).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        Ok(ShareVector { entries })
    }

    pub fn to_json(&self) -> ShareVectorJson {
        ShareVectorJson {
            entries: self
                .entries
                .iter()
                .map(|e| e.as_ref().map(|v| gf::vec_to_hex(v)))
                .collect(),
        }
    }

    pub fn from_json(spec: &FieldSpec, j: &ShareVectorJson) -> Result<Self, SssError> {
        let entries = j
            .entries
            .iter()
            .map(|e| e.as_ref().map(|v| gf::vec_from_hex(spec, v)).transpose())
            .collect::<Result<_, _>>()?;
        let sv = ShareVector { entries };
        sv.entry_len()?;
        Ok(sv)
    }
}

/// Wire form `{"entries": [[hex...] | null, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareVectorJson {
    pub entries: Vec<Option<Vec<String>>>,
}

pub fn share<R: RngCore + ?Sized>(
    structure: &AccessStructure,
    secret: &[FieldElement],
    rng: &mut R,
) -> Result<ShareVector, SssError> {
    let spec = secret.first().ok_or(SssError::EmptySecret)?.spec();
    structure.check_field(&spec)?;
    match structure.kind {
        SchemeKind::Additive => {
            let n = structure.n;
            let mut entries: Vec<Vec<FieldElement>> = (0..n - 1)
                .map(|_| gf::vec_random(&spec, secret.len(), rng))
                .collect();
            let mut last = secret.to_vec();
            for e in &entries {
                last = gf::vec_sub(&last, e)?;
            }
            entries.push(last);
            Ok(ShareVector {
                entries: entries.into_iter().map(Some).collect(),
            })
        }
        SchemeKind::Threshold => {
            // One polynomial of degree t-1 per coordinate; coefficient 0 is the secret.
            let polys: Vec<Vec<FieldElement>> = secret
                .iter()
                .map(|&c| {
                    let mut coeffs = vec![c];
                    coeffs.extend((1..structure.t).map(|_| spec.random(rng)));
                    coeffs
                })
                .collect();
            Ok(evaluate_shares(structure, &spec, &polys))
        }
    }
}

/// Sharing with all randomness set to zero. It is linear, and recovers to
/// `secret`, so it lifts an offset on the secret to an offset on the shares.
pub fn share_public(
    structure: &AccessStructure,
    secret: &[FieldElement],
) -> Result<ShareVector, SssError> {
    let spec = secret.first().ok_or(SssError::EmptySecret)?.spec();
    structure.check_field(&spec)?;
    match structure.kind {
        SchemeKind::Additive => {
            let mut entries = vec![Some(gf::vec_zero(&spec, secret.len())); structure.n - 1];
            entries.push(Some(secret.to_vec()));
            Ok(ShareVector { entries })
        }
        SchemeKind::Threshold => {
            let polys: Vec<Vec<FieldElement>> = secret.iter().map(|&c| vec![c]).collect();
            Ok(evaluate_shares(structure, &spec, &polys))
        }
    }
}

fn evaluate_shares(
    structure: &AccessStructure,
    spec: &FieldSpec,
    polys: &[Vec<FieldElement>],
) -> ShareVector {
    let entries = (0..structure.n)
        .map(|i| {
            let point = eval_point(spec, i);
            Some(polys.iter().map(|p| horner(p, point)).collect())
        })
        .collect();
    ShareVector { entries }
}

/// Evaluation point of share `i`: the element with canonical value `i + 1`
/// (the integer `i + 1` in GF(p), the bit pattern of `i + 1` in GF(2^m)).
pub fn eval_point(spec: &FieldSpec, i: usize) -> FieldElement {
    spec.element(i as u128 + 1)
        .expect("n < q is checked before sharing")
}

fn horner(coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(x.spec().zero(), |acc, &c| acc * x + c)
}

/// Lagrange basis values at 0 for the evaluation points of the share indices `idx`.
pub fn lagrange_at_zero(spec: &FieldSpec, idx: &[usize]) -> Result<Vec<FieldElement>, SssError> {
    let points: Vec<FieldElement> = idx.iter().map(|&i| eval_point(spec, i)).collect();
    points
        .iter()
        .enumerate()
        .map(|(k, &xk)| {
            let mut num = spec.one();
            let mut den = spec.one();
            for (m, &xm) in points.iter().enumerate() {
                if m != k {
                    num = num * xm;
                    den = den * (xm - xk);
                }
            }
            Ok(num.checked_div(&den)?)
        })
        .collect()
}

/// `Ok(None)` is bot: an absent additive share, or fewer than `t` Shamir shares.
pub fn recover(
    structure: &AccessStructure,
    shares: &ShareVector,
) -> Result<Option<Vec<FieldElement>>, SssError> {
    if shares.len() != structure.n {
        return Err(SssError::WrongShareCount {
            expected: structure.n,
            got: shares.len(),
        });
    }
    shares.entry_len()?;
    match structure.kind {
        SchemeKind::Additive => {
            let mut acc: Option<Vec<FieldElement>> = None;
            for entry in &shares.entries {
                let Some(v) = entry else { return Ok(None) };
                acc = Some(match acc {
                    None => v.clone(),
                    Some(a) => gf::vec_add(&a, v)?,
                });
            }
            Ok(acc)
        }
        SchemeKind::Threshold => {
            let idx: Vec<usize> = shares
                .entries
                .iter()
                .enumerate()
                .filter_map(|(i, e)| e.as_ref().map(|_| i))
                .take(structure.t)
                .collect();
            if idx.len() < structure.t {
                return Ok(None);
            }
            let first = shares.entries[idx[0]].as_ref().expect("present");
            let spec = first[0].spec();
            let lambdas = lagrange_at_zero(&spec, &idx)?;
            let mut out = gf::vec_zero(&spec, first.len());
            for (&i, lambda) in idx.iter().zip(&lambdas) {
                let entry = shares.entries[i].as_ref().expect("present");
                for (o, &v) in out.iter_mut().zip(entry) {
                    *o = o.checked_add(&v.checked_mul(lambda)?)?;
                }
            }
            Ok(Some(out))
        }
    }
}

pub fn share_star<R: RngCore + ?Sized>(
    structure: &AccessStructure,
    amd_params: &AmdParams,
    secret: &[FieldElement],
    rng: &mut R,
) -> Result<ShareVector, SssError> {
    let codeword = amd::amd_encode(amd_params, secret, rng)?;
    share(structure, &codeword.to_vec(), rng)
}

pub fn recover_star(
    structure: &AccessStructure,
    amd_params: &AmdParams,
    shares: &ShareVector,
) -> Result<Option<Vec<FieldElement>>, SssError> {
    match recover(structure, shares)? {
        None => Ok(None),
        Some(v) => {
            let c = AmdCodeword::from_slice(amd_params, &v)?;
            Ok(amd::amd_decode(amd_params, &c)?)
        }
    }
}

/// A sharing scheme as seen by the security games.
pub trait SharingScheme: Send + Sync {
    fn structure(&self) -> &AccessStructure;
    fn spec(&self) -> FieldSpec;
    /// Length of the secrets the scheme accepts.
    fn secret_len(&self) -> usize;
    /// Length of each share.
    fn share_len(&self) -> usize;
    fn share(
        &self,
        secret: &[FieldElement],
        rng: &mut dyn RngCore,
    ) -> Result<ShareVector, SssError>;
    fn recover(&self, shares: &ShareVector) -> Result<Option<Vec<FieldElement>>, SssError>;

    fn n(&self) -> usize {
        self.structure().n()
    }
}

/// A plain linear scheme over secrets of a fixed length.
#[derive(Debug, Clone, Copy)]
pub struct LinearScheme {
    pub structure: AccessStructure,
    pub spec: FieldSpec,
    pub secret_len: usize,
}

impl SharingScheme for LinearScheme {
    fn structure(&self) -> &AccessStructure {
        &self.structure
    }
    fn spec(&self) -> FieldSpec {
        self.spec
    }
    fn secret_len(&self) -> usize {
        self.secret_len
    }
    fn share_len(&self) -> usize {
        self.secret_len
    }
    fn share(
        &self,
        secret: &[FieldElement],
        rng: &mut dyn RngCore,
    ) -> Result<ShareVector, SssError> {
        share(&self.structure, secret, rng)
    }
    fn recover(&self, shares: &ShareVector) -> Result<Option<Vec<FieldElement>>, SssError> {
        recover(&self.structure, shares)
    }
}

/// `(Share*, Recover*)`: AMD encoding composed with a linear scheme.
#[derive(Debug, Clone, Copy)]
pub struct RobustScheme {
    pub structure: AccessStructure,
    pub amd: AmdParams,
}

impl RobustScheme {
    pub fn new(structure: AccessStructure, amd: AmdParams) -> Result<Self, SssError> {
        structure.check_field(&amd.spec())?;
        Ok(Self { structure, amd })
    }
}

impl SharingScheme for RobustScheme {
    fn structure(&self) -> &AccessStructure {
        &self.structure
    }
    fn spec(&self) -> FieldSpec {
        self.amd.spec()
    }
    fn secret_len(&self) -> usize {
        self.amd.d()
    }
    fn share_len(&self) -> usize {
        self.amd.encoded_len()
    }
    fn share(
        &self,
        secret: &[FieldElement],
        rng: &mut dyn RngCore,
    ) -> Result<ShareVector, SssError> {
        share_star(&self.structure, &self.amd, secret, rng)
    }
    fn recover(&self, shares: &ShareVector) -> Result<Option<Vec<FieldElement>>, SssError> {
        recover_star(&self.structure, &self.amd, shares)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::rngs::mock::StepRng;

    fn gf7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn e7(v: u128) -> FieldElement {
        gf7().element(v).unwrap()
    }

    #[test]
    fn structure_validation() {
        assert!(AccessStructure::additive(0).is_err());
        assert!(AccessStructure::threshold(0, 3).is_err());
        assert!(AccessStructure::threshold(4, 3).is_err());
        let sh = AccessStructure::threshold(2, 7).unwrap();
        assert!(matches!(
            share(&sh, &[e7(1)], &mut seeded(0)),
            Err(SssError::FieldTooSmall { n: 7, q: 7 })
        ));
        assert!(matches!(
            share(&AccessStructure::additive(2).unwrap(), &[], &mut seeded(0)),
            Err(SssError::EmptySecret)
        ));
    }

    #[test]
    fn qualified_sets() {
        let add = AccessStructure::additive(3).unwrap();
        assert!(add.is_qualified(&[0, 1, 2].into()));
        assert!(!add.is_qualified(&[0, 2].into()));
        let sh = AccessStructure::threshold(2, 3).unwrap();
        assert!(sh.is_qualified(&[0, 2].into()));
        assert!(!sh.is_qualified(&[1].into()));
        assert!(!sh.is_qualified(&BTreeSet::new()));
    }

    #[test]
    fn additive_examples() {
        let one = AccessStructure::additive(1).unwrap();
        let s = vec![e7(4), e7(2)];
        assert_eq!(
            share(&one, &s, &mut seeded(0)).unwrap().entries,
            vec![Some(s.clone())]
        );

        // With a generator that always yields 3, the first share is 3.
        let two = AccessStructure::additive(2).unwrap();
        let mut rng = StepRng::new(3, 0);
        let sv = share(&two, &[e7(5)], &mut rng).unwrap();
        assert_eq!(sv.entries, vec![Some(vec![e7(3)]), Some(vec![e7(2)])]);
        assert_eq!(recover(&two, &sv).unwrap(), Some(vec![e7(5)]));

        let with_bot = ShareVector {
            entries: vec![Some(vec![e7(3)]), None],
        };
        assert_eq!(recover(&two, &with_bot).unwrap(), None);
    }

    #[test]
    fn shamir_examples() {
        // 4 + 3x at points 1, 2, 3 over GF(7): 0, 3, 6
        let sh = AccessStructure::threshold(2, 3).unwrap();
        let mut rng = StepRng::new(3, 0);
        let sv = share(&sh, &[e7(4)], &mut rng).unwrap();
        assert_eq!(
            sv.entries,
            vec![Some(vec![e7(0)]), Some(vec![e7(3)]), Some(vec![e7(6)])]
        );

        let two_pts = ShareVector {
            entries: vec![Some(vec![e7(0)]), Some(vec![e7(3)]), None],
        };
        assert_eq!(recover(&sh, &two_pts).unwrap(), Some(vec![e7(4)]));
        let one_pt = ShareVector {
            entries: vec![None, Some(vec![e7(3)]), None],
        };
        assert_eq!(recover(&sh, &one_pt).unwrap(), None);
    }

    #[test]
    fn shamir_uses_lowest_present_indices() {
        let sh = AccessStructure::threshold(2, 3).unwrap();
        // Share 2 is inconsistent with the polynomial; lowest two are used.
        let sv = ShareVector {
            entries: vec![Some(vec![e7(0)]), Some(vec![e7(3)]), Some(vec![e7(1)])],
        };
        assert_eq!(recover(&sh, &sv).unwrap(), Some(vec![e7(4)]));
    }

    #[test]
    fn inconsistent_entry_lengths() {
        let add = AccessStructure::additive(2).unwrap();
        let sv = ShareVector {
            entries: vec![Some(vec![e7(0)]), Some(vec![e7(1), e7(2)])],
        };
        assert_eq!(recover(&add, &sv), Err(SssError::InconsistentLengths));
        assert!(matches!(
            recover(
                &add,
                &ShareVector {
                    entries: vec![None]
                }
            ),
            Err(SssError::WrongShareCount { .. })
        ));
    }

    #[test]
    fn share_public_recovers_offset() {
        let spec = FieldSpec::binary(16).unwrap();
        let mut rng = seeded(4);
        let v = gf::vec_random(&spec, 5, &mut rng);
        for st in [
            AccessStructure::additive(3).unwrap(),
            AccessStructure::threshold(2, 3).unwrap(),
            AccessStructure::threshold(3, 5).unwrap(),
        ] {
            assert_eq!(
                recover(&st, &share_public(&st, &v).unwrap()).unwrap(),
                Some(v.clone())
            );
        }
    }

    #[test]
    fn robust_scheme_shapes() {
        let amd = AmdParams::new(FieldSpec::binary(86).unwrap(), 3).unwrap();
        let st = AccessStructure::additive(3).unwrap();
        let mut rng = seeded(8);
        let s = gf::vec_random(&amd.spec(), 3, &mut rng);
        let sv = share_star(&st, &amd, &s, &mut rng).unwrap();
        assert_eq!(sv.len(), 3);
        assert!(sv.entries.iter().all(|e| e.as_ref().unwrap().len() == 5));
        assert_eq!(recover_star(&st, &amd, &sv).unwrap(), Some(s.clone()));

        let mut dropped = sv.clone();
        dropped.entries[1] = None;
        assert_eq!(recover_star(&st, &amd, &dropped).unwrap(), None);
    }

    #[test]
    fn json_null_is_bot() {
        let sv = ShareVector {
            entries: vec![Some(vec![e7(6)]), None],
        };
        let text = serde_json::to_string(&sv.to_json()).unwrap();
        assert_eq!(text, r#"{"entries":[["06"],null]}"#);
        let back: ShareVectorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ShareVector::from_json(&gf7(), &back).unwrap(), sv);
    }
}
