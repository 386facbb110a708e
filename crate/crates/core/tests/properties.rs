use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::RngCore;

use amd_relay::amd::{self, AmdParams};
use amd_relay::gf::{self, FieldElement, FieldSpec};
use amd_relay::rng::seeded;
use amd_relay::sss::{self, AccessStructure, ShareVector};

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(7).unwrap(),
        FieldSpec::prime(65_521).unwrap(),
        FieldSpec::prime((1 << 61) - 1).unwrap(),
        FieldSpec::binary(8).unwrap(),
        FieldSpec::binary(64).unwrap(),
        FieldSpec::binary(86).unwrap(),
        FieldSpec::binary(127).unwrap(),
    ]
}

fn triple() -> impl Strategy<Value = (FieldSpec, u64)> {
    (0..fields().len(), any::<u64>()).prop_map(|(i, seed)| (fields()[i], seed))
}

/// Fields where a shift slips through with probability at most 5/2^61.
fn large() -> impl Strategy<Value = (FieldSpec, u64)> {
    triple().prop_filter("large field", |(spec, _)| spec.order() > 1 << 60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms((spec, seed) in triple()) {
        let mut rng = seeded(seed);
        let [a, b, c] = [0; 3].map(|_| spec.random(&mut rng));
        let (zero, one) = (spec.zero(), spec.one());
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a + zero, a);
        prop_assert_eq!(a * one, a);
        prop_assert_eq!(a + (-a), zero);
        prop_assert_eq!(a - b + b, a);
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv().unwrap(), one);
            prop_assert_eq!(b.checked_div(&a).unwrap() * a, b);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn serialization_is_a_bijection((spec, seed) in triple()) {
        let a = spec.random(&mut seeded(seed));
        let bytes = a.to_bytes();
        prop_assert_eq!(bytes.len(), spec.byte_len());
        prop_assert_eq!(spec.deserialize(&bytes).unwrap(), a);
        prop_assert_eq!(spec.parse_hex(&a.to_hex()).unwrap(), a);
        prop_assert_eq!(a.to_hex().len(), spec.hex_width());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn sharing_is_linear((spec, seed) in triple(), n in 2usize..6, shamir in any::<bool>()) {
        let mut rng = seeded(seed);
        let structure = if shamir && spec.order() > n as u128 {
            AccessStructure::threshold(n / 2 + 1, n).unwrap()
        } else {
            AccessStructure::additive(n).unwrap()
        };
        let s1 = gf::vec_random(&spec, 3, &mut rng);
        let s2 = gf::vec_random(&spec, 3, &mut rng);
        let sum = sss::share(&structure, &s1, &mut rng)
            .unwrap()
            .checked_add(&sss::share(&structure, &s2, &mut rng).unwrap())
            .unwrap();
        let expect = gf::vec_add(&s1, &s2).unwrap();
        prop_assert_eq!(sss::recover(&structure, &sum).unwrap(), Some(expect));
    }

    #[test]
    fn robust_sharing_is_complete((spec, seed) in triple(), d in 1usize..5) {
        let Ok(params) = AmdParams::new(spec, d) else { return Ok(()) };
        let mut rng = seeded(seed);
        let structure = AccessStructure::threshold(2, 3).unwrap();
        let secret = gf::vec_random(&spec, d, &mut rng);
        let mut shares = sss::share_star(&structure, &params, &secret, &mut rng).unwrap();
        prop_assert_eq!(shares.entries[0].as_ref().unwrap().len(), d + 2);
        shares.entries[(seed % 3) as usize] = None;
        let out = sss::recover_star(&structure, &params, &shares).unwrap();
        prop_assert_eq!(out, Some(secret));
    }

    #[test]
    fn shifted_codewords_are_rejected((spec, seed) in large(), d in 1usize..5) {
        let Ok(params) = AmdParams::new(spec, d) else { return Ok(()) };
        let mut rng = seeded(seed);
        let secret = gf::vec_random(&spec, d, &mut rng);
        let c = amd::amd_encode(&params, &secret, &mut rng).unwrap().to_vec();
        let mut shift = gf::vec_zero(&spec, d + 2);
        shift[(seed as usize) % d] = spec.random_nonzero(&mut rng);
        let moved = gf::vec_add(&c, &shift).unwrap();
        let moved = amd::AmdCodeword::from_slice(&params, &moved).unwrap();
        prop_assert_eq!(amd::amd_decode(&params, &moved).unwrap(), None);
    }
}

/// Replays a fixed list of field values as the randomness of `FieldSpec::random`,
/// which draws a high and a low word per element.
struct Tape {
    words: Vec<u64>,
    pos: usize,
}

impl Tape {
    fn new(values: &[u64]) -> Self {
        Self {
            words: values.iter().flat_map(|&v| [0, v]).collect(),
            pos: 0,
        }
    }
}

impl RngCore for Tape {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }
    fn next_u64(&mut self) -> u64 {
        let w = *self.words.get(self.pos).expect("tape exhausted");
        self.pos += 1;
        w
    }
    fn fill_bytes(&mut self, _: &mut [u8]) {
        unreachable!("sharing draws whole words")
    }
    fn try_fill_bytes(&mut self, _: &mut [u8]) -> Result<(), rand::Error> {
        unreachable!("sharing draws whole words")
    }
}

fn tapes(q: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..q.pow(len as u32)).map(move |mut k| {
        (0..len)
            .map(|_| {
                let v = k % q;
                k /= q;
                v
            })
            .collect()
    })
}

fn view(shares: &ShareVector, set: &BTreeSet<usize>) -> Vec<Vec<u128>> {
    set.iter()
        .map(|&i| {
            shares.entries[i]
                .as_ref()
                .unwrap()
                .iter()
                .map(FieldElement::value)
                .collect()
        })
        .collect()
}

/// Exact distribution of the shares in `set` for one secret, over every
/// outcome of the dealer's coins.
fn distribution(
    deal: &dyn Fn(&mut Tape) -> ShareVector,
    q: u64,
    coins: usize,
    set: &BTreeSet<usize>,
) -> BTreeMap<Vec<Vec<u128>>, u64> {
    let mut counts = BTreeMap::new();
    for t in tapes(q, coins) {
        let mut tape = Tape::new(&t);
        let shares = deal(&mut tape);
        assert_eq!(tape.pos, tape.words.len(), "unused coins");
        *counts.entry(view(&shares, set)).or_insert(0) += 1;
    }
    counts
}

fn unqualified_sets(structure: &AccessStructure) -> Vec<BTreeSet<usize>> {
    let n = structure.n();
    (0u32..1 << n)
        .map(|mask| {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .collect::<BTreeSet<_>>()
        })
        .filter(|s| !s.is_empty() && !structure.is_qualified(s))
        .collect()
}

/// Every unqualified view has the same distribution for every secret.
fn assert_private(
    spec: FieldSpec,
    structure: &AccessStructure,
    secret_len: usize,
    coins: usize,
    star: Option<&AmdParams>,
) {
    let q = spec.order() as u64;
    for set in unqualified_sets(structure) {
        let mut reference = None;
        for secret in tapes(q, secret_len) {
            let secret: Vec<FieldElement> = secret
                .iter()
                .map(|&v| spec.element(v as u128).unwrap())
                .collect();
            let deal = |tape: &mut Tape| match star {
                Some(p) => sss::share_star(structure, p, &secret, tape).unwrap(),
                None => sss::share(structure, &secret, tape).unwrap(),
            };
            let dist = distribution(&deal, q, coins, &set);
            match &reference {
                None => reference = Some(dist),
                Some(r) => assert_eq!(
                    r, &dist,
                    "{spec} {structure:?} set {set:?} leaks {secret:?}"
                ),
            }
        }
    }
}

#[test]
fn additive_sharing_is_private_over_gf2_and_gf3() {
    for spec in [FieldSpec::binary(1).unwrap(), FieldSpec::prime(3).unwrap()] {
        let structure = AccessStructure::additive(3).unwrap();
        // n - 1 random vectors of the secret's length.
        assert_private(spec, &structure, 2, 4, None);
    }
}

#[test]
fn shamir_sharing_is_private_over_gf3() {
    let spec = FieldSpec::prime(3).unwrap();
    let structure = AccessStructure::threshold(2, 2).unwrap();
    // One random coefficient per secret coordinate.
    assert_private(spec, &structure, 2, 2, None);
}

#[test]
fn robust_sharing_is_private_over_gf3() {
    let spec = FieldSpec::prime(3).unwrap();
    let params = AmdParams::new(spec, 2).unwrap();
    let structure = AccessStructure::additive(2).unwrap();
    // The AMD point x, then one random codeword of length d + 2.
    assert_private(spec, &structure, 2, 1 + 4, Some(&params));
}
