//! The SECOQC parity-check integrity protocol and the key-shift attack that
//! makes Bob misidentify honest paths.
//!
//! Alice and Bob first XOR-share `S = κ1‖κ2‖κ3‖s` over `n` paths. Alice then
//! sends `(Λ, r = Λs, T = MAC_κ(Λ‖r))` on every path and Bob accepts if some
//! path passes both the parity check and the tag check under his own key
//! `κ'`. The MAC is Wegman-Carter: a polynomial hash keyed by `κ1` over
//! GF(2^m), padded with `κ2`. Because the pad enters by XOR, an adversary
//! who shifts Bob's `κ2` share by `Δ2` and the tag on its own path by the
//! same `Δ2` gets its path verified while every honest path fails.

use std::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::run_trials;
use crate::gf::{FieldElement, FieldSpec, GfError};
use crate::rng::{trial_rng, Stream};

#[derive(Debug, Error)]
pub enum SecoqcError {
    #[error("message of {bits} bits exceeds the MAC limit of {max} bits")]
    Oversize { bits: usize, max: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no path {0}")]
    NoSuchPath(usize),
    #[error("bit index {index} out of range for {len} bits")]
    BitIndex { index: usize, len: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A string of bits, most significant first when rendered as hex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen()).collect())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u128(value: u128, len: usize) -> Self {
        Self((0..len).rev().map(|k| (value >> k) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn flip(&mut self, index: usize) -> Result<(), SecoqcError> {
        let len = self.0.len();
        let bit = self
            .0
            .get_mut(index)
            .ok_or(SecoqcError::BitIndex { index, len })?;
        *bit = !*bit;
        Ok(())
    }

    /// Bitwise XOR; the shorter operand is treated as zero-extended.
    pub fn xor(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let at = |s: &Self, k: usize| s.0.get(k).copied().unwrap_or(false);
        Self((0..len).map(|k| at(self, k) ^ at(other, k)).collect())
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .fold(false, |acc, (a, b)| acc ^ (a & b))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Self(bits)
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        Self(self.0[start..start + len].to_vec())
    }

    /// Value of at most 128 bits.
    pub fn to_u128(&self) -> u128 {
        debug_assert!(self.len() <= 128);
        self.0.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128)
    }

    /// Lowercase hex, left-padded with zero bits to a whole number of nibbles.
    pub fn to_hex(&self) -> String {
        let pad = (4 - self.len() % 4) % 4;
        let mut bits = vec![false; pad];
        bits.extend_from_slice(&self.0);
        bits.chunks(4)
            .map(|nib| {
                let v = nib.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}b:{})", self.len(), self.to_hex())
    }
}

/// Protocol dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecoqcParams {
    /// Tag and pad width; the hash works over GF(2^m).
    pub m: u32,
    /// Parity rows of `Λ`.
    pub m_pc: usize,
    /// Secret bits kept after privacy amplification; `s` has `n_s + m_pc` bits.
    pub n_s: usize,
    /// Number of paths.
    pub paths: usize,
    /// Longest message the MAC accepts.
    pub max_message_bits: usize,
}

impl Default for SecoqcParams {
    fn default() -> Self {
        Self {
            m: 64,
            m_pc: 32,
            n_s: 128,
            paths: 3,
            max_message_bits: 1 << 20,
        }
    }
}

impl SecoqcParams {
    pub fn validate(&self) -> Result<(), SecoqcError> {
        if self.m == 0 || self.m > 127 {
            return Err(SecoqcError::Params(format!(
                "m must be in 1..=127, got {}",
                self.m
            )));
        }
        if self.m_pc == 0 || self.paths == 0 {
            return Err(SecoqcError::Params(
                "m_pc and paths must be positive".into(),
            ));
        }
        if self.message_bits() > self.max_message_bits {
            return Err(SecoqcError::Oversize {
                bits: self.message_bits(),
                max: self.max_message_bits,
            });
        }
        Ok(())
    }

    pub fn tag_field(&self) -> Result<FieldSpec, SecoqcError> {
        Ok(FieldSpec::binary(self.m)?)
    }

    /// Bits of `s`, including the `m_pc` that privacy amplification removes.
    pub fn secret_bits(&self) -> usize {
        self.n_s + self.m_pc
    }

    /// Bits of the shared string `κ1‖κ2‖κ3‖s`.
    pub fn shared_bits(&self) -> usize {
        3 * self.m as usize + self.secret_bits()
    }

    /// Bits of `Λ‖r`.
    pub fn message_bits(&self) -> usize {
        self.m_pc * self.secret_bits() + self.m_pc
    }
}

/// `κ1‖κ2‖κ3`: hash index and two one-time pads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcMacKey {
    pub k1: FieldElement,
    pub k2: FieldElement,
    pub k3: FieldElement,
}

/// Wegman-Carter MAC over GF(2^m).
#[derive(Debug, Clone)]
pub struct WcMac {
    spec: FieldSpec,
    max_bits: usize,
}

impl WcMac {
    pub fn new(m: u32, max_bits: usize) -> Result<Self, SecoqcError> {
        Ok(Self {
            spec: FieldSpec::binary(m)?,
            max_bits,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Message blocks of `m` bits (the last zero-padded) followed by the bit length.
    fn blocks(&self, msg: &BitString) -> Result<Vec<FieldElement>, SecoqcError> {
        if msg.len() > self.max_bits {
            return Err(SecoqcError::Oversize {
                bits: msg.len(),
                max: self.max_bits,
            });
        }
        let m = self.spec.degree() as usize;
        let mut blocks = Vec::with_capacity(msg.len() / m + 2);
        for chunk in msg.bits().chunks(m) {
            let mut v = chunk.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
            v <<= m - chunk.len();
            blocks.push(self.spec.element(v)?);
        }
        blocks.push(self.spec.element(msg.len() as u128 & ((1u128 << m) - 1))?);
        Ok(blocks)
    }

    /// `f_κ1(msg) = Σ b_i κ1^(L+1-i)` over blocks `b_0..b_L`; no constant
    /// term, so `κ1 = 0` hashes everything to zero.
    pub fn hash(&self, k1: &FieldElement, msg: &BitString) -> Result<FieldElement, SecoqcError> {
        let mut acc = self.spec.zero();
        for b in self.blocks(msg)? {
            acc = (acc + b) * *k1;
        }
        Ok(acc)
    }

    /// `f_κ1(msg) ⊕ pad`.
    pub fn tag_with(
        &self,
        k1: &FieldElement,
        pad: &FieldElement,
        msg: &BitString,
    ) -> Result<FieldElement, SecoqcError> {
        Ok(self.hash(k1, msg)? + *pad)
    }

    /// First use of the key: pad `κ2`.
    pub fn tag(&self, key: &WcMacKey, msg: &BitString) -> Result<FieldElement, SecoqcError> {
        self.tag_with(&key.k1, &key.k2, msg)
    }

    pub fn verify(
        &self,
        key: &WcMacKey,
        msg: &BitString,
        tag: &FieldElement,
    ) -> Result<bool, SecoqcError> {
        Ok(self.tag(key, msg)? == *tag)
    }
}

/// `(Λ, r, T)` as carried on one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecoqcMessage {
    /// `m_pc` rows of `n_s + m_pc` bits.
    pub lambda: Vec<BitString>,
    pub r: BitString,
    pub tag: FieldElement,
}

impl SecoqcMessage {
    /// `Λ‖r`, row-major.
    pub fn authenticated(&self) -> BitString {
        let mut bits = Vec::new();
        for row in &self.lambda {
            bits.extend_from_slice(row.bits());
        }
        bits.extend_from_slice(self.r.bits());
        BitString(bits)
    }
}

/// `Λs` over GF(2).
pub fn parity(lambda: &[BitString], s: &BitString) -> BitString {
    BitString(lambda.iter().map(|row| row.dot(s)).collect())
}

/// A party's reconstruction of `κ‖s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedKey {
    pub mac: WcMacKey,
    pub s: BitString,
}

impl SharedKey {
    pub fn parse(
        params: &SecoqcParams,
        spec: &FieldSpec,
        bits: &BitString,
    ) -> Result<Self, SecoqcError> {
        let m = params.m as usize;
        let k = |i: usize| spec.element(bits.slice(i * m, m).to_u128());
        Ok(Self {
            mac: WcMacKey {
                k1: k(0)?,
                k2: k(1)?,
                k3: k(2)?,
            },
            s: bits.slice(3 * m, params.secret_bits()),
        })
    }
}

/// Deviations from the honest protocol, all on Bob's side of a path.
#[derive(Debug, Clone, Default)]
pub struct Interference {
    /// `(path, Δ)`: XOR `Δ` into the `κ2` part of Bob's share on `path`.
    pub key_shift: Option<(usize, FieldElement)>,
    /// `(path, Δ)`: XOR `Δ` into the tag Bob receives on `path`.
    pub tag_shifts: Vec<(usize, FieldElement)>,
    /// Flip this bit of `s` in Bob's share on path 0.
    pub secret_flip: Option<usize>,
}

/// The shifted-tag adversary: it sits on one path, shifts Bob's `κ2` share
/// in the sharing phase and the tag in the verification phase by one `Δ2`.
#[derive(Debug, Clone)]
pub struct ShiftedTagAdversary {
    pub path: usize,
    pub delta2: FieldElement,
}

impl ShiftedTagAdversary {
    pub fn interference(&self) -> Interference {
        Interference {
            key_shift: Some((self.path, self.delta2)),
            tag_shifts: vec![(self.path, self.delta2)],
            secret_flip: None,
        }
    }
}

/// Bob's checks on one path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathVerdict {
    /// 1-based.
    pub path: usize,
    pub parity_ok: bool,
    pub tag_ok: bool,
    /// Both checks pass; Bob regards the path as honest.
    pub valid: bool,
    pub tag: String,
}

/// Steps 3 and 4, recorded without effect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epilogue {
    /// Bob's reply tag `f_κ1'(b) ⊕ κ3'` verifies under Alice's key.
    pub reply_verified: bool,
    /// Bits privacy amplification would discard; none are removed here.
    pub bits_to_remove: usize,
}

/// One protocol execution.
#[derive(Debug, Clone)]
pub struct SecoqcRun {
    pub alice: SharedKey,
    pub bob: SharedKey,
    pub sent: SecoqcMessage,
    pub received: Vec<SecoqcMessage>,
    pub verdicts: Vec<PathVerdict>,
    pub accept: bool,
    pub epilogue: Epilogue,
}

/// Execute the protocol with optional interference.
pub fn secoqc_run<R: RngCore + ?Sized>(
    params: &SecoqcParams,
    interference: &Interference,
    rng: &mut R,
) -> Result<SecoqcRun, SecoqcError> {
    params.validate()?;
    let mac = WcMac::new(params.m, params.max_message_bits)?;
    let spec = *mac.spec();
    let n = params.paths;
    let m = params.m as usize;
    let check_path = |p: usize| {
        if p < n {
            Ok(())
        } else {
            Err(SecoqcError::NoSuchPath(p))
        }
    };

    // Step 1: XOR sharing of κ‖s over the paths.
    let total = BitString::random(params.shared_bits(), rng);
    let mut alice_shares: Vec<BitString> = (0..n - 1)
        .map(|_| BitString::random(params.shared_bits(), rng))
        .collect();
    let last = alice_shares
        .iter()
        .fold(total.clone(), |acc, sh| acc.xor(sh));
    alice_shares.push(last);
    let mut bob_shares = alice_shares.clone();
    if let Some((p, delta)) = interference.key_shift {
        check_path(p)?;
        let shift = BitString::zeros(m).concat(&BitString::from_u128(delta.value(), m));
        bob_shares[p] = bob_shares[p].xor(&shift);
    }
    if let Some(bit) = interference.secret_flip {
        let index = 3 * m + bit;
        if bit >= params.secret_bits() {
            return Err(SecoqcError::BitIndex {
                index: bit,
                len: params.secret_bits(),
            });
        }
        bob_shares[0].flip(index)?;
    }
    let combine = |shares: &[BitString]| {
        shares
            .iter()
            .fold(BitString::zeros(params.shared_bits()), |acc, sh| {
                acc.xor(sh)
            })
    };
    let alice = SharedKey::parse(params, &spec, &combine(&alice_shares))?;
    let bob = SharedKey::parse(params, &spec, &combine(&bob_shares))?;

    // Step 2: parity check plus tag on every path.
    let lambda: Vec<BitString> = (0..params.m_pc)
        .map(|_| BitString::random(params.secret_bits(), rng))
        .collect();
    let r = parity(&lambda, &alice.s);
    let mut sent = SecoqcMessage {
        lambda,
        r,
        tag: spec.zero(),
    };
    sent.tag = mac.tag(&alice.mac, &sent.authenticated())?;

    let mut received = vec![sent.clone(); n];
    for &(p, delta) in &interference.tag_shifts {
        check_path(p)?;
        received[p].tag = received[p].tag + delta;
    }
    let mut verdicts = Vec::with_capacity(n);
    for (i, msg) in received.iter().enumerate() {
        let parity_ok = parity(&msg.lambda, &bob.s) == msg.r;
        let tag_ok = mac.verify(&bob.mac, &msg.authenticated(), &msg.tag)?;
        verdicts.push(PathVerdict {
            path: i + 1,
            parity_ok,
            tag_ok,
            valid: parity_ok && tag_ok,
            tag: msg.tag.to_hex(),
        });
    }
    let accept = verdicts.iter().any(|v| v.valid);

    // Steps 3 and 4: reply tag under κ3, amplification left as a no-op.
    let b = BitString::from_bits(vec![accept]);
    let reply = mac.tag_with(&bob.mac.k1, &bob.mac.k3, &b)?;
    let epilogue = Epilogue {
        reply_verified: mac.tag_with(&alice.mac.k1, &alice.mac.k3, &b)? == reply,
        bits_to_remove: params.m_pc,
    };

    Ok(SecoqcRun {
        alice,
        bob,
        sent,
        received,
        verdicts,
        accept,
        epilogue,
    })
}

/// All paths honest.
pub fn secoqc_honest_run<R: RngCore + ?Sized>(
    params: &SecoqcParams,
    rng: &mut R,
) -> Result<SecoqcRun, SecoqcError> {
    secoqc_run(params, &Interference::default(), rng)
}

/// `T_i ⊕ T_n` for an honest path `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagDifference {
    pub path: usize,
    pub xor: String,
    /// `T_i ⊕ T_n = Δ2`.
    pub equals_delta2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub paths: usize,
    /// 1-based path the adversary controls.
    pub corrupted_path: usize,
    pub delta2: String,
    /// Tag Alice sent.
    pub alice_tag: String,
    /// `MAC_κ'(Λ‖r)` under Bob's key.
    pub bob_expected_tag: String,
    pub verdicts: Vec<PathVerdict>,
    pub tag_differences: Vec<TagDifference>,
    pub accept: bool,
    /// `T ⊕ Δ2 = f_κ1(Λ‖r) ⊕ κ2 ⊕ Δ2 = MAC_κ'(Λ‖r)`.
    pub identity_holds: bool,
    /// Bob accepts, the corrupted path verifies and every honest path fails.
    pub success: bool,
    pub epilogue: Epilogue,
}

/// Run the shifted-tag attack with the adversary on the last path.
pub fn secoqc_attack<R: RngCore + ?Sized>(
    params: &SecoqcParams,
    delta2: &FieldElement,
    rng: &mut R,
) -> Result<AttackReport, SecoqcError> {
    let spec = params.tag_field()?;
    if delta2.spec() != spec {
        return Err(SecoqcError::Field(GfError::SpecMismatch(
            delta2.spec(),
            spec,
        )));
    }
    let adversary = ShiftedTagAdversary {
        path: params.paths - 1,
        delta2: *delta2,
    };
    let run = secoqc_run(params, &adversary.interference(), rng)?;
    let mac = WcMac::new(params.m, params.max_message_bits)?;
    let msg = run.sent.authenticated();
    let bob_expected = mac.tag(&run.bob.mac, &msg)?;
    let corrupted = adversary.path;
    let t_n = run.received[corrupted].tag;
    let lhs = run.sent.tag + *delta2;
    let middle = mac.hash(&run.alice.mac.k1, &msg)? + run.alice.mac.k2 + *delta2;
    let identity_holds = lhs == middle && middle == bob_expected && t_n == lhs;

    let tag_differences: Vec<TagDifference> = (0..corrupted)
        .map(|i| {
            let x = run.received[i].tag + t_n;
            TagDifference {
                path: i + 1,
                xor: x.to_hex(),
                equals_delta2: x == *delta2,
            }
        })
        .collect();
    let success = run.accept
        && run.verdicts[corrupted].valid
        && run.verdicts[..corrupted].iter().all(|v| !v.valid);
    Ok(AttackReport {
        paths: params.paths,
        corrupted_path: corrupted + 1,
        delta2: delta2.to_hex(),
        alice_tag: run.sent.tag.to_hex(),
        bob_expected_tag: bob_expected.to_hex(),
        verdicts: run.verdicts,
        tag_differences,
        accept: run.accept,
        identity_holds,
        success,
        epilogue: run.epilogue,
    })
}

/// Aggregate over many seeded attack runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSummary {
    pub trials: u64,
    pub seed: u64,
    pub delta2: String,
    pub successes: u64,
    pub success_rate: f64,
    pub identity_failures: u64,
    /// Report of trial 0.
    pub first: AttackReport,
}

/// `trials` independent attacks; trial `t` draws from stream `(seed, t)`.
pub fn attack_batch(
    params: &SecoqcParams,
    delta2: &FieldElement,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<AttackSummary, SecoqcError> {
    if trials == 0 {
        return Err(SecoqcError::Params("trials must be positive".into()));
    }
    let reports = run_trials(trials, jobs, |t| {
        secoqc_attack(params, delta2, &mut trial_rng(seed, t, Stream::Game))
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let successes = reports.iter().filter(|r| r.success).count() as u64;
    let identity_failures = reports.iter().filter(|r| !r.identity_holds).count() as u64;
    Ok(AttackSummary {
        trials,
        seed,
        delta2: delta2.to_hex(),
        successes,
        success_rate: successes as f64 / trials as f64,
        identity_failures,
        first: reports.into_iter().next().expect("trials > 0"),
    })
}
