//! Built-in adversaries. They give lower bounds on what an attacker achieves;
//! the analytic bound is the upper line in every report.
//!
//! Strategies are stateless across trials: all per-trial state lives on the
//! stack of `choose` / `guess` / `shift` / `forge`.

use rand::RngCore;

use super::{
    ForgeAdversary, IndRelayAdversary, IndSssAdversary, RelayContext, RelayOracle, ShareOracle,
    ShiftAdversary, SssContext,
};
use crate::amd::{self, AmdCodeword};
use crate::gf::{self, FieldElement};
use crate::relay::Ciphertext;
use crate::sss::{self, ShareVector};

/// `s0 = 0` and a random `s1 != s0`.
fn distinct_secrets(ctx: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
    let s0 = gf::vec_zero(&ctx.spec, ctx.secret_len);
    let mut s1 = gf::vec_random(&ctx.spec, ctx.secret_len, rng);
    s1[0] = ctx.spec.random_nonzero(rng);
    [s0, s1]
}

fn coin(rng: &mut dyn RngCore) -> bool {
    rng.next_u32() & 1 == 1
}

/// A guess that depends on the view but carries no information about `b`.
fn view_bit(values: &[FieldElement]) -> bool {
    values.iter().fold(0u128, |acc, e| acc ^ e.value()) & 1 == 1
}

/// Offset on the shared vector whose decoding accepts a different message
/// with the best probability we know: the root-planting shift for AMD-coded
/// schemes, a random non-zero offset for plain linear ones.
fn forging_offset(
    ctx: &SssContext,
    secret: &[FieldElement],
    rng: &mut dyn RngCore,
) -> Vec<FieldElement> {
    match ctx.amd {
        // Redraw until the message part moves; otherwise decoding yields `s`.
        Some(params) => loop {
            let x_shift = ctx.spec.random_nonzero(rng);
            let mut roots: Vec<FieldElement> = Vec::with_capacity(params.d() + 1);
            while roots.len() < params.d() + 1 {
                let r = ctx.spec.random(rng);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let shift = amd::root_planting_shift(&params, secret, x_shift, &roots)
                .expect("distinct roots and non-zero shift");
            if shift.s.iter().any(|e| !e.is_zero()) {
                break shift.to_vec();
            }
        },
        None => {
            let mut v = gf::vec_zero(&ctx.spec, ctx.share_len);
            v[0] = ctx.spec.random_nonzero(rng);
            v
        }
    }
}

/// Per-share offsets that recover to `offset`.
fn lift(ctx: &SssContext, offset: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    sss::share_public(&ctx.structure, offset)
        .expect("offset matches the scheme")
        .entries
        .into_iter()
        .map(|e| e.expect("public sharing has every entry"))
        .collect()
}

/// A valid shared vector for some message other than `secret`.
fn replacement_vector(ctx: &SssContext, secret: &[FieldElement]) -> Vec<FieldElement> {
    let mut other = secret.to_vec();
    other[0] = other[0] + ctx.spec.one();
    match ctx.amd {
        Some(params) => amd::encode_with_x(&params, &other, ctx.spec.one())
            .expect("valid length")
            .to_vec(),
        None => other,
    }
}

/// Secret recovered from whatever shares were learned, if they are qualified.
fn recover_learned(
    ctx: &SssContext,
    learned: Vec<Option<Vec<FieldElement>>>,
) -> Option<Vec<FieldElement>> {
    let v = sss::recover(&ctx.structure, &ShareVector { entries: learned }).ok()??;
    Some(v[..ctx.secret_len].to_vec())
}

fn budget_of(budget: Option<usize>, ctx: &SssContext) -> usize {
    budget.unwrap_or(ctx.budget).min(ctx.n())
}

fn zero_share(ctx: &SssContext) -> Vec<FieldElement> {
    gf::vec_zero(&ctx.spec, ctx.share_len)
}

// ---------------------------------------------------------------- Ind-SSS

/// No oracle calls; always answers `b' = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Passive;

/// Random secrets and a coin-flip guess.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomGuesser;

/// Corrupts the first `budget` shares (or paths). With a qualified set it
/// recovers the secret; otherwise it guesses from its view.
#[derive(Debug, Clone, Copy, Default)]
pub struct Corrupter {
    /// `None` uses the context budget; `Some(usize::MAX)` corrupts everything.
    pub budget: Option<usize>,
}

impl Corrupter {
    pub fn unqualified() -> Self {
        Self { budget: None }
    }

    pub fn full() -> Self {
        Self {
            budget: Some(usize::MAX),
        }
    }

    pub fn with_budget(k: usize) -> Self {
        Self { budget: Some(k) }
    }

    fn label(&self) -> String {
        match self.budget {
            None => "corrupt-unqualified".into(),
            Some(usize::MAX) => "full-corrupter".into(),
            Some(k) => format!("corrupt-{k}"),
        }
    }
}

impl IndSssAdversary for Passive {
    fn name(&self) -> String {
        "passive".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        distinct_secrets(ctx, rng)
    }
    fn guess(
        &self,
        _: &SssContext,
        _: &[Vec<FieldElement>; 2],
        _: &mut dyn ShareOracle,
        _: &mut dyn RngCore,
    ) -> bool {
        false
    }
}

impl IndSssAdversary for RandomGuesser {
    fn name(&self) -> String {
        "random-guesser".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        [
            gf::vec_random(&ctx.spec, ctx.secret_len, rng),
            gf::vec_random(&ctx.spec, ctx.secret_len, rng),
        ]
    }
    fn guess(
        &self,
        _: &SssContext,
        _: &[Vec<FieldElement>; 2],
        _: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> bool {
        coin(rng)
    }
}

impl IndSssAdversary for Corrupter {
    fn name(&self) -> String {
        self.label()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        distinct_secrets(ctx, rng)
    }
    fn guess(
        &self,
        ctx: &SssContext,
        secrets: &[Vec<FieldElement>; 2],
        oracle: &mut dyn ShareOracle,
        _: &mut dyn RngCore,
    ) -> bool {
        let k = budget_of(self.budget, ctx);
        let mut learned = vec![None; ctx.n()];
        for (i, slot) in learned.iter_mut().enumerate().take(k) {
            *slot = oracle.corrupt(i);
        }
        match recover_learned(ctx, learned.clone()) {
            Some(s) => s == secrets[1],
            None => view_bit(&learned.into_iter().flatten().flatten().collect::<Vec<_>>()),
        }
    }
}

// ---------------------------------------------------------- Shift-Robust

/// All-zero shift, no corruption.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroShift;

/// Adds a fixed offset to one share (or one edge ciphertext) without looking.
#[derive(Debug, Clone, Default)]
pub struct BlindShift {
    /// Share / path index; defaults to the last one.
    pub target: Option<usize>,
    /// Edge on the path (relay games only); defaults to the last edge.
    pub edge: Option<usize>,
    /// Defaults to the all-ones vector.
    pub delta: Option<Vec<FieldElement>>,
}

impl BlindShift {
    fn delta(&self, ctx: &SssContext) -> Vec<FieldElement> {
        self.delta
            .clone()
            .unwrap_or_else(|| vec![ctx.spec.one(); ctx.share_len])
    }
    fn target(&self, n: usize) -> usize {
        self.target.unwrap_or(n - 1)
    }
}

/// Adds a fresh uniform offset to one share.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomShift;

/// Knows `s` and adds the root-planting offset, lifted to the shares; the
/// shifted codeword decodes to a different message for `d + 1` values of `x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RootPlanting;

/// Withholds share (path) 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct DropShare;

impl ShiftAdversary for ZeroShift {
    fn name(&self) -> String {
        "zero-shift".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        _: &[FieldElement],
        _: &mut dyn ShareOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        vec![Some(zero_share(ctx)); ctx.n()]
    }
}

impl ShiftAdversary for BlindShift {
    fn name(&self) -> String {
        "blind-shift".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        _: &[FieldElement],
        _: &mut dyn ShareOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        let mut a = vec![Some(zero_share(ctx)); ctx.n()];
        a[self.target(ctx.n())] = Some(self.delta(ctx));
        a
    }
}

impl ShiftAdversary for RandomShift {
    fn name(&self) -> String {
        "random-shift".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        _: &[FieldElement],
        _: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        let mut a = vec![Some(zero_share(ctx)); ctx.n()];
        a[ctx.n() - 1] = Some(gf::vec_random(&ctx.spec, ctx.share_len, rng));
        a
    }
}

impl ShiftAdversary for RootPlanting {
    fn name(&self) -> String {
        "root-planting".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        s: &[FieldElement],
        _: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        lift(ctx, &forging_offset(ctx, s, rng))
            .into_iter()
            .map(Some)
            .collect()
    }
}

impl ShiftAdversary for DropShare {
    fn name(&self) -> String {
        "drop-share".into()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        _: &[FieldElement],
        _: &mut dyn ShareOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        let mut a = vec![Some(zero_share(ctx)); ctx.n()];
        a[0] = None;
        a
    }
}

/// Corrupted shares are replayed with the lifted offset added; with a
/// qualified set every share is replaced by a sharing of another message.
impl ShiftAdversary for Corrupter {
    fn name(&self) -> String {
        self.label()
    }
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        gf::vec_random(&ctx.spec, ctx.secret_len, rng)
    }
    fn shift(
        &self,
        ctx: &SssContext,
        s: &[FieldElement],
        oracle: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        let k = budget_of(self.budget, ctx);
        let learned: Vec<Option<Vec<FieldElement>>> = (0..ctx.n())
            .map(|i| if i < k { oracle.corrupt(i) } else { None })
            .collect();
        if recover_learned(ctx, learned.clone()).is_some() {
            return lift(ctx, &replacement_vector(ctx, s))
                .into_iter()
                .map(Some)
                .collect();
        }
        let offsets = lift(ctx, &forging_offset(ctx, s, rng));
        offsets
            .into_iter()
            .zip(learned)
            .map(|(off, share)| match share {
                Some(sh) => Some(gf::vec_add(&sh, &off).expect("same field")),
                None => Some(off),
            })
            .collect()
    }
}

// ------------------------------------------------------------- relay games

/// Relays `c0` along every repeater of `path`, letting `tamper` change the
/// ciphertext on each edge before it is delivered. `None` if a relay refused.
fn relay_path(
    oracle: &mut dyn RelayOracle,
    ctx: &RelayContext,
    path: usize,
    c0: &[FieldElement],
    from_node: usize,
    mut tamper: impl FnMut(usize, &mut Ciphertext),
) -> Option<Ciphertext> {
    let len = ctx.lengths()[path];
    let mut c = c0.to_vec();
    for node in from_node..len {
        tamper(node - 1, &mut c);
        c = oracle.relay(path, node, &c)?;
    }
    tamper(len - 1, &mut c);
    Some(c)
}

/// Keys learned by corrupting repeater 1 of each of the first `k` paths
/// that have one.
fn corrupt_first_repeaters(
    oracle: &mut dyn RelayOracle,
    ctx: &RelayContext,
    k: usize,
) -> Vec<Option<(Ciphertext, Ciphertext)>> {
    (0..ctx.n())
        .map(|i| {
            if i < k && ctx.lengths()[i] >= 2 {
                oracle.corrupt(i, 1)
            } else {
                None
            }
        })
        .collect()
}

impl IndRelayAdversary for Passive {
    fn name(&self) -> String {
        "passive".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        distinct_secrets(&ctx.sss, rng)
    }
    fn guess(
        &self,
        _: &RelayContext,
        _: &[Vec<FieldElement>; 2],
        _: &[Ciphertext],
        _: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> bool {
        false
    }
}

impl IndRelayAdversary for RandomGuesser {
    fn name(&self) -> String {
        "random-guesser".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        IndSssAdversary::choose(self, &ctx.sss, rng)
    }
    fn guess(
        &self,
        _: &RelayContext,
        _: &[Vec<FieldElement>; 2],
        _: &[Ciphertext],
        _: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> bool {
        coin(rng)
    }
}

/// Drives every relay honestly and guesses from the ciphertexts it sees.
#[derive(Debug, Clone, Copy, Default)]
pub struct RelayObserver;

impl IndRelayAdversary for RelayObserver {
    fn name(&self) -> String {
        "relay-observer".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        distinct_secrets(&ctx.sss, rng)
    }
    fn guess(
        &self,
        ctx: &RelayContext,
        _: &[Vec<FieldElement>; 2],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> bool {
        let mut seen = Vec::new();
        for (i, c0) in c.iter().enumerate() {
            if let Some(last) = relay_path(oracle, ctx, i, c0, 1, |_, _| {}) {
                seen.extend(last);
            }
        }
        view_bit(&seen)
    }
}

impl IndRelayAdversary for Corrupter {
    fn name(&self) -> String {
        self.label()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        distinct_secrets(&ctx.sss, rng)
    }
    fn guess(
        &self,
        ctx: &RelayContext,
        secrets: &[Vec<FieldElement>; 2],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> bool {
        let k = budget_of(self.budget, &ctx.sss);
        let keys = corrupt_first_repeaters(oracle, ctx, k);
        let learned: Vec<Option<Vec<FieldElement>>> = keys
            .iter()
            .zip(c)
            .map(|(k, c)| {
                k.as_ref()
                    .map(|(q0, _)| gf::vec_sub(c, q0).expect("same field"))
            })
            .collect();
        match recover_learned(&ctx.sss, learned.clone()) {
            Some(s) => s == secrets[1],
            None => view_bit(&learned.into_iter().flatten().flatten().collect::<Vec<_>>()),
        }
    }
}

/// Relays everything faithfully and delivers to Bob.
#[derive(Debug, Clone, Copy, Default)]
pub struct Honest;

/// Honest except path `path` (default 0) delivers nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct DropPath {
    pub path: Option<usize>,
}

/// Delivers uniform ciphertexts without relaying.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomForge;

/// Relays path 0 through repeater 1, then tries to corrupt that repeater
/// (always bot) and blindly shifts the last edge.
#[derive(Debug, Clone, Copy, Default)]
pub struct LateCorrupter;

fn honest_forward(
    ctx: &RelayContext,
    c: &[Ciphertext],
    oracle: &mut dyn RelayOracle,
    mut tamper: impl FnMut(usize, usize, &mut Ciphertext),
) -> Vec<Option<Ciphertext>> {
    c.iter()
        .enumerate()
        .map(|(i, c0)| relay_path(oracle, ctx, i, c0, 1, |e, c| tamper(i, e, c)))
        .collect()
}

fn random_secret(ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
    gf::vec_random(&ctx.sss.spec, ctx.sss.secret_len, rng)
}

impl ForgeAdversary for Honest {
    fn name(&self) -> String {
        "honest".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        _: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        honest_forward(ctx, c, oracle, |_, _, _| {})
    }
}

impl ForgeAdversary for DropPath {
    fn name(&self) -> String {
        "drop-path".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        _: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        let mut out = honest_forward(ctx, c, oracle, |_, _, _| {});
        out[self.path.unwrap_or(0)] = None;
        out
    }
}

impl ForgeAdversary for BlindShift {
    fn name(&self) -> String {
        "blind-shift".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        _: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        let path = self.target(ctx.n());
        let edge = self.edge.unwrap_or(ctx.lengths()[path] - 1);
        let delta = self.delta(&ctx.sss);
        honest_forward(ctx, c, oracle, |i, e, c| {
            if i == path && e == edge {
                *c = gf::vec_add(c, &delta).expect("same field");
            }
        })
    }
}

impl ForgeAdversary for RandomForge {
    fn name(&self) -> String {
        "random-forge".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        _: &[FieldElement],
        _: &[Ciphertext],
        _: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        (0..ctx.n())
            .map(|_| Some(gf::vec_random(&ctx.sss.spec, ctx.sss.share_len, rng)))
            .collect()
    }
}

impl ForgeAdversary for RootPlanting {
    fn name(&self) -> String {
        "root-planting".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        s: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        let offsets = lift(&ctx.sss, &forging_offset(&ctx.sss, s, rng));
        honest_forward(ctx, c, oracle, |i, e, c| {
            if e == ctx.lengths()[i] - 1 {
                *c = gf::vec_add(c, &offsets[i]).expect("same field");
            }
        })
    }
}

/// Corrupts repeater 1 on the first `budget` paths, then injects its own
/// edge-1 ciphertexts there: the learned share plus the lifted offset, or a
/// full replacement sharing when the corrupted set is qualified.
impl ForgeAdversary for Corrupter {
    fn name(&self) -> String {
        self.label()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        s: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        let k = budget_of(self.budget, &ctx.sss);
        let keys = corrupt_first_repeaters(oracle, ctx, k);
        let learned: Vec<Option<Vec<FieldElement>>> = keys
            .iter()
            .zip(c)
            .map(|(k, c)| {
                k.as_ref()
                    .map(|(q0, _)| gf::vec_sub(c, q0).expect("same field"))
            })
            .collect();
        let qualified = recover_learned(&ctx.sss, learned.clone()).is_some();
        let targets = if qualified {
            lift(&ctx.sss, &replacement_vector(&ctx.sss, s))
        } else {
            let offsets = lift(&ctx.sss, &forging_offset(&ctx.sss, s, rng));
            learned
                .iter()
                .zip(offsets)
                .map(|(l, off)| match l {
                    Some(sh) => gf::vec_add(sh, &off).expect("same field"),
                    None => off,
                })
                .collect()
        };
        (0..ctx.n())
            .map(|i| match &keys[i] {
                // Inject on edge 1 under the learned key and let the rest relay.
                Some((_, q1)) => {
                    let c1 = gf::vec_add(&targets[i], q1).expect("same field");
                    relay_path(oracle, ctx, i, &c1, 2, |_, _| {})
                }
                // Uncorrupted: targets[i] is an offset, added on the last edge.
                None => relay_path(oracle, ctx, i, &c[i], 1, |e, c| {
                    if e == ctx.lengths()[i] - 1 && !qualified {
                        *c = gf::vec_add(c, &targets[i]).expect("same field");
                    }
                }),
            })
            .collect()
    }
}

impl ForgeAdversary for LateCorrupter {
    fn name(&self) -> String {
        "late-corrupter".into()
    }
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        random_secret(ctx, rng)
    }
    fn forge(
        &self,
        ctx: &RelayContext,
        _: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        _: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>> {
        let mut out = Vec::with_capacity(ctx.n());
        for (i, c0) in c.iter().enumerate() {
            let len = ctx.lengths()[i];
            if i == 0 && len >= 2 {
                let c1 = oracle.relay(0, 1, c0);
                // Repeater 1 already deleted its keys.
                let leaked = oracle.corrupt(0, 1);
                debug_assert!(leaked.is_none());
                out.push(c1.and_then(|c1| {
                    relay_path(oracle, ctx, 0, &c1, 2, |e, c| {
                        if e == len - 1 {
                            *c = gf::vec_add(c, &vec![ctx.sss.spec.one(); ctx.sss.share_len])
                                .expect("same field");
                        }
                    })
                }));
            } else {
                out.push(relay_path(oracle, ctx, i, c0, 1, |_, _| {}));
            }
        }
        out
    }
}

// ---------------------------------------------------------------- registry

pub const IND_SSS_NAMES: &[&str] = &[
    "passive",
    "random-guesser",
    "corrupt-unqualified",
    "full-corrupter",
];
pub const SHIFT_NAMES: &[&str] = &[
    "zero-shift",
    "blind-shift",
    "random-shift",
    "root-planting",
    "drop-share",
    "corrupt-unqualified",
    "full-corrupter",
];
pub const IND_RELAY_NAMES: &[&str] = &[
    "passive",
    "random-guesser",
    "relay-observer",
    "corrupt-unqualified",
    "full-corrupter",
];
pub const FORGE_NAMES: &[&str] = &[
    "honest",
    "drop-path",
    "blind-shift",
    "random-forge",
    "root-planting",
    "corrupt-unqualified",
    "full-corrupter",
    "late-corrupter",
];

/// Whether the named adversary corrupts a qualified set by design.
pub fn is_qualified_by_design(name: &str) -> bool {
    name == "full-corrupter"
}

pub fn ind_sss(name: &str) -> Option<Box<dyn IndSssAdversary + Sync>> {
    Some(match name {
        "passive" => Box::new(Passive),
        "random-guesser" => Box::new(RandomGuesser),
        "corrupt-unqualified" => Box::new(Corrupter::unqualified()),
        "full-corrupter" => Box::new(Corrupter::full()),
        _ => return None,
    })
}

pub fn shift(name: &str) -> Option<Box<dyn ShiftAdversary + Sync>> {
    Some(match name {
        "zero-shift" => Box::new(ZeroShift),
        "blind-shift" => Box::new(BlindShift::default()),
        "random-shift" => Box::new(RandomShift),
        "root-planting" => Box::new(RootPlanting),
        "drop-share" => Box::new(DropShare),
        "corrupt-unqualified" => Box::new(Corrupter::unqualified()),
        "full-corrupter" => Box::new(Corrupter::full()),
        _ => return None,
    })
}

pub fn ind_relay(name: &str) -> Option<Box<dyn IndRelayAdversary + Sync>> {
    Some(match name {
        "passive" => Box::new(Passive),
        "random-guesser" => Box::new(RandomGuesser),
        "relay-observer" => Box::new(RelayObserver),
        "corrupt-unqualified" => Box::new(Corrupter::unqualified()),
        "full-corrupter" => Box::new(Corrupter::full()),
        _ => return None,
    })
}

pub fn forge(name: &str) -> Option<Box<dyn ForgeAdversary + Sync>> {
    Some(match name {
        "honest" => Box::new(Honest),
        "drop-path" => Box::new(DropPath::default()),
        "blind-shift" => Box::new(BlindShift::default()),
        "random-forge" => Box::new(RandomForge),
        "root-planting" => Box::new(RootPlanting),
        "corrupt-unqualified" => Box::new(Corrupter::unqualified()),
        "full-corrupter" => Box::new(Corrupter::full()),
        "late-corrupter" => Box::new(LateCorrupter),
        _ => return None,
    })
}

/// Build the blind-shift adversary from explicit parameters.
pub fn blind_shift(
    target: Option<usize>,
    edge: Option<usize>,
    delta: Option<Vec<FieldElement>>,
) -> BlindShift {
    BlindShift {
        target,
        edge,
        delta,
    }
}

/// Exposed so tests can verify the root-planting offset independently.
pub fn root_planting_codeword_offset(
    ctx: &SssContext,
    secret: &[FieldElement],
    rng: &mut dyn RngCore,
) -> Option<AmdCodeword> {
    let params = ctx.amd?;
    AmdCodeword::from_slice(&params, &forging_offset(ctx, secret, rng)).ok()
}
