//! The two reduction adversaries: an `Ind-Relay` adversary turned into an
//! `Ind-SSS` adversary, and a `Forge-Relay` adversary turned into a
//! `Shift-Robust-SSS` adversary.
//!
//! Both simulate the relay oracles without keys. Every value the simulation
//! would sample uniformly is drawn from a [`Tape`]. With a [`UniformTape`]
//! the reduction is the textbook one. With a [`CoupledTape`] the draws are
//! replaced by the values the direct game would have produced under the
//! same seed; they have the same distribution, and the wrapped adversary
//! then sees exactly the direct game's view, so win indicators can be
//! compared trial by trial.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use rand::RngCore;
use serde::Serialize;

use super::{
    draw_bit, forge_relay_trial, ind_relay_trial, ind_sss_trial, run_trials, shift_robust_trial,
    ForgeAdversary, IndRelayAdversary, IndSssAdversary, RelayContext, RelayOracle, ShareOracle,
    ShiftAdversary, SssContext, TrialOutcome, TrialRngs,
};
use crate::gf::{self, FieldElement};
use crate::relay::{sample_key_values, Ciphertext};
use crate::rng::{trial_rng, SimRng, Stream};
use crate::sss::{ShareVector, SharingScheme};

/// Source of the values the simulation treats as uniformly random.
pub trait Tape {
    /// First-edge ciphertext of a path.
    fn initial(&mut self, path: usize) -> Ciphertext;
    /// Output of a repeater on an uncorrupted path.
    fn relay_output(&mut self, path: usize, node: usize, delivered: &[FieldElement]) -> Ciphertext;
    /// Key of an edge the adversary has no ciphertext constraint on.
    fn unseen_key(&mut self, path: usize, edge: usize) -> Vec<FieldElement>;
    /// Shift of an uncorrupted path that was not fully relayed.
    fn unrelayed_shift(&mut self, path: usize, delivered: &[FieldElement]) -> Vec<FieldElement>;
}

/// Fresh uniform draws.
pub struct UniformTape {
    ctx: RelayContext,
    rng: SimRng,
}

impl UniformTape {
    pub fn new(ctx: &RelayContext, rng: SimRng) -> Self {
        Self {
            ctx: ctx.clone(),
            rng,
        }
    }

    fn draw(&mut self) -> Vec<FieldElement> {
        gf::vec_random(&self.ctx.sss.spec, self.ctx.sss.share_len, &mut self.rng)
    }
}

impl Tape for UniformTape {
    fn initial(&mut self, _: usize) -> Ciphertext {
        self.draw()
    }
    fn relay_output(&mut self, _: usize, _: usize, _: &[FieldElement]) -> Ciphertext {
        self.draw()
    }
    fn unseen_key(&mut self, _: usize, _: usize) -> Vec<FieldElement> {
        self.draw()
    }
    fn unrelayed_shift(&mut self, _: usize, _: &[FieldElement]) -> Vec<FieldElement> {
        self.draw()
    }
}

/// Values of the direct game: real shares and real keys.
pub struct CoupledTape {
    shares: ShareVector,
    keys: Vec<Vec<Vec<FieldElement>>>,
}

impl CoupledTape {
    pub fn new(shares: ShareVector, keys: Vec<Vec<Vec<FieldElement>>>) -> Self {
        Self { shares, keys }
    }

    fn share(&self, path: usize) -> &[FieldElement] {
        self.shares.entries[path]
            .as_deref()
            .expect("fresh sharing has every entry")
    }

    /// Rebuild the direct game's shares and keys for `trial`. `secret` picks
    /// the shared message from the game stream exactly as the games do.
    pub fn replay(
        scheme: &dyn SharingScheme,
        ctx: &RelayContext,
        seed: u64,
        trial: u64,
        secret: impl FnOnce(&mut SimRng) -> Vec<FieldElement>,
    ) -> Self {
        let mut game = trial_rng(seed, trial, Stream::Game);
        let s = secret(&mut game);
        let shares = scheme
            .share(&s, &mut game)
            .expect("secret validated by the game");
        let keys = sample_key_values(&ctx.net, &mut trial_rng(seed, trial, Stream::Keys));
        Self::new(shares, keys)
    }
}

impl Tape for CoupledTape {
    fn initial(&mut self, path: usize) -> Ciphertext {
        gf::vec_add(self.share(path), &self.keys[path][0]).expect("same field")
    }
    fn relay_output(&mut self, path: usize, node: usize, delivered: &[FieldElement]) -> Ciphertext {
        let k = &self.keys[path];
        gf::vec_add(
            &gf::vec_sub(delivered, &k[node - 1]).expect("same field"),
            &k[node],
        )
        .expect("same field")
    }
    fn unseen_key(&mut self, path: usize, edge: usize) -> Vec<FieldElement> {
        self.keys[path][edge].clone()
    }
    fn unrelayed_shift(&mut self, path: usize, delivered: &[FieldElement]) -> Vec<FieldElement> {
        let last = self.keys[path].len() - 1;
        let received = gf::vec_sub(delivered, &self.keys[path][last]).expect("same field");
        gf::vec_sub(&received, self.share(path)).expect("same field")
    }
}

/// Keyless simulation of `Relay` and `R.Corrupt` on top of `SSS.Corrupt`.
pub struct SimulatedRelay<'a> {
    ctx: &'a RelayContext,
    tape: &'a mut dyn Tape,
    outer: &'a mut dyn ShareOracle,
    initial: Vec<Ciphertext>,
    relayed: BTreeSet<(usize, usize)>,
    sent: BTreeMap<(usize, usize), Ciphertext>,
    delivered: BTreeMap<(usize, usize), Ciphertext>,
    derived_keys: BTreeMap<usize, Vec<Vec<FieldElement>>>,
    any_relay: bool,
    misuse: bool,
}

impl<'a> SimulatedRelay<'a> {
    /// Draws the initial ciphertexts from the tape.
    pub fn new(
        ctx: &'a RelayContext,
        tape: &'a mut dyn Tape,
        outer: &'a mut dyn ShareOracle,
    ) -> Self {
        let initial: Vec<Ciphertext> = (0..ctx.n()).map(|i| tape.initial(i)).collect();
        let sent = initial
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| ((i, 0), c))
            .collect();
        Self {
            ctx,
            tape,
            outer,
            initial,
            relayed: BTreeSet::new(),
            sent,
            delivered: BTreeMap::new(),
            derived_keys: BTreeMap::new(),
            any_relay: false,
            misuse: false,
        }
    }

    pub fn initial(&self) -> &[Ciphertext] {
        &self.initial
    }

    pub fn misused(&self) -> bool {
        self.misuse
    }

    pub fn corrupted(&self) -> impl Iterator<Item = &usize> {
        self.derived_keys.keys()
    }

    /// Keys of a corrupted path as derived at corruption time.
    pub fn derived_keys(&self, path: usize) -> Option<&[Vec<FieldElement>]> {
        self.derived_keys.get(&path).map(Vec::as_slice)
    }

    fn in_range(&self, path: usize, node: usize) -> bool {
        self.ctx
            .net
            .repeaters(path)
            .map(|r| r.contains(&node))
            .unwrap_or(false)
    }

    /// The shift `a_i` for the delivered ciphertext of every path.
    pub fn shift_vector(
        &mut self,
        delivered: &[Option<Ciphertext>],
    ) -> Vec<Option<Vec<FieldElement>>> {
        (0..self.ctx.n())
            .map(|i| {
                let c = delivered[i].as_ref()?;
                let len = self.ctx.lengths()[i];
                if let Some(keys) = self.derived_keys.get(&i) {
                    return Some(gf::vec_sub(c, &keys[len - 1]).expect("same field"));
                }
                if (1..len).any(|node| !self.relayed.contains(&(i, node))) {
                    return Some(self.tape.unrelayed_shift(i, c));
                }
                let mut a = gf::vec_sub(c, &self.sent[&(i, len - 1)]).expect("same field");
                for e in 0..len - 1 {
                    let diff = gf::vec_sub(&self.delivered[&(i, e)], &self.sent[&(i, e)])
                        .expect("same field");
                    a = gf::vec_add(&a, &diff).expect("same field");
                }
                Some(a)
            })
            .collect()
    }
}

impl RelayOracle for SimulatedRelay<'_> {
    fn relay(
        &mut self,
        path: usize,
        node: usize,
        delivered: &[FieldElement],
    ) -> Option<Ciphertext> {
        if !self.in_range(path, node) || !self.ctx.valid_ciphertext(delivered) {
            self.misuse = true;
            return None;
        }
        self.any_relay = true;
        if !self.relayed.insert((path, node)) {
            return None;
        }
        self.delivered.insert((path, node - 1), delivered.to_vec());
        let out = match self.derived_keys.get(&path) {
            Some(k) => gf::vec_add(
                &gf::vec_sub(delivered, &k[node - 1]).expect("same field"),
                &k[node],
            )
            .expect("same field"),
            None => self.tape.relay_output(path, node, delivered),
        };
        self.sent.insert((path, node), out.clone());
        Some(out)
    }

    fn corrupt(&mut self, path: usize, node: usize) -> Option<(Ciphertext, Ciphertext)> {
        if !self.in_range(path, node)
            || (self.ctx.mode == super::CorruptionMode::Static && self.any_relay)
        {
            self.misuse = true;
            return None;
        }
        if self.relayed.contains(&(path, node)) {
            return None;
        }
        if !self.derived_keys.contains_key(&path) {
            let Some(share) = self.outer.corrupt(path) else {
                self.misuse = true;
                return None;
            };
            let len = self.ctx.lengths()[path];
            let mut keys = vec![gf::vec_sub(&self.initial[path], &share).expect("same field")];
            for e in 1..len {
                let k = if self.relayed.contains(&(path, e)) {
                    let c = &self.sent[&(path, e)];
                    let d = &self.delivered[&(path, e - 1)];
                    gf::vec_add(&gf::vec_sub(c, d).expect("same field"), &keys[e - 1])
                        .expect("same field")
                } else {
                    self.tape.unseen_key(path, e)
                };
                keys.push(k);
            }
            self.derived_keys.insert(path, keys);
        }
        let k = &self.derived_keys[&path];
        Some((k[node - 1].clone(), k[node].clone()))
    }

    fn abort(&mut self) {
        self.misuse = true;
    }
}

/// How a per-trial reduction obtains its tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TapeMode {
    Independent,
    Coupled,
}

/// The `Ind-SSS` adversary built from an `Ind-Relay` adversary.
pub struct IndReduction<'a> {
    pub inner: &'a dyn IndRelayAdversary,
    pub relay: &'a RelayContext,
    pub scheme: &'a dyn SharingScheme,
    pub mode: TapeMode,
    pub seed: u64,
    pub trial: u64,
}

impl IndSssAdversary for IndReduction<'_> {
    fn name(&self) -> String {
        format!("ind-reduction({})", self.inner.name())
    }

    fn choose(&self, _: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2] {
        self.inner.choose(self.relay, rng)
    }

    fn guess(
        &self,
        _: &SssContext,
        secrets: &[Vec<FieldElement>; 2],
        oracle: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> bool {
        let mut tape: Box<dyn Tape> = match self.mode {
            TapeMode::Independent => Box::new(UniformTape::new(
                self.relay,
                trial_rng(self.seed, self.trial, Stream::Reduction),
            )),
            TapeMode::Coupled => Box::new(CoupledTape::replay(
                self.scheme,
                self.relay,
                self.seed,
                self.trial,
                |g| secrets[draw_bit(g) as usize].clone(),
            )),
        };
        let mut sim = SimulatedRelay::new(self.relay, tape.as_mut(), oracle);
        let c = sim.initial().to_vec();
        let guess = self.inner.guess(self.relay, secrets, &c, &mut sim, rng);
        if sim.misused() {
            sim.outer.abort();
        }
        guess
    }
}

/// The `Shift-Robust-SSS` adversary built from a `Forge-Relay` adversary.
pub struct ForgeReduction<'a> {
    pub inner: &'a dyn ForgeAdversary,
    pub relay: &'a RelayContext,
    pub scheme: &'a dyn SharingScheme,
    pub mode: TapeMode,
    pub seed: u64,
    pub trial: u64,
    /// Shift vectors produced, for inspection by tests.
    pub produced: RefCell<Option<Vec<Option<Vec<FieldElement>>>>>,
}

impl<'a> ForgeReduction<'a> {
    pub fn new(
        inner: &'a dyn ForgeAdversary,
        relay: &'a RelayContext,
        scheme: &'a dyn SharingScheme,
        mode: TapeMode,
        seed: u64,
        trial: u64,
    ) -> Self {
        Self {
            inner,
            relay,
            scheme,
            mode,
            seed,
            trial,
            produced: RefCell::new(None),
        }
    }
}

impl ShiftAdversary for ForgeReduction<'_> {
    fn name(&self) -> String {
        format!("forge-reduction({})", self.inner.name())
    }

    fn choose(&self, _: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement> {
        self.inner.choose(self.relay, rng)
    }

    fn shift(
        &self,
        _: &SssContext,
        secret: &[FieldElement],
        oracle: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>> {
        let mut tape: Box<dyn Tape> = match self.mode {
            TapeMode::Independent => Box::new(UniformTape::new(
                self.relay,
                trial_rng(self.seed, self.trial, Stream::Reduction),
            )),
            TapeMode::Coupled => Box::new(CoupledTape::replay(
                self.scheme,
                self.relay,
                self.seed,
                self.trial,
                |_| secret.to_vec(),
            )),
        };
        let mut sim = SimulatedRelay::new(self.relay, tape.as_mut(), oracle);
        let c = sim.initial().to_vec();
        let delivered = self.inner.forge(self.relay, secret, &c, &mut sim, rng);
        let shape_ok = delivered.len() == self.relay.n()
            && delivered
                .iter()
                .flatten()
                .all(|c| self.relay.valid_ciphertext(c));
        if sim.misused() || !shape_ok {
            sim.outer.abort();
            return Vec::new();
        }
        let a = sim.shift_vector(&delivered);
        *self.produced.borrow_mut() = Some(a.clone());
        a
    }
}

/// Trial-by-trial comparison of a direct game and its reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingReport {
    pub game: String,
    pub adversary: String,
    pub trials: u64,
    pub direct_wins: u64,
    pub reduced_wins: u64,
    pub flagged: u64,
    pub mismatches: u64,
    /// First few mismatching trial indices.
    pub mismatch_trials: Vec<u64>,
}

impl CouplingReport {
    fn from_pairs(game: &str, adversary: String, pairs: &[(TrialOutcome, TrialOutcome)]) -> Self {
        let bad: Vec<u64> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (d, r))| d != r)
            .map(|(t, _)| t as u64)
            .collect();
        Self {
            game: game.into(),
            adversary,
            trials: pairs.len() as u64,
            direct_wins: pairs.iter().filter(|(d, _)| d.win).count() as u64,
            reduced_wins: pairs.iter().filter(|(_, r)| r.win).count() as u64,
            flagged: pairs.iter().filter(|(d, _)| d.flagged).count() as u64,
            mismatches: bad.len() as u64,
            mismatch_trials: bad.into_iter().take(10).collect(),
        }
    }
}

/// `Ind-Relay` (uniform keys) against `Ind-SSS` with the wrapped adversary.
pub fn couple_ind(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &(dyn IndRelayAdversary + Sync),
    trials: u64,
    seed: u64,
    jobs: usize,
) -> CouplingReport {
    let pairs = run_trials(trials, jobs, |t| {
        let direct = ind_relay_trial(scheme, ctx, adv, &mut TrialRngs::new(seed, t), true);
        let b = IndReduction {
            inner: adv,
            relay: ctx,
            scheme,
            mode: TapeMode::Coupled,
            seed,
            trial: t,
        };
        let reduced = ind_sss_trial(scheme, &ctx.sss, &b, &mut TrialRngs::new(seed, t), true);
        (direct, reduced)
    });
    CouplingReport::from_pairs("ind-relay/ind-sss", adv.name(), &pairs)
}

/// `Forge-Relay` (uniform keys) against `Shift-Robust-SSS` with the wrapped adversary.
pub fn couple_forge(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &(dyn ForgeAdversary + Sync),
    trials: u64,
    seed: u64,
    jobs: usize,
) -> CouplingReport {
    let pairs = run_trials(trials, jobs, |t| {
        let direct = forge_relay_trial(scheme, ctx, adv, &mut TrialRngs::new(seed, t), true);
        let b = ForgeReduction::new(adv, ctx, scheme, TapeMode::Coupled, seed, t);
        let reduced = shift_robust_trial(scheme, &ctx.sss, &b, &mut TrialRngs::new(seed, t), true);
        (direct, reduced)
    });
    CouplingReport::from_pairs("forge-relay/shift-robust", adv.name(), &pairs)
}

/// Win indicators of the wrapped adversary with independent tapes.
pub fn run_forge_reduction(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &(dyn ForgeAdversary + Sync),
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Vec<TrialOutcome> {
    run_trials(trials, jobs, |t| {
        let b = ForgeReduction::new(adv, ctx, scheme, TapeMode::Independent, seed, t);
        shift_robust_trial(scheme, &ctx.sss, &b, &mut TrialRngs::new(seed, t), true)
    })
}

/// Win indicators of the wrapped adversary with independent tapes.
pub fn run_ind_reduction(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &(dyn IndRelayAdversary + Sync),
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Vec<TrialOutcome> {
    run_trials(trials, jobs, |t| {
        let b = IndReduction {
            inner: adv,
            relay: ctx,
            scheme,
            mode: TapeMode::Independent,
            seed,
            trial: t,
        };
        ind_sss_trial(scheme, &ctx.sss, &b, &mut TrialRngs::new(seed, t), true)
    })
}
