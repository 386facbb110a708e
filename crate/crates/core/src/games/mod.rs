//! Security games with pluggable adversaries and Monte Carlo estimation.
//!
//! Four games are implemented: `Ind-SSS` and `Shift-Robust-SSS` for the
//! sharing scheme, `Ind-Relay` and `Forge-Relay` for the relay protocol over
//! ideal (uniform) keys. Each trial draws from independent per-trial streams
//! of one master seed, so a report is a pure function of its inputs and
//! trials can run in parallel.
//!
//! An adversary that misuses an oracle (bad indices, malformed output,
//! corrupting after relaying in static mode) loses that trial and the trial
//! is counted in `GameReport::flagged`.

pub mod adversaries;
pub mod reduction;
pub mod stats;

use std::collections::BTreeSet;
use std::fmt;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amd::{self, AmdParams};
use crate::gf::{self, FieldElement, FieldSpec};
use crate::relay::{sample_keys, Ciphertext, RelayNetwork, RelaySession};
use crate::rng::{trial_rng, SimRng, Stream};
use crate::sss::{AccessStructure, RobustScheme, SchemeKind, ShareVector, SharingScheme};

/// What a sharing-game adversary knows about the scheme.
#[derive(Debug, Clone)]
pub struct SssContext {
    pub structure: AccessStructure,
    pub spec: FieldSpec,
    pub secret_len: usize,
    pub share_len: usize,
    /// Present when the scheme is AMD-coded.
    pub amd: Option<AmdParams>,
    /// How many shares (or paths) built-in adversaries may corrupt.
    pub budget: usize,
}

impl SssContext {
    pub fn new(scheme: &dyn SharingScheme, amd: Option<AmdParams>) -> Self {
        let structure = *scheme.structure();
        Self {
            structure,
            spec: scheme.spec(),
            secret_len: scheme.secret_len(),
            share_len: scheme.share_len(),
            amd,
            budget: structure.max_unqualified(),
        }
    }

    pub fn robust(scheme: &RobustScheme) -> Self {
        Self::new(scheme, Some(scheme.amd))
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    fn valid_secret(&self, s: &[FieldElement]) -> bool {
        s.len() == self.secret_len && s.iter().all(|e| e.spec() == self.spec)
    }

    fn valid_share(&self, s: &[FieldElement]) -> bool {
        s.len() == self.share_len && s.iter().all(|e| e.spec() == self.spec)
    }
}

/// When corruption is allowed during a relay game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionMode {
    /// Every corruption must come before the first relay call.
    Static,
    /// Corruption may be interleaved with relaying.
    Dynamic,
}

impl fmt::Display for CorruptionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorruptionMode::Static => "static",
            CorruptionMode::Dynamic => "dynamic",
        })
    }
}

/// What a relay-game adversary knows: the scheme plus the topology.
#[derive(Debug, Clone)]
pub struct RelayContext {
    pub sss: SssContext,
    pub net: RelayNetwork,
    pub mode: CorruptionMode,
}

impl RelayContext {
    pub fn new(
        sss: SssContext,
        lengths: Vec<usize>,
        epsilon: f64,
        mode: CorruptionMode,
    ) -> Result<Self, crate::relay::RelayError> {
        let net = RelayNetwork::new(lengths, sss.spec, sss.share_len, epsilon)?;
        if net.n() != sss.n() {
            return Err(crate::relay::RelayError::WrongLength {
                expected: sss.n(),
                got: net.n(),
            });
        }
        Ok(Self { sss, net, mode })
    }

    pub fn n(&self) -> usize {
        self.net.n()
    }

    pub fn lengths(&self) -> &[usize] {
        self.net.lengths()
    }

    fn valid_ciphertext(&self, c: &[FieldElement]) -> bool {
        self.sss.valid_share(c)
    }
}

/// `SSS.Corrupt`: reveal share `i` and add it to `T`.
pub trait ShareOracle {
    fn corrupt(&mut self, i: usize) -> Option<Vec<FieldElement>>;
    /// Give up: the trial is lost and flagged.
    fn abort(&mut self);
}

/// `Relay` and `R.Corrupt` of the relay games. Indices are 0-based: `node`
/// is a repeater in `1..len`.
pub trait RelayOracle {
    fn relay(&mut self, path: usize, node: usize, delivered: &[FieldElement])
        -> Option<Ciphertext>;
    fn corrupt(&mut self, path: usize, node: usize) -> Option<(Ciphertext, Ciphertext)>;
    fn abort(&mut self);
}

/// `(A0, A1)` for `Ind-SSS`. `guess` returning `true` means `b' = 1`.
pub trait IndSssAdversary {
    fn name(&self) -> String;
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2];
    fn guess(
        &self,
        ctx: &SssContext,
        secrets: &[Vec<FieldElement>; 2],
        oracle: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> bool;
}

/// `(A0, A1)` for `Shift-Robust-SSS`: choose `s`, then output `a` (entries may be bot).
pub trait ShiftAdversary {
    fn name(&self) -> String;
    fn choose(&self, ctx: &SssContext, rng: &mut dyn RngCore) -> Vec<FieldElement>;
    fn shift(
        &self,
        ctx: &SssContext,
        secret: &[FieldElement],
        oracle: &mut dyn ShareOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Vec<FieldElement>>>;
}

/// `(A0, A1)` for `Ind-Relay`; `c` holds the first-edge ciphertexts.
pub trait IndRelayAdversary {
    fn name(&self) -> String;
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> [Vec<FieldElement>; 2];
    fn guess(
        &self,
        ctx: &RelayContext,
        secrets: &[Vec<FieldElement>; 2],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> bool;
}

/// `(A0, A1)` for `Forge-Relay`; the output is what Bob receives per path.
pub trait ForgeAdversary {
    fn name(&self) -> String;
    fn choose(&self, ctx: &RelayContext, rng: &mut dyn RngCore) -> Vec<FieldElement>;
    fn forge(
        &self,
        ctx: &RelayContext,
        secret: &[FieldElement],
        c: &[Ciphertext],
        oracle: &mut dyn RelayOracle,
        rng: &mut dyn RngCore,
    ) -> Vec<Option<Ciphertext>>;
}

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub win: bool,
    pub flagged: bool,
}

impl TrialOutcome {
    const MISUSE: Self = Self {
        win: false,
        flagged: true,
    };

    fn decided(win: bool) -> Self {
        Self {
            win,
            flagged: false,
        }
    }
}

/// Generators of one trial.
pub struct TrialRngs {
    pub game: SimRng,
    pub keys: SimRng,
    pub adversary: SimRng,
}

impl TrialRngs {
    pub fn new(seed: u64, trial: u64) -> Self {
        Self {
            game: trial_rng(seed, trial, Stream::Game),
            keys: trial_rng(seed, trial, Stream::Keys),
            adversary: trial_rng(seed, trial, Stream::Adversary),
        }
    }
}

/// The challenge bit `b`.
pub fn draw_bit(rng: &mut dyn RngCore) -> bool {
    rng.next_u32() & 1 == 1
}

struct CorruptShares<'a> {
    shares: &'a ShareVector,
    corrupted: BTreeSet<usize>,
    misuse: bool,
}

impl<'a> CorruptShares<'a> {
    fn new(shares: &'a ShareVector) -> Self {
        Self {
            shares,
            corrupted: BTreeSet::new(),
            misuse: false,
        }
    }
}

impl ShareOracle for CorruptShares<'_> {
    fn corrupt(&mut self, i: usize) -> Option<Vec<FieldElement>> {
        match self.shares.entries.get(i) {
            Some(entry) => {
                self.corrupted.insert(i);
                entry.clone()
            }
            None => {
                self.misuse = true;
                None
            }
        }
    }

    fn abort(&mut self) {
        self.misuse = true;
    }
}

/// Oracles backed by a real protocol session.
struct LiveRelay<'a> {
    ctx: &'a RelayContext,
    session: RelaySession,
    any_relay: bool,
    misuse: bool,
}

impl LiveRelay<'_> {
    fn in_range(&self, path: usize, node: usize) -> bool {
        self.ctx
            .net
            .repeaters(path)
            .map(|r| r.contains(&node))
            .unwrap_or(false)
    }
}

impl RelayOracle for LiveRelay<'_> {
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
        match self.session.relay_hop(path, node, delivered) {
            Ok(c) => c,
            Err(_) => {
                self.misuse = true;
                None
            }
        }
    }

    fn corrupt(&mut self, path: usize, node: usize) -> Option<(Ciphertext, Ciphertext)> {
        if !self.in_range(path, node) || (self.ctx.mode == CorruptionMode::Static && self.any_relay)
        {
            self.misuse = true;
            return None;
        }
        match self.session.corrupt(path, node) {
            Ok(k) => k,
            Err(_) => {
                self.misuse = true;
                None
            }
        }
    }

    fn abort(&mut self) {
        self.misuse = true;
    }
}

/// One `Ind-SSS` trial. `gated = false` drops the "T is unqualified" check.
pub fn ind_sss_trial(
    scheme: &dyn SharingScheme,
    ctx: &SssContext,
    adv: &dyn IndSssAdversary,
    rngs: &mut TrialRngs,
    gated: bool,
) -> TrialOutcome {
    let b = draw_bit(&mut rngs.game);
    let secrets = adv.choose(ctx, &mut rngs.adversary);
    if !secrets.iter().all(|s| ctx.valid_secret(s)) {
        return TrialOutcome::MISUSE;
    }
    let Ok(shares) = scheme.share(&secrets[b as usize], &mut rngs.game) else {
        return TrialOutcome::MISUSE;
    };
    let mut oracle = CorruptShares::new(&shares);
    let guess = adv.guess(ctx, &secrets, &mut oracle, &mut rngs.adversary);
    if oracle.misuse {
        return TrialOutcome::MISUSE;
    }
    let unqualified = !ctx.structure.is_qualified(&oracle.corrupted);
    TrialOutcome::decided(guess == b && (unqualified || !gated))
}

/// `S'_i = a_i` on corrupted shares, `S_i + a_i` elsewhere; bot absorbs.
pub fn apply_shift(
    shares: &ShareVector,
    corrupted: &BTreeSet<usize>,
    a: &[Option<Vec<FieldElement>>],
) -> Result<ShareVector, gf::GfError> {
    let entries = shares
        .entries
        .iter()
        .zip(a)
        .enumerate()
        .map(|(i, (s, a))| match (s, a) {
            (_, None) => Ok(None),
            (_, Some(a)) if corrupted.contains(&i) => Ok(Some(a.clone())),
            (Some(s), Some(a)) => gf::vec_add(s, a).map(Some),
            (None, Some(_)) => Ok(None),
        })
        .collect::<Result<_, _>>()?;
    Ok(ShareVector { entries })
}

fn valid_vector(ctx: &SssContext, v: &[Option<Vec<FieldElement>>]) -> bool {
    v.len() == ctx.n() && v.iter().flatten().all(|e| ctx.valid_share(e))
}

/// One `Shift-Robust-SSS` trial.
pub fn shift_robust_trial(
    scheme: &dyn SharingScheme,
    ctx: &SssContext,
    adv: &dyn ShiftAdversary,
    rngs: &mut TrialRngs,
    gated: bool,
) -> TrialOutcome {
    let s = adv.choose(ctx, &mut rngs.adversary);
    if !ctx.valid_secret(&s) {
        return TrialOutcome::MISUSE;
    }
    let Ok(shares) = scheme.share(&s, &mut rngs.game) else {
        return TrialOutcome::MISUSE;
    };
    let mut oracle = CorruptShares::new(&shares);
    let a = adv.shift(ctx, &s, &mut oracle, &mut rngs.adversary);
    if oracle.misuse || !valid_vector(ctx, &a) {
        return TrialOutcome::MISUSE;
    }
    let corrupted = oracle.corrupted;
    let Ok(shifted) = apply_shift(&shares, &corrupted, &a) else {
        return TrialOutcome::MISUSE;
    };
    let Ok(out) = scheme.recover(&shifted) else {
        return TrialOutcome::MISUSE;
    };
    let forged = matches!(out, Some(ref o) if *o != s);
    TrialOutcome::decided(forged && (gated_ok(ctx, &corrupted) || !gated))
}

fn gated_ok(ctx: &SssContext, corrupted: &BTreeSet<usize>) -> bool {
    !ctx.structure.is_qualified(corrupted)
}

fn start_relay<'a>(
    scheme: &dyn SharingScheme,
    ctx: &'a RelayContext,
    secret: &[FieldElement],
    rngs: &mut TrialRngs,
) -> Option<(LiveRelay<'a>, Vec<Ciphertext>)> {
    let shares = scheme.share(secret, &mut rngs.game).ok()?;
    let keys = sample_keys(&ctx.net, &mut rngs.keys);
    let mut session = RelaySession::new(ctx.net.clone(), keys);
    let c = session.alice_send(&shares).ok()?;
    Some((
        LiveRelay {
            ctx,
            session,
            any_relay: false,
            misuse: false,
        },
        c,
    ))
}

/// One `Ind-Relay` trial over uniform keys.
pub fn ind_relay_trial(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &dyn IndRelayAdversary,
    rngs: &mut TrialRngs,
    gated: bool,
) -> TrialOutcome {
    let b = draw_bit(&mut rngs.game);
    let secrets = adv.choose(ctx, &mut rngs.adversary);
    if !secrets.iter().all(|s| ctx.sss.valid_secret(s)) {
        return TrialOutcome::MISUSE;
    }
    let Some((mut oracle, c)) = start_relay(scheme, ctx, &secrets[b as usize], rngs) else {
        return TrialOutcome::MISUSE;
    };
    let guess = adv.guess(ctx, &secrets, &c, &mut oracle, &mut rngs.adversary);
    if oracle.misuse {
        return TrialOutcome::MISUSE;
    }
    let unqualified = gated_ok(&ctx.sss, oracle.session.ledger.corrupted());
    TrialOutcome::decided(guess == b && (unqualified || !gated))
}

/// One `Forge-Relay` trial over uniform keys.
pub fn forge_relay_trial(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &dyn ForgeAdversary,
    rngs: &mut TrialRngs,
    gated: bool,
) -> TrialOutcome {
    let s = adv.choose(ctx, &mut rngs.adversary);
    if !ctx.sss.valid_secret(&s) {
        return TrialOutcome::MISUSE;
    }
    let Some((mut oracle, c)) = start_relay(scheme, ctx, &s, rngs) else {
        return TrialOutcome::MISUSE;
    };
    let delivered = adv.forge(ctx, &s, &c, &mut oracle, &mut rngs.adversary);
    if oracle.misuse || !valid_vector(&ctx.sss, &delivered) {
        return TrialOutcome::MISUSE;
    }
    let Ok(received) = oracle.session.bob_decrypt(&delivered) else {
        return TrialOutcome::MISUSE;
    };
    let Ok(out) = scheme.recover(&received) else {
        return TrialOutcome::MISUSE;
    };
    let forged = matches!(out, Some(ref o) if *o != s);
    let unqualified = gated_ok(&ctx.sss, oracle.session.ledger.corrupted());
    TrialOutcome::decided(forged && (unqualified || !gated))
}

/// Trial count, seed and parallelism of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default, 1 runs inline.
    pub jobs: usize,
    /// Apply the "T is unqualified" check. Only the sanity variant turns it off.
    pub gated: bool,
}

impl RunConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            jobs: 1,
            gated: true,
        }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn ungated(mut self) -> Self {
        self.gated = false;
        self
    }
}

/// Run `f` for every trial index; output order follows the index, so the
/// result does not depend on `jobs`.
pub fn run_trials<T, F>(trials: u64, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if jobs == 1 {
        return (0..trials).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

/// Where a reported `delta` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSource {
    /// Exhaustive enumeration.
    Oracle,
    /// `(d + 1) / q`, checked against the oracle only at small fields.
    Conjectured,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub value: f64,
    pub source: DeltaSource,
}

/// Exact `delta` when enumeration is feasible, the conjectured form otherwise.
pub fn delta_estimate(params: &AmdParams) -> DeltaEstimate {
    if amd::oracle_work(params) <= amd::ORACLE_WORK_LIMIT {
        if let Ok(r) = amd::delta_oracle(params) {
            return DeltaEstimate {
                value: r.to_f64(),
                source: DeltaSource::Oracle,
            };
        }
    }
    DeltaEstimate {
        value: amd::conjectured_delta(params),
        source: DeltaSource::Conjectured,
    }
}

/// Parameters echoed in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub field: String,
    pub d: Option<usize>,
    pub n: usize,
    pub threshold: usize,
    pub scheme: String,
    pub lengths: Option<Vec<usize>>,
    pub epsilon: Option<f64>,
    pub mode: Option<CorruptionMode>,
    pub budget: usize,
    pub max_unqualified: usize,
    pub gated: bool,
}

impl GameParams {
    pub fn for_sss(ctx: &SssContext, gated: bool) -> Self {
        Self {
            field: ctx.spec.to_string(),
            d: ctx.amd.map(|a| a.d()),
            n: ctx.n(),
            threshold: ctx.structure.t(),
            scheme: match ctx.structure.kind() {
                SchemeKind::Additive => "additive".into(),
                SchemeKind::Threshold => "shamir".into(),
            },
            lengths: None,
            epsilon: None,
            mode: None,
            budget: ctx.budget,
            max_unqualified: ctx.structure.max_unqualified(),
            gated,
        }
    }

    pub fn for_relay(ctx: &RelayContext, gated: bool) -> Self {
        Self {
            lengths: Some(ctx.lengths().to_vec()),
            epsilon: Some(ctx.net.epsilon()),
            mode: Some(ctx.mode),
            ..Self::for_sss(&ctx.sss, gated)
        }
    }
}

/// Shape of the analytic claim a game checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `rate <= bound`.
    Upper { bound: f64 },
    /// `|rate - 1/2| <= advantage`.
    Guessing { advantage: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub game: String,
    pub adversary: String,
    pub trials: u64,
    pub wins: u64,
    pub flagged: u64,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub claim: Claim,
    /// Upper bound on the win rate implied by the claim.
    pub bound: f64,
    pub sigma: f64,
    /// `bound + 3 sigma`; exceeding it is a violation.
    pub threshold: f64,
    pub violation: bool,
    /// `|rate - 1/2|` for guessing games.
    pub advantage: Option<f64>,
    pub delta: Option<DeltaEstimate>,
    pub params: GameParams,
    pub seed: u64,
}

impl GameReport {
    pub fn new(
        game: &str,
        adversary: String,
        outcomes: &[TrialOutcome],
        claim: Claim,
        delta: Option<DeltaEstimate>,
        params: GameParams,
        seed: u64,
    ) -> Self {
        let trials = outcomes.len() as u64;
        let wins = outcomes.iter().filter(|o| o.win).count() as u64;
        let flagged = outcomes.iter().filter(|o| o.flagged).count() as u64;
        let rate = if trials == 0 {
            0.0
        } else {
            wins as f64 / trials as f64
        };
        let (wilson_low, wilson_high) = stats::wilson(wins, trials);
        let (bound, sigma, advantage) = match claim {
            Claim::Upper { bound } => (bound, stats::binomial_sigma(bound.min(1.0), trials), None),
            Claim::Guessing { advantage } => (
                0.5 + advantage,
                stats::binomial_sigma(0.5, trials),
                Some((rate - 0.5).abs()),
            ),
        };
        let threshold = bound + 3.0 * sigma;
        Self {
            game: game.to_string(),
            adversary,
            trials,
            wins,
            flagged,
            rate,
            wilson_low,
            wilson_high,
            claim,
            bound,
            sigma,
            threshold,
            violation: rate > threshold,
            advantage,
            delta,
            params,
            seed,
        }
    }

    /// `|rate - 1/2| <= advantage + 3 sigma` for guessing games.
    pub fn near_half(&self) -> bool {
        match self.claim {
            Claim::Guessing { advantage } => {
                (self.rate - 0.5).abs() <= advantage + 3.0 * self.sigma
            }
            Claim::Upper { .. } => false,
        }
    }

    /// `rate r in [lo,hi] vs bound B`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: rate {} ∈ [{},{}] vs bound {}{}",
            self.game,
            self.adversary,
            stats::fmt_prob(self.rate),
            stats::fmt_prob(self.wilson_low),
            stats::fmt_prob(self.wilson_high),
            stats::fmt_prob(self.bound),
            if self.violation { " VIOLATION" } else { "" }
        )
    }
}

pub const IND_SSS: &str = "ind-sss";
pub const SHIFT_ROBUST: &str = "shift-robust";
pub const IND_RELAY: &str = "ind-relay";
pub const FORGE_RELAY: &str = "forge-relay";

pub fn run_ind_sss(
    scheme: &dyn SharingScheme,
    ctx: &SssContext,
    adv: &(dyn IndSssAdversary + Sync),
    cfg: &RunConfig,
) -> GameReport {
    let outcomes = run_trials(cfg.trials, cfg.jobs, |t| {
        ind_sss_trial(
            scheme,
            ctx,
            adv,
            &mut TrialRngs::new(cfg.seed, t),
            cfg.gated,
        )
    });
    GameReport::new(
        IND_SSS,
        adv.name(),
        &outcomes,
        Claim::Guessing { advantage: 0.0 },
        None,
        GameParams::for_sss(ctx, cfg.gated),
        cfg.seed,
    )
}

pub fn run_shift_robust(
    scheme: &RobustScheme,
    ctx: &SssContext,
    adv: &(dyn ShiftAdversary + Sync),
    cfg: &RunConfig,
) -> GameReport {
    let delta = delta_estimate(&scheme.amd);
    let outcomes = run_trials(cfg.trials, cfg.jobs, |t| {
        shift_robust_trial(
            scheme,
            ctx,
            adv,
            &mut TrialRngs::new(cfg.seed, t),
            cfg.gated,
        )
    });
    GameReport::new(
        SHIFT_ROBUST,
        adv.name(),
        &outcomes,
        Claim::Upper { bound: delta.value },
        Some(delta),
        GameParams::for_sss(ctx, cfg.gated),
        cfg.seed,
    )
}

pub fn run_ind_relay(
    scheme: &dyn SharingScheme,
    ctx: &RelayContext,
    adv: &(dyn IndRelayAdversary + Sync),
    cfg: &RunConfig,
) -> GameReport {
    let outcomes = run_trials(cfg.trials, cfg.jobs, |t| {
        ind_relay_trial(
            scheme,
            ctx,
            adv,
            &mut TrialRngs::new(cfg.seed, t),
            cfg.gated,
        )
    });
    GameReport::new(
        IND_RELAY,
        adv.name(),
        &outcomes,
        Claim::Guessing {
            advantage: ctx.net.confidentiality_bound(),
        },
        None,
        GameParams::for_relay(ctx, cfg.gated),
        cfg.seed,
    )
}

pub fn run_forge_relay(
    scheme: &RobustScheme,
    ctx: &RelayContext,
    adv: &(dyn ForgeAdversary + Sync),
    cfg: &RunConfig,
) -> GameReport {
    let delta = delta_estimate(&scheme.amd);
    let outcomes = run_trials(cfg.trials, cfg.jobs, |t| {
        forge_relay_trial(
            scheme,
            ctx,
            adv,
            &mut TrialRngs::new(cfg.seed, t),
            cfg.gated,
        )
    });
    GameReport::new(
        FORGE_RELAY,
        adv.name(),
        &outcomes,
        Claim::Upper {
            bound: ctx.net.integrity_bound(delta.value),
        },
        Some(delta),
        GameParams::for_relay(ctx, cfg.gated),
        cfg.seed,
    )
}
