//! Trusted-repeater network model and the multipath one-time-pad relay.
//!
//! Path `i` (0-based) has `len_i` edges. Nodes on the path are numbered
//! `0..=len_i`: node 0 is Alice, node `len_i` is Bob and nodes in between are
//! repeaters. Edge `j` joins node `j` to node `j + 1`; both endpoints hold a
//! copy of its key and each endpoint deletes its own copy after use, so a key
//! copy takes part in exactly one encryption or decryption.
//!
//! Traces and the CLI use the 1-based numbering of the protocol description
//! (path `i + 1`, edge `j + 1`, node `r + 1`).

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, FieldElement, FieldSpec, GfError};
use crate::sss::{ShareVector, SharingScheme, SssError};

/// A group element of the share group: one field element per share coordinate.
pub type Ciphertext = Vec<FieldElement>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelayError {
    #[error("network needs at least one path and every path at least one edge")]
    BadTopology,
    #[error("path {0} does not exist")]
    NoSuchPath(usize),
    #[error("node {node} is not a repeater on path {path}")]
    NotARepeater { path: usize, node: usize },
    #[error("key copy ({path}, {edge}, {end:?}) was deleted")]
    DeletedKey {
        path: usize,
        edge: usize,
        end: KeyEnd,
    },
    #[error("share for path {0} is absent")]
    MissingShare(usize),
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("trace: {0}")]
    Trace(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Sss(#[from] SssError),
}

/// Which endpoint's copy of an edge key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyEnd {
    /// Held by node `j` (the sender on edge `j`).
    Sender,
    /// Held by node `j + 1` (the receiver on edge `j`).
    Receiver,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelayNetwork {
    lengths: Vec<usize>,
    spec: FieldSpec,
    share_len: usize,
    epsilon: f64,
}

impl RelayNetwork {
    pub fn new(
        lengths: Vec<usize>,
        spec: FieldSpec,
        share_len: usize,
        epsilon: f64,
    ) -> Result<Self, RelayError> {
        if lengths.is_empty() || lengths.contains(&0) || share_len == 0 {
            return Err(RelayError::BadTopology);
        }
        Ok(Self {
            lengths,
            spec,
            share_len,
            epsilon,
        })
    }

    /// `n` paths of equal length `len`.
    pub fn uniform(
        n: usize,
        len: usize,
        spec: FieldSpec,
        share_len: usize,
        epsilon: f64,
    ) -> Result<Self, RelayError> {
        Self::new(vec![len; n], spec, share_len, epsilon)
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn length(&self, path: usize) -> Result<usize, RelayError> {
        self.lengths
            .get(path)
            .copied()
            .ok_or(RelayError::NoSuchPath(path))
    }

    /// Longest path, `l` in the bounds.
    pub fn max_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn key_count(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn share_len(&self) -> usize {
        self.share_len
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Confidentiality loss `n * l * eps`.
    pub fn confidentiality_bound(&self) -> f64 {
        (self.n() * self.max_length()) as f64 * self.epsilon
    }

    /// Integrity bound `n * l * eps + delta`.
    pub fn integrity_bound(&self, delta: f64) -> f64 {
        self.confidentiality_bound() + delta
    }

    /// Repeater nodes of a path: `1..len`.
    pub fn repeaters(&self, path: usize) -> Result<std::ops::Range<usize>, RelayError> {
        Ok(1..self.length(path)?)
    }

    fn check_repeater(&self, path: usize, node: usize) -> Result<(), RelayError> {
        if self.repeaters(path)?.contains(&node) {
            Ok(())
        } else {
            Err(RelayError::NotARepeater { path, node })
        }
    }

    fn check_len(&self, c: &[FieldElement]) -> Result<(), RelayError> {
        if c.len() != self.share_len {
            return Err(RelayError::WrongLength {
                expected: self.share_len,
                got: c.len(),
            });
        }
        if let Some(bad) = c.iter().find(|e| e.spec() != self.spec) {
            return Err(GfError::SpecMismatch(self.spec, bad.spec()).into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum KeySlot {
    Live(Vec<FieldElement>),
    Deleted,
}

/// Per-edge keys, each stored as a sender copy and a receiver copy.
#[derive(Debug, Clone)]
pub struct KeyTable {
    copies: BTreeMap<(usize, usize, KeyEnd), KeySlot>,
}

impl KeyTable {
    /// Table from explicit key values, `keys[i][j]` for edge `j` of path `i`.
    pub fn from_keys(keys: Vec<Vec<Vec<FieldElement>>>) -> Self {
        let mut copies = BTreeMap::new();
        for (i, path) in keys.into_iter().enumerate() {
            for (j, k) in path.into_iter().enumerate() {
                copies.insert((i, j, KeyEnd::Sender), KeySlot::Live(k.clone()));
                copies.insert((i, j, KeyEnd::Receiver), KeySlot::Live(k));
            }
        }
        Self { copies }
    }

    /// Number of distinct edge keys.
    pub fn len(&self) -> usize {
        self.copies.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn read(
        &self,
        path: usize,
        edge: usize,
        end: KeyEnd,
    ) -> Result<&[FieldElement], RelayError> {
        match self.copies.get(&(path, edge, end)) {
            Some(KeySlot::Live(k)) => Ok(k),
            Some(KeySlot::Deleted) => Err(RelayError::DeletedKey { path, edge, end }),
            None => Err(RelayError::NoSuchPath(path)),
        }
    }

    /// Replace the copy by a tombstone. There is no way back.
    pub fn delete(&mut self, path: usize, edge: usize, end: KeyEnd) {
        if let Some(slot) = self.copies.get_mut(&(path, edge, end)) {
            *slot = KeySlot::Deleted;
        }
    }

    pub fn is_deleted(&self, path: usize, edge: usize, end: KeyEnd) -> bool {
        matches!(self.copies.get(&(path, edge, end)), Some(KeySlot::Deleted))
    }

    fn take(
        &mut self,
        path: usize,
        edge: usize,
        end: KeyEnd,
    ) -> Result<Vec<FieldElement>, RelayError> {
        let k = self.read(path, edge, end)?.to_vec();
        self.delete(path, edge, end);
        Ok(k)
    }
}

/// What happened on the wire, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Ciphertext put on edge `j` by its sender.
    Sent,
    /// Ciphertext handed to the receiver of edge `j`.
    Delivered,
    /// Nothing delivered to Bob on this path.
    Dropped,
    /// Node `j` on the path was corrupted.
    Corrupted,
}

/// One JSON-lines trace record. `i`, `j` are 1-based; `ciphertext` is the
/// concatenation of the fixed-width hex forms of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub event: EventKind,
    pub i: usize,
    pub j: usize,
    pub ciphertext: String,
    pub ordinal: u64,
}

/// Protocol state shared by the relay operations: relayed set `R`,
/// corrupted paths `T` and every sent / delivered ciphertext.
#[derive(Debug, Clone, Default)]
pub struct RelayLedger {
    relayed: BTreeSet<(usize, usize)>,
    corrupted: BTreeSet<usize>,
    sent: BTreeMap<(usize, usize), Ciphertext>,
    delivered: BTreeMap<(usize, usize), Ciphertext>,
    events: Vec<TraceEvent>,
}

impl RelayLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(path, node)` pairs that have relayed.
    pub fn relayed(&self) -> &BTreeSet<(usize, usize)> {
        &self.relayed
    }

    pub fn has_relayed(&self, path: usize, node: usize) -> bool {
        self.relayed.contains(&(path, node))
    }

    /// Corrupted path indices.
    pub fn corrupted(&self) -> &BTreeSet<usize> {
        &self.corrupted
    }

    /// `c_{i,j}`: ciphertext sent on edge `j` of path `i`.
    pub fn sent(&self, path: usize, edge: usize) -> Option<&Ciphertext> {
        self.sent.get(&(path, edge))
    }

    /// `c'_{i,j}`: ciphertext delivered at the end of edge `j`.
    pub fn delivered(&self, path: usize, edge: usize) -> Option<&Ciphertext> {
        self.delivered.get(&(path, edge))
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    fn log(&mut self, event: EventKind, path: usize, j: usize, c: Option<&[FieldElement]>) {
        let ciphertext = c
            .map(|c| c.iter().map(FieldElement::to_hex).collect())
            .unwrap_or_default();
        let ordinal = self.events.len() as u64;
        self.events.push(TraceEvent {
            event,
            i: path + 1,
            j: j + 1,
            ciphertext,
            ordinal,
        });
    }

    fn record_sent(&mut self, path: usize, edge: usize, c: &[FieldElement]) {
        self.sent.insert((path, edge), c.to_vec());
        self.log(EventKind::Sent, path, edge, Some(c));
    }

    fn record_delivered(&mut self, path: usize, edge: usize, c: &[FieldElement]) {
        self.delivered.insert((path, edge), c.to_vec());
        self.log(EventKind::Delivered, path, edge, Some(c));
    }

    /// `sum_j (c'_{i,j} - c_{i,j})` over every edge of the path, or `None`
    /// if some edge has no sent or no delivered ciphertext.
    pub fn total_shift(
        &self,
        path: usize,
        len: usize,
    ) -> Option<Result<Vec<FieldElement>, GfError>> {
        let mut acc: Option<Vec<FieldElement>> = None;
        for j in 0..len {
            let diff = match gf::vec_sub(self.delivered(path, j)?, self.sent(path, j)?) {
                Ok(d) => d,
                Err(e) => return Some(Err(e)),
            };
            acc = Some(match acc {
                None => diff,
                Some(a) => match gf::vec_add(&a, &diff) {
                    Ok(v) => v,
                    Err(e) => return Some(Err(e)),
                },
            });
        }
        acc.map(Ok)
    }
}

/// Uniform keys for every edge; all copies live.
pub fn network_setup<R: RngCore + ?Sized>(
    lengths: Vec<usize>,
    spec: FieldSpec,
    share_len: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<(RelayNetwork, KeyTable), RelayError> {
    let net = RelayNetwork::new(lengths, spec, share_len, epsilon)?;
    let keys = sample_keys(&net, rng);
    Ok((net, keys))
}

pub fn sample_keys<R: RngCore + ?Sized>(net: &RelayNetwork, rng: &mut R) -> KeyTable {
    KeyTable::from_keys(sample_key_values(net, rng))
}

/// Uniform key values `keys[i][j]`, drawn path by path, edge by edge.
pub fn sample_key_values<R: RngCore + ?Sized>(
    net: &RelayNetwork,
    rng: &mut R,
) -> Vec<Vec<Vec<FieldElement>>> {
    net.lengths
        .iter()
        .map(|&len| {
            (0..len)
                .map(|_| gf::vec_random(&net.spec, net.share_len, rng))
                .collect()
        })
        .collect()
}

/// Alice: `c_{i,0} = S_i + q_{i,0}` for every path, deleting her key copies.
pub fn alice_send(
    net: &RelayNetwork,
    keys: &mut KeyTable,
    ledger: &mut RelayLedger,
    shares: &ShareVector,
) -> Result<Vec<Ciphertext>, RelayError> {
    if shares.len() != net.n() {
        return Err(RelayError::WrongLength {
            expected: net.n(),
            got: shares.len(),
        });
    }
    // Validate everything before consuming any key.
    for (i, entry) in shares.entries.iter().enumerate() {
        let s = entry.as_ref().ok_or(RelayError::MissingShare(i))?;
        net.check_len(s)?;
        keys.read(i, 0, KeyEnd::Sender)?;
    }
    let mut out = Vec::with_capacity(net.n());
    for (i, entry) in shares.entries.iter().enumerate() {
        let s = entry.as_ref().expect("checked above");
        let q = keys.take(i, 0, KeyEnd::Sender)?;
        let c = gf::vec_add(s, &q)?;
        ledger.record_sent(i, 0, &c);
        out.push(c);
    }
    Ok(out)
}

/// Repeater `node` on `path`: `c_{i,node} = c'_{i,node-1} - q_{i,node-1} + q_{i,node}`.
///
/// Returns `Ok(None)` if this node already relayed; its keys are gone.
pub fn relay_hop(
    net: &RelayNetwork,
    keys: &mut KeyTable,
    ledger: &mut RelayLedger,
    path: usize,
    node: usize,
    delivered: &[FieldElement],
) -> Result<Option<Ciphertext>, RelayError> {
    net.check_repeater(path, node)?;
    net.check_len(delivered)?;
    if ledger.has_relayed(path, node) {
        return Ok(None);
    }
    let q_in = keys.read(path, node - 1, KeyEnd::Receiver)?.to_vec();
    let q_out = keys.read(path, node, KeyEnd::Sender)?.to_vec();
    keys.delete(path, node - 1, KeyEnd::Receiver);
    keys.delete(path, node, KeyEnd::Sender);
    ledger.relayed.insert((path, node));
    ledger.record_delivered(path, node - 1, delivered);
    let c = gf::vec_add(&gf::vec_sub(delivered, &q_in)?, &q_out)?;
    ledger.record_sent(path, node, &c);
    Ok(Some(c))
}

/// Bob's decryption `S'_i = c'_i - q_{i,last}`; an absent delivery gives bot.
pub fn bob_decrypt(
    net: &RelayNetwork,
    keys: &mut KeyTable,
    ledger: &mut RelayLedger,
    delivered: &[Option<Ciphertext>],
) -> Result<ShareVector, RelayError> {
    if delivered.len() != net.n() {
        return Err(RelayError::WrongLength {
            expected: net.n(),
            got: delivered.len(),
        });
    }
    for (i, c) in delivered.iter().enumerate() {
        if let Some(c) = c {
            net.check_len(c)?;
            keys.read(i, net.lengths[i] - 1, KeyEnd::Receiver)?;
        }
    }
    let mut entries = Vec::with_capacity(net.n());
    for (i, c) in delivered.iter().enumerate() {
        let last = net.lengths[i] - 1;
        match c {
            Some(c) => {
                let q = keys.take(i, last, KeyEnd::Receiver)?;
                ledger.record_delivered(i, last, c);
                entries.push(Some(gf::vec_sub(c, &q)?));
            }
            None => {
                ledger.log(EventKind::Dropped, i, last, None);
                entries.push(None);
            }
        }
    }
    Ok(ShareVector { entries })
}

/// Bob: decrypt every path, then `Recover*`. `Ok(None)` means Bob rejects.
pub fn bob_receive(
    net: &RelayNetwork,
    keys: &mut KeyTable,
    ledger: &mut RelayLedger,
    delivered: &[Option<Ciphertext>],
    scheme: &dyn SharingScheme,
) -> Result<Option<Vec<FieldElement>>, RelayError> {
    let shares = bob_decrypt(net, keys, ledger, delivered)?;
    Ok(scheme.recover(&shares)?)
}

/// Corrupt repeater `node` on `path`: mark the path and leak the node's key
/// copies `(q_{i,node-1}, q_{i,node})`, or `None` if it already relayed.
pub fn corrupt(
    net: &RelayNetwork,
    keys: &KeyTable,
    ledger: &mut RelayLedger,
    path: usize,
    node: usize,
) -> Result<Option<(Ciphertext, Ciphertext)>, RelayError> {
    net.check_repeater(path, node)?;
    if ledger.has_relayed(path, node) {
        return Ok(None);
    }
    let q_in = keys.read(path, node - 1, KeyEnd::Receiver)?.to_vec();
    let q_out = keys.read(path, node, KeyEnd::Sender)?.to_vec();
    ledger.corrupted.insert(path);
    ledger.log(EventKind::Corrupted, path, node, None);
    Ok(Some((q_in, q_out)))
}

/// Network, keys and ledger of one protocol run.
#[derive(Debug, Clone)]
pub struct RelaySession {
    pub net: RelayNetwork,
    pub keys: KeyTable,
    pub ledger: RelayLedger,
}

impl RelaySession {
    pub fn new(net: RelayNetwork, keys: KeyTable) -> Self {
        Self {
            net,
            keys,
            ledger: RelayLedger::new(),
        }
    }

    pub fn alice_send(&mut self, shares: &ShareVector) -> Result<Vec<Ciphertext>, RelayError> {
        alice_send(&self.net, &mut self.keys, &mut self.ledger, shares)
    }

    pub fn relay_hop(
        &mut self,
        path: usize,
        node: usize,
        delivered: &[FieldElement],
    ) -> Result<Option<Ciphertext>, RelayError> {
        relay_hop(
            &self.net,
            &mut self.keys,
            &mut self.ledger,
            path,
            node,
            delivered,
        )
    }

    pub fn corrupt(
        &mut self,
        path: usize,
        node: usize,
    ) -> Result<Option<(Ciphertext, Ciphertext)>, RelayError> {
        corrupt(&self.net, &self.keys, &mut self.ledger, path, node)
    }

    pub fn bob_decrypt(
        &mut self,
        delivered: &[Option<Ciphertext>],
    ) -> Result<ShareVector, RelayError> {
        bob_decrypt(&self.net, &mut self.keys, &mut self.ledger, delivered)
    }

    pub fn bob_receive(
        &mut self,
        delivered: &[Option<Ciphertext>],
        scheme: &dyn SharingScheme,
    ) -> Result<Option<Vec<FieldElement>>, RelayError> {
        bob_receive(
            &self.net,
            &mut self.keys,
            &mut self.ledger,
            delivered,
            scheme,
        )
    }
}

/// An additive offset applied to the ciphertext on one edge before delivery.
#[derive(Debug, Clone, PartialEq)]
pub struct Tamper {
    pub path: usize,
    pub edge: usize,
    pub delta: Vec<FieldElement>,
}

/// Run the whole protocol: share, send, relay every hop, deliver to Bob.
/// Tampers are added to the ciphertext on their edge before it is delivered;
/// `drop` paths deliver nothing to Bob.
pub fn run_protocol<R: RngCore>(
    session: &mut RelaySession,
    scheme: &dyn SharingScheme,
    secret: &[FieldElement],
    tampers: &[Tamper],
    drop: &BTreeSet<usize>,
    rng: &mut R,
) -> Result<Option<Vec<FieldElement>>, RelayError> {
    let shares = scheme.share(secret, rng)?;
    let mut current = session.alice_send(&shares)?;
    let apply = |c: &mut Ciphertext, path: usize, edge: usize| -> Result<(), RelayError> {
        for t in tampers.iter().filter(|t| t.path == path && t.edge == edge) {
            *c = gf::vec_add(c, &t.delta)?;
        }
        Ok(())
    };
    let mut last = Vec::with_capacity(session.net.n());
    for (i, c) in current.iter_mut().enumerate() {
        let len = session.net.length(i)?;
        for node in 1..len {
            apply(c, i, node - 1)?;
            *c = session
                .relay_hop(i, node, c)?
                .expect("each node relays once in an honest schedule");
        }
        apply(c, i, len - 1)?;
        last.push((!drop.contains(&i)).then(|| c.clone()));
    }
    session.bob_receive(&last, scheme)
}

pub fn write_trace<W: Write>(events: &[TraceEvent], mut out: W) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<TraceEvent>, RelayError> {
    input
        .lines()
        .filter(|l| l.as_ref().map(|l| !l.trim().is_empty()).unwrap_or(true))
        .map(|l| {
            let l = l.map_err(|e| RelayError::Trace(e.to_string()))?;
            serde_json::from_str(&l).map_err(|e| RelayError::Trace(e.to_string()))
        })
        .collect()
}

/// Per-path outcome of replaying a trace without keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathReplay {
    /// 1-based path index.
    pub path: usize,
    pub edges_seen: usize,
    pub corrupted: bool,
    pub dropped: bool,
    /// Hex of `sum_j (c'_j - c_j)` when every edge has both ciphertexts.
    pub total_shift: Option<String>,
    pub tampered: Option<bool>,
}

/// Rebuild sent / delivered ciphertexts from a trace and compute the
/// end-to-end offset of each path.
pub fn replay_trace(
    events: &[TraceEvent],
    spec: &FieldSpec,
    lengths: &[usize],
) -> Result<Vec<PathReplay>, RelayError> {
    let width = spec.hex_width();
    let parse = |hex: &str| -> Result<Ciphertext, RelayError> {
        if !hex.len().is_multiple_of(width) {
            return Err(RelayError::Trace(format!(
                "ciphertext {hex:?} is not a multiple of {width} digits"
            )));
        }
        (0..hex.len() / width)
            .map(|k| Ok(spec.parse_hex(&hex[k * width..(k + 1) * width])?))
            .collect()
    };
    let mut ledger = RelayLedger::new();
    let mut dropped = BTreeSet::new();
    let mut last_ordinal = None;
    for e in events {
        if last_ordinal.is_some_and(|o| e.ordinal <= o) {
            return Err(RelayError::Trace(format!(
                "ordinal {} out of order",
                e.ordinal
            )));
        }
        last_ordinal = Some(e.ordinal);
        if e.i == 0 || e.i > lengths.len() || e.j == 0 {
            return Err(RelayError::Trace(format!("bad index ({}, {})", e.i, e.j)));
        }
        let (i, j) = (e.i - 1, e.j - 1);
        match e.event {
            EventKind::Sent => {
                ledger.sent.insert((i, j), parse(&e.ciphertext)?);
            }
            EventKind::Delivered => {
                ledger.delivered.insert((i, j), parse(&e.ciphertext)?);
            }
            EventKind::Dropped => {
                dropped.insert(i);
            }
            EventKind::Corrupted => {
                ledger.corrupted.insert(i);
            }
        }
    }
    lengths
        .iter()
        .enumerate()
        .map(|(i, &len)| {
            let shift = ledger.total_shift(i, len).transpose()?;
            Ok(PathReplay {
                path: i + 1,
                edges_seen: (0..len).filter(|&j| ledger.sent(i, j).is_some()).count(),
                corrupted: ledger.corrupted.contains(&i),
                dropped: dropped.contains(&i),
                tampered: shift.as_ref().map(|s| s.iter().any(|e| !e.is_zero())),
                total_shift: shift.map(|s| s.iter().map(FieldElement::to_hex).collect()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amd::AmdParams;
    use crate::rng::seeded;
    use crate::sss::{AccessStructure, LinearScheme, RobustScheme};

    fn gf7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn e7(v: u128) -> FieldElement {
        gf7().element(v).unwrap()
    }

    fn single(n: usize, len: usize, keys: Vec<u128>) -> RelaySession {
        let net = RelayNetwork::uniform(n, len, gf7(), 1, 0.0).unwrap();
        let table = keys
            .chunks(len)
            .map(|p| p.iter().map(|&k| vec![e7(k)]).collect())
            .collect();
        RelaySession::new(net, KeyTable::from_keys(table))
    }

    #[test]
    fn setup_counts() {
        let (net, keys) = network_setup(vec![2; 3], gf7(), 5, 0.0, &mut seeded(0)).unwrap();
        assert_eq!(keys.len(), 6);
        assert_eq!(net.key_count(), 6);
        let (net, keys) = network_setup(vec![1, 3, 4], gf7(), 5, 0.0, &mut seeded(0)).unwrap();
        assert_eq!(keys.len(), 8);
        assert_eq!(net.max_length(), 4);
        assert!(RelayNetwork::new(vec![], gf7(), 1, 0.0).is_err());
        assert!(RelayNetwork::new(vec![2, 0], gf7(), 1, 0.0).is_err());
    }

    #[test]
    fn send_encrypts_and_deletes() {
        let mut s = single(1, 1, vec![5]);
        let shares = ShareVector {
            entries: vec![Some(vec![e7(3)])],
        };
        assert_eq!(s.alice_send(&shares).unwrap(), vec![vec![e7(1)]]);
        assert!(s.keys.is_deleted(0, 0, KeyEnd::Sender));
        assert!(matches!(
            s.alice_send(&shares),
            Err(RelayError::DeletedKey { .. })
        ));
        assert_eq!(s.ledger.sent(0, 0), Some(&vec![e7(1)]));
    }

    #[test]
    fn send_rejects_absent_share() {
        let mut s = single(2, 1, vec![5, 6]);
        let shares = ShareVector {
            entries: vec![Some(vec![e7(3)]), None],
        };
        assert_eq!(s.alice_send(&shares), Err(RelayError::MissingShare(1)));
        assert!(!s.keys.is_deleted(0, 0, KeyEnd::Sender));
    }

    #[test]
    fn relay_reencrypts_once() {
        let mut s = single(1, 2, vec![5, 2]);
        assert_eq!(s.relay_hop(0, 1, &[e7(1)]).unwrap(), Some(vec![e7(5)]));
        assert!(s.keys.is_deleted(0, 0, KeyEnd::Receiver));
        assert!(s.keys.is_deleted(0, 1, KeyEnd::Sender));
        assert_eq!(s.relay_hop(0, 1, &[e7(1)]).unwrap(), None);
        assert!(s.ledger.has_relayed(0, 1));
        assert!(matches!(
            s.relay_hop(0, 2, &[e7(1)]),
            Err(RelayError::NotARepeater { .. })
        ));
        assert!(matches!(
            s.relay_hop(0, 0, &[e7(1)]),
            Err(RelayError::NotARepeater { .. })
        ));
    }

    #[test]
    fn corruption_semantics() {
        let mut s = single(2, 3, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(s.corrupt(1, 2).unwrap(), Some((vec![e7(5)], vec![e7(6)])));
        assert_eq!(s.ledger.corrupted(), &BTreeSet::from([1]));
        // Node 1 on path 0 relays; afterwards its keys are gone.
        s.relay_hop(0, 1, &[e7(0)]).unwrap();
        assert_eq!(s.corrupt(0, 1).unwrap(), None);
        assert_eq!(s.ledger.corrupted(), &BTreeSet::from([1]));
        // Node 2 still holds its copy of the shared edge key.
        assert_eq!(s.corrupt(0, 2).unwrap(), Some((vec![e7(2)], vec![e7(3)])));
        assert_eq!(s.ledger.corrupted(), &BTreeSet::from([0, 1]));
    }

    #[test]
    fn honest_chain_returns_share_and_secret() {
        let spec = FieldSpec::binary(16).unwrap();
        let amd = AmdParams::new(spec, 3).unwrap();
        let scheme = RobustScheme::new(AccessStructure::additive(3).unwrap(), amd).unwrap();
        let mut rng = seeded(5);
        let (net, keys) = network_setup(vec![2; 3], spec, 5, 0.0, &mut rng).unwrap();
        let mut session = RelaySession::new(net, keys);
        let secret = gf::vec_random(&spec, 3, &mut rng);
        let out = run_protocol(
            &mut session,
            &scheme,
            &secret,
            &[],
            &BTreeSet::new(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out, Some(secret));
        // Every key copy was used exactly once and is gone.
        for i in 0..3 {
            for j in 0..2 {
                assert!(session.keys.is_deleted(i, j, KeyEnd::Sender));
                assert!(session.keys.is_deleted(i, j, KeyEnd::Receiver));
            }
        }
    }

    #[test]
    fn undelivered_path_makes_bob_reject() {
        let spec = FieldSpec::binary(16).unwrap();
        let amd = AmdParams::new(spec, 3).unwrap();
        let scheme = RobustScheme::new(AccessStructure::additive(3).unwrap(), amd).unwrap();
        let mut rng = seeded(6);
        let (net, keys) = network_setup(vec![2; 3], spec, 5, 0.0, &mut rng).unwrap();
        let mut session = RelaySession::new(net, keys);
        let secret = gf::vec_random(&spec, 3, &mut rng);
        let out = run_protocol(
            &mut session,
            &scheme,
            &secret,
            &[],
            &BTreeSet::from([1]),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out, None);
        assert!(session
            .ledger
            .events()
            .iter()
            .any(|e| e.event == EventKind::Dropped && e.i == 2));
    }

    #[test]
    fn bob_cannot_decrypt_twice() {
        let mut s = single(1, 1, vec![4]);
        let scheme = LinearScheme {
            structure: AccessStructure::additive(1).unwrap(),
            spec: gf7(),
            secret_len: 1,
        };
        assert_eq!(
            s.bob_receive(&[Some(vec![e7(6)])], &scheme).unwrap(),
            Some(vec![e7(2)])
        );
        assert!(matches!(
            s.bob_receive(&[Some(vec![e7(6)])], &scheme),
            Err(RelayError::DeletedKey { .. })
        ));
    }

    #[test]
    fn binary_otp_is_an_involution() {
        let spec = FieldSpec::binary(8).unwrap();
        let mut rng = seeded(2);
        let s = gf::vec_random(&spec, 4, &mut rng);
        let q = gf::vec_random(&spec, 4, &mut rng);
        let c = gf::vec_add(&s, &q).unwrap();
        assert_eq!(gf::vec_add(&c, &q).unwrap(), s);
    }

    #[test]
    fn trace_round_trip_and_replay() {
        let spec = FieldSpec::binary(16).unwrap();
        let amd = AmdParams::new(spec, 3).unwrap();
        let scheme = RobustScheme::new(AccessStructure::additive(2).unwrap(), amd).unwrap();
        let mut rng = seeded(9);
        let (net, keys) = network_setup(vec![2, 3], spec, 5, 0.0, &mut rng).unwrap();
        let mut session = RelaySession::new(net, keys);
        let secret = gf::vec_random(&spec, 3, &mut rng);
        let delta = vec![spec.one(); 5];
        let tamper = Tamper {
            path: 1,
            edge: 1,
            delta: delta.clone(),
        };
        run_protocol(
            &mut session,
            &scheme,
            &secret,
            &[tamper],
            &BTreeSet::new(),
            &mut rng,
        )
        .unwrap();

        let mut buf = Vec::new();
        write_trace(session.ledger.events(), &mut buf).unwrap();
        let events = read_trace(buf.as_slice()).unwrap();
        assert_eq!(events, session.ledger.events());

        let replay = replay_trace(&events, &spec, &[2, 3]).unwrap();
        assert_eq!(replay[0].tampered, Some(false));
        assert_eq!(replay[1].tampered, Some(true));
        assert_eq!(
            replay[1].total_shift.as_deref(),
            Some("0001".repeat(5).as_str())
        );
    }
}
