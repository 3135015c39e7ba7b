//! The defended hash table.
//!
//! A fixed number of indices, each holding a chain ordered from the head of
//! list (depth 1) to the tail. Every request is priced before it is serviced:
//!
//! | request | hardness | latency when serviced |
//! |---------|----------|-----------------------|
//! | insert  | `L_i + 1` | 1 (tail append) |
//! | query / delete, found at depth `d` | `d` | `d` |
//! | query / delete, absent | `L_i` | `L_i` |
//!
//! A successful query moves the object to the head of its list; a successful
//! delete splices it out. Requests go through two steps: [`Table::quote`]
//! issues a challenge bound to the request, and [`Table::settle`] services
//! the request once the challenge is answered. The hardness is fixed at quote
//! time; if the bucket changes between quote and settlement the quoted
//! hardness is charged and the latency reflects the state at settlement.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hasher;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use siphasher::sip::SipHasher24;
use thiserror::Error;

use crate::chain::Chains;
use crate::rb::{Backend, Challenge, ChallengeStore, RbError, RequestBinding, Solution, WorkMeter};

/// Second SipHash key half used for index hashing.
const INDEX_KEY: u64 = 0x6465_7074_685f_6368;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    /// Number of indices; fixed for the table's lifetime.
    pub index_count: usize,
    #[serde(default)]
    pub hash_seed: u64,
    /// Disabling move-to-front turns the table into a plain priced chain.
    /// Only useful as a negative control.
    #[serde(default = "yes")]
    pub move_to_front: bool,
    /// Honour a request's declared index instead of hashing its key.
    /// Simulation only.
    #[serde(default)]
    pub accept_declared_index: bool,
}

fn yes() -> bool {
    true
}

impl TableConfig {
    pub fn new(index_count: usize, hash_seed: u64) -> Self {
        TableConfig {
            index_count,
            hash_seed,
            move_to_front: true,
            accept_declared_index: false,
        }
    }

    pub fn simulation(mut self) -> Self {
        self.accept_declared_index = true;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectKey(Box<[u8]>);

impl ObjectKey {
    pub fn new(bytes: impl Into<Box<[u8]>>) -> Self {
        ObjectKey(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl From<&str> for ObjectKey {
    fn from(s: &str) -> Self {
        ObjectKey(s.as_bytes().into())
    }
}

impl From<Vec<u8>> for ObjectKey {
    fn from(v: Vec<u8>) -> Self {
        ObjectKey(v.into_boxed_slice())
    }
}

impl fmt::Display for ObjectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match std::str::from_utf8(&self.0) {
            Ok(s) if s.chars().all(|c| c.is_ascii_graphic()) => f.write_str(s),
            _ => {
                for b in self.0.iter() {
                    write!(f, "{b:02x}")?;
                }
                Ok(())
            }
        }
    }
}

/// Maps a key to its index. Deterministic for a fixed seed.
pub fn hash_index(key: &ObjectKey, cfg: &TableConfig) -> usize {
    let mut h = SipHasher24::new_with_keys(cfg.hash_seed, INDEX_KEY);
    h.write(key.as_bytes());
    ((h.finish() as u128 * cfg.index_count as u128) >> 64) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    Insert,
    Query,
    Delete,
}

impl Operation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Operation::Insert => "insert",
            Operation::Query => "query",
            Operation::Delete => "delete",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub op: Operation,
    pub key: ObjectKey,
    pub declared_index: Option<usize>,
}

impl Request {
    pub fn new(op: Operation, key: ObjectKey) -> Self {
        Request {
            op,
            key,
            declared_index: None,
        }
    }

    pub fn at(op: Operation, key: ObjectKey, index: usize) -> Self {
        Request {
            op,
            key,
            declared_index: Some(index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Inserted,
    Found,
    NotFound,
    Deleted,
}

impl OutcomeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeKind::Inserted => "inserted",
            OutcomeKind::Found => "found",
            OutcomeKind::NotFound => "not_found",
            OutcomeKind::Deleted => "deleted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RequestOutcome {
    pub kind: OutcomeKind,
    pub index: usize,
    /// List-traversal units spent servicing the request.
    pub latency: u64,
    /// Hardness of the challenge that paid for the request.
    pub rb_charged: u64,
    /// Depth of the object before the request, when it was found.
    pub depth_before: Option<u64>,
}

/// A priced request. `challenge` is `None` only for a lookup in an empty
/// bucket, whose price is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quote {
    pub index: usize,
    pub hardness: u64,
    pub exists: bool,
    pub challenge: Option<Challenge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("index_count must be at least 1")]
    NoIndices,
    #[error("index {index} out of range (table has {count} indices)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("key {0} is already live")]
    DuplicateKey(ObjectKey),
    #[error("solution rejected: {0}")]
    Rejected(#[from] RbError),
    #[error("solution was issued for a different request")]
    BindingMismatch,
    #[error("request requires a solved challenge")]
    MissingSolution,
}

/// Entries of one bucket, head first. Depth of `entries[k]` is `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketView {
    pub entries: Vec<ObjectKey>,
    pub tail: Option<ObjectKey>,
}

impl BucketView {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn depth_of(&self, key: &ObjectKey) -> Option<u64> {
        self.entries.iter().position(|k| k == key).map(|p| p as u64 + 1)
    }

    /// The tail handle addresses the last entry (or nothing when empty).
    pub fn tail_valid(&self) -> bool {
        self.tail.as_ref() == self.entries.last()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub buckets: Vec<BucketView>,
}

impl Snapshot {
    pub fn lengths(&self) -> Vec<usize> {
        self.buckets.iter().map(BucketView::len).collect()
    }

    pub fn live_count(&self) -> usize {
        self.buckets.iter().map(BucketView::len).sum()
    }

    pub fn tails_valid(&self) -> bool {
        self.buckets.iter().all(BucketView::tail_valid)
    }
}

/// Server-side counters outside the cost model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpsMetrics {
    pub quotes_issued: u64,
    /// Traversal units spent computing quotes.
    pub quote_traversal: u64,
    pub settled: u64,
    pub rejected: u64,
    /// Lookups in empty buckets, serviced without a challenge.
    pub free_probes: u64,
    /// Challenges issued but never answered.
    pub unsettled: u64,
}

#[derive(Debug, Default)]
struct OpsCounters {
    quotes_issued: AtomicU64,
    quote_traversal: AtomicU64,
    settled: AtomicU64,
    rejected: AtomicU64,
    free_probes: AtomicU64,
}

impl Clone for OpsCounters {
    fn clone(&self) -> Self {
        let copy = |c: &AtomicU64| AtomicU64::new(c.load(Ordering::Relaxed));
        OpsCounters {
            quotes_issued: copy(&self.quotes_issued),
            quote_traversal: copy(&self.quote_traversal),
            settled: copy(&self.settled),
            rejected: copy(&self.rejected),
            free_probes: copy(&self.free_probes),
        }
    }
}

fn bump(c: &AtomicU64, by: u64) {
    c.fetch_add(by, Ordering::Relaxed);
}

#[derive(Debug)]
pub struct Table {
    cfg: TableConfig,
    chains: Chains,
    live: HashSet<ObjectKey>,
    store: ChallengeStore,
    ops: OpsCounters,
}

/// Deep copy, including outstanding challenges and counters.
impl Clone for Table {
    fn clone(&self) -> Self {
        Table {
            cfg: self.cfg,
            chains: self.chains.clone(),
            live: self.live.clone(),
            store: self.store.duplicate(),
            ops: self.ops.clone(),
        }
    }
}

impl Table {
    pub fn new(cfg: TableConfig, backend: Backend) -> Result<Self, TableError> {
        let store = ChallengeStore::new(backend, cfg.hash_seed ^ 0x5eed);
        Self::with_store(cfg, store)
    }

    pub fn with_store(cfg: TableConfig, store: ChallengeStore) -> Result<Self, TableError> {
        if cfg.index_count == 0 {
            return Err(TableError::NoIndices);
        }
        Ok(Table {
            cfg,
            chains: Chains::new(cfg.index_count),
            live: HashSet::new(),
            store,
            ops: OpsCounters::default(),
        })
    }

    pub fn config(&self) -> &TableConfig {
        &self.cfg
    }

    pub fn backend(&self) -> Backend {
        self.store.backend()
    }

    pub fn store(&self) -> &ChallengeStore {
        &self.store
    }

    pub fn index_count(&self) -> usize {
        self.cfg.index_count
    }

    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    pub fn contains(&self, key: &ObjectKey) -> bool {
        self.live.contains(key)
    }

    /// Index a request is serviced at.
    pub fn route(&self, req: &Request) -> Result<usize, TableError> {
        match req.declared_index {
            Some(index) if self.cfg.accept_declared_index => {
                self.check_index(index)?;
                Ok(index)
            }
            _ => Ok(hash_index(&req.key, &self.cfg)),
        }
    }

    fn check_index(&self, index: usize) -> Result<(), TableError> {
        if index < self.cfg.index_count {
            Ok(())
        } else {
            Err(TableError::IndexOutOfRange {
                index,
                count: self.cfg.index_count,
            })
        }
    }

    pub fn bucket_len(&self, index: usize) -> Result<usize, TableError> {
        self.check_index(index)?;
        Ok(self.chains.len(index))
    }

    /// Price of an insertion at `index`: `L_index + 1`.
    pub fn quote_insert(&self, index: usize) -> Result<u64, TableError> {
        Ok(self.bucket_len(index)? as u64 + 1)
    }

    /// Price of looking up `key` at its hashed index: its depth if present,
    /// else the bucket length.
    pub fn quote_query(&self, key: &ObjectKey) -> (u64, bool) {
        self.price_lookup(hash_index(key, &self.cfg), key)
    }

    pub fn quote_query_at(&self, index: usize, key: &ObjectKey) -> Result<(u64, bool), TableError> {
        self.check_index(index)?;
        Ok(self.price_lookup(index, key))
    }

    fn price_lookup(&self, index: usize, key: &ObjectKey) -> (u64, bool) {
        match self.chains.find(index, key) {
            Some((_, depth)) => (depth, true),
            None => (self.chains.len(index) as u64, false),
        }
    }

    /// Prices `req` and, unless the price is zero, issues a challenge bound
    /// to it. Does not mutate the table.
    pub fn quote(&self, req: &Request) -> Result<Quote, TableError> {
        let index = self.route(req)?;
        let (hardness, exists) = match req.op {
            Operation::Insert => {
                if self.live.contains(&req.key) {
                    return Err(TableError::DuplicateKey(req.key.clone()));
                }
                (self.chains.len(index) as u64 + 1, false)
            }
            Operation::Query | Operation::Delete => {
                let (h, exists) = self.price_lookup(index, &req.key);
                bump(&self.ops.quote_traversal, h);
                (h, exists)
            }
        };
        let challenge = if hardness == 0 {
            None
        } else {
            bump(&self.ops.quotes_issued, 1);
            Some(self.store.issue(
                hardness,
                RequestBinding {
                    op: req.op,
                    key: req.key.clone(),
                    index,
                },
            )?)
        };
        Ok(Quote {
            index,
            hardness,
            exists,
            challenge,
        })
    }

    /// Services the request the solved challenge was bound to.
    pub fn settle(&mut self, solution: &Solution) -> Result<RequestOutcome, TableError> {
        self.settle_checked(None, solution)
    }

    fn settle_checked(
        &mut self,
        expect: Option<(Operation, &ObjectKey)>,
        solution: &Solution,
    ) -> Result<RequestOutcome, TableError> {
        let challenge = match self.store.verify(solution) {
            Ok(c) => c,
            Err(e) => {
                bump(&self.ops.rejected, 1);
                return Err(e.into());
            }
        };
        if let Some((op, key)) = expect {
            if challenge.binding.op != op || &challenge.binding.key != key {
                bump(&self.ops.rejected, 1);
                return Err(TableError::BindingMismatch);
            }
        }
        let RequestBinding { op, key, index } = challenge.binding;
        let out = match op {
            Operation::Insert => {
                if self.live.contains(&key) {
                    bump(&self.ops.rejected, 1);
                    return Err(TableError::DuplicateKey(key));
                }
                self.chains.push_back(index, key.clone());
                self.live.insert(key);
                RequestOutcome {
                    kind: OutcomeKind::Inserted,
                    index,
                    latency: 1,
                    rb_charged: challenge.hardness,
                    depth_before: None,
                }
            }
            Operation::Query | Operation::Delete => {
                let mut out = self.lookup(op, index, &key);
                out.rb_charged = challenge.hardness;
                out
            }
        };
        bump(&self.ops.settled, 1);
        Ok(out)
    }

    /// Services a lookup whose price is zero (empty bucket). Refused if the
    /// bucket is no longer empty.
    pub fn settle_free(&mut self, req: &Request) -> Result<RequestOutcome, TableError> {
        let index = self.route(req)?;
        if req.op == Operation::Insert || self.chains.len(index) != 0 {
            bump(&self.ops.rejected, 1);
            return Err(TableError::MissingSolution);
        }
        bump(&self.ops.free_probes, 1);
        Ok(RequestOutcome {
            kind: OutcomeKind::NotFound,
            index,
            latency: 0,
            rb_charged: 0,
            depth_before: None,
        })
    }

    fn lookup(&mut self, op: Operation, index: usize, key: &ObjectKey) -> RequestOutcome {
        match self.chains.find(index, key) {
            Some((slot, depth)) => {
                let kind = if op == Operation::Delete {
                    let k = self.chains.remove(index, slot);
                    self.live.remove(&k);
                    OutcomeKind::Deleted
                } else {
                    if self.cfg.move_to_front {
                        self.chains.move_to_front(index, slot);
                    }
                    OutcomeKind::Found
                };
                RequestOutcome {
                    kind,
                    index,
                    latency: depth,
                    rb_charged: depth,
                    depth_before: Some(depth),
                }
            }
            None => {
                let len = self.chains.len(index) as u64;
                RequestOutcome {
                    kind: OutcomeKind::NotFound,
                    index,
                    latency: len,
                    rb_charged: len,
                    depth_before: None,
                }
            }
        }
    }

    /// Inserts `key` at the tail of the bucket the challenge was bound to.
    pub fn insert(&mut self, key: &ObjectKey, solution: &Solution) -> Result<RequestOutcome, TableError> {
        self.settle_checked(Some((Operation::Insert, key)), solution)
    }

    pub fn execute_query(&mut self, key: &ObjectKey, solution: &Solution) -> Result<RequestOutcome, TableError> {
        self.settle_checked(Some((Operation::Query, key)), solution)
    }

    pub fn execute_delete(&mut self, key: &ObjectKey, solution: &Solution) -> Result<RequestOutcome, TableError> {
        self.settle_checked(Some((Operation::Delete, key)), solution)
    }

    /// Runs the whole handshake for `req` locally: quote, solve with the
    /// table's backend on behalf of `meter`'s owner, settle.
    pub fn submit(&mut self, req: &Request, meter: &mut WorkMeter) -> Result<RequestOutcome, TableError> {
        let quote = self.quote(req)?;
        match quote.challenge {
            Some(ch) => {
                let solution = self.backend().solve(&ch, meter);
                self.settle(&solution)
            }
            None => self.settle_free(req),
        }
    }

    pub fn bucket(&self, index: usize) -> Result<BucketView, TableError> {
        self.check_index(index)?;
        Ok(BucketView {
            entries: self.chains.iter(index).cloned().collect(),
            tail: self.chains.tail(index).cloned(),
        })
    }

    /// Visits the keys of one bucket head first without cloning.
    pub fn for_each_in_bucket(&self, index: usize, mut f: impl FnMut(u64, &ObjectKey)) {
        for (pos, key) in self.chains.iter(index).enumerate() {
            f(pos as u64 + 1, key);
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            buckets: (0..self.cfg.index_count)
                .map(|i| self.bucket(i).expect("in range"))
                .collect(),
        }
    }

    pub fn ops(&self) -> OpsMetrics {
        OpsMetrics {
            quotes_issued: self.ops.quotes_issued.load(Ordering::Relaxed),
            quote_traversal: self.ops.quote_traversal.load(Ordering::Relaxed),
            settled: self.ops.settled.load(Ordering::Relaxed),
            rejected: self.ops.rejected.load(Ordering::Relaxed),
            free_probes: self.ops.free_probes.load(Ordering::Relaxed),
            unsettled: self.store.outstanding() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(t: usize) -> Table {
        Table::new(TableConfig::new(t, 7).simulation(), Backend::Ledger).unwrap()
    }

    fn run(table: &mut Table, op: Operation, key: &str, index: usize) -> RequestOutcome {
        table
            .submit(&Request::at(op, ObjectKey::from(key), index), &mut WorkMeter::default())
            .unwrap()
    }

    fn keys(table: &Table, index: usize) -> Vec<String> {
        table.bucket(index).unwrap().entries.iter().map(|k| k.to_string()).collect()
    }

    #[test]
    fn hash_index_is_deterministic_and_single_bucket_maps_to_zero() {
        let cfg = TableConfig::new(1024, 99);
        let k = ObjectKey::from("hello");
        assert_eq!(hash_index(&k, &cfg), hash_index(&k, &cfg));
        assert_eq!(hash_index(&k, &TableConfig::new(1, 99)), 0);
    }

    #[test]
    fn quote_insert_is_length_plus_one() {
        let mut t = table(2);
        assert_eq!(t.quote_insert(0).unwrap(), 1);
        for (i, k) in ["a", "b", "c"].iter().enumerate() {
            let out = run(&mut t, Operation::Insert, k, 0);
            assert_eq!(out.rb_charged, i as u64 + 1);
            assert_eq!(out.latency, 1);
        }
        assert_eq!(t.quote_insert(0).unwrap(), 4);
        assert_eq!(t.quote_insert(2), Err(TableError::IndexOutOfRange { index: 2, count: 2 }));
    }

    #[test]
    fn insert_appends_at_tail() {
        let mut t = table(1);
        run(&mut t, Operation::Insert, "a", 0);
        run(&mut t, Operation::Insert, "b", 0);
        run(&mut t, Operation::Insert, "new", 0);
        assert_eq!(keys(&t, 0), ["a", "b", "new"]);
        assert!(t.bucket(0).unwrap().tail_valid());
    }

    #[test]
    fn ten_inserts_cost_fifty_five() {
        let mut t = table(1);
        let total: u64 = (0..10)
            .map(|i| run(&mut t, Operation::Insert, &format!("k{i}"), 0).rb_charged)
            .sum();
        assert_eq!(total, 10 * 11 / 2);
        assert_eq!(t.quote_insert(0).unwrap(), 11);
    }

    #[test]
    fn query_moves_to_front() {
        let mut t = table(1);
        for k in ["a", "b", "c"] {
            run(&mut t, Operation::Insert, k, 0);
        }
        assert_eq!(t.quote_query_at(0, &ObjectKey::from("a")).unwrap(), (1, true));
        assert_eq!(t.quote_query_at(0, &ObjectKey::from("zz")).unwrap(), (3, false));
        let out = run(&mut t, Operation::Query, "c", 0);
        assert_eq!(out.kind, OutcomeKind::Found);
        assert_eq!((out.latency, out.rb_charged, out.depth_before), (3, 3, Some(3)));
        assert_eq!(keys(&t, 0), ["c", "a", "b"]);
        let out = run(&mut t, Operation::Query, "c", 0);
        assert_eq!(out.latency, 1);
        assert_eq!(keys(&t, 0), ["c", "a", "b"]);
    }

    #[test]
    fn pumping_shallow_objects_leaves_deeper_good_object_alone() {
        let mut t = table(1);
        for k in ["x1", "x2", "g"] {
            run(&mut t, Operation::Insert, k, 0);
        }
        run(&mut t, Operation::Query, "x2", 0);
        run(&mut t, Operation::Query, "x1", 0);
        assert_eq!(keys(&t, 0), ["x1", "x2", "g"]);
    }

    #[test]
    fn absent_query_costs_bucket_length() {
        let mut t = table(2);
        for k in ["a", "b", "c", "d"] {
            run(&mut t, Operation::Insert, k, 1);
        }
        let out = run(&mut t, Operation::Query, "nope", 1);
        assert_eq!(out.kind, OutcomeKind::NotFound);
        assert_eq!((out.latency, out.rb_charged), (4, 4));
    }

    #[test]
    fn delete_splices_and_then_lookup_misses() {
        let mut t = table(1);
        for k in ["a", "b", "c"] {
            run(&mut t, Operation::Insert, k, 0);
        }
        let out = run(&mut t, Operation::Delete, "b", 0);
        assert_eq!(out.kind, OutcomeKind::Deleted);
        assert_eq!(out.latency, 2);
        assert_eq!(keys(&t, 0), ["a", "c"]);
        assert_eq!(t.bucket(0).unwrap().depth_of(&ObjectKey::from("c")), Some(2));
        let out = run(&mut t, Operation::Query, "b", 0);
        assert_eq!(out.kind, OutcomeKind::NotFound);
        assert_eq!(out.latency, 2);
    }

    #[test]
    fn deleting_sole_element_clears_tail() {
        let mut t = table(1);
        run(&mut t, Operation::Insert, "a", 0);
        run(&mut t, Operation::Delete, "a", 0);
        let b = t.bucket(0).unwrap();
        assert!(b.is_empty());
        assert!(b.tail.is_none());
    }

    #[test]
    fn empty_bucket_lookup_needs_no_challenge() {
        let mut t = table(1);
        let req = Request::at(Operation::Query, ObjectKey::from("a"), 0);
        let q = t.quote(&req).unwrap();
        assert_eq!(q.hardness, 0);
        assert!(q.challenge.is_none());
        let out = t.settle_free(&req).unwrap();
        assert_eq!((out.latency, out.rb_charged), (0, 0));
        assert_eq!(t.ops().free_probes, 1);
        run(&mut t, Operation::Insert, "b", 0);
        assert_eq!(t.settle_free(&req), Err(TableError::MissingSolution));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let mut t = table(2);
        run(&mut t, Operation::Insert, "a", 0);
        let req = Request::at(Operation::Insert, ObjectKey::from("a"), 1);
        assert_eq!(t.quote(&req), Err(TableError::DuplicateKey(ObjectKey::from("a"))));
    }

    #[test]
    fn replayed_solution_is_rejected_without_mutation() {
        let mut t = table(1);
        let req = Request::at(Operation::Insert, ObjectKey::from("a"), 0);
        let ch = t.quote(&req).unwrap().challenge.unwrap();
        let sol = Backend::Ledger.solve(&ch, &mut WorkMeter::default());
        t.insert(&req.key, &sol).unwrap();
        let before = t.snapshot();
        assert_eq!(t.insert(&req.key, &sol), Err(TableError::Rejected(RbError::UnknownChallenge)));
        assert_eq!(t.snapshot(), before);
    }

    #[test]
    fn solution_for_another_request_is_refused() {
        let mut t = table(1);
        run(&mut t, Operation::Insert, "a", 0);
        let req = Request::at(Operation::Query, ObjectKey::from("a"), 0);
        let ch = t.quote(&req).unwrap().challenge.unwrap();
        let sol = Backend::Ledger.solve(&ch, &mut WorkMeter::default());
        assert_eq!(t.execute_delete(&req.key, &sol), Err(TableError::BindingMismatch));
        assert_eq!(keys(&t, 0), ["a"]);
    }

    #[test]
    fn quoted_hardness_is_honoured_after_bucket_grows() {
        let mut t = table(1);
        run(&mut t, Operation::Insert, "a", 0);
        let req = Request::at(Operation::Insert, ObjectKey::from("late"), 0);
        let ch = t.quote(&req).unwrap().challenge.unwrap();
        assert_eq!(ch.hardness, 2);
        run(&mut t, Operation::Insert, "b", 0);
        let sol = Backend::Ledger.solve(&ch, &mut WorkMeter::default());
        let out = t.settle(&sol).unwrap();
        assert_eq!(out.rb_charged, 2);
        assert_eq!(keys(&t, 0), ["a", "b", "late"]);
    }

    #[test]
    fn declared_index_ignored_outside_simulation() {
        let cfg = TableConfig::new(64, 3);
        let t = Table::new(cfg, Backend::Ledger).unwrap();
        let key = ObjectKey::from("k");
        let req = Request::at(Operation::Insert, key.clone(), 63);
        assert_eq!(t.route(&req).unwrap(), hash_index(&key, &cfg));
    }

    #[test]
    fn mtf_disabled_leaves_order() {
        let mut cfg = TableConfig::new(1, 0).simulation();
        cfg.move_to_front = false;
        let mut t = Table::new(cfg, Backend::Ledger).unwrap();
        for k in ["a", "b"] {
            run(&mut t, Operation::Insert, k, 0);
        }
        run(&mut t, Operation::Query, "b", 0);
        assert_eq!(keys(&t, 0), ["a", "b"]);
    }
}
