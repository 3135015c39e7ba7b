//! Metered simulation harness.
//!
//! [`Sim`] drives a [`Table`] on behalf of two principals, the good client
//! and the adversary. Each principal solves its own challenges against its
//! own [`WorkMeter`], every settled request is recorded in a [`CostLedger`],
//! and the harness (not the table) remembers which objects are good. The
//! optional [`WalletOracle`] is checked after every request.
//!
//! Bad objects are keyed `bad-<n>` and carry a declared index, so the
//! adversary can target any index without searching for hash collisions.

use std::collections::HashMap;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::accounting::{
    bound_report, BoundCheck, BoundParams, CheckName, CostLedger, GoodObjectStats, Label, Principal, Relation,
    WalletOracle,
};
use crate::rb::{Backend, WorkMeter};
use crate::table::{
    hash_index, ObjectKey, Operation, OutcomeKind, Request, RequestOutcome, Table, TableConfig, TableError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("the adversary may not delete good object {0}")]
    AdversaryDeletesGood(ObjectKey),
    #[error("unknown object {0}")]
    UnknownObject(ObjectKey),
}

/// One settled request, as written to the trace file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub seq: u64,
    pub principal: &'static str,
    pub op: &'static str,
    pub index: usize,
    pub hardness: u64,
    pub status: &'static str,
    pub latency: u64,
    pub rb_charged: u64,
    /// Empty when the object was not found or newly inserted.
    pub depth_before: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub table: TableConfig,
    pub backend: Backend,
    /// Seeds the challenge store.
    pub seed: u64,
    pub wallet_oracle: bool,
    pub trace: bool,
}

impl SimConfig {
    pub fn new(table: TableConfig) -> Self {
        SimConfig {
            table,
            backend: Backend::Ledger,
            seed: 0,
            wallet_oracle: true,
            trace: false,
        }
    }
}

#[derive(Debug)]
pub struct Sim {
    table: Table,
    ledger: CostLedger,
    stats: GoodObjectStats,
    oracle: Option<WalletOracle>,
    client: WorkMeter,
    adversary: WorkMeter,
    labels: HashMap<ObjectKey, (Label, usize)>,
    good: IndexSet<ObjectKey>,
    good_at: Vec<IndexSet<ObjectKey>>,
    bad_at: Vec<IndexSet<ObjectKey>>,
    trace: Option<Vec<TraceRow>>,
    rng: ChaCha8Rng,
    next_bad: u64,
    redraws: u64,
    seq: u64,
}

impl Sim {
    pub fn new(cfg: SimConfig) -> Result<Self, SimError> {
        let table_cfg = cfg.table.simulation();
        let store = crate::rb::ChallengeStore::new(cfg.backend, cfg.seed);
        let table = Table::with_store(table_cfg, store)?;
        let t = table_cfg.index_count;
        Ok(Sim {
            table,
            ledger: CostLedger::default(),
            stats: GoodObjectStats::new(t),
            oracle: cfg.wallet_oracle.then(WalletOracle::new),
            client: WorkMeter::default(),
            adversary: WorkMeter::default(),
            labels: HashMap::new(),
            good: IndexSet::new(),
            good_at: vec![IndexSet::new(); t],
            bad_at: vec![IndexSet::new(); t],
            trace: cfg.trace.then(Vec::new),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6b65_7973),
            next_bad: 0,
            redraws: 0,
            seq: 0,
        })
    }

    /// Ledger backend, wallet oracle on, no trace.
    pub fn with_indices(index_count: usize, seed: u64) -> Result<Self, SimError> {
        let mut cfg = SimConfig::new(TableConfig::new(index_count, seed));
        cfg.seed = seed;
        Sim::new(cfg)
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn stats(&self) -> &GoodObjectStats {
        &self.stats
    }

    pub fn oracle(&self) -> Option<&WalletOracle> {
        self.oracle.as_ref()
    }

    pub fn oracle_mut(&mut self) -> Option<&mut WalletOracle> {
        self.oracle.as_mut()
    }

    pub fn client_meter(&self) -> WorkMeter {
        self.client
    }

    pub fn adversary_meter(&self) -> WorkMeter {
        self.adversary
    }

    pub fn trace(&self) -> Option<&[TraceRow]> {
        self.trace.as_deref()
    }

    pub fn index_count(&self) -> usize {
        self.table.index_count()
    }

    pub fn label(&self, key: &ObjectKey) -> Option<Label> {
        self.labels.get(key).map(|&(l, _)| l)
    }

    pub fn index_of(&self, key: &ObjectKey) -> Option<usize> {
        self.labels.get(key).map(|&(_, i)| i)
    }

    /// All live good objects, in insertion order (with swap-removal).
    pub fn good_keys(&self) -> &IndexSet<ObjectKey> {
        &self.good
    }

    pub fn good_at(&self, index: usize) -> &IndexSet<ObjectKey> {
        &self.good_at[index]
    }

    pub fn bad_at(&self, index: usize) -> &IndexSet<ObjectKey> {
        &self.bad_at[index]
    }

    /// Index currently holding the most good objects (lowest on ties).
    pub fn most_good_index(&self) -> usize {
        (0..self.index_count())
            .max_by_key(|&i| (self.good_at[i].len(), std::cmp::Reverse(i)))
            .unwrap_or(0)
    }

    /// Depth of a live object, by walking its bucket.
    pub fn depth_of(&self, key: &ObjectKey) -> Option<u64> {
        let index = self.index_of(key)?;
        let mut found = None;
        self.table.for_each_in_bucket(index, |d, k| {
            if found.is_none() && k == key {
                found = Some(d);
            }
        });
        found
    }

    pub fn redraws(&self) -> u64 {
        self.redraws
    }

    pub fn note_redraw(&mut self) {
        self.redraws += 1;
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A fresh 16-byte key that is not live.
    pub fn fresh_key(&mut self) -> ObjectKey {
        loop {
            let bytes: [u8; 16] = self.rng.gen();
            let key = ObjectKey::new(bytes.to_vec());
            if !self.labels.contains_key(&key) {
                return key;
            }
        }
    }

    /// A fresh key that hashes to `index`, by rejection sampling.
    pub fn fresh_key_at(&mut self, index: usize) -> ObjectKey {
        let cfg = *self.table.config();
        loop {
            let key = self.fresh_key();
            if hash_index(&key, &cfg) == index {
                return key;
            }
        }
    }

    fn bad_key(&mut self) -> ObjectKey {
        self.next_bad += 1;
        ObjectKey::from(format!("bad-{}", self.next_bad).into_bytes())
    }

    /// Runs one request through quote, solve and settle for `principal`.
    pub fn submit(&mut self, principal: Principal, req: &Request) -> Result<RequestOutcome, SimError> {
        let known = self.labels.get(&req.key).copied();
        if principal == Principal::Adversary && req.op == Operation::Delete {
            if let Some((Label::Good, _)) = known {
                return Err(SimError::AdversaryDeletesGood(req.key.clone()));
            }
        }
        let quote = self.table.quote(req)?;
        let index = quote.index;

        // Pre-request view of the entries the request may displace.
        let pre = match (&self.oracle, req.op) {
            (Some(_), Operation::Query) if quote.exists => self.labelled_prefix(index, quote.hardness as usize),
            _ => Vec::new(),
        };
        let pre_len = self.table.bucket_len(index)?;

        let meter = match principal {
            Principal::Client => &mut self.client,
            Principal::Adversary => &mut self.adversary,
        };
        let outcome = match &quote.challenge {
            Some(ch) => {
                let sol = self.table.backend().solve(ch, meter);
                self.table.settle(&sol)?
            }
            None => self.table.settle_free(req)?,
        };

        self.ledger.record(&outcome, principal);
        match outcome.kind {
            OutcomeKind::Inserted => {
                let label = match principal {
                    Principal::Client => Label::Good,
                    Principal::Adversary => Label::Bad,
                };
                self.labels.insert(req.key.clone(), (label, index));
                match label {
                    Label::Good => {
                        self.good.insert(req.key.clone());
                        self.good_at[index].insert(req.key.clone());
                    }
                    Label::Bad => {
                        self.bad_at[index].insert(req.key.clone());
                    }
                }
                self.stats.on_insert(index, label);
            }
            OutcomeKind::Deleted => {
                if let Some((label, _)) = self.labels.remove(&req.key) {
                    match label {
                        Label::Good => {
                            self.good.swap_remove(&req.key);
                            self.good_at[index].swap_remove(&req.key);
                        }
                        Label::Bad => {
                            self.bad_at[index].swap_remove(&req.key);
                        }
                    }
                    self.stats.on_delete(index, label);
                }
            }
            _ => {}
        }

        if let Some(oracle) = self.oracle.as_mut() {
            oracle.observe(pre_len, &pre, principal, &req.key, &outcome);
            oracle.note_bucket_checked();
            let good = &self.good_at[index];
            if !good.is_empty() {
                self.table.for_each_in_bucket(index, |d, k| {
                    if good.contains(k) {
                        oracle.check_one(index, d, k);
                    }
                });
            }
        }

        if let Some(trace) = self.trace.as_mut() {
            self.seq += 1;
            trace.push(TraceRow {
                seq: self.seq,
                principal: principal.as_str(),
                op: req.op.as_str(),
                index,
                hardness: quote.hardness,
                status: outcome.kind.as_str(),
                latency: outcome.latency,
                rb_charged: outcome.rb_charged,
                depth_before: outcome.depth_before,
            });
        }
        Ok(outcome)
    }

    fn labelled_prefix(&self, index: usize, n: usize) -> Vec<(ObjectKey, Label)> {
        let mut out = Vec::with_capacity(n);
        self.table.for_each_in_bucket(index, |d, k| {
            if (d as usize) <= n {
                let label = self.labels.get(k).map_or(Label::Bad, |&(l, _)| l);
                out.push((k.clone(), label));
            }
        });
        out
    }

    pub fn good_insert(&mut self, key: ObjectKey) -> Result<RequestOutcome, SimError> {
        self.submit(Principal::Client, &Request::new(Operation::Insert, key))
    }

    /// Inserts a fresh good key that hashes to `index`.
    pub fn good_insert_at(&mut self, index: usize) -> Result<(ObjectKey, RequestOutcome), SimError> {
        let key = self.fresh_key_at(index);
        let out = self.good_insert(key.clone())?;
        Ok((key, out))
    }

    pub fn good_query(&mut self, key: &ObjectKey) -> Result<RequestOutcome, SimError> {
        self.submit(Principal::Client, &Request::new(Operation::Query, key.clone()))
    }

    pub fn good_delete(&mut self, key: &ObjectKey) -> Result<RequestOutcome, SimError> {
        self.submit(Principal::Client, &Request::new(Operation::Delete, key.clone()))
    }

    /// Adversary inserts a fresh bad object at `index`.
    pub fn bad_insert(&mut self, index: usize) -> Result<(ObjectKey, RequestOutcome), SimError> {
        let key = self.bad_key();
        let out = self.submit(Principal::Adversary, &Request::at(Operation::Insert, key.clone(), index))?;
        Ok((key, out))
    }

    /// Adversary queries any live object (good or bad).
    pub fn adversary_query(&mut self, key: &ObjectKey) -> Result<RequestOutcome, SimError> {
        let index = self.index_of(key).ok_or_else(|| SimError::UnknownObject(key.clone()))?;
        self.submit(Principal::Adversary, &Request::at(Operation::Query, key.clone(), index))
    }

    pub fn bad_delete(&mut self, key: &ObjectKey) -> Result<RequestOutcome, SimError> {
        let index = self.index_of(key).ok_or_else(|| SimError::UnknownObject(key.clone()))?;
        self.submit(Principal::Adversary, &Request::at(Operation::Delete, key.clone(), index))
    }

    /// Adversary looks up a key that does not exist at `index`.
    pub fn probe(&mut self, index: usize) -> Result<RequestOutcome, SimError> {
        let key = self.bad_key();
        self.submit(Principal::Adversary, &Request::at(Operation::Query, key, index))
    }

    /// Solver-side meters agree with the ledger totals.
    pub fn ledger_exact(&self) -> bool {
        self.client.rb_units == self.ledger.algorithm_rb && self.adversary.rb_units == self.ledger.adversary_rb
    }

    /// Evaluates `names` (or every applicable check when empty), including
    /// the wallet invariant and ledger exactness.
    pub fn checks(&self, names: &[CheckName], params: &BoundParams) -> Vec<BoundCheck> {
        let mut all = bound_report(&self.ledger, &self.stats, params);
        if let Some(o) = &self.oracle {
            let c = BoundCheck::new(CheckName::WalletInvariant, Relation::AtMost, 0.0, o.violations().len() as f64);
            all.insert(CheckName::WalletInvariant, c);
        }
        let mismatch = self.client.rb_units.abs_diff(self.ledger.algorithm_rb)
            + self.adversary.rb_units.abs_diff(self.ledger.adversary_rb);
        all.insert(
            CheckName::LedgerExactness,
            BoundCheck::new(CheckName::LedgerExactness, Relation::AtMost, 0.0, mismatch as f64),
        );
        if names.is_empty() {
            all.into_values().collect()
        } else {
            names.iter().filter_map(|n| all.get(n).cloned()).collect()
        }
    }
}
