//! Good-client request generation.
//!
//! Good keys are fresh random 16-byte strings, so their indices are uniform
//! through the hash. Queries either follow the worst-case schedule (always
//! the deepest live good object) or pick an index uniformly at random and
//! then a good object uniformly within it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sim::{Sim, SimError};
use crate::table::{hash_index, ObjectKey, RequestOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryMode {
    /// Query the deepest live good object.
    #[default]
    Scripted,
    /// Draw an index uniformly at random, redrawing indices without good
    /// objects, then a good object uniformly within it.
    UarIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    #[serde(default)]
    pub mode: QueryMode,
    #[serde(default)]
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    #[serde(default)]
    pub good_inserts: u64,
    #[serde(default)]
    pub queries: QuerySpec,
    #[serde(default)]
    pub deletes: u64,
    #[serde(default)]
    pub rng_seed: u64,
}

#[derive(Debug, Clone)]
pub struct Workload {
    spec: WorkloadSpec,
    rng: ChaCha8Rng,
    pub inserted: u64,
    pub queried: u64,
    pub deleted: u64,
}

impl Workload {
    pub fn new(spec: WorkloadSpec) -> Self {
        Workload {
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.rng_seed),
            inserted: 0,
            queried: 0,
            deleted: 0,
        }
    }

    pub fn spec(&self) -> &WorkloadSpec {
        &self.spec
    }

    fn fresh_key(&mut self, sim: &Sim) -> ObjectKey {
        loop {
            let bytes: [u8; 16] = self.rng.gen();
            let key = ObjectKey::new(bytes.to_vec());
            if sim.label(&key).is_none() {
                return key;
            }
        }
    }

    /// Inserts a fresh good key at its hashed index.
    pub fn gen_good_insert(&mut self, sim: &mut Sim) -> Result<RequestOutcome, SimError> {
        let key = self.fresh_key(sim);
        let out = sim.good_insert(key)?;
        self.inserted += 1;
        Ok(out)
    }

    /// Inserts a fresh good key that hashes to `index`.
    pub fn gen_good_insert_at(&mut self, sim: &mut Sim, index: usize) -> Result<RequestOutcome, SimError> {
        let cfg = *sim.table().config();
        let key = loop {
            let k = self.fresh_key(sim);
            if hash_index(&k, &cfg) == index {
                break k;
            }
        };
        let out = sim.good_insert(key)?;
        self.inserted += 1;
        Ok(out)
    }

    pub fn gen_query(&mut self, sim: &mut Sim) -> Result<Option<RequestOutcome>, SimError> {
        match self.spec.queries.mode {
            QueryMode::Scripted => self.gen_scripted_query(sim),
            QueryMode::UarIndex => self.gen_uar_query(sim),
        }
    }

    /// `None` when no good object is live.
    pub fn gen_uar_query(&mut self, sim: &mut Sim) -> Result<Option<RequestOutcome>, SimError> {
        if sim.good_keys().is_empty() {
            return Ok(None);
        }
        let t = sim.index_count();
        let key = loop {
            let index = self.rng.gen_range(0..t);
            let here = sim.good_at(index);
            if here.is_empty() {
                sim.note_redraw();
                continue;
            }
            break here[self.rng.gen_range(0..here.len())].clone();
        };
        let out = sim.good_query(&key)?;
        self.queried += 1;
        Ok(Some(out))
    }

    /// Queries the deepest live good object (ties to the earliest inserted).
    pub fn gen_scripted_query(&mut self, sim: &mut Sim) -> Result<Option<RequestOutcome>, SimError> {
        let Some(key) = deepest_good(sim) else {
            return Ok(None);
        };
        let out = sim.good_query(&key)?;
        self.queried += 1;
        Ok(Some(out))
    }

    /// Deletes a good object chosen uniformly at random.
    pub fn gen_delete(&mut self, sim: &mut Sim) -> Result<Option<RequestOutcome>, SimError> {
        let keys: Vec<ObjectKey> = sim.good_keys().iter().cloned().collect();
        let Some(key) = keys.choose(&mut self.rng).cloned() else {
            return Ok(None);
        };
        self.gen_delete_key(sim, &key).map(Some)
    }

    /// Deletes a specific key, live or not; an absent key takes the
    /// not-found path.
    pub fn gen_delete_key(&mut self, sim: &mut Sim, key: &ObjectKey) -> Result<RequestOutcome, SimError> {
        let out = sim.good_delete(key)?;
        self.deleted += 1;
        Ok(out)
    }

    /// Runs `n` queries, or the configured count when `n` is `None`.
    pub fn queries(&mut self, sim: &mut Sim, n: Option<u64>) -> Result<u64, SimError> {
        let n = n.unwrap_or(self.spec.queries.count);
        let mut done = 0;
        for _ in 0..n {
            if self.gen_query(sim)?.is_none() {
                break;
            }
            done += 1;
        }
        Ok(done)
    }

    pub fn inserts(&mut self, sim: &mut Sim, n: Option<u64>) -> Result<u64, SimError> {
        let n = n.unwrap_or(self.spec.good_inserts);
        for _ in 0..n {
            self.gen_good_insert(sim)?;
        }
        Ok(n)
    }

    pub fn deletes(&mut self, sim: &mut Sim, n: Option<u64>) -> Result<u64, SimError> {
        let n = n.unwrap_or(self.spec.deletes);
        let mut done = 0;
        for _ in 0..n {
            if self.gen_delete(sim)?.is_none() {
                break;
            }
            done += 1;
        }
        Ok(done)
    }

    /// All inserts, then all queries, then all deletes.
    pub fn run(&mut self, sim: &mut Sim) -> Result<(), SimError> {
        self.inserts(sim, None)?;
        self.queries(sim, None)?;
        self.deletes(sim, None)?;
        Ok(())
    }
}

/// Deepest live good object over the whole table.
pub fn deepest_good(sim: &Sim) -> Option<ObjectKey> {
    let mut best: Option<(u64, ObjectKey)> = None;
    for index in 0..sim.index_count() {
        if sim.good_at(index).is_empty() {
            continue;
        }
        sim.table().for_each_in_bucket(index, |d, k| {
            if sim.good_at(index).contains(k) && best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                best = Some((d, k.clone()));
            }
        });
    }
    best.map(|(_, k)| k)
}
