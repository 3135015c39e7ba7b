//! Resource-burning (RB) challenges.
//!
//! An `x`-hard challenge is realised as `x` independent unit puzzles, so the
//! expected solving work is linear in the hardness. Two backends exist:
//!
//! * [`Backend::Ledger`] treats payment as pure bookkeeping: a solution is a
//!   bare token and the hardness is debited to the solver's [`WorkMeter`].
//! * [`Backend::Pow`] requires one hash witness per unit. A witness for unit
//!   `u` is a nonce `n` with `sip24(salt; id, u, n) < unit_threshold`.
//!
//! Challenges are single-use. Any verification attempt against a known
//! challenge consumes it, so a failed attempt needs a fresh quote.

use std::collections::HashMap;
use std::hash::Hasher;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use siphasher::sip::SipHasher24;
use thiserror::Error;

use crate::table::{ObjectKey, Operation};

/// Unit threshold giving an expected 256 hash evaluations per unit puzzle.
pub const DEFAULT_UNIT_THRESHOLD: u64 = 1 << 56;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChallengeId(pub u128);

/// What a challenge pays for. A solution is only honoured for the request it
/// was issued against.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RequestBinding {
    pub op: Operation,
    pub key: ObjectKey,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    pub id: ChallengeId,
    pub hardness: u64,
    pub binding: RequestBinding,
    pub nonce_salt: u128,
    /// Logical issue sequence number within the issuing store.
    pub issued_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub challenge_id: ChallengeId,
    /// One nonce per unit puzzle; empty for the ledger backend.
    pub proofs: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RbError {
    #[error("challenge hardness must be at least 1")]
    ZeroHardness,
    #[error("unknown or already consumed challenge")]
    UnknownChallenge,
    #[error("challenge expired")]
    Expired,
    #[error("expected {expected} witnesses, got {got}")]
    WitnessCount { expected: u64, got: usize },
    #[error("witness for unit {unit} does not satisfy the threshold")]
    BadWitness { unit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Ledger,
    Pow { unit_threshold: u64 },
}

impl Backend {
    pub fn pow() -> Self {
        Backend::Pow {
            unit_threshold: DEFAULT_UNIT_THRESHOLD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Ledger => "ledger",
            Backend::Pow { .. } => "pow",
        }
    }

    /// Expected hash evaluations per unit puzzle (`1/p`); zero for the ledger.
    pub fn expected_unit_work(&self) -> f64 {
        match *self {
            Backend::Ledger => 0.0,
            Backend::Pow { unit_threshold } => 2f64.powi(64) / unit_threshold as f64,
        }
    }

    /// Solves `challenge` on behalf of whoever owns `meter`.
    pub fn solve(&self, challenge: &Challenge, meter: &mut WorkMeter) -> Solution {
        self.solve_parts(challenge.id, challenge.hardness, challenge.nonce_salt, meter)
    }

    /// Solves a challenge known only by its wire fields.
    pub fn solve_parts(&self, id: ChallengeId, hardness: u64, nonce_salt: u128, meter: &mut WorkMeter) -> Solution {
        meter.rb_units += hardness;
        meter.challenges_solved += 1;
        let proofs = match *self {
            Backend::Ledger => Vec::new(),
            Backend::Pow { unit_threshold } => (0..hardness)
                .map(|unit| {
                    let mut nonce = 0u64;
                    loop {
                        meter.hash_evaluations += 1;
                        if unit_hash(nonce_salt, id, unit, nonce) < unit_threshold {
                            break nonce;
                        }
                        nonce += 1;
                    }
                })
                .collect(),
        };
        Solution { challenge_id: id, proofs }
    }

    /// Checks the witnesses only; outstanding-ness is the store's concern.
    /// Returns the number of hash evaluations spent.
    pub fn check_witnesses(&self, challenge: &Challenge, solution: &Solution) -> Result<u64, RbError> {
        match *self {
            Backend::Ledger => Ok(0),
            Backend::Pow { unit_threshold } => {
                if solution.proofs.len() as u64 != challenge.hardness {
                    return Err(RbError::WitnessCount {
                        expected: challenge.hardness,
                        got: solution.proofs.len(),
                    });
                }
                for (unit, &nonce) in solution.proofs.iter().enumerate() {
                    let unit = unit as u64;
                    if unit_hash(challenge.nonce_salt, challenge.id, unit, nonce) >= unit_threshold {
                        return Err(RbError::BadWitness { unit });
                    }
                }
                Ok(challenge.hardness)
            }
        }
    }
}

/// Keyed hash of one unit puzzle attempt. Binding the challenge id and unit
/// index into the input means a witness never transfers between challenges.
pub fn unit_hash(salt: u128, id: ChallengeId, unit: u64, nonce: u64) -> u64 {
    let mut h = SipHasher24::new_with_keys(salt as u64, (salt >> 64) as u64);
    h.write(&id.0.to_le_bytes());
    h.write(&unit.to_le_bytes());
    h.write(&nonce.to_le_bytes());
    h.finish()
}

/// Resources burned by one principal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct WorkMeter {
    /// Sum of hardness over solved challenges.
    pub rb_units: u64,
    pub hash_evaluations: u64,
    pub challenges_solved: u64,
}

#[derive(Debug, Clone)]
struct Outstanding {
    challenge: Challenge,
    issued: Instant,
}

#[derive(Debug, Clone)]
struct StoreInner {
    outstanding: HashMap<ChallengeId, Outstanding>,
    rng: ChaCha8Rng,
    epoch: u64,
    seq: u64,
    verify_evaluations: u64,
}

/// Registry of outstanding challenges. Issue and verify may be called
/// concurrently; consumption is atomic.
#[derive(Debug)]
pub struct ChallengeStore {
    backend: Backend,
    expiry: Option<Duration>,
    inner: Mutex<StoreInner>,
}

impl ChallengeStore {
    pub fn new(backend: Backend, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let epoch = rng.gen();
        ChallengeStore {
            backend,
            expiry: None,
            inner: Mutex::new(StoreInner {
                outstanding: HashMap::new(),
                rng,
                epoch,
                seq: 0,
                verify_evaluations: 0,
            }),
        }
    }

    pub fn with_expiry(mut self, expiry: Duration) -> Self {
        self.expiry = Some(expiry);
        self
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn expiry(&self) -> Option<Duration> {
        self.expiry
    }

    pub fn issue(&self, hardness: u64, binding: RequestBinding) -> Result<Challenge, RbError> {
        if hardness == 0 {
            return Err(RbError::ZeroHardness);
        }
        let mut inner = self.inner.lock().unwrap();
        inner.seq += 1;
        // High half is a per-store epoch, low half a counter: ids never repeat.
        let id = ChallengeId(((inner.epoch as u128) << 64) | inner.seq as u128);
        let challenge = Challenge {
            id,
            hardness,
            binding,
            nonce_salt: inner.rng.gen(),
            issued_at: inner.seq,
        };
        inner.outstanding.insert(
            id,
            Outstanding {
                challenge: challenge.clone(),
                issued: Instant::now(),
            },
        );
        Ok(challenge)
    }

    pub fn verify(&self, solution: &Solution) -> Result<Challenge, RbError> {
        self.verify_at(solution, Instant::now())
    }

    /// Consumes the referenced challenge and returns it if the solution is
    /// acceptable at time `now`.
    pub fn verify_at(&self, solution: &Solution, now: Instant) -> Result<Challenge, RbError> {
        let entry = {
            let mut inner = self.inner.lock().unwrap();
            inner
                .outstanding
                .remove(&solution.challenge_id)
                .ok_or(RbError::UnknownChallenge)?
        };
        if let Some(expiry) = self.expiry {
            if now.saturating_duration_since(entry.issued) > expiry {
                return Err(RbError::Expired);
            }
        }
        let spent = self.backend.check_witnesses(&entry.challenge, solution);
        let mut inner = self.inner.lock().unwrap();
        match spent {
            Ok(n) => {
                inner.verify_evaluations += n;
                Ok(entry.challenge)
            }
            Err(e) => {
                inner.verify_evaluations += solution.proofs.len() as u64;
                Err(e)
            }
        }
    }

    /// Independent copy, outstanding challenges included.
    pub fn duplicate(&self) -> Self {
        ChallengeStore {
            backend: self.backend,
            expiry: self.expiry,
            inner: Mutex::new(self.inner.lock().unwrap().clone()),
        }
    }

    pub fn outstanding(&self) -> usize {
        self.inner.lock().unwrap().outstanding.len()
    }

    /// Hash evaluations spent verifying witnesses so far.
    pub fn verify_evaluations(&self) -> u64 {
        self.inner.lock().unwrap().verify_evaluations
    }
}
