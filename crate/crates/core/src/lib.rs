//! A chained hash table that prices every request with a resource-burning
//! challenge proportional to the depth it touches, plus a simulation harness
//! that pits the table against scripted adversaries and checks the resulting
//! cost ledgers against closed-form bounds.
//!
//! Start with [`table::Table`] for the data structure itself, [`sim::Sim`]
//! for metered simulation, and [`scenario`] for declarative runs. The
//! crate's `examples/` directory has one runnable program per capability.

mod chain;

pub mod accounting;
pub mod adversary;
pub mod rb;
pub mod scenario;
pub mod service;
pub mod sim;
pub mod table;
pub mod workload;

pub use rb::{Backend, Challenge, ChallengeId, Solution, WorkMeter};
pub use table::{hash_index, ObjectKey, Operation, OutcomeKind, Request, RequestOutcome, Table, TableConfig};
