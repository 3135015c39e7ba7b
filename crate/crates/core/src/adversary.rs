//! Attack strategies.
//!
//! An [`Adversary`] holds a budget and spends it through a [`Sim`], so every
//! action is quoted, solved against the adversary's meter and recorded. All
//! strategies read the table freely before acting.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accounting::Label;
use crate::sim::{Sim, SimError};
use crate::table::ObjectKey;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("even spread needs b >= s >= 1 (got b = {b}, s = {s})")]
    SpreadTooThin { b: u64, s: usize },
    #[error("script step {step}: {message}")]
    Script { step: usize, message: String },
}

/// What one strategy invocation did.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AttackReport {
    pub strategy: String,
    pub actions: u64,
    pub spent: u64,
    pub per_index: BTreeMap<usize, u64>,
    /// Actions requested but not executed (budget or table shape).
    pub shortfall: u64,
}

impl AttackReport {
    fn new(strategy: &str) -> Self {
        AttackReport {
            strategy: strategy.to_string(),
            ..Default::default()
        }
    }

    fn add(&mut self, index: usize, cost: u64) {
        self.actions += 1;
        self.spent += cost;
        *self.per_index.entry(index).or_insert(0) += cost;
    }
}

/// One step of a scripted interleaving. Objects are referred to by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScriptAction {
    BadInsert { name: String, index: usize },
    /// Adversary query of any named object, good or bad.
    BadQuery { name: String },
    BadDelete { name: String },
    Flood { index: usize, budget: u64 },
    Pump { target: String, depth: u64 },
    Probe { index: usize },
    /// Good insertion; hashes freely unless `index` pins it.
    GoodInsert { name: String, index: Option<usize> },
    GoodQuery { name: String },
    GoodDelete { name: String },
}

/// Rejects scripts that reference unknown names or have the adversary
/// delete a good object.
pub fn validate_script(actions: &[ScriptAction], index_count: usize) -> Result<(), AttackError> {
    let mut names: HashMap<&str, Label> = HashMap::new();
    let err = |step: usize, message: String| AttackError::Script { step, message };
    for (step, a) in actions.iter().enumerate() {
        let check_index = |index: usize| {
            if index < index_count {
                Ok(())
            } else {
                Err(err(step, format!("index {index} out of range (table has {index_count} indices)")))
            }
        };
        match a {
            ScriptAction::BadInsert { name, index } | ScriptAction::GoodInsert { name, index: Some(index) } => {
                check_index(*index)?;
                let label = if matches!(a, ScriptAction::BadInsert { .. }) { Label::Bad } else { Label::Good };
                if names.insert(name, label).is_some() {
                    return Err(err(step, format!("name `{name}` is already live")));
                }
            }
            ScriptAction::GoodInsert { name, index: None } => {
                if names.insert(name, Label::Good).is_some() {
                    return Err(err(step, format!("name `{name}` is already live")));
                }
            }
            ScriptAction::BadQuery { name } | ScriptAction::Pump { target: name, .. } | ScriptAction::GoodQuery { name } => {
                if !names.contains_key(name.as_str()) {
                    return Err(err(step, format!("unknown object `{name}`")));
                }
            }
            ScriptAction::BadDelete { name } => match names.get(name.as_str()) {
                None => return Err(err(step, format!("unknown object `{name}`"))),
                Some(Label::Good) => {
                    return Err(err(step, format!("the adversary may not delete good object `{name}`")))
                }
                Some(Label::Bad) => {
                    names.remove(name.as_str());
                }
            },
            ScriptAction::GoodDelete { name } => match names.get(name.as_str()) {
                Some(Label::Good) => {
                    names.remove(name.as_str());
                }
                Some(Label::Bad) => return Err(err(step, format!("`{name}` is not a good object"))),
                None => return Err(err(step, format!("unknown object `{name}`"))),
            },
            ScriptAction::Flood { index, .. } | ScriptAction::Probe { index } => check_index(*index)?,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adversary {
    budget: u64,
    spent: u64,
}

impl Adversary {
    pub fn new(budget: u64) -> Self {
        Adversary { budget, spent: 0 }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.spent
    }

    /// Inserts bad objects at `index` until the next insertion would cost
    /// more than `budget` (capped by what remains overall).
    pub fn single_list_flood(&mut self, sim: &mut Sim, index: usize, budget: u64) -> Result<AttackReport, AttackError> {
        let mut report = AttackReport::new("single_list_flood");
        let mut allowance = budget.min(self.remaining());
        loop {
            let price = sim.table().quote_insert(index).map_err(SimError::from)?;
            if price > allowance {
                break;
            }
            let (_, out) = sim.bad_insert(index)?;
            allowance -= out.rb_charged;
            self.spent += out.rb_charged;
            report.add(index, out.rb_charged);
        }
        Ok(report)
    }

    /// Places `b` bad objects over `indices` round-robin, so counts differ by
    /// at most one.
    pub fn even_spread(&mut self, sim: &mut Sim, indices: &[usize], b: u64) -> Result<AttackReport, AttackError> {
        let s = indices.len();
        if s == 0 || b < s as u64 {
            return Err(AttackError::SpreadTooThin { b, s });
        }
        let mut report = AttackReport::new("even_spread");
        for k in 0..b {
            let index = indices[(k % s as u64) as usize];
            let price = sim.table().quote_insert(index).map_err(SimError::from)?;
            if price > self.remaining() {
                report.shortfall = b - k;
                break;
            }
            let (_, out) = sim.bad_insert(index)?;
            self.spent += out.rb_charged;
            report.add(index, out.rb_charged);
        }
        Ok(report)
    }

    /// Raises `target` by `d` positions, each time querying the first bad
    /// object below it.
    pub fn mtf_depth_pump(&mut self, sim: &mut Sim, target: &ObjectKey, d: u64) -> Result<AttackReport, AttackError> {
        let mut report = AttackReport::new("mtf_depth_pump");
        let index = sim.index_of(target).ok_or_else(|| SimError::UnknownObject(target.clone()))?;
        for done in 0..d {
            let Some(victim) = first_bad_below(sim, index, target) else {
                report.shortfall = d - done;
                break;
            };
            let (price, _) = sim.table().quote_query_at(index, &victim).map_err(SimError::from)?;
            if price > self.remaining() {
                report.shortfall = d - done;
                break;
            }
            let out = sim.adversary_query(&victim)?;
            self.spent += out.rb_charged;
            report.add(index, out.rb_charged);
        }
        Ok(report)
    }

    /// Looks up absent keys at `index` while the budget lasts. An empty
    /// bucket costs nothing to probe, so that case probes once and stops.
    pub fn spurious_probe(&mut self, sim: &mut Sim, index: usize, budget: u64) -> Result<AttackReport, AttackError> {
        let mut report = AttackReport::new("spurious_probe");
        let mut allowance = budget.min(self.remaining());
        loop {
            let price = sim.table().bucket_len(index).map_err(SimError::from)? as u64;
            if price > allowance {
                break;
            }
            let out = sim.probe(index)?;
            allowance -= out.rb_charged;
            self.spent += out.rb_charged;
            report.add(index, out.rb_charged);
            if price == 0 {
                break;
            }
        }
        Ok(report)
    }

    /// Replays `actions` after validating them. Good requests in the script
    /// are issued by the client and do not count against the budget.
    pub fn scripted(&mut self, sim: &mut Sim, actions: &[ScriptAction]) -> Result<AttackReport, AttackError> {
        validate_script(actions, sim.index_count())?;
        let mut report = AttackReport::new("scripted");
        let mut names: HashMap<String, ObjectKey> = HashMap::new();
        let key = |names: &HashMap<String, ObjectKey>, step: usize, name: &str| {
            names.get(name).cloned().ok_or_else(|| AttackError::Script {
                step,
                message: format!("unknown object `{name}`"),
            })
        };
        for (step, a) in actions.iter().enumerate() {
            let over = |cost: u64, remaining: u64| AttackError::Script {
                step,
                message: format!("costs {cost}, only {remaining} of the budget remains"),
            };
            match a {
                ScriptAction::BadInsert { name, index } => {
                    let price = sim.table().quote_insert(*index).map_err(SimError::from)?;
                    if price > self.remaining() {
                        return Err(over(price, self.remaining()));
                    }
                    let (k, out) = sim.bad_insert(*index)?;
                    self.spent += out.rb_charged;
                    report.add(*index, out.rb_charged);
                    names.insert(name.clone(), k);
                }
                ScriptAction::BadQuery { name } | ScriptAction::BadDelete { name } => {
                    let k = key(&names, step, name)?;
                    let index = sim.index_of(&k).ok_or_else(|| SimError::UnknownObject(k.clone()))?;
                    let (price, _) = sim.table().quote_query_at(index, &k).map_err(SimError::from)?;
                    if price > self.remaining() {
                        return Err(over(price, self.remaining()));
                    }
                    let out = if matches!(a, ScriptAction::BadQuery { .. }) {
                        sim.adversary_query(&k)?
                    } else {
                        names.remove(name);
                        sim.bad_delete(&k)?
                    };
                    self.spent += out.rb_charged;
                    report.add(index, out.rb_charged);
                }
                ScriptAction::Flood { index, budget } => {
                    let r = self.single_list_flood(sim, *index, *budget)?;
                    merge(&mut report, &r);
                }
                ScriptAction::Pump { target, depth } => {
                    let k = key(&names, step, target)?;
                    let r = self.mtf_depth_pump(sim, &k, *depth)?;
                    merge(&mut report, &r);
                }
                ScriptAction::Probe { index } => {
                    let price = sim.table().bucket_len(*index).map_err(SimError::from)? as u64;
                    if price > self.remaining() {
                        return Err(over(price, self.remaining()));
                    }
                    let out = sim.probe(*index)?;
                    self.spent += out.rb_charged;
                    report.add(*index, out.rb_charged);
                }
                ScriptAction::GoodInsert { name, index } => {
                    let k = match index {
                        Some(i) => sim.fresh_key_at(*i),
                        None => sim.fresh_key(),
                    };
                    sim.good_insert(k.clone())?;
                    names.insert(name.clone(), k);
                }
                ScriptAction::GoodQuery { name } => {
                    let k = key(&names, step, name)?;
                    sim.good_query(&k)?;
                }
                ScriptAction::GoodDelete { name } => {
                    let k = key(&names, step, name)?;
                    names.remove(name);
                    sim.good_delete(&k)?;
                }
            }
        }
        Ok(report)
    }
}

fn merge(into: &mut AttackReport, from: &AttackReport) {
    into.actions += from.actions;
    into.spent += from.spent;
    into.shortfall += from.shortfall;
    for (&i, &c) in &from.per_index {
        *into.per_index.entry(i).or_insert(0) += c;
    }
}

/// The shallowest bad object strictly deeper than `target`.
pub fn first_bad_below(sim: &Sim, index: usize, target: &ObjectKey) -> Option<ObjectKey> {
    let mut seen_target = false;
    let mut found = None;
    sim.table().for_each_in_bucket(index, |_, k| {
        if found.is_some() {
            return;
        }
        if seen_target {
            if sim.label(k) == Some(Label::Bad) {
                found = Some(k.clone());
            }
        } else if k == target {
            seen_target = true;
        }
    });
    found
}
