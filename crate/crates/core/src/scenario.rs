//! Declarative runs.
//!
//! A scenario is a TOML document naming a table configuration, an RB
//! backend, a good-client workload, an attack plan, an ordered list of
//! phases and the checks to evaluate at the end. [`run`] executes it
//! deterministically for a seed and returns a [`RunSummary`]; the schema is
//! documented in `docs/scenario-format.md` and the outputs in
//! `docs/output-formats.md`.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::accounting::{BoundCheck, BoundParams, CheckName, CostLedger, RoundStats, GLOBAL_CONSTANT};
use crate::adversary::{validate_script, Adversary, AttackError, AttackReport, ScriptAction};
use crate::rb::{Backend, WorkMeter};
use crate::sim::{Sim, SimConfig, SimError, TraceRow};
use crate::table::{ObjectKey, OpsMetrics, TableConfig};
use crate::workload::{Workload, WorkloadSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const BUILTINS: &[(&str, &str)] = &[
    ("single-list-flood", include_str!("../scenarios/single-list-flood.toml")),
    ("no-attack", include_str!("../scenarios/no-attack.toml")),
    ("mtf-pump-repeat", include_str!("../scenarios/mtf-pump-repeat.toml")),
    ("even-spread-insert", include_str!("../scenarios/even-spread-insert.toml")),
    ("uar-under-attack", include_str!("../scenarios/uar-under-attack.toml")),
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("scenario does not parse: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("no builtin scenario named `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Attack(#[from] AttackError),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// An index, or `"most_good"` for the index holding the most good objects
/// when the phase starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexSel {
    At(usize),
    Named(String),
}

impl IndexSel {
    fn resolve(&self, sim: &Sim) -> usize {
        match self {
            IndexSel::At(i) => *i,
            IndexSel::Named(_) => sim.most_good_index(),
        }
    }

    fn validate(&self, field: &str, t: usize) -> Result<(), ScenarioError> {
        match self {
            IndexSel::At(i) if *i >= t => Err(invalid(field, format!("index {i} out of range (table has {t} indices)"))),
            IndexSel::Named(n) if n != "most_good" => {
                Err(invalid(field, format!("expected an index or \"most_good\", got \"{n}\"")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    None,
    SingleListFlood,
    EvenSpread,
    MtfDepthPump,
    SpuriousProbe,
    Scripted,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackParams {
    pub index: Option<IndexSel>,
    pub indices: Option<Vec<usize>>,
    /// Number of targeted indices when `indices` is omitted (uses `0..s`).
    pub s: Option<usize>,
    pub b: Option<u64>,
    pub depth: Option<u64>,
    #[serde(default)]
    pub actions: Vec<ScriptAction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackPlan {
    #[serde(default)]
    pub strategy: Strategy,
    /// Total adversary budget, shared by every adversarial phase.
    #[serde(default)]
    pub budget: u64,
    #[serde(default)]
    pub params: AttackParams,
}

/// Per-round pump depth `d_r` for [`Phase::PumpRounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpSchedule {
    /// `depth` every round.
    #[default]
    Constant,
    /// 1, 2, 4, ... doubling up to `depth`, then starting over.
    Geometric,
    /// `4·depth` in each of the first quarter of rounds, nothing afterwards.
    FrontLoaded,
}

impl PumpSchedule {
    pub fn depth(&self, round: u64, rounds: u64, depth: u64) -> u64 {
        match self {
            PumpSchedule::Constant => depth,
            PumpSchedule::Geometric => {
                let cycle = 64 - depth.max(1).leading_zeros() as u64;
                (1u64 << (round % cycle)).min(depth)
            }
            PumpSchedule::FrontLoaded => {
                if round < rounds.div_ceil(4) {
                    4 * depth
                } else {
                    0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Phase {
    /// Runs the attack plan's strategy once.
    Attack,
    /// Good inserts, then queries, then deletes, per the workload spec.
    Workload,
    GoodInserts {
        count: Option<u64>,
        index: Option<usize>,
    },
    /// `per_index` good inserts at every index that holds a bad object.
    FillTargeted {
        per_index: u64,
    },
    Queries {
        count: Option<u64>,
    },
    Deletes {
        count: Option<u64>,
    },
    Flood {
        index: IndexSel,
        budget: Option<u64>,
    },
    EvenSpread {
        indices: Option<Vec<usize>>,
        count: Option<usize>,
        bad: u64,
    },
    /// Pumps the shallowest good object at `index` by `depth`.
    Pump {
        index: IndexSel,
        depth: u64,
    },
    /// Rounds of: pump the shallowest good object at `index` by `d_r`, then
    /// the client queries it.
    PumpRounds {
        index: IndexSel,
        rounds: u64,
        depth: u64,
        #[serde(default)]
        schedule: PumpSchedule,
    },
    Probe {
        index: IndexSel,
        budget: Option<u64>,
    },
    Script {
        actions: Vec<ScriptAction>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: CheckName,
    /// `K` for `uar_mean_query`.
    pub factor: Option<f64>,
    /// `C` for `global_cost` and `global_latency`.
    pub constant: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub table: TableConfig,
    #[serde(default)]
    pub rb_backend: Backend,
    #[serde(default)]
    pub workload: WorkloadSpec,
    #[serde(default)]
    pub attack: AttackPlan,
    #[serde(default = "yes")]
    pub wallet_oracle: bool,
    #[serde(default)]
    pub phases: Vec<Phase>,
    /// Empty means every applicable check.
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn builtin(name: &str) -> Result<Self, ScenarioError> {
        let (_, text) = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| ScenarioError::UnknownBuiltin(name.to_string()))?;
        Self::from_toml(text)
    }

    /// A path to a scenario file if one exists, otherwise a builtin name.
    pub fn load(source: &str) -> Result<Self, ScenarioError> {
        let path = Path::new(source);
        if path.is_file() {
            Self::from_file(path)
        } else {
            Self::builtin(source)
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let t = self.table.index_count;
        if t == 0 {
            return Err(invalid("table.index_count", "must be at least 1"));
        }
        if let Backend::Pow { unit_threshold: 0 } = self.rb_backend {
            return Err(invalid("rb_backend.unit_threshold", "must be positive"));
        }
        self.validate_attack(t)?;
        for (n, phase) in self.phases.iter().enumerate() {
            let field = |f: &str| format!("phases[{n}].{f}");
            match phase {
                Phase::GoodInserts { index: Some(i), .. } if *i >= t => {
                    return Err(invalid(field("index"), format!("index {i} out of range (table has {t} indices)")))
                }
                Phase::Flood { index, .. }
                | Phase::Pump { index, .. }
                | Phase::PumpRounds { index, .. }
                | Phase::Probe { index, .. } => index.validate(&field("index"), t)?,
                Phase::EvenSpread { indices, count, bad } => {
                    let idx = spread_indices(indices.as_deref(), *count, t)
                        .map_err(|m| invalid(field(if indices.is_some() { "indices" } else { "count" }), m))?;
                    if *bad < idx.len() as u64 {
                        return Err(invalid(field("bad"), format!("must be at least the {} targeted indices", idx.len())));
                    }
                }
                Phase::Script { actions } => validate_script(actions, t).map_err(|e| script_field(&field("actions"), e))?,
                Phase::Attack if self.attack.strategy == Strategy::None => {
                    return Err(invalid(field("kind"), "attack phase needs attack.strategy"))
                }
                _ => {}
            }
        }
        for (n, c) in self.checks.iter().enumerate() {
            if c.name == CheckName::UarMeanQuery && !c.factor.is_some_and(|f| f > 0.0) {
                return Err(invalid(format!("checks[{n}].factor"), "uar_mean_query needs a positive factor"));
            }
            if c.name == CheckName::WalletInvariant && !self.wallet_oracle {
                return Err(invalid(format!("checks[{n}].name"), "wallet_invariant needs wallet_oracle = true"));
            }
        }
        Ok(())
    }

    fn validate_attack(&self, t: usize) -> Result<(), ScenarioError> {
        let p = &self.attack.params;
        let need = |name: &str| invalid(format!("attack.params.{name}"), format!("required by {:?}", self.attack.strategy));
        match self.attack.strategy {
            Strategy::None => {}
            Strategy::SingleListFlood | Strategy::SpuriousProbe => {
                p.index.as_ref().ok_or_else(|| need("index"))?.validate("attack.params.index", t)?
            }
            Strategy::MtfDepthPump => {
                p.index.as_ref().ok_or_else(|| need("index"))?.validate("attack.params.index", t)?;
                p.depth.ok_or_else(|| need("depth"))?;
            }
            Strategy::EvenSpread => {
                let b = p.b.ok_or_else(|| need("b"))?;
                let idx = spread_indices(p.indices.as_deref(), p.s, t).map_err(|m| invalid("attack.params.indices", m))?;
                if b < idx.len() as u64 {
                    return Err(invalid("attack.params.b", format!("must be at least s = {}", idx.len())));
                }
            }
            Strategy::Scripted => {
                validate_script(&p.actions, t).map_err(|e| script_field("attack.params.actions", e))?
            }
        }
        Ok(())
    }
}

fn script_field(prefix: &str, e: AttackError) -> ScenarioError {
    match e {
        AttackError::Script { step, message } => invalid(format!("{prefix}[{step}]"), message),
        other => ScenarioError::Attack(other),
    }
}

fn spread_indices(indices: Option<&[usize]>, count: Option<usize>, t: usize) -> Result<Vec<usize>, String> {
    let idx: Vec<usize> = match (indices, count) {
        (Some(v), _) => v.to_vec(),
        (None, Some(s)) => (0..s).collect(),
        (None, None) => return Err("give either indices or a count".into()),
    };
    if idx.is_empty() {
        return Err("at least one index is required".into());
    }
    if let Some(i) = idx.iter().find(|&&i| i >= t) {
        return Err(format!("index {i} out of range (table has {t} indices)"));
    }
    if idx.iter().collect::<HashSet<_>>().len() != idx.len() {
        return Err("indices must be distinct".into());
    }
    Ok(idx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides the scenario's backend.
    pub backend: Option<Backend>,
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Occupancy {
    pub ell_max: u64,
    pub ell_ave: f64,
    pub targeted_indices: usize,
    pub bad_in_targeted: u64,
    pub max_list_length: u64,
    pub live_objects: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Work {
    pub client: WorkMeter,
    pub adversary: WorkMeter,
    pub verify_evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttackSummary {
    pub budget: u64,
    pub spent: u64,
    pub reports: Vec<AttackReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalletSummary {
    pub checks: u64,
    pub violations: usize,
    pub deposits: u64,
    pub rounds: RoundStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub scenario: String,
    pub seed: u64,
    pub backend: Backend,
    pub table: TableConfig,
    pub ledger: CostLedger,
    pub occupancy: Occupancy,
    pub work: Work,
    pub ops: OpsMetrics,
    pub redraws: u64,
    pub attack: AttackSummary,
    pub wallet: Option<WalletSummary>,
    pub checks: Vec<BoundCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub trace: Option<Vec<TraceRow>>,
}

/// SplitMix64 finaliser, used to derive per-run seeds.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Runner<'a> {
    scenario: &'a Scenario,
    sim: Sim,
    workload: Workload,
    adversary: Adversary,
    reports: Vec<AttackReport>,
}

impl Runner<'_> {
    fn shallowest_good(&self, index: usize) -> Option<ObjectKey> {
        let mut best = None;
        let good = self.sim.good_at(index);
        self.sim.table().for_each_in_bucket(index, |_, k| {
            if best.is_none() && good.contains(k) {
                best = Some(k.clone());
            }
        });
        best
    }

    fn pump(&mut self, index: usize, depth: u64) -> Result<(), ScenarioError> {
        match self.shallowest_good(index) {
            Some(target) => {
                let r = self.adversary.mtf_depth_pump(&mut self.sim, &target, depth)?;
                self.reports.push(r);
            }
            None => self.reports.push(AttackReport {
                strategy: "mtf_depth_pump".into(),
                shortfall: depth,
                ..Default::default()
            }),
        }
        Ok(())
    }

    fn attack(&mut self) -> Result<(), ScenarioError> {
        let p = &self.scenario.attack.params;
        let t = self.sim.index_count();
        let all = self.adversary.remaining();
        let report = match self.scenario.attack.strategy {
            Strategy::None => return Ok(()),
            Strategy::SingleListFlood => {
                let index = p.index.as_ref().expect("validated").resolve(&self.sim);
                self.adversary.single_list_flood(&mut self.sim, index, all)?
            }
            Strategy::EvenSpread => {
                let idx = spread_indices(p.indices.as_deref(), p.s, t).expect("validated");
                self.adversary.even_spread(&mut self.sim, &idx, p.b.expect("validated"))?
            }
            Strategy::MtfDepthPump => {
                let index = p.index.as_ref().expect("validated").resolve(&self.sim);
                return self.pump(index, p.depth.expect("validated"));
            }
            Strategy::SpuriousProbe => {
                let index = p.index.as_ref().expect("validated").resolve(&self.sim);
                self.adversary.spurious_probe(&mut self.sim, index, all)?
            }
            Strategy::Scripted => self.adversary.scripted(&mut self.sim, &p.actions)?,
        };
        self.reports.push(report);
        Ok(())
    }

    fn phase(&mut self, phase: &Phase) -> Result<(), ScenarioError> {
        let t = self.sim.index_count();
        match phase {
            Phase::Attack => self.attack()?,
            Phase::Workload => self.workload.run(&mut self.sim)?,
            Phase::GoodInserts { count, index } => {
                let n = count.unwrap_or(self.workload.spec().good_inserts);
                for _ in 0..n {
                    match index {
                        Some(i) => self.workload.gen_good_insert_at(&mut self.sim, *i)?,
                        None => self.workload.gen_good_insert(&mut self.sim)?,
                    };
                }
            }
            Phase::FillTargeted { per_index } => {
                let targets: Vec<usize> = (0..t).filter(|&i| !self.sim.bad_at(i).is_empty()).collect();
                for i in targets {
                    for _ in 0..*per_index {
                        self.workload.gen_good_insert_at(&mut self.sim, i)?;
                    }
                }
            }
            Phase::Queries { count } => {
                self.workload.queries(&mut self.sim, *count)?;
            }
            Phase::Deletes { count } => {
                self.workload.deletes(&mut self.sim, *count)?;
            }
            Phase::Flood { index, budget } => {
                let index = index.resolve(&self.sim);
                let budget = budget.unwrap_or(self.adversary.remaining());
                let r = self.adversary.single_list_flood(&mut self.sim, index, budget)?;
                self.reports.push(r);
            }
            Phase::EvenSpread { indices, count, bad } => {
                let idx = spread_indices(indices.as_deref(), *count, t).expect("validated");
                let r = self.adversary.even_spread(&mut self.sim, &idx, *bad)?;
                self.reports.push(r);
            }
            Phase::Pump { index, depth } => {
                let index = index.resolve(&self.sim);
                self.pump(index, *depth)?;
            }
            Phase::PumpRounds {
                index,
                rounds,
                depth,
                schedule,
            } => {
                let index = index.resolve(&self.sim);
                for r in 0..*rounds {
                    self.pump(index, schedule.depth(r, *rounds, *depth))?;
                    if let Some(target) = self.shallowest_good(index) {
                        self.sim.good_query(&target)?;
                    }
                }
            }
            Phase::Probe { index, budget } => {
                let index = index.resolve(&self.sim);
                let budget = budget.unwrap_or(self.adversary.remaining());
                let r = self.adversary.spurious_probe(&mut self.sim, index, budget)?;
                self.reports.push(r);
            }
            Phase::Script { actions } => {
                let r = self.adversary.scripted(&mut self.sim, actions)?;
                self.reports.push(r);
            }
        }
        Ok(())
    }
}

/// Executes `scenario` for one seed.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput, ScenarioError> {
    scenario.validate()?;
    let mut table = scenario.table;
    table.hash_seed = mix(table.hash_seed, opts.seed);
    let backend = opts.backend.unwrap_or(scenario.rb_backend);
    let sim = Sim::new(SimConfig {
        table,
        backend,
        seed: mix(opts.seed, 0x0073_746f_7265),
        wallet_oracle: scenario.wallet_oracle,
        trace: opts.trace,
    })?;
    let mut spec = scenario.workload;
    spec.rng_seed = mix(spec.rng_seed, opts.seed);
    let mut runner = Runner {
        scenario,
        sim,
        workload: Workload::new(spec),
        adversary: Adversary::new(scenario.attack.budget),
        reports: Vec::new(),
    };
    let default_phases = [Phase::Attack, Phase::Workload];
    let phases = if scenario.phases.is_empty() {
        &default_phases[..]
    } else {
        &scenario.phases[..]
    };
    for phase in phases {
        runner.phase(phase)?;
    }
    let Runner { sim, adversary, reports, .. } = runner;

    let mut params = BoundParams {
        global_constant: GLOBAL_CONSTANT,
        uar_factor: None,
        budget: Some(scenario.attack.budget),
    };
    for c in &scenario.checks {
        if let Some(f) = c.factor {
            params.uar_factor = Some(f);
        }
        if let Some(k) = c.constant {
            params.global_constant = k;
        }
    }
    let names: Vec<CheckName> = scenario.checks.iter().map(|c| c.name).collect();
    let checks = sim.checks(&names, &params);
    let passed = checks.iter().all(|c| c.satisfied);
    let stats = sim.stats();
    let summary = RunSummary {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.name.clone(),
        seed: opts.seed,
        backend,
        table: *sim.table().config(),
        ledger: sim.ledger().clone(),
        occupancy: Occupancy {
            ell_max: stats.ell_max(),
            ell_ave: stats.ell_ave(),
            targeted_indices: stats.targeted().len(),
            bad_in_targeted: stats.bad_in_targeted(),
            max_list_length: stats.max_list_length(),
            live_objects: sim.table().live_count(),
        },
        work: Work {
            client: sim.client_meter(),
            adversary: sim.adversary_meter(),
            verify_evaluations: sim.table().store().verify_evaluations(),
        },
        ops: sim.table().ops(),
        redraws: sim.redraws(),
        attack: AttackSummary {
            budget: adversary.budget(),
            spent: adversary.spent(),
            reports,
        },
        wallet: sim.oracle().map(|o| WalletSummary {
            checks: o.checks(),
            violations: o.violations().len(),
            deposits: o.deposits(),
            rounds: o.rounds(),
        }),
        checks,
        passed,
    };
    Ok(RunOutput {
        summary,
        trace: sim.trace().map(<[TraceRow]>::to_vec),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    #[default]
    Structured,
}

/// Pretty JSON with a trailing newline.
pub fn to_structured(summary: &RunSummary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serialises");
    s.push('\n');
    s
}

/// One `field,value` row per leaf of the structured summary, with dotted
/// field paths.
pub fn to_csv(summary: &RunSummary) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut csv::Writer<Vec<u8>>) {
        match v {
            Value::Object(m) => {
                for (k, v) in m {
                    walk(&join(prefix, k), v, out);
                }
            }
            Value::Array(a) => {
                for (i, v) in a.iter().enumerate() {
                    walk(&join(prefix, &i.to_string()), v, out);
                }
            }
            Value::String(s) => out.write_record([prefix, s]).expect("in-memory write"),
            Value::Null => out.write_record([prefix, ""]).expect("in-memory write"),
            other => out.write_record([prefix, &other.to_string()]).expect("in-memory write"),
        }
    }
    fn join(prefix: &str, k: &str) -> String {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    }
    let value = serde_json::to_value(summary).expect("summary serialises");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).expect("in-memory write");
    walk("", &value, &mut w);
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

pub fn report(summary: &RunSummary, format: Format) -> String {
    match format {
        Format::Csv => to_csv(summary),
        Format::Structured => to_structured(summary),
    }
}

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "seq",
            "principal",
            "op",
            "index",
            "hardness",
            "status",
            "latency",
            "rb_charged",
            "depth_before",
        ])?;
    }
    w.flush()?;
    Ok(())
}
