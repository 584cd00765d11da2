//! Slotted-time execution of schedules and adaptive policies, and the sweep
//! harness that produces the rounds-until-completion table.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::affectance::Instance;
use crate::characterize::{characterize, Characterization};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::protocols::{
    decay_period, deterministic_schedule, randomized_schedule, sinr_step, DecayState, ExpectationMode,
    RandomizedParams,
};
use crate::rng;
use crate::schedule::Schedule;

/// Default cap on simulated rounds.
pub const DEFAULT_MAX_ROUNDS: usize = 1_000_000;

const DECAY_SALT: u64 = 0x4445_4341; // "DECA"
const SINR_SALT: u64 = 0x5349_4e52; // "SINR"

/// Outcome of one simulated execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub protocol: String,
    pub seed: u64,
    pub slots_executed: usize,
    pub per_slot_transmitters: Vec<Vec<usize>>,
    /// 1-based slot of the first successful reception, per receiver.
    pub first_success: Vec<Option<usize>>,
    pub completed: bool,
}

impl RunRecord {
    /// Slot in which the last receiver was first reached, when all were.
    pub fn completion_round(&self) -> Option<usize> {
        if !self.completed {
            return None;
        }
        self.first_success.iter().map(|s| s.unwrap_or(0)).max()
    }

    /// Re-evaluates every recorded slot and checks `first_success` against it.
    pub fn replays(&self, inst: &Instance) -> bool {
        let n = inst.n();
        let mut seen = vec![None; n];
        let mut mask = vec![false; n];
        for (j, slot) in self.per_slot_transmitters.iter().enumerate() {
            mask.iter_mut().for_each(|m| *m = false);
            for &u in slot {
                mask[u] = true;
            }
            for (w, s) in seen.iter_mut().enumerate() {
                if s.is_none() && inst.is_selected(&mask, w) {
                    *s = Some(j + 1);
                }
            }
        }
        seen == self.first_success
            && self.completed == seen.iter().all(Option::is_some)
            && self.slots_executed == self.per_slot_transmitters.len()
    }

    /// JSON dump with 1-based transmitter and receiver indices.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            protocol: &'a str,
            seed: u64,
            slots_executed: usize,
            per_slot_transmitters: Vec<Vec<usize>>,
            first_success: BTreeMap<usize, Option<usize>>,
            completed: bool,
        }
        let dump = Dump {
            protocol: &self.protocol,
            seed: self.seed,
            slots_executed: self.slots_executed,
            per_slot_transmitters: self
                .per_slot_transmitters
                .iter()
                .map(|s| s.iter().map(|u| u + 1).collect())
                .collect(),
            first_success: self.first_success.iter().enumerate().map(|(w, s)| (w + 1, *s)).collect(),
            completed: self.completed,
        };
        serde_json::to_string_pretty(&dump).expect("run record serializes")
    }
}

/// Coverage bookkeeping shared by both runners.
struct Coverage {
    first_success: Vec<Option<usize>>,
    remaining: usize,
}

impl Coverage {
    fn new(n: usize) -> Self {
        Self { first_success: vec![None; n], remaining: n }
    }

    fn observe(&mut self, inst: &Instance, mask: &[bool], slot: usize) {
        for (w, s) in self.first_success.iter_mut().enumerate() {
            if s.is_none() && inst.is_selected(mask, w) {
                *s = Some(slot);
                self.remaining -= 1;
            }
        }
    }
}

/// Evaluates every slot of `schedule` in order.
pub fn run_schedule(inst: &Instance, schedule: &Schedule) -> RunRecord {
    run_schedule_named(inst, schedule, "schedule", 0)
}

fn run_schedule_named(inst: &Instance, schedule: &Schedule, protocol: &str, seed: u64) -> RunRecord {
    let n = inst.n();
    let mut cov = Coverage::new(n);
    let mut mask = vec![false; n];
    for (j, slot) in schedule.slots().iter().enumerate() {
        mask.iter_mut().for_each(|m| *m = false);
        for &u in slot {
            mask[u] = true;
        }
        if cov.remaining > 0 {
            cov.observe(inst, &mask, j + 1);
        }
    }
    RunRecord {
        protocol: protocol.to_string(),
        seed,
        slots_executed: schedule.len(),
        per_slot_transmitters: schedule.slots().to_vec(),
        completed: cov.remaining == 0,
        first_success: cov.first_success,
    }
}

/// A slot-by-slot baseline policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptivePolicy {
    Decay { max_in_degree: usize },
    Sinr { density: usize, dilution: usize },
}

impl AdaptivePolicy {
    pub fn name(&self) -> &'static str {
        match self {
            AdaptivePolicy::Decay { .. } => "decay",
            AdaptivePolicy::Sinr { .. } => "sinr",
        }
    }
}

/// Runs `policy` until every receiver has been reached or `max_rounds` slots
/// have passed.
///
/// Every transmitter draws from its own substream of `seed`. The stop test
/// uses global knowledge of who has received; it only detects termination
/// and never feeds back into the policy.
pub fn run_adaptive(inst: &Instance, policy: AdaptivePolicy, seed: u64, max_rounds: usize) -> Result<RunRecord> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    let n = inst.n();
    let salt = match policy {
        AdaptivePolicy::Decay { max_in_degree } => {
            if max_in_degree == 0 {
                return Err(Error::InvalidParameter("Decay needs Δ ≥ 1".into()));
            }
            DECAY_SALT
        }
        AdaptivePolicy::Sinr { density, dilution } => {
            if density == 0 || dilution == 0 {
                return Err(Error::InvalidParameter("density and dilution must be at least 1".into()));
            }
            SINR_SALT
        }
    };
    let key = rng::mix(seed, salt);
    let mut streams: Vec<_> = (0..n).map(|v| rng::substream(key, v as u64)).collect();
    let mut decay = vec![DecayState::default(); n];

    let mut cov = Coverage::new(n);
    let mut mask = vec![false; n];
    let mut per_slot = Vec::new();
    let mut round = 0;
    while cov.remaining > 0 && round < max_rounds {
        round += 1;
        for (v, on) in mask.iter_mut().enumerate() {
            *on = match policy {
                AdaptivePolicy::Decay { max_in_degree } => {
                    decay[v].step(decay_period(max_in_degree), &mut streams[v])
                }
                AdaptivePolicy::Sinr { density, dilution } => {
                    sinr_step(v + 1, round, density, dilution, &mut streams[v])
                }
            };
        }
        per_slot.push(mask.iter().enumerate().filter(|(_, &on)| on).map(|(u, _)| u).collect());
        cov.observe(inst, &mask, round);
    }
    Ok(RunRecord {
        protocol: policy.name().to_string(),
        seed,
        slots_executed: round,
        per_slot_transmitters: per_slot,
        completed: cov.remaining == 0,
        first_success: cov.first_success,
    })
}

/// A protocol in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolSpec {
    Randomized { c: Option<f64>, m_override: Option<usize>, fallback: bool },
    Deterministic { mode: ExpectationMode },
    /// Δ is taken from the instance.
    Decay,
    /// Unset parameters come from the instance's defaults.
    Sinr { density: Option<usize>, dilution: Option<usize> },
}

impl ProtocolSpec {
    pub fn randomized() -> Self {
        ProtocolSpec::Randomized { c: None, m_override: None, fallback: false }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProtocolSpec::Randomized { .. } => "randomized",
            ProtocolSpec::Deterministic { .. } => "deterministic",
            ProtocolSpec::Decay => "decay",
            ProtocolSpec::Sinr { .. } => "sinr",
        }
    }

    /// Whether runs depend on the seed.
    pub fn is_seeded(&self) -> bool {
        !matches!(self, ProtocolSpec::Deterministic { .. })
    }
}

/// An instance entered into a sweep.
#[derive(Debug, Clone)]
pub struct SweepInstance {
    pub id: String,
    pub instance: Instance,
    /// `(density, dilution)` used by the SINR baseline when not overridden.
    pub sinr_defaults: (usize, usize),
}

impl SweepInstance {
    /// Uses `density = Δ`, `dilution = 1` as SINR defaults.
    pub fn new(id: impl Into<String>, instance: Instance) -> Self {
        let delta = instance.topology().max_in_degree();
        Self { id: id.into(), instance, sinr_defaults: (delta, 1) }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub instance_id: String,
    pub protocol: String,
    pub seed: u64,
    pub n: usize,
    pub rounds: usize,
    pub completed: bool,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub row: SweepRow,
    /// Present when the run produced a record (absent after a generation error).
    pub record: Option<RunRecord>,
    /// Schedule-generation error that stopped this run, if any.
    pub error: Option<String>,
    /// `phases·m` for randomized runs.
    pub theoretical_bound: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub max_rounds: usize,
    pub exec: Exec,
    /// Keep every run's full record (needed for replay checks).
    pub keep_records: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { max_rounds: DEFAULT_MAX_ROUNDS, exec: Exec::default(), keep_records: false }
    }
}

/// Runs every protocol on every instance for every seed.
///
/// Seedless protocols run once per instance with the first seed. Rows come
/// back in (instance, protocol, seed) order whatever the executor. A schedule
/// protocol's rounds are the slot of its last first success; runs that do not
/// complete within `max_rounds` report `rounds = max_rounds`.
pub fn sweep(
    instances: &[SweepInstance],
    protocols: &[ProtocolSpec],
    seeds: &[u64],
    opts: &SweepOptions,
) -> Result<Vec<SweepResult>> {
    if instances.is_empty() || protocols.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParameter("sweep needs instances, protocols and seeds".into()));
    }
    if opts.max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    // characterizations are validated up front so bad `c` values abort the sweep
    let mut prepared = Vec::new();
    for (i, si) in instances.iter().enumerate() {
        for (k, proto) in protocols.iter().enumerate() {
            let ch = match proto {
                ProtocolSpec::Randomized { c, .. } => Some(characterize(&si.instance, *c)?),
                ProtocolSpec::Deterministic { .. } => Some(characterize(&si.instance, None)?),
                _ => None,
            };
            prepared.push(((i, k), ch));
        }
    }
    let mut tasks = Vec::new();
    for (idx, ch) in &prepared {
        let run_seeds = if protocols[idx.1].is_seeded() { seeds } else { &seeds[..1] };
        tasks.extend(run_seeds.iter().map(|&s| (*idx, ch.as_ref(), s)));
    }
    let results = opts.exec.map(&tasks, |&((i, k), ch, seed)| {
        run_one(&instances[i], &protocols[k], ch, seed, opts)
    });
    Ok(results)
}

fn run_one(
    si: &SweepInstance,
    proto: &ProtocolSpec,
    ch: Option<&Characterization>,
    seed: u64,
    opts: &SweepOptions,
) -> SweepResult {
    let inst = &si.instance;
    let name = proto.name();
    let mut bound = None;
    let outcome = match proto {
        ProtocolSpec::Randomized { m_override, fallback, .. } => {
            let params = RandomizedParams {
                characterization: ch.expect("prepared").clone(),
                seed,
                fallback_mode: *fallback,
                m_override: *m_override,
            };
            bound = Some(params.phases(inst.n()) * params.m());
            randomized_schedule(&params, inst.n()).map(|s| run_schedule_named(inst, &s, name, seed))
        }
        ProtocolSpec::Deterministic { mode } => deterministic_schedule(inst, ch.expect("prepared"), *mode)
            .map(|s| run_schedule_named(inst, &s, name, seed)),
        ProtocolSpec::Decay => {
            let policy = AdaptivePolicy::Decay { max_in_degree: inst.topology().max_in_degree() };
            run_adaptive(inst, policy, seed, opts.max_rounds)
        }
        ProtocolSpec::Sinr { density, dilution } => {
            let policy = AdaptivePolicy::Sinr {
                density: density.unwrap_or(si.sinr_defaults.0),
                dilution: dilution.unwrap_or(si.sinr_defaults.1),
            };
            run_adaptive(inst, policy, seed, opts.max_rounds)
        }
    };
    let mut row = SweepRow {
        instance_id: si.id.clone(),
        protocol: name.to_string(),
        seed,
        n: inst.n(),
        rounds: opts.max_rounds,
        completed: false,
    };
    match outcome {
        Ok(record) => {
            if let Some(r) = record.completion_round().filter(|&r| r <= opts.max_rounds) {
                row.rounds = r;
                row.completed = true;
            }
            SweepResult {
                row,
                record: opts.keep_records.then_some(record),
                error: None,
                theoretical_bound: bound,
            }
        }
        Err(e) => SweepResult { row, record: None, error: Some(e.to_string()), theoretical_bound: bound },
    }
}

/// Writes rows as CSV with header `instance_id,protocol,seed,n,rounds,completed`.
pub fn write_csv<W: Write>(rows: impl IntoIterator<Item = SweepRow>, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    }
    writer.flush().map_err(|e| Error::io("csv", e))
}

/// Aggregate rounds for one `(instance, protocol)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub instance_id: String,
    pub n: usize,
    pub protocol: String,
    pub runs: usize,
    pub completed: usize,
    pub mean: f64,
    pub median: f64,
    pub max: usize,
    pub theoretical_bound: Option<usize>,
}

/// Mean, median and max rounds per `(instance, protocol)`, in first-seen order.
pub fn summarize(results: &[SweepResult]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&SweepResult>> = BTreeMap::new();
    for r in results {
        let key = (r.row.instance_id.clone(), r.row.protocol.clone());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let mut rounds: Vec<usize> = group.iter().map(|r| r.row.rounds).collect();
            rounds.sort_unstable();
            SummaryRow {
                instance_id: key.0.clone(),
                n: group[0].row.n,
                protocol: key.1.clone(),
                runs: group.len(),
                completed: group.iter().filter(|r| r.row.completed).count(),
                mean: rounds.iter().sum::<usize>() as f64 / rounds.len() as f64,
                median: median(&rounds),
                max: *rounds.last().unwrap(),
                theoretical_bound: group[0].theoretical_bound,
            }
        })
        .collect()
}

/// Median of sorted values; the mean of the middle pair for even counts.
pub fn median(sorted: &[usize]) -> f64 {
    let len = sorted.len();
    if len == 0 {
        return f64::NAN;
    }
    if len % 2 == 1 {
        sorted[len / 2] as f64
    } else {
        (sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0
    }
}
