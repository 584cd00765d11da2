//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on validation or input errors, 2 when a
//! deterministic schedule hit its enumeration capacity or the termination
//! guard, or when a sweep produced runs that did not complete.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::affectance::Instance;
use crate::characterize::characterize;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::protocols::{deterministic_schedule, randomized_schedule, ExpectationMode, RandomizedParams, DEFAULT_MC_SAMPLES};
use crate::scenario::{generate_office_layer, generate_rn_instance, load_instance, load_office_spec, save_instance, OfficeGridSpec};
use crate::sim::{summarize, sweep, write_csv, ProtocolSpec, SweepInstance, SweepOptions, DEFAULT_MAX_ROUNDS};

#[derive(Debug, Parser)]
#[command(name = "layercast", version, about = "Layer dissemination schedules under the affectance interference model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an office-grid or random Radio Network instance file.
    Generate(GenerateArgs),
    /// Print Ā_w, Ā, c, b, d, m and the phase count of an instance.
    Characterize(CharacterizeArgs),
    /// Build a schedule and report whether it is selective.
    Schedule(ScheduleArgs),
    /// Run protocols over instances and seeds and write the rounds CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Instance file.
    #[arg(long, conflicts_with = "scenario")]
    pub instance: Option<PathBuf>,
    /// Office scenario spec file (JSON with OfficeGridSpec fields).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Number of offices (overrides the scenario file; default scenario otherwise).
    #[arg(long)]
    pub offices: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Generate a random Radio Network layer with this many nodes instead.
    #[arg(long, requires = "max_degree")]
    pub rn: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub c: Option<f64>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    Randomized,
    Deterministic,
    Decay,
    Sinr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub protocol: ProtocolName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub m_override: Option<usize>,
    /// Size the randomized phases from n instead of Ā.
    #[arg(long)]
    pub fallback: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeName,
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Instance files (repeatable).
    #[arg(long = "instance", conflicts_with = "scenario")]
    pub instances: Vec<PathBuf>,
    /// Office scenario spec file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Office counts to sweep, e.g. `2-14` or `2,4,6`.
    #[arg(long, value_parser = parse_office_counts)]
    pub offices: Option<OfficeCounts>,
    #[arg(long = "protocol", value_enum, required = true)]
    pub protocols: Vec<ProtocolName>,
    /// Seeds per seeded protocol.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, default_value_t = 1)]
    pub seed_base: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: usize,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub m_override: Option<usize>,
    #[arg(long)]
    pub fallback: bool,
    #[arg(long)]
    pub density: Option<usize>,
    #[arg(long)]
    pub dilution: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeName,
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    pub samples: usize,
    /// Run single-threaded.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Comma-separated integers and inclusive `a-b` ranges.
/// Office counts given as a list such as `2-14` or `2,4,8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfficeCounts(pub Vec<usize>);

fn parse_office_counts(s: &str) -> std::result::Result<OfficeCounts, String> {
    parse_list(s).map(OfficeCounts)
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (
                    a.trim().parse().map_err(|_| format!("bad range {part:?}"))?,
                    b.trim().parse().map_err(|_| format!("bad range {part:?}"))?,
                );
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad number {part:?}"))?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// A fully resolved sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instances: Vec<SweepInstance>,
    pub protocols: Vec<ProtocolSpec>,
    pub seeds: Vec<u64>,
    pub max_rounds: usize,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.protocols.is_empty() {
            return Err(Error::InvalidParameter("at least one protocol is required".into()));
        }
        if self.seeds.is_empty() && self.protocols.iter().any(ProtocolSpec::is_seeded) {
            return Err(Error::InvalidParameter("seeded protocols need at least one seed".into()));
        }
        if self.instances.is_empty() {
            return Err(Error::InvalidParameter("no instances".into()));
        }
        Ok(())
    }
}

fn office_spec(scenario: Option<&Path>, offices: Option<usize>) -> Result<OfficeGridSpec> {
    let mut spec = match scenario {
        Some(path) => load_office_spec(path)?,
        None => OfficeGridSpec::default(),
    };
    if let Some(k) = offices {
        spec.offices = k;
    }
    spec.validate()?;
    Ok(spec)
}

fn load_source(src: &SourceArgs) -> Result<Instance> {
    match &src.instance {
        Some(path) => load_instance(path),
        None => generate_office_layer(&office_spec(src.scenario.as_deref(), src.offices)?),
    }
}

fn mode_of(mode: ModeName, samples: usize, seed: u64) -> ExpectationMode {
    match mode {
        ModeName::Exact => ExpectationMode::Exact,
        ModeName::Mc => ExpectationMode::MonteCarlo { samples, seed },
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    let inst = match args.rn {
        Some(n) => generate_rn_instance(n, args.max_degree.unwrap_or(1), args.seed)?,
        None => load_source(&args.source)?,
    };
    save_instance(&inst, &args.out)?;
    println!("wrote {} (n = {}, {} nonzero affectance entries)", args.out.display(), inst.n(), inst.matrix().nonzero_count());
    Ok(0)
}

fn cmd_characterize(args: &CharacterizeArgs) -> Result<u8> {
    let inst = load_source(&args.source)?;
    let ch = characterize(&inst, args.c)?;
    let mut out = std::io::stdout().lock();
    if args.json {
        let text = serde_json::to_string_pretty(&ch).expect("characterization serializes");
        let _ = writeln!(out, "{text}");
        return Ok(0);
    }
    let _ = writeln!(out, "{:>6} {:>6} {:>12}", "w", "|F_w|", "Abar_w");
    for (w, a) in ch.abar_w.iter().enumerate() {
        let _ = writeln!(out, "{:>6} {:>6} {:>12.6}", w + 1, inst.topology().neighbors(w).len(), a);
    }
    let _ = writeln!(out, "Abar       = {:.6}", ch.abar);
    let _ = writeln!(out, "c_min      = {:.6}", ch.c_min);
    let _ = writeln!(out, "c          = {:.6}", ch.c);
    let _ = writeln!(out, "b          = {:.6}", ch.b);
    let _ = writeln!(out, "d          = {:.6}", ch.d);
    let _ = writeln!(out, "m          = {}", ch.m);
    let _ = writeln!(out, "phases     = {}", ch.phases);
    let _ = writeln!(out, "slot bound = {}", ch.slot_bound());
    Ok(0)
}

fn cmd_schedule(args: &ScheduleArgs) -> Result<u8> {
    let inst = load_source(&args.source)?;
    let ch = characterize(&inst, args.c)?;
    let schedule = match args.protocol {
        ProtocolName::Randomized => {
            let params = RandomizedParams {
                characterization: ch,
                seed: args.seed,
                fallback_mode: args.fallback,
                m_override: args.m_override,
            };
            randomized_schedule(&params, inst.n())?
        }
        ProtocolName::Deterministic => {
            deterministic_schedule(&inst, &ch, mode_of(args.mode, args.samples, args.seed))?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other:?} is adaptive and has no precomputed schedule; use `sweep`"
            )))
        }
    };
    write_file(&args.out, &schedule.to_text())?;
    let report = inst.verify_selective(&schedule);
    println!("wrote {} ({} slots)", args.out.display(), schedule.len());
    println!(
        "covered {}/{} receivers; selective = {}",
        report.covered.len(),
        inst.n(),
        report.is_selective()
    );
    if !report.uncovered.is_empty() {
        let list: Vec<String> = report.uncovered.iter().map(|w| (w + 1).to_string()).collect();
        println!("uncovered: {}", list.join(" "));
    }
    Ok(0)
}

fn sweep_config(args: &SweepArgs) -> Result<ExperimentConfig> {
    let mut instances = Vec::new();
    if args.instances.is_empty() {
        let base = office_spec(args.scenario.as_deref(), None)?;
        let counts = args.offices.clone().map_or_else(|| vec![base.offices], |c| c.0);
        for k in counts {
            let spec = OfficeGridSpec { offices: k, ..base.clone() };
            let inst = generate_office_layer(&spec)?;
            let mut si = SweepInstance::new(format!("office-n{}", spec.n()), inst);
            si.sinr_defaults = spec.sinr_defaults();
            instances.push(si);
        }
    } else {
        for path in &args.instances {
            let inst = load_instance(path)?;
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            instances.push(SweepInstance::new(id, inst));
        }
    }
    let protocols = args
        .protocols
        .iter()
        .map(|p| match p {
            ProtocolName::Randomized => {
                ProtocolSpec::Randomized { c: args.c, m_override: args.m_override, fallback: args.fallback }
            }
            ProtocolName::Deterministic => {
                ProtocolSpec::Deterministic { mode: mode_of(args.mode, args.samples, args.seed_base) }
            }
            ProtocolName::Decay => ProtocolSpec::Decay,
            ProtocolName::Sinr => ProtocolSpec::Sinr { density: args.density, dilution: args.dilution },
        })
        .collect();
    let seeds = (0..args.seeds as u64).map(|k| args.seed_base + k).collect();
    let config = ExperimentConfig { instances, protocols, seeds, max_rounds: args.max_rounds, out: args.out.clone() };
    config.validate()?;
    Ok(config)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    let config = sweep_config(args)?;
    let opts = SweepOptions {
        max_rounds: config.max_rounds,
        exec: if args.sequential { Exec::Sequential } else { Exec::Parallel },
        keep_records: false,
    };
    let results = sweep(&config.instances, &config.protocols, &config.seeds, &opts)?;
    let file = fs::File::create(&config.out).map_err(|e| Error::io(config.out.display().to_string(), e))?;
    write_csv(results.iter().map(|r| r.row.clone()), std::io::BufWriter::new(file))?;

    for r in results.iter().filter(|r| r.error.is_some()) {
        eprintln!("{} {} seed {}: {}", r.row.instance_id, r.row.protocol, r.row.seed, r.error.as_deref().unwrap());
    }
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{:>5} {:<14} {:>5} {:>5} {:>12} {:>10} {:>10} {:>10}",
        "n", "protocol", "runs", "done", "mean", "median", "max", "bound"
    );
    for s in summarize(&results) {
        let bound = s.theoretical_bound.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>5} {:<14} {:>5} {:>5} {:>12.1} {:>10.1} {:>10} {:>10}",
            s.n, s.protocol, s.runs, s.completed, s.mean, s.median, s.max, bound
        );
    }
    let _ = writeln!(out, "wrote {} ({} rows)", config.out.display(), results.len());
    Ok(if results.iter().all(|r| r.row.completed) { 0 } else { 2 })
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Capacity { .. } | Error::NonTermination { .. } => 2,
        _ => 1,
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Characterize(a) => cmd_characterize(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
