//! Command-line front end: `simulate`, `fcm`, `goalnet` and `ingest`.
//!
//! Exit codes are a stable contract: 0 on success, 1 when a simulation
//! breaks one of its runtime invariants, 2 for usage and input errors.
//! Every CSV carries a header row and fixed-precision floats, so repeated
//! invocations with the same flags produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::fcm::{self, StateVector, Terminal, Transform};
use crate::goalnet::{self, ExportFormat};
use crate::metrics::{self, MetricsError};
use crate::model::{Allocator, ScenarioConfig};
use crate::scenario::{self, ScenarioError};
use crate::simulation::{self, RunResult, SimError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SMART_AGILE_OUT";

#[derive(Debug, Parser)]
#[command(name = "smart-agile", version, about = "Agile task allocation simulator and modelling tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenarios under SMART and/or AWR and write CSV results.
    Simulate(SimulateArgs),
    /// Iterate a fuzzy cognitive map and report where it settles.
    Fcm(FcmArgs),
    /// Build a Goal Net from user stories.
    Goalnet(GoalnetArgs),
    /// Compute competence, productivity and correlations from an activity log.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AllocatorArg {
    Smart,
    Awr,
}

impl From<AllocatorArg> for Allocator {
    fn from(a: AllocatorArg) -> Self {
        match a {
            AllocatorArg::Smart => Allocator::Smart,
            AllocatorArg::Awr => Allocator::Awr,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["preset", "scenario", "all_presets"])))]
pub struct SimulateArgs {
    /// Built-in scenario (S-I … L-C).
    #[arg(long)]
    pub preset: Option<String>,
    /// Scenario file (TOML, or JSON by extension).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Run all nine presets, one output subdirectory each.
    #[arg(long)]
    pub all_presets: bool,
    /// Base seed; repetition r uses seed + r.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub allocator: Option<AllocatorArg>,
    /// Run SMART and AWR on identical seeds.
    #[arg(long, conflicts_with = "allocator")]
    pub compare: bool,
    #[arg(long)]
    pub repetitions: Option<u32>,
    #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FcmArgs {
    /// Bundled map name or path to a map file.
    #[arg(long)]
    pub map: String,
    /// Comma-separated initial concept values.
    #[arg(long)]
    pub initial: String,
    /// Override the map's transform: bivalent, trivalent or sigmoid.
    #[arg(long)]
    pub transform: Option<String>,
    /// Sigmoid steepness.
    #[arg(long, default_value_t = fcm::DEFAULT_STEEPNESS)]
    pub c: f64,
    #[arg(long, default_value_t = fcm::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = fcm::DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Trajectory CSV destination; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoalnetArgs {
    /// Story corpus; the bundled mobile-shop corpus when absent.
    #[arg(long, requires = "goals")]
    pub stories: Option<PathBuf>,
    /// Goal spec with high-level goals and the story assignment.
    #[arg(long, requires = "stories")]
    pub goals: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Activity-log CSV.
    pub log: PathBuf,
    /// Metric pair to correlate across assignees, e.g. `competence:mood_end`.
    #[arg(long = "correlate", value_name = "X:Y")]
    pub correlate: Vec<String>,
    /// Also write profiles.csv here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Breach(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Breach(_) => 1,
            CliError::Input(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvariantBreach { .. } => CliError::Breach(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

/// Runs one parsed command, writing the human-readable report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Fcm(a) => cmd_fcm(&a, out),
        Command::Goalnet(a) => cmd_goalnet(&a, out),
        Command::Ingest(a) => cmd_ingest(&a, out),
    }
}

fn report(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

// --- simulate ---------------------------------------------------------------

/// Runs for one scenario, grouped by allocator.
struct ScenarioOutcome {
    config: ScenarioConfig,
    by_allocator: Vec<(Allocator, Vec<RunResult>)>,
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut configs = if args.all_presets {
        scenario::all_presets()
    } else if let Some(name) = &args.preset {
        vec![scenario::preset(name)?]
    } else if let Some(path) = &args.scenario {
        vec![scenario::load_scenario(path)?]
    } else {
        return Err(CliError::Input("one of --preset, --scenario or --all-presets is required".into()));
    };
    for c in &mut configs {
        if let Some(seed) = args.seed {
            c.seed = seed;
        }
        if let Some(r) = args.repetitions {
            c.repetitions = r;
        }
        if let Some(a) = args.allocator {
            c.allocator = a.into();
        }
    }
    let allocators =
        |c: &ScenarioConfig| if args.compare { vec![Allocator::Smart, Allocator::Awr] } else { vec![c.allocator] };

    let outcomes = configs
        .into_par_iter()
        .map(|config| {
            let by_allocator = allocators(&config)
                .into_iter()
                .map(|a| Ok((a, simulation::run_repeated(&config.clone().with_allocator(a))?.runs)))
                .collect::<Result<Vec<_>, SimError>>()?;
            Ok(ScenarioOutcome { config, by_allocator })
        })
        .collect::<Result<Vec<_>, SimError>>()?;

    for o in &outcomes {
        if args.compare {
            check_seed_parity(o)?;
        }
        let dir = if args.all_presets { args.out.join(&o.config.name) } else { args.out.clone() };
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        write_file(&dir.join("utility.csv"), &utility_csv(o))?;
        write_file(&dir.join("allocation.csv"), &allocation_csv(o)?)?;
        write_file(&dir.join("queues.csv"), &queues_csv(o))?;
        let summary = summary_csv(o);
        write_file(&dir.join("summary.csv"), &summary)?;
        report(out, &format!("# {} -> {}\n{summary}", o.config.name, dir.display()))?;
        if args.compare {
            report(out, &comparison_line(o))?;
        }
    }
    Ok(())
}

fn check_seed_parity(o: &ScenarioOutcome) -> Result<(), CliError> {
    let (_, reference) = &o.by_allocator[0];
    for (alloc, runs) in &o.by_allocator[1..] {
        for (a, b) in reference.iter().zip(runs) {
            if a.seed != b.seed || a.arrivals != b.arrivals {
                return Err(CliError::Breach(format!(
                    "{}: {alloc} run with seed {} saw a different arrival schedule",
                    o.config.name, b.seed
                )));
            }
        }
    }
    Ok(())
}

fn utility_csv(o: &ScenarioOutcome) -> String {
    let mut s = String::from("day,run,allocator,cumulative_utility\n");
    for (alloc, runs) in &o.by_allocator {
        for (r, run) in runs.iter().enumerate() {
            for (day, u) in run.days.iter().zip(run.cumulative_utility()) {
                writeln!(s, "{},{r},{alloc},{u:.6}", day.day).unwrap();
            }
        }
    }
    s
}

fn allocation_csv(o: &ScenarioOutcome) -> Result<String, CliError> {
    let mut s = String::from("allocator,agent,category,share\n");
    for (alloc, runs) in &o.by_allocator {
        match metrics::allocation_proportion(runs) {
            Ok(p) => {
                for a in &p.per_agent {
                    writeln!(s, "{alloc},{},{},{:.6}", a.agent_id, a.category, a.share).unwrap();
                }
            }
            // nothing was assigned at all: the table stays empty
            Err(MetricsError::NoAllocations) => {}
            Err(e) => return Err(CliError::Input(e.to_string())),
        }
    }
    Ok(s)
}

/// Per-day means over the repetitions.
fn queues_csv(o: &ScenarioOutcome) -> String {
    let mut s = String::from("allocator,day,agent,pending_workload,congestion\n");
    for (alloc, runs) in &o.by_allocator {
        let Some(first) = runs.first() else { continue };
        let n = runs.len() as f64;
        for (d, day) in first.days.iter().enumerate() {
            let congestion = runs.iter().map(|r| r.days[d].congestion).sum::<f64>() / n;
            for (i, agent) in first.agents.iter().enumerate() {
                let pending = runs.iter().map(|r| r.days[d].pending_workload[i]).sum::<f64>() / n;
                writeln!(s, "{alloc},{},{},{pending:.6},{congestion:.6}", day.day, agent.agent_id).unwrap();
            }
        }
    }
    s
}

fn summary_csv(o: &ScenarioOutcome) -> String {
    let mut s = String::from(
        "scenario,allocator,runs,mean_utility,sd_utility,mean_completed,mean_high_quality,mean_delayed,mean_peak_congestion\n",
    );
    for (alloc, runs) in &o.by_allocator {
        let sum = simulation::summarize(runs);
        writeln!(
            s,
            "{},{alloc},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            o.config.name,
            runs.len(),
            sum.global_utility.mean,
            sum.global_utility.std_dev,
            sum.completed.mean,
            sum.high_quality.mean,
            sum.delayed.mean,
            sum.peak_congestion.mean
        )
        .unwrap();
    }
    s
}

fn comparison_line(o: &ScenarioOutcome) -> String {
    let mean = |a: Allocator| {
        o.by_allocator
            .iter()
            .find(|(x, _)| *x == a)
            .map(|(_, runs)| simulation::summarize(runs).global_utility.mean)
            .unwrap_or(0.0)
    };
    let (smart, awr) = (mean(Allocator::Smart), mean(Allocator::Awr));
    let verdict = if smart > awr { "SMART ahead" } else { "SMART not ahead" };
    format!("{}: SMART {smart:.3} vs AWR {awr:.3} ({verdict})\n", o.config.name)
}

// --- fcm -------------------------------------------------------------------

fn parse_vector(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Input(format!("`{}` is not a number", t.trim()))))
        .collect()
}

pub fn cmd_fcm(args: &FcmArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let input = |e: fcm::FcmError| CliError::Input(e.to_string());
    let mut map = if fcm::BUNDLED_MAPS.contains(&args.map.as_str()) {
        fcm::bundled_map(&args.map).map_err(input)?
    } else {
        fcm::load_map(Path::new(&args.map)).map_err(input)?
    };
    if let Some(name) = &args.transform {
        map = map.with_transform(Transform::parse(name, args.c).map_err(input)?);
    } else if args.c != fcm::DEFAULT_STEEPNESS {
        map = map.with_transform(Transform::Sigmoid { c: args.c });
    }
    let initial = StateVector::initial(parse_vector(&args.initial)?);
    let trajectory = map.run(&initial, args.max_iter, args.tol).map_err(input)?;
    let csv = trajectory.to_csv(map.labels());
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => report(out, &csv)?,
    }
    let last = trajectory.last();
    let values = last.values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ");
    let verdict = match trajectory.terminal {
        Terminal::FixedPoint { iteration } => format!("fixed point at iteration {iteration}: ({values})"),
        Terminal::LimitCycle { start, period } => {
            format!("limit cycle of period {period} entered at iteration {start}: last state ({values})")
        }
        Terminal::MaxIterations => format!("no convergence after {} iterations: last state ({values})", last.iteration),
    };
    report(out, &format!("{verdict}\n"))
}

// --- goalnet -----------------------------------------------------------------

pub fn cmd_goalnet(args: &GoalnetArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let input = |e: goalnet::GoalNetError| CliError::Input(e.to_string());
    let (stories, spec) = match (&args.stories, &args.goals) {
        (Some(s), Some(g)) => (goalnet::load_corpus(s).map_err(input)?, goalnet::load_goal_spec(g).map_err(input)?),
        _ => goalnet::bundled_corpus(),
    };
    let net = goalnet::build_goal_net(&stories, &spec).map_err(input)?;
    if let Err(violations) = goalnet::validate_net(&net) {
        let list = violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(CliError::Input(format!("net failed validation: {list}")));
    }
    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    write_file(&args.out.join("net.json"), &goalnet::export(&net, ExportFormat::Json))?;
    write_file(&args.out.join("net.dot"), &goalnet::export(&net, ExportFormat::Dot))?;
    let top = stories.iter().filter(|s| s.parent.is_none()).count();
    report(
        out,
        &format!(
            "stories: {} ({top} top-level)\nlevels: {}\nnodes: {}\ntransitions: {}\nGET cards: {}\nwritten: {}\n",
            stories.len(),
            net.depth(),
            net.nodes.len(),
            net.transitions.len(),
            net.cards.len(),
            args.out.display()
        ),
    )
}

// --- ingest --------------------------------------------------------------------

pub fn cmd_ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let records = metrics::ingest_log(&args.log).map_err(|e| CliError::Input(e.to_string()))?;
    if records.is_empty() {
        return Err(CliError::Input(format!("{}: no records", args.log.display())));
    }
    let pairs = args
        .correlate
        .iter()
        .map(|p| {
            p.split_once(':')
                .map(|(x, y)| (x.trim().to_string(), y.trim().to_string()))
                .ok_or_else(|| CliError::Input(format!("--correlate expects X:Y, got `{p}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let profiles = metrics::agent_profiles(&records);
    let mut table = String::from("assignee,tasks,competence,productivity,delay,confidence,mood_begin,mood_end\n");
    for p in &profiles {
        writeln!(
            table,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            p.assignee_id, p.tasks, p.competence, p.productivity, p.delay, p.confidence, p.mood_begin, p.mood_end
        )
        .unwrap();
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        write_file(&dir.join("profiles.csv"), &table)?;
    }
    let mut text = table;
    let delay = metrics::delay_percentage(&records).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(text, "records: {}\ndelayed: {:.2}%", records.len(), delay * 100.0).unwrap();
    for (x, y) in &pairs {
        match metrics::correlate_profiles(&profiles, x, y) {
            Ok(r) => writeln!(text, "pearson({x}, {y}) = {r:.6}").unwrap(),
            Err(e @ MetricsError::UnknownMetric(_)) => return Err(CliError::Input(e.to_string())),
            Err(e) => writeln!(text, "pearson({x}, {y}) undefined: {e}").unwrap(),
        }
    }
    report(out, &text)
}
