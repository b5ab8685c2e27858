//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a demanded feasible solution does not
//! exist, 2 on bad input, 3 when a search or enumeration limit is hit.
//! Errors go to standard error as `error: <kind>: <detail>`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrm_core::advice::{build_ilp, emit_lp, AdvicePlan, AnnealConfig};
use mrm_core::gen::attribute::{preset_scenario, PRESETS};
use mrm_core::gen::reductions::named_cubic;
use mrm_core::gen::{
    gen_attribute_instance, gen_synthetic, reduce_from_set_cover, reduce_from_vertex_cover,
    GenParams,
};
use mrm_core::oracle::{min_set_cover, min_vertex_cover};
use mrm_core::rational;
use mrm_core::{Rational, RestrictionsGraph};
use rayon::prelude::*;

use crate::bench::{run_bench, BenchGrid, Task};
use crate::files::{
    advice_doc, check_advice, check_lp, check_solution, format_tag, parse_advice, parse_instance,
    parse_scenario, parse_solution, write_advice, write_instance, write_scenario, write_solution,
    FileError, ADVICE_FORMAT, INSTANCE_FORMAT, SCENARIO_FORMAT, SOLUTION_FORMAT,
};
use crate::results::{emit_results_csv, parse_results_csv, ResultRow, HEADER};
use crate::tasks::{advise, solve, AdviceRun, Limits, Objective, RunError};

/// Environment variable overriding exact-search limits.
pub const SEARCH_CAP_VAR: &str = "MRM_SEARCH_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "mrm",
    version,
    about = "Multi-round matching of agents to time-shared resources"
)]
struct Cli {
    /// Record wall-clock times in CSV output; otherwise runtime_ms is 0 so
    /// that reruns are byte-identical.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve an instance for one objective.
    Solve(SolveArgs),
    /// Suggest label removals within budgets.
    Advise(AdviseArgs),
    /// Write the advice model in LP format.
    EmitIlp(EmitArgs),
    /// Sweep a grid of synthetic instances and emit result rows.
    Bench(BenchArgs),
    /// Check instance, scenario, solution, advice, LP and result files.
    Validate(ValidateArgs),
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Random complete bipartite instance.
    Synthetic(SyntheticArgs),
    /// Instance derived from resource attributes and agent preferences.
    Attribute(AttributeArgs),
    /// Satisfied-agent gadget from a cubic graph.
    ReduceVc(VcArgs),
    /// Advice gadget from a set-cover instance.
    ReduceSc(ScArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SyntheticArgs {
    #[arg(long, default_value = "paper-synthetic")]
    preset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    /// Labels in each agent's pool.
    #[arg(long)]
    labels: Option<usize>,
    #[arg(long)]
    cost_min: Option<u32>,
    #[arg(long)]
    cost_max: Option<u32>,
    /// Largest restriction set per edge.
    #[arg(long)]
    max_restrictions: Option<usize>,
    #[arg(long)]
    rho_min: Option<u32>,
    #[arg(long)]
    rho_max: Option<u32>,
    /// Chance of allowing each extra round.
    #[arg(long, value_parser = parse_rational)]
    inclusion: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    budget: Option<Rational>,
    #[arg(long)]
    capacity: Option<u32>,
    #[arg(long, value_parser = parse_rational)]
    budget_scale: Option<Rational>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false, args = ["scenario", "preset"])]
struct AttributeArgs {
    /// Scenario file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Built-in scenario shape.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Budget of every agent in a preset scenario.
    #[arg(long, value_parser = parse_rational, default_value = "2")]
    budget: Rational,
    #[arg(long, value_parser = parse_rational)]
    budget_scale: Option<Rational>,
    /// Also write the scenario used.
    #[arg(long)]
    scenario_out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NamedGraph {
    K4,
    K33,
    Cube,
    Petersen,
}

#[derive(Debug, Args)]
#[group(id = "graph_source", required = true, multiple = false, args = ["graph", "edges"])]
struct VcArgs {
    #[arg(long, value_enum)]
    graph: Option<NamedGraph>,
    /// Edge list such as `0-1,0-2,1-2`; vertices are numbered from 0.
    #[arg(long)]
    edges: Option<String>,
    /// Vertex-cover bound; the minimum cover size if absent.
    #[arg(long)]
    bound: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ScArgs {
    /// Elements are `0..universe`.
    #[arg(long)]
    universe: usize,
    /// Subsets separated by `;`, elements by `,`, e.g. `0,1;1`.
    #[arg(long)]
    subsets: String,
    #[arg(long, value_parser = parse_rational)]
    alpha: Rational,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_objective)]
    objective: Objective,
    /// Result row file.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Anneal,
    Exact,
    IlpEmit,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    #[arg(long, value_parser = parse_rational)]
    t0: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    factor: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    floor: Option<Rational>,
    #[arg(long)]
    iters: Option<u32>,
    /// Non-improving steps before returning to the best state.
    #[arg(long)]
    stall: Option<u32>,
    /// Largest label pool enumerated per agent.
    #[arg(long)]
    label_cap: Option<usize>,
}

impl ScheduleArgs {
    fn given(&self) -> bool {
        self.t0.is_some()
            || self.factor.is_some()
            || self.floor.is_some()
            || self.iters.is_some()
            || self.stall.is_some()
            || self.label_cap.is_some()
    }

    fn config(&self, seed: u64) -> Result<AnnealConfig, CliError> {
        let d = AnnealConfig::with_seed(seed);
        let cfg = AnnealConfig {
            initial_temperature: self.t0.clone().unwrap_or(d.initial_temperature),
            factor: self.factor.clone().unwrap_or(d.factor),
            floor: self.floor.clone().unwrap_or(d.floor),
            iterations: self.iters.unwrap_or(d.iterations),
            revert_after: self.stall.unwrap_or(d.revert_after),
            seed,
            label_cap: self.label_cap.unwrap_or(d.label_cap),
        };
        cfg.check()
            .map_err(|e| CliError::Input(format!("annealing schedule: {e}")))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct AdviseArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Required for anneal.
    #[arg(long)]
    seed: Option<u64>,
    /// Independent anneal runs with seeds `seed`, `seed + 1`, ...; the best
    /// is written.
    #[arg(long)]
    replicates: Option<u64>,
    #[arg(long, value_parser = parse_rational)]
    budget_scale: Option<Rational>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Result row file, one row per run.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct EmitArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_rational)]
    budget_scale: Option<Rational>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value = "small")]
    preset: String,
    /// Agent counts; the preset's if absent.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Resource counts; the preset's if absent.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Round counts; the preset's if absent.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    #[arg(long, value_delimiter = ',', value_parser = parse_rational, default_value = "1")]
    budget_scale: Vec<Rational>,
    /// Objectives and advice modes (`advice:anneal`, `advice:exact`).
    #[arg(long, value_delimiter = ',', value_parser = parse_task, default_value = "mrm,maxtb:utilitarian,maxsa:heuristic")]
    objective: Vec<Task>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Result file; standard output if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Instance that solution and advice files refer to.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Budget scale the advice was computed with.
    #[arg(long, value_parser = parse_rational)]
    budget_scale: Option<Rational>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse()
}

fn parse_task(s: &str) -> Result<Task, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("infeasible")]
    Infeasible,
    #[error("input: {0}")]
    Input(String),
    #[error("limit: {0}")]
    Limit(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible => 1,
            CliError::Input(_) | CliError::Internal(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Limit(m) => CliError::Limit(m),
            RunError::Invalid(m) => CliError::Input(m),
            RunError::Failed(m) => CliError::Internal(m),
        }
    }
}

fn in_file(path: &Path, e: FileError) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let limits = search_limits()?;
    match cli.command {
        Command::Gen(g) => gen(g),
        Command::Solve(a) => solve_cmd(a, limits, cli.timing),
        Command::Advise(a) => advise_cmd(a, limits, cli.timing),
        Command::EmitIlp(a) => {
            let g = load_instance(&a.instance, a.budget_scale.as_ref())?;
            emit(a.output.out.as_deref(), &emit_lp(&build_ilp(&g)))
        }
        Command::Bench(a) => bench_cmd(a, limits, cli.timing),
        Command::Validate(a) => validate_cmd(a),
    }
}

fn search_limits() -> Result<Limits, CliError> {
    match std::env::var(SEARCH_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&c| c > 0)
            .map(|c| Limits { cap: Some(c) })
            .ok_or_else(|| {
                CliError::Input(format!(
                    "{SEARCH_CAP_VAR} must be a positive integer, found {v:?}"
                ))
            }),
        Err(_) => Ok(Limits::default()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write standard output: {e}")))
        }
    }
}

fn load_instance(
    path: &Path,
    budget_scale: Option<&Rational>,
) -> Result<RestrictionsGraph, CliError> {
    let g = parse_instance(&read(path)?).map_err(|e| in_file(path, e))?;
    Ok(match budget_scale {
        Some(s) if *s < rational::zero() => {
            return Err(CliError::Input("budget scale must be non-negative".into()))
        }
        Some(s) => g.with_scaled_budgets(s),
        None => g,
    })
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn gen(cmd: GenCommand) -> Result<(), CliError> {
    let bad = |e: mrm_core::gen::GenError| CliError::Input(e.to_string());
    match cmd {
        GenCommand::Synthetic(a) => {
            let mut p = GenParams::preset(&a.preset, a.seed).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown preset {:?}; expected one of {}",
                    a.preset,
                    GenParams::PRESETS.join(", ")
                ))
            })?;
            p.n = a.n.unwrap_or(p.n);
            p.m = a.m.unwrap_or(p.m);
            p.k = a.k.unwrap_or(p.k);
            p.labels_per_agent = a.labels.unwrap_or(p.labels_per_agent);
            p.cost_range = (
                a.cost_min.unwrap_or(p.cost_range.0),
                a.cost_max.unwrap_or(p.cost_range.1),
            );
            p.max_restrictions_per_edge = a.max_restrictions.unwrap_or(p.max_restrictions_per_edge);
            p.rho_range = (
                a.rho_min.unwrap_or(p.rho_range.0),
                a.rho_max.unwrap_or(p.rho_range.1),
            );
            p.round_inclusion = a.inclusion.unwrap_or(p.round_inclusion);
            p.budget = a.budget.unwrap_or(p.budget);
            p.capacity = a.capacity.unwrap_or(p.capacity);
            if let Some(s) = &a.budget_scale {
                p.budget = &p.budget * s;
            }
            let g = gen_synthetic(&p).map_err(bad)?;
            emit(a.output.out.as_deref(), &write_instance(&g))
        }
        GenCommand::Attribute(a) => {
            let scenario = match (&a.scenario, &a.preset) {
                (Some(path), _) => parse_scenario(&read(path)?).map_err(|e| in_file(path, e))?,
                (None, Some(name)) => {
                    preset_scenario(name, a.seed, &a.budget).ok_or_else(|| {
                        CliError::Input(format!(
                            "unknown preset {name:?}; expected one of {}",
                            PRESETS.join(", ")
                        ))
                    })?
                }
                (None, None) => unreachable!("clap requires a source"),
            };
            let mut g = gen_attribute_instance(&scenario, a.seed).map_err(bad)?;
            if let Some(s) = &a.budget_scale {
                g = g.with_scaled_budgets(s);
            }
            if let Some(p) = &a.scenario_out {
                emit(Some(p), &write_scenario(&scenario))?;
            }
            emit(a.output.out.as_deref(), &write_instance(&g))
        }
        GenCommand::ReduceVc(a) => {
            let (n, edges) = match (a.graph, &a.edges) {
                (Some(name), _) => {
                    let key = match name {
                        NamedGraph::K4 => "k4",
                        NamedGraph::K33 => "k33",
                        NamedGraph::Cube => "cube",
                        NamedGraph::Petersen => "petersen",
                    };
                    named_cubic(key).expect("listed graph")
                }
                (None, Some(text)) => parse_edges(text)?,
                (None, None) => unreachable!("clap requires a graph"),
            };
            if n >= 64 {
                return Err(CliError::Input("at most 63 vertices".into()));
            }
            let bound = a.bound.unwrap_or_else(|| min_vertex_cover(n, &edges));
            let gadget = reduce_from_vertex_cover(n, &edges, bound).map_err(bad)?;
            eprintln!("target: {}", gadget.target);
            emit(a.output.out.as_deref(), &write_instance(&gadget.graph))
        }
        GenCommand::ReduceSc(a) => {
            let subsets = parse_subsets(&a.subsets)?;
            let g = reduce_from_set_cover(a.universe, &subsets, &a.alpha).map_err(bad)?;
            if subsets.len() < 64 {
                if let Some(h) = min_set_cover(a.universe, &subsets) {
                    eprintln!("minimum cover: {h}");
                }
            }
            emit(a.output.out.as_deref(), &write_instance(&g))
        }
    }
}

fn parse_edges(text: &str) -> Result<(usize, Vec<(usize, usize)>), CliError> {
    let bad = || CliError::Input(format!("edge list {text:?} must read like `0-1,1-2`"));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (u, v) = part.split_once('-').ok_or_else(bad)?;
        edges.push((
            u.trim().parse().map_err(|_| bad())?,
            v.trim().parse().map_err(|_| bad())?,
        ));
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Ok((n, edges))
}

fn parse_subsets(text: &str) -> Result<Vec<BTreeSet<usize>>, CliError> {
    text.split(';')
        .map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|e| !e.is_empty())
                .map(|e| {
                    e.parse().map_err(|_| {
                        CliError::Input(format!("subset element {e:?} is not a number"))
                    })
                })
                .collect()
        })
        .collect()
}

fn solve_cmd(a: SolveArgs, limits: Limits, timing: bool) -> Result<(), CliError> {
    let g = load_instance(&a.instance, None)?;
    let start = Instant::now();
    let solved = solve(&g, a.objective, limits)?;
    let runtime_ms = elapsed_ms(start, timing);
    if let Some(csv) = &a.csv {
        let row = ResultRow {
            instance: instance_name(&a.instance),
            objective: a.objective.name().into(),
            solver: a.objective.solver().into(),
            value: solved.value,
            runtime_ms,
            seed: None,
        };
        emit(Some(csv), &emit_results_csv(&[row]))?;
    }
    match solved.doc {
        Some(doc) => emit(a.output.out.as_deref(), &write_solution(&doc)),
        None => Err(CliError::Infeasible),
    }
}

fn advise_cmd(a: AdviseArgs, limits: Limits, timing: bool) -> Result<(), CliError> {
    if a.mode != Mode::Anneal && (a.seed.is_some() || a.replicates.is_some() || a.schedule.given())
    {
        return Err(CliError::Input(
            "--seed, --replicates and schedule flags apply to --mode anneal only".into(),
        ));
    }
    let g = load_instance(&a.instance, a.budget_scale.as_ref())?;
    let name = instance_name(&a.instance);
    let (plan, seed, rows) = match a.mode {
        Mode::IlpEmit => return emit(a.output.out.as_deref(), &emit_lp(&build_ilp(&g))),
        Mode::Exact => {
            let start = Instant::now();
            let plan = advise(&g, &AdviceRun::Exact, limits)?;
            let row = advice_row(&name, "exact", &plan, elapsed_ms(start, timing), None);
            (plan, None, vec![row])
        }
        Mode::Anneal => {
            let seed = a
                .seed
                .ok_or_else(|| CliError::Input("--mode anneal requires --seed".into()))?;
            let replicates = a.replicates.unwrap_or(1);
            if replicates == 0 {
                return Err(CliError::Input("--replicates must be at least 1".into()));
            }
            let configs = (0..replicates)
                .map(|r| a.schedule.config(seed.wrapping_add(r)))
                .collect::<Result<Vec<_>, _>>()?;
            let runs: Vec<Result<(AdvicePlan, u64), RunError>> = configs
                .into_par_iter()
                .map(|cfg| {
                    let start = Instant::now();
                    advise(&g, &AdviceRun::Anneal(Box::new(cfg)), limits)
                        .map(|p| (p, elapsed_ms(start, timing)))
                })
                .collect();
            let mut rows = Vec::new();
            let mut best: Option<(AdvicePlan, u64)> = None;
            for (r, run) in runs.into_iter().enumerate() {
                let (plan, ms) = run?;
                let s = seed.wrapping_add(r as u64);
                rows.push(advice_row(&name, "anneal", &plan, ms, Some(s)));
                if best
                    .as_ref()
                    .is_none_or(|(b, _)| plan.satisfied > b.satisfied)
                {
                    best = Some((plan, s));
                }
            }
            let (plan, s) = best.expect("at least one replicate");
            (plan, Some(s), rows)
        }
    };
    if let Some(csv) = &a.csv {
        emit(Some(csv), &emit_results_csv(&rows))?;
    }
    let mode = if a.mode == Mode::Exact {
        "exact"
    } else {
        "anneal"
    };
    emit(
        a.output.out.as_deref(),
        &write_advice(&advice_doc(mode, seed, &plan)),
    )
}

fn advice_row(
    instance: &str,
    mode: &str,
    plan: &AdvicePlan,
    runtime_ms: u64,
    seed: Option<u64>,
) -> ResultRow {
    ResultRow {
        instance: instance.into(),
        objective: format!("advice:{mode}"),
        solver: mode.into(),
        value: plan.satisfied.to_string(),
        runtime_ms,
        seed,
    }
}

fn bench_cmd(a: BenchArgs, limits: Limits, timing: bool) -> Result<(), CliError> {
    if a.replicates == 0 {
        return Err(CliError::Input("--replicates must be at least 1".into()));
    }
    if a.budget_scale.iter().any(|s| *s < rational::zero()) {
        return Err(CliError::Input("budget scale must be non-negative".into()));
    }
    let grid = BenchGrid {
        preset: a.preset,
        ns: a.n,
        ms: a.m,
        ks: a.k,
        budget_scales: a.budget_scale,
        tasks: a.objective,
        seed: a.seed,
        replicates: a.replicates,
        anneal: a.schedule.config(a.seed)?,
        limits,
        timing,
    };
    let rows = run_bench(&grid)?;
    emit(a.csv.as_deref(), &emit_results_csv(&rows))
}

fn validate_cmd(a: ValidateArgs) -> Result<(), CliError> {
    let instance = match &a.instance {
        Some(p) => Some(load_instance(p, a.budget_scale.as_ref())?),
        None => None,
    };
    let needs = |kind: &str| {
        instance
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("checking a {kind} file needs --instance")))
    };
    let mut report = String::new();
    for path in &a.files {
        let text = read(path)?;
        let fail = |e: FileError| in_file(path, e);
        let kind = if let Some(tag) = format_tag(&text) {
            match tag.as_str() {
                INSTANCE_FORMAT => parse_instance(&text).map(|_| "instance").map_err(fail)?,
                SCENARIO_FORMAT => parse_scenario(&text).map(|_| "scenario").map_err(fail)?,
                SOLUTION_FORMAT => {
                    let doc = parse_solution(&text).map_err(fail)?;
                    check_solution(&doc, &needs("solution")?.compatibility()).map_err(fail)?;
                    "solution"
                }
                ADVICE_FORMAT => {
                    let doc = parse_advice(&text).map_err(fail)?;
                    check_advice(&doc, needs("advice")?).map_err(fail)?;
                    "advice"
                }
                other => {
                    return Err(CliError::Input(format!(
                        "{}: unknown format {other:?}",
                        path.display()
                    )))
                }
            }
        } else if text.starts_with("Maximize\n") {
            check_lp(&text).map_err(fail)?;
            "lp"
        } else if text.lines().next() == Some(HEADER.join(",").as_str()) {
            parse_results_csv(&text).map_err(fail)?;
            "results"
        } else {
            return Err(CliError::Input(format!(
                "{}: unrecognized file",
                path.display()
            )));
        };
        report.push_str(&format!("ok {} {kind}\n", path.display()));
    }
    emit(None, &report)
}
