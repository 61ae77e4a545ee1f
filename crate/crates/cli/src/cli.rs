//! Argument definitions and subcommand implementations.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use tension_core::evaluation::{DEFAULT_CANDIDATES, DEFAULT_PER_GROUP};
use tension_core::io::{
    read_projects, read_seed_sets, read_skill_counts, write_profiles, write_seed_sets,
};
use tension_core::rng::{stream_rng, Stream};
use tension_core::team::DEFAULT_SKILL_THRESHOLD;
use tension_core::{
    conform, social_tension, ConformOptions, Graph, ProfileMatrix, Variant, WeightNorm,
};

use crate::config::RunConfig;
use crate::dataset::{generate, load_edge_list, load_incidence, load_profiles, Dataset, Generator};
use crate::harness::{self, ProjectJob, SeedJob, Settings};
use crate::report::{write_bench, write_metrics, MetricRow};

pub const DEFAULT_SET_SIZE: usize = 4;
pub const DEFAULT_PROJECTS: usize = 80;
pub const BENCH_AVG_DEGREE: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(
    name = "tension",
    version,
    about = "Low-tension community search and team formation"
)]
pub struct Cli {
    /// TOML file with option defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conform latent profiles and report the social tension.
    Conform(ConformArgs),
    /// Community search around seed sets.
    Comm(CommArgs),
    /// Team formation for skill projects.
    Team(TeamArgs),
    /// Connected teams of a fixed size.
    Cardinality(CardinalityArgs),
    /// Time every variant on one or more graphs.
    Bench(BenchArgs),
    /// Write synthetic latent profiles.
    GenProfiles(GenProfilesArgs),
    /// Write seed sets grouped by spread.
    SampleSeeds(SampleSeedsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Latent profiles, one row per node.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Synthetic profiles instead of a file: uniform, exponential[:λ],
    /// thresholded:α or eigenvector.
    #[arg(long)]
    pub generator: Option<String>,
    /// Node-feature incidence file for the eigenvector generator.
    #[arg(long)]
    pub incidence: Option<PathBuf>,
    /// Attributes per generated profile.
    #[arg(long)]
    pub attributes: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Stop conforming once no value moves more than this (default 1e-9).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Conformation sweep budget (default max(100n, 10000)).
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// l2, l1 or max.
    #[arg(long)]
    pub weight_norm: Option<String>,
    /// Master random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// Seed sets, one per line, optionally prefixed `D1:`.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Nodes per sampled seed set (default 4).
    #[arg(long)]
    pub set_size: Option<usize>,
    /// Candidate sets ranked by spread (default 1000).
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Seed sets kept per spread group (default 30).
    #[arg(long)]
    pub per_group: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VariantArgs {
    /// Variant to run, e.g. qtree-e or "QPeel(m)"; repeatable. All five by
    /// default.
    #[arg(long)]
    pub variant: Vec<String>,
    /// Fill the seconds column (runs cells sequentially).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConformArgs {
    #[command(flatten)]
    pub input: ProfileArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommArgs {
    #[command(flatten)]
    pub input: ProfileArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub variants: VariantArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TeamArgs {
    #[command(flatten)]
    pub input: ProfileArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub variants: VariantArgs,
    /// Skill counts, `node label count` per line.
    #[arg(long)]
    pub skills: Option<PathBuf>,
    /// Projects, one line of skill labels each.
    #[arg(long)]
    pub project: Option<PathBuf>,
    /// Number of sampled projects when no project file is given.
    #[arg(long)]
    pub projects: Option<usize>,
    /// Minimum count for a node to hold a skill (default 4).
    #[arg(long)]
    pub skill_threshold: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CardinalityArgs {
    #[command(flatten)]
    pub input: ProfileArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Team size; repeatable.
    #[arg(long)]
    pub k: Vec<usize>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Edge list; repeatable.
    #[arg(long)]
    pub graph: Vec<PathBuf>,
    /// Also time a random graph with this many nodes; repeatable.
    #[arg(long)]
    pub synthetic: Vec<usize>,
    /// Profile generator (default uniform).
    #[arg(long)]
    pub generator: Option<String>,
    /// Attributes per generated profile.
    #[arg(long)]
    pub attributes: Option<usize>,
    /// Variant to time; repeatable. All five by default.
    #[arg(long)]
    pub variant: Vec<String>,
    /// Nodes per sampled seed set (default 4).
    #[arg(long)]
    pub set_size: Option<usize>,
    /// Candidate sets ranked by spread (default 1000).
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Seed sets kept per spread group (default 30).
    #[arg(long)]
    pub per_group: Option<usize>,
    /// Timing repetitions over all seed sets (default 1).
    #[arg(long)]
    pub repeats: Option<usize>,
    /// l2, l1 or max.
    #[arg(long)]
    pub weight_norm: Option<String>,
    /// Master random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenProfilesArgs {
    /// Node count; taken from --graph when absent.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Profile generator (default uniform).
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub incidence: Option<PathBuf>,
    /// Attributes per generated profile.
    #[arg(long)]
    pub attributes: Option<usize>,
    /// Master random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleSeedsArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Nodes per sampled seed set (default 4).
    #[arg(long)]
    pub set_size: Option<usize>,
    /// Candidate sets ranked by spread (default 1000).
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Seed sets kept per spread group (default 30).
    #[arg(long)]
    pub per_group: Option<usize>,
    /// Master random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.with_context(|| format!("missing required option --{flag}"))
}

fn variants(flags: &[String], cfg: &RunConfig) -> Result<Vec<Variant>> {
    let names = if flags.is_empty() {
        &cfg.variant
    } else {
        flags
    };
    if names.is_empty() {
        return Ok(Variant::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in names {
        let v: Variant = name.parse()?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

fn weight_norm(flag: &Option<String>, cfg: &RunConfig) -> Result<WeightNorm> {
    match flag.as_ref().or(cfg.weight_norm.as_ref()) {
        Some(s) => Ok(s.parse()?),
        None => Ok(WeightNorm::default()),
    }
}

fn settings(solver: &SolverArgs, cfg: &RunConfig, timing: bool) -> Result<Settings> {
    let defaults = ConformOptions::default();
    let tol = solver.tol.or(cfg.tol).unwrap_or(defaults.tol);
    if tol.is_nan() || tol <= 0.0 {
        bail!("--tol must be positive");
    }
    Ok(Settings {
        master_seed: solver.seed.or(cfg.seed).unwrap_or(0),
        norm: weight_norm(&solver.weight_norm, cfg)?,
        conform: ConformOptions {
            tol,
            max_iter: solver.max_iter.or(cfg.max_iter),
        },
        timing: timing || cfg.timing.unwrap_or(false),
    })
}

/// Graph plus latent profiles from a file or a generator (exactly one).
fn load_input(
    input: &ProfileArgs,
    cfg: &RunConfig,
    master_seed: u64,
) -> Result<(Graph, ProfileMatrix)> {
    let graph_path = require(input.graph.as_ref().or(cfg.graph.as_ref()), "graph")?;
    let edges = load_edge_list(graph_path)?;
    let profiles = input.profiles.as_ref().or(cfg.profiles.as_ref());
    let generator = input.generator.as_ref().or(cfg.generator.as_ref());
    let latent = match (profiles, generator) {
        (Some(path), None) => load_profiles(path)?,
        (None, Some(name)) => {
            let n = edges.implied_node_count();
            let m = input.attributes.or(cfg.attributes).unwrap_or(1);
            let incidence = match input.incidence.as_ref().or(cfg.incidence.as_ref()) {
                Some(path) => Some(load_incidence(path, n)?),
                None => None,
            };
            generate(name.parse()?, n, m, incidence.as_ref(), master_seed)?
        }
        (Some(_), Some(_)) => bail!("give either --profiles or --generator, not both"),
        (None, None) => bail!("missing required option --profiles or --generator"),
    };
    let n = latent.rows();
    if edges.implied_node_count() > n {
        bail!(
            "graph mentions node {} but profiles cover only {n} nodes",
            edges.implied_node_count() - 1
        );
    }
    Ok((edges.into_graph(n)?, latent))
}

fn load_dataset(input: &ProfileArgs, cfg: &RunConfig, master_seed: u64) -> Result<Dataset> {
    let (graph, latent) = load_input(input, cfg, master_seed)?;
    Dataset::new(&graph, &latent)
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Conform(args) => cmd_conform(&args, &cfg),
        Command::Comm(args) => cmd_comm(&args, &cfg),
        Command::Team(args) => cmd_team(&args, &cfg),
        Command::Cardinality(args) => cmd_cardinality(&args, &cfg),
        Command::Bench(args) => cmd_bench(&args, &cfg),
        Command::GenProfiles(args) => cmd_gen_profiles(&args, &cfg),
        Command::SampleSeeds(args) => cmd_sample_seeds(&args, &cfg),
    }
}

pub fn cmd_conform(args: &ConformArgs, cfg: &RunConfig) -> Result<()> {
    let settings = settings(&args.solver, cfg, false)?;
    let (graph, latent) = load_input(&args.input, cfg, settings.master_seed)?;
    let result = conform(&graph, &latent, &settings.conform)?;
    let tension = social_tension(&graph, &latent, &result.conformed)?;
    info!(
        "converged after {} sweeps, tension {tension}",
        result.iterations
    );
    let out_path = args.solver.out.as_ref().or(cfg.out.as_ref());
    let mut out = output(out_path.map(PathBuf::as_path))?;
    write_profiles(
        &mut out,
        &result.conformed,
        &[
            ("tension", tension.to_string()),
            ("iterations", result.iterations.to_string()),
        ],
    )?;
    out.flush()?;
    Ok(())
}

fn seed_jobs(
    args: &SamplerArgs,
    cfg: &RunConfig,
    ds: &Dataset,
    master_seed: u64,
) -> Result<Vec<SeedJob>> {
    if let Some(path) = args.seeds.as_ref().or(cfg.seeds.as_ref()) {
        let records = read_seed_sets(open(path)?)
            .with_context(|| format!("reading seeds {}", path.display()))?;
        return Ok(records
            .into_iter()
            .enumerate()
            .map(|(run_id, r)| SeedJob {
                run_id,
                group: r.group,
                seeds: r.seeds,
            })
            .collect());
    }
    harness::sample_seed_jobs(
        ds,
        args.set_size.or(cfg.set_size).unwrap_or(DEFAULT_SET_SIZE),
        args.candidates
            .or(cfg.candidates)
            .unwrap_or(DEFAULT_CANDIDATES),
        args.per_group
            .or(cfg.per_group)
            .unwrap_or(DEFAULT_PER_GROUP),
        master_seed,
    )
}

fn finish_metrics(rows: &[MetricRow], out: Option<&PathBuf>) -> Result<()> {
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        log::warn!("{failed} of {} runs failed", rows.len());
    }
    let mut out = output(out.map(PathBuf::as_path))?;
    write_metrics(&mut out, rows)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_comm(args: &CommArgs, cfg: &RunConfig) -> Result<()> {
    let settings = settings(&args.solver, cfg, args.variants.timing)?;
    let ds = load_dataset(&args.input, cfg, settings.master_seed)?;
    let jobs = seed_jobs(&args.sampler, cfg, &ds, settings.master_seed)?;
    let variants = variants(&args.variants.variant, cfg)?;
    let rows = harness::run_comm(&ds, &jobs, &variants, &settings)?;
    finish_metrics(&rows, args.solver.out.as_ref().or(cfg.out.as_ref()))
}

pub fn cmd_team(args: &TeamArgs, cfg: &RunConfig) -> Result<()> {
    let settings = settings(&args.solver, cfg, args.variants.timing)?;
    let ds = load_dataset(&args.input, cfg, settings.master_seed)?;
    let skills_path = require(args.skills.as_ref().or(cfg.skills.as_ref()), "skills")?;
    let records = read_skill_counts(open(skills_path)?)
        .with_context(|| format!("reading skills {}", skills_path.display()))?;
    let threshold = args
        .skill_threshold
        .or(cfg.skill_threshold)
        .unwrap_or(DEFAULT_SKILL_THRESHOLD);
    let skills = harness::skill_map(&ds, &records, threshold)?;
    let projects: Vec<ProjectJob> = match args.project.as_ref().or(cfg.project.as_ref()) {
        Some(path) => read_projects(open(path)?)
            .with_context(|| format!("reading projects {}", path.display()))?
            .into_iter()
            .enumerate()
            .map(|(run_id, (_, labels))| ProjectJob { run_id, labels })
            .collect(),
        None => harness::sample_projects(
            &skills,
            args.projects.or(cfg.projects).unwrap_or(DEFAULT_PROJECTS),
            settings.master_seed,
        ),
    };
    let variants = variants(&args.variants.variant, cfg)?;
    let rows = harness::run_team(&ds, &skills, &projects, &variants, &settings)?;
    finish_metrics(&rows, args.solver.out.as_ref().or(cfg.out.as_ref()))
}

pub fn cmd_cardinality(args: &CardinalityArgs, cfg: &RunConfig) -> Result<()> {
    let settings = settings(&args.solver, cfg, args.timing)?;
    let ds = load_dataset(&args.input, cfg, settings.master_seed)?;
    let sizes = if args.k.is_empty() { &cfg.k } else { &args.k };
    if sizes.is_empty() {
        bail!("missing required option --k");
    }
    let rows = harness::run_cardinality(&ds, sizes, &settings)?;
    finish_metrics(&rows, args.solver.out.as_ref().or(cfg.out.as_ref()))
}

pub fn cmd_bench(args: &BenchArgs, cfg: &RunConfig) -> Result<()> {
    let master_seed = args.seed.or(cfg.seed).unwrap_or(0);
    let settings = Settings {
        master_seed,
        norm: weight_norm(&args.weight_norm, cfg)?,
        conform: ConformOptions::default(),
        timing: true,
    };
    let generator: Generator = args
        .generator
        .as_ref()
        .or(cfg.generator.as_ref())
        .map_or(Ok(Generator::Uniform), |s| s.parse())?;
    let m = args.attributes.or(cfg.attributes).unwrap_or(1);
    let variants = variants(&args.variant, cfg)?;
    let set_size = args.set_size.or(cfg.set_size).unwrap_or(DEFAULT_SET_SIZE);
    let candidates = args
        .candidates
        .or(cfg.candidates)
        .unwrap_or(DEFAULT_CANDIDATES);
    let per_group = args
        .per_group
        .or(cfg.per_group)
        .unwrap_or(DEFAULT_PER_GROUP);
    let repeats = args.repeats.or(cfg.repeats).unwrap_or(1);

    let mut graphs: Vec<(String, Graph)> = Vec::new();
    let paths = if args.graph.is_empty() {
        cfg.graph.iter().cloned().collect()
    } else {
        args.graph.clone()
    };
    for path in &paths {
        let edges = load_edge_list(path)?;
        let n = edges.implied_node_count();
        graphs.push((path.display().to_string(), edges.into_graph(n)?));
    }
    for &n in &args.synthetic {
        let p = (BENCH_AVG_DEGREE / n.saturating_sub(1).max(1) as f64).min(1.0);
        let mut rng = stream_rng(master_seed, Stream::Synthetic);
        graphs.push((
            format!("gnp-{n}"),
            tension_core::synthetic::gnp(n, p, &mut rng)?,
        ));
    }
    if graphs.is_empty() {
        bail!("bench needs at least one --graph or --synthetic size");
    }

    let mut rows = Vec::new();
    for (name, graph) in &graphs {
        let latent = generate(generator, graph.node_count(), m, None, master_seed)?;
        let ds = Dataset::new(graph, &latent)?;
        let jobs = harness::sample_seed_jobs(&ds, set_size, candidates, per_group, master_seed)?;
        info!(
            "timing {name}: {} nodes, {} seed sets",
            ds.node_count(),
            jobs.len()
        );
        rows.extend(harness::bench(
            name, &ds, &jobs, &variants, repeats, &settings,
        )?);
    }
    let mut out = output(args.out.as_ref().or(cfg.out.as_ref()).map(PathBuf::as_path))?;
    write_bench(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_gen_profiles(args: &GenProfilesArgs, cfg: &RunConfig) -> Result<()> {
    let master_seed = args.seed.or(cfg.seed).unwrap_or(0);
    let n = match (args.nodes, args.graph.as_ref().or(cfg.graph.as_ref())) {
        (Some(n), _) => n,
        (None, Some(path)) => load_edge_list(path)?.implied_node_count(),
        (None, None) => bail!("missing required option --nodes or --graph"),
    };
    let name = require(
        args.generator.as_ref().or(cfg.generator.as_ref()),
        "generator",
    )?;
    let m = args.attributes.or(cfg.attributes).unwrap_or(1);
    let incidence = match args.incidence.as_ref().or(cfg.incidence.as_ref()) {
        Some(path) => Some(load_incidence(path, n)?),
        None => None,
    };
    let latent = generate(name.parse()?, n, m, incidence.as_ref(), master_seed)?;
    let mut out = output(args.out.as_ref().or(cfg.out.as_ref()).map(PathBuf::as_path))?;
    write_profiles(&mut out, &latent, &[])?;
    out.flush()?;
    Ok(())
}

pub fn cmd_sample_seeds(args: &SampleSeedsArgs, cfg: &RunConfig) -> Result<()> {
    let master_seed = args.seed.or(cfg.seed).unwrap_or(0);
    let path = require(args.graph.as_ref().or(cfg.graph.as_ref()), "graph")?;
    let edges = load_edge_list(path)?;
    let n = edges.implied_node_count();
    let graph = edges.into_graph(n)?;
    // Profiles play no part in sampling.
    let ds = Dataset::new(&graph, &ProfileMatrix::filled(n, 1, 0.0)?)?;
    let jobs = harness::sample_seed_jobs(
        &ds,
        args.set_size.or(cfg.set_size).unwrap_or(DEFAULT_SET_SIZE),
        args.candidates
            .or(cfg.candidates)
            .unwrap_or(DEFAULT_CANDIDATES),
        args.per_group
            .or(cfg.per_group)
            .unwrap_or(DEFAULT_PER_GROUP),
        master_seed,
    )?;
    let sets: Vec<_> = jobs.iter().map(|j| (j.group, &j.seeds)).collect();
    let mut out = output(args.out.as_ref().or(cfg.out.as_ref()).map(PathBuf::as_path))?;
    write_seed_sets(&mut out, &sets)?;
    out.flush()?;
    Ok(())
}
