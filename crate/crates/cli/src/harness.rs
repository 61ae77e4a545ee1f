//! Experiment drivers: one metrics row per (input × variant) cell.
//!
//! Cells are independent and run on the rayon pool; results are collected
//! in input order, so output never depends on scheduling. Timed runs are
//! executed one at a time.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::Result;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use tension_core::evaluation::{sample_seed_groups, GroupLabel, MetricBase};
use tension_core::io::SkillRecord;
use tension_core::rng::{item_seed, stream_rng, Stream};
use tension_core::{
    evaluate_solution, greedy_cardinality, proxy_weights, tteam, ConformOptions, EdgeWeights,
    Error, NodeSet, Project, SkillMap, Variant, WeightNorm,
};

use crate::dataset::Dataset;
use crate::report::{BenchRow, MetricRow};

pub const MIN_PROJECT_SIZE: usize = 3;
pub const MAX_PROJECT_SIZE: usize = 13;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Settings {
    pub master_seed: u64,
    pub norm: WeightNorm,
    pub conform: ConformOptions,
    pub timing: bool,
}

/// A seed set in input node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedJob {
    pub run_id: usize,
    pub group: Option<GroupLabel>,
    pub seeds: NodeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectJob {
    pub run_id: usize,
    pub labels: BTreeSet<String>,
}

/// Short failure reason for a library error.
pub fn reason(e: &Error) -> String {
    match e {
        Error::SeedsDisconnected => "disconnected seeds".into(),
        Error::NotConverged(_) => "not converged".into(),
        Error::UncoverableSkill(s) => format!("uncoverable skill {s}"),
        other => other.to_string(),
    }
}

fn group_name(group: Option<GroupLabel>) -> String {
    group.map(|g| g.to_string()).unwrap_or_default()
}

/// Runs `f` over `items` on the pool, or in order when timing.
fn run_cells<T: Sync, R: Send>(
    items: &[T],
    timing: bool,
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    if timing {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

struct Context<'a> {
    ds: &'a Dataset,
    weights: EdgeWeights,
    base: MetricBase,
    settings: &'a Settings,
}

impl<'a> Context<'a> {
    fn new(ds: &'a Dataset, settings: &'a Settings) -> Result<Self> {
        let weights = proxy_weights(&ds.graph, &ds.latent, settings.norm)?;
        let base = MetricBase::new(&ds.graph, &weights)?;
        Ok(Context {
            ds,
            weights,
            base,
            settings,
        })
    }

    fn comm_cell(&self, job: &SeedJob, variant: Variant) -> MetricRow {
        let (algorithm, name, group) = (
            variant.algorithm(),
            variant.to_string(),
            group_name(job.group),
        );
        let q = match self.ds.localize(&job.seeds) {
            Ok(q) => q,
            Err(issue) => {
                return MetricRow::failed(job.run_id, algorithm, &name, &group, &issue.reason())
            }
        };
        let rng_seed = item_seed(
            self.settings.master_seed,
            Stream::PeelOrder,
            job.run_id as u64,
        );
        let g = &self.ds.graph;
        let start = Instant::now();
        let outcome = variant.search(g, &self.weights, &q, rng_seed);
        let seconds = start.elapsed().as_secs_f64();
        let result = outcome.and_then(|nodes| {
            let sol = evaluate_solution(g, &self.ds.latent, &nodes, &self.settings.conform)?;
            let m = self.base.measure(g, &self.weights, &sol, &q)?;
            Ok((sol, m))
        });
        match result {
            Ok((sol, m)) => {
                let mut row = MetricRow::ok(
                    job.run_id,
                    algorithm,
                    &name,
                    &group,
                    &m,
                    sol.nodes.len(),
                    sol.edges_induced,
                );
                row.seconds = self.settings.timing.then_some(seconds);
                row
            }
            Err(e) => MetricRow::failed(job.run_id, algorithm, &name, &group, &reason(&e)),
        }
    }
}

/// One row per (seed set, variant), seed sets outermost.
pub fn run_comm(
    ds: &Dataset,
    jobs: &[SeedJob],
    variants: &[Variant],
    settings: &Settings,
) -> Result<Vec<MetricRow>> {
    let ctx = Context::new(ds, settings)?;
    let cells: Vec<(&SeedJob, Variant)> = jobs
        .iter()
        .flat_map(|job| variants.iter().map(move |&v| (job, v)))
        .collect();
    Ok(run_cells(&cells, settings.timing, |&(job, v)| {
        ctx.comm_cell(job, v)
    }))
}

/// Skill map on the working nodes; records of dropped nodes are ignored.
pub fn skill_map(ds: &Dataset, records: &[SkillRecord], threshold: u64) -> Result<SkillMap> {
    if let Some(bad) = records.iter().find(|r| r.node >= ds.input_node_count()) {
        anyhow::bail!("skill record names unknown node {}", bad.node);
    }
    let local = records
        .iter()
        .filter_map(|r| Some((ds.local_id(r.node)?, r.label.as_str(), r.count)));
    Ok(SkillMap::from_counts(ds.node_count(), local, threshold)?)
}

/// `count` projects of 3 to 13 skills (fewer if fewer skills have holders),
/// drawn from the project stream.
pub fn sample_projects(skills: &SkillMap, count: usize, master_seed: u64) -> Vec<ProjectJob> {
    let coverable: Vec<&String> = skills
        .universe()
        .iter()
        .enumerate()
        .filter(|&(s, _)| !skills.holders(s).is_empty())
        .map(|(_, label)| label)
        .collect();
    if coverable.is_empty() {
        return Vec::new();
    }
    let mut rng = stream_rng(master_seed, Stream::Projects);
    (0..count)
        .map(|run_id| {
            let size = rng
                .random_range(MIN_PROJECT_SIZE..=MAX_PROJECT_SIZE)
                .min(coverable.len());
            let labels = index::sample(&mut rng, coverable.len(), size)
                .into_iter()
                .map(|k| coverable[k].clone())
                .collect();
            ProjectJob { run_id, labels }
        })
        .collect()
}

/// One row per (project, variant). The step-2 seeds serve as the metric
/// normalizer's seed set.
pub fn run_team(
    ds: &Dataset,
    skills: &SkillMap,
    projects: &[ProjectJob],
    variants: &[Variant],
    settings: &Settings,
) -> Result<Vec<MetricRow>> {
    let ctx = Context::new(ds, settings)?;
    let cells: Vec<(&ProjectJob, Variant)> = projects
        .iter()
        .flat_map(|p| variants.iter().map(move |&v| (p, v)))
        .collect();
    Ok(run_cells(&cells, settings.timing, |&(job, variant)| {
        let name = variant.to_string();
        let labels: Vec<&str> = job.labels.iter().map(String::as_str).collect();
        let rng_seed = item_seed(settings.master_seed, Stream::PeelOrder, job.run_id as u64);
        let start = Instant::now();
        let result = Project::from_labels(&labels, skills).and_then(|project| {
            let out = tteam(
                &ds.graph,
                &ds.latent,
                skills,
                &project,
                variant,
                settings.norm,
                rng_seed,
                &settings.conform,
            )?;
            let seconds = start.elapsed().as_secs_f64();
            let m = ctx
                .base
                .measure(&ds.graph, &ctx.weights, &out.solution, &out.first_pass)?;
            Ok((out, m, seconds))
        });
        match result {
            Ok((out, m, seconds)) => {
                let mut row = MetricRow::ok(
                    job.run_id,
                    "tteam",
                    &name,
                    "",
                    &m,
                    out.solution.nodes.len(),
                    out.solution.edges_induced,
                );
                row.seconds = settings.timing.then_some(seconds);
                row.step2_noop = Some(out.second_pass_noop);
                row
            }
            Err(e) => MetricRow::failed(job.run_id, "tteam", &name, "", &reason(&e)),
        }
    }))
}

/// One row per requested team size. The solution itself is the metric
/// normalizer's seed set.
pub fn run_cardinality(
    ds: &Dataset,
    sizes: &[usize],
    settings: &Settings,
) -> Result<Vec<MetricRow>> {
    let ctx = Context::new(ds, settings)?;
    let jobs: Vec<(usize, usize)> = sizes.iter().copied().enumerate().collect();
    Ok(run_cells(&jobs, settings.timing, |&(run_id, k)| {
        let rng_seed = item_seed(settings.master_seed, Stream::Starts, run_id as u64);
        let start = Instant::now();
        let result = greedy_cardinality(
            &ds.graph,
            &ds.latent,
            k,
            settings.norm,
            rng_seed,
            &settings.conform,
        )
        .and_then(|sol| {
            let seconds = start.elapsed().as_secs_f64();
            let m = ctx
                .base
                .measure(&ds.graph, &ctx.weights, &sol, &sol.nodes)?;
            Ok((sol, m, seconds))
        });
        let group = format!("k={k}");
        match result {
            Ok((sol, m, seconds)) => {
                let mut row = MetricRow::ok(
                    run_id,
                    "greedy",
                    "Greedy",
                    &group,
                    &m,
                    sol.nodes.len(),
                    sol.edges_induced,
                );
                row.seconds = settings.timing.then_some(seconds);
                row
            }
            Err(e) => MetricRow::failed(run_id, "greedy", "Greedy", &group, &reason(&e)),
        }
    }))
}

/// Seed sets from the three spread groups, numbered D1 first, in input ids.
pub fn sample_seed_jobs(
    ds: &Dataset,
    set_size: usize,
    candidates: usize,
    per_group: usize,
    master_seed: u64,
) -> Result<Vec<SeedJob>> {
    let mut rng = stream_rng(master_seed, Stream::SeedSampling);
    let groups = sample_seed_groups(&ds.graph, set_size, candidates, per_group, &mut rng)?;
    Ok(groups
        .iter()
        .flat_map(|grp| grp.sets.iter().map(move |set| (grp.label, set)))
        .enumerate()
        .map(|(run_id, (label, set))| SeedJob {
            run_id,
            group: Some(label),
            seeds: ds.globalize(set),
        })
        .collect())
}

fn mean_and_stddev(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Wall-clock search time of each variant over `jobs`, repeated `repeats`
/// times. Variants are interleaved per seed set so drift hits all alike.
/// Jobs whose seeds cannot be used are skipped.
pub fn bench(
    name: &str,
    ds: &Dataset,
    jobs: &[SeedJob],
    variants: &[Variant],
    repeats: usize,
    settings: &Settings,
) -> Result<Vec<BenchRow>> {
    let weights = proxy_weights(&ds.graph, &ds.latent, settings.norm)?;
    let usable: Vec<(u64, NodeSet)> = jobs
        .iter()
        .filter_map(|job| {
            let q = ds.localize(&job.seeds).ok()?;
            Some((
                item_seed(settings.master_seed, Stream::PeelOrder, job.run_id as u64),
                q,
            ))
        })
        .collect();
    let mut samples = vec![Vec::new(); variants.len()];
    for _ in 0..repeats {
        for (rng_seed, q) in &usable {
            for (k, &v) in variants.iter().enumerate() {
                let start = Instant::now();
                let found = v.search(&ds.graph, &weights, q, *rng_seed);
                let seconds = start.elapsed().as_secs_f64();
                if found.is_ok() {
                    samples[k].push(seconds);
                }
            }
        }
    }
    Ok(variants
        .iter()
        .zip(&samples)
        .filter(|(_, s)| !s.is_empty())
        .map(|(v, s)| {
            let (mean_seconds, stddev_seconds) = mean_and_stddev(s);
            BenchRow {
                graph: name.to_string(),
                variant: v.to_string(),
                nodes: ds.node_count(),
                edges: ds.graph.edge_count(),
                runs: s.len(),
                mean_seconds,
                stddev_seconds,
            }
        })
        .collect())
}
