//! Loading inputs and restricting them to the largest component.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use log::warn;
use tension_core::evaluation::{generate_profiles, Incidence, ProfileScheme};
use tension_core::io::{read_edge_list, read_incidence, read_profiles, EdgeList};
use tension_core::rng::{item_seed, Stream};
use tension_core::{induced_subgraph, Graph, NodeSet, ProfileMatrix};

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

pub fn load_edge_list(path: &Path) -> Result<EdgeList> {
    read_edge_list(open(path)?).with_context(|| format!("reading graph {}", path.display()))
}

pub fn load_profiles(path: &Path) -> Result<ProfileMatrix> {
    read_profiles(open(path)?).with_context(|| format!("reading profiles {}", path.display()))
}

pub fn load_incidence(path: &Path, node_count: usize) -> Result<Incidence> {
    read_incidence(open(path)?, node_count)
        .with_context(|| format!("reading incidence {}", path.display()))
}

/// Synthetic profile source, written `uniform`, `exponential[:λ]`,
/// `thresholded:α` or `eigenvector`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Uniform,
    Exponential(f64),
    Thresholded(f64),
    Eigenvector,
}

pub const DEFAULT_LAMBDA: f64 = 6.0;

impl FromStr for Generator {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let number = |what: &str| -> Result<f64> {
            let arg = arg.with_context(|| format!("generator '{name}' needs {what}"))?;
            arg.parse()
                .with_context(|| format!("invalid {what} '{arg}' for generator '{name}'"))
        };
        Ok(match name.to_ascii_lowercase().as_str() {
            "uniform" => Generator::Uniform,
            "exponential" | "exp" => match arg {
                Some(_) => Generator::Exponential(number("a rate")?),
                None => Generator::Exponential(DEFAULT_LAMBDA),
            },
            "thresholded" => Generator::Thresholded(number("a fraction")?),
            "eigenvector" => Generator::Eigenvector,
            _ => bail!("unknown generator '{s}'"),
        })
    }
}

/// Draws `n × m` profiles from the profile stream of `master_seed`.
pub fn generate(
    generator: Generator,
    n: usize,
    m: usize,
    incidence: Option<&Incidence>,
    master_seed: u64,
) -> Result<ProfileMatrix> {
    let scheme = match generator {
        Generator::Uniform => ProfileScheme::Uniform,
        Generator::Exponential(lambda) => ProfileScheme::Exponential { lambda },
        Generator::Thresholded(alpha) => ProfileScheme::Thresholded { alpha },
        Generator::Eigenvector => ProfileScheme::Eigenvector(
            incidence.context("the eigenvector generator needs --incidence")?,
        ),
    };
    Ok(generate_profiles(
        n,
        m,
        &scheme,
        item_seed(master_seed, Stream::Profiles, 0),
    )?)
}

/// Why a seed set cannot be used on the working graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedIssue {
    /// Seeds lie in more than one component of the input graph.
    Disconnected,
    /// All seeds share one component, but not the largest.
    OutsideLargest,
    /// A seed id is not a node of the input graph.
    Unknown(usize),
}

impl SeedIssue {
    pub fn reason(&self) -> String {
        match self {
            SeedIssue::Disconnected => "disconnected seeds".into(),
            SeedIssue::OutsideLargest => "seeds outside largest component".into(),
            SeedIssue::Unknown(v) => format!("unknown node {v}"),
        }
    }
}

/// The largest connected component of an input graph with its profiles,
/// relabelled to `0..n`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: Graph,
    pub latent: ProfileMatrix,
    /// Input id of every working node.
    pub original: Vec<usize>,
    local: Vec<Option<usize>>,
    input_component: Vec<usize>,
}

impl Dataset {
    pub fn new(input: &Graph, latent: &ProfileMatrix) -> Result<Self> {
        latent.check_rows(input.node_count())?;
        if input.node_count() == 0 {
            bail!("graph has no nodes");
        }
        let largest = input.largest_component();
        if largest.len() < input.node_count() {
            warn!(
                "graph is disconnected; keeping the largest component ({} of {} nodes)",
                largest.len(),
                input.node_count()
            );
        }
        let sub = induced_subgraph(input, &largest)?;
        let mut local = vec![None; input.node_count()];
        for (k, &v) in sub.original.iter().enumerate() {
            local[v] = Some(k);
        }
        Ok(Dataset {
            latent: latent.select_rows(&sub.original),
            graph: sub.graph,
            original: sub.original,
            local,
            input_component: input.components(),
        })
    }

    /// Graph from an edge list plus profiles; the profile rows fix the node
    /// count.
    pub fn from_parts(edges: EdgeList, latent: ProfileMatrix) -> Result<Self> {
        let n = latent.rows();
        if edges.implied_node_count() > n {
            bail!(
                "graph mentions node {} but profiles cover only {n} nodes",
                edges.implied_node_count() - 1
            );
        }
        let graph = edges.into_graph(n)?;
        Dataset::new(&graph, &latent)
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn input_node_count(&self) -> usize {
        self.local.len()
    }

    pub fn local_id(&self, input: usize) -> Option<usize> {
        self.local.get(input).copied().flatten()
    }

    pub fn localize(&self, seeds: &NodeSet) -> std::result::Result<NodeSet, SeedIssue> {
        if let Some(bad) = seeds.iter().find(|&v| v >= self.local.len()) {
            return Err(SeedIssue::Unknown(bad));
        }
        let mut components = seeds.iter().map(|v| self.input_component[v]);
        let first = components.next();
        if components.any(|c| Some(c) != first) {
            return Err(SeedIssue::Disconnected);
        }
        seeds
            .iter()
            .map(|v| self.local[v].ok_or(SeedIssue::OutsideLargest))
            .collect()
    }

    pub fn globalize(&self, nodes: &NodeSet) -> NodeSet {
        nodes.iter().map(|v| self.original[v]).collect()
    }
}
