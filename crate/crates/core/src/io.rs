//! Plain-text dataset formats.
//!
//! Every format is line oriented: blank lines and text after `#` are ignored,
//! and fields are separated by whitespace or commas. Errors carry the
//! 1-based line number.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evaluation::{GroupLabel, Incidence};
use crate::graph::{Graph, NodeSet};
use crate::profiles::ProfileMatrix;

/// Meaningful lines with their 1-based numbers, split into fields.
fn records<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<String>)>> {
    reader.lines().enumerate().filter_map(|(k, line)| {
        let line = match line {
            Ok(line) => line,
            Err(e) => return Some(Err(Error::Io(e))),
        };
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<String> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .map(str::to_string)
            .collect();
        (!fields.is_empty()).then_some(Ok((k + 1, fields)))
    })
}

fn parse_field<T: FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })
}

/// Edges as read, before the node count is known.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(usize, usize)>,
    /// Line number of every entry in `edges`.
    pub lines: Vec<usize>,
}

impl EdgeList {
    /// One past the largest node id mentioned.
    pub fn implied_node_count(&self) -> usize {
        self.edges
            .iter()
            .map(|&(i, j)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Builds the graph on `node_count` nodes (at least the implied count).
    /// Repeated edges collapse into one.
    pub fn into_graph(self, node_count: usize) -> Result<Graph> {
        for (&(i, j), &line) in self.edges.iter().zip(&self.lines) {
            if i.max(j) >= node_count {
                return Err(Error::Parse {
                    line,
                    message: format!("node {} out of range for {node_count} nodes", i.max(j)),
                });
            }
        }
        Graph::from_edges(node_count, self.edges)
    }
}

/// Reads `u v` pairs. Self-loops are rejected with their line.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut list = EdgeList::default();
    for record in records(reader) {
        let (line, fields) = record?;
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 node ids, found {} fields", fields.len()),
            });
        }
        let u: usize = parse_field(&fields[0], line, "node id")?;
        let v: usize = parse_field(&fields[1], line, "node id")?;
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop on node {u}"),
            });
        }
        list.edges.push((u, v));
        list.lines.push(line);
    }
    Ok(list)
}

/// Reads one row of attribute values per node, all in `[0, 1]`.
pub fn read_profiles<R: BufRead>(reader: R) -> Result<ProfileMatrix> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in records(reader) {
        let (line, fields) = record?;
        let expected = *cols.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(Error::Parse {
                line,
                message: format!("expected {expected} values, found {}", fields.len()),
            });
        }
        for field in &fields {
            let x: f64 = parse_field(field, line, "profile value")?;
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Parse {
                    line,
                    message: format!("profile value {x} outside [0, 1]"),
                });
            }
            values.push(x);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::InvalidInput("profile file has no rows".into()))?;
    ProfileMatrix::new(rows, cols, values)
}

/// Writes profiles one row per line, preceded by `# key=value` comments.
pub fn write_profiles<W: Write>(
    mut out: W,
    profiles: &ProfileMatrix,
    comments: &[(&str, String)],
) -> Result<()> {
    for (key, value) in comments {
        writeln!(out, "# {key}={value}")?;
    }
    for i in 0..profiles.rows() {
        let row: Vec<String> = profiles.row(i).iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// A seed set as listed in a seeds file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedRecord {
    pub line: usize,
    pub group: Option<GroupLabel>,
    pub seeds: NodeSet,
}

/// One seed set per line, optionally prefixed by a group label such as
/// `D2:`.
pub fn read_seed_sets<R: BufRead>(reader: R) -> Result<Vec<SeedRecord>> {
    let mut sets = Vec::new();
    for record in records(reader) {
        let (line, mut fields) = record?;
        let mut group = None;
        if let Some(label) = fields[0].strip_suffix(':') {
            group = Some(label.parse().map_err(|_| Error::Parse {
                line,
                message: format!("unknown seed group '{label}'"),
            })?);
            fields.remove(0);
        } else if let Some((label, rest)) = fields[0].clone().split_once(':') {
            group = Some(label.parse().map_err(|_| Error::Parse {
                line,
                message: format!("unknown seed group '{label}'"),
            })?);
            fields[0] = rest.to_string();
        }
        if fields.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty seed set".into(),
            });
        }
        let ids = fields
            .iter()
            .map(|f| parse_field(f, line, "node id"))
            .collect::<Result<Vec<usize>>>()?;
        sets.push(SeedRecord {
            line,
            group,
            seeds: NodeSet::new(ids),
        });
    }
    Ok(sets)
}

pub fn write_seed_sets<W: Write>(
    mut out: W,
    sets: &[(Option<GroupLabel>, &NodeSet)],
) -> Result<()> {
    for (group, seeds) in sets {
        let ids: Vec<String> = seeds.iter().map(|v| v.to_string()).collect();
        match group {
            Some(label) => writeln!(out, "{label}: {}", ids.join(" "))?,
            None => writeln!(out, "{}", ids.join(" "))?,
        }
    }
    Ok(())
}

/// A `node label count` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkillRecord {
    pub node: usize,
    pub label: String,
    pub count: u64,
}

pub fn read_skill_counts<R: BufRead>(reader: R) -> Result<Vec<SkillRecord>> {
    let mut out = Vec::new();
    for record in records(reader) {
        let (line, fields) = record?;
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 'node label count', found {} fields", fields.len()),
            });
        }
        out.push(SkillRecord {
            node: parse_field(&fields[0], line, "node id")?,
            label: fields[1].clone(),
            count: parse_field(&fields[2], line, "count")?,
        });
    }
    Ok(out)
}

/// One project per line, each a list of skill labels.
pub fn read_projects<R: BufRead>(reader: R) -> Result<Vec<(usize, BTreeSet<String>)>> {
    records(reader)
        .map(|record| record.map(|(line, fields)| (line, fields.into_iter().collect())))
        .collect()
}

/// `node feature [count]` lines; a missing count means 1.
pub fn read_incidence<R: BufRead>(reader: R, node_count: usize) -> Result<Incidence> {
    let mut raw = Vec::new();
    for record in records(reader) {
        let (line, fields) = record?;
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected 'node feature [count]', found {} fields",
                    fields.len()
                ),
            });
        }
        let node: usize = parse_field(&fields[0], line, "node id")?;
        if node >= node_count {
            return Err(Error::Parse {
                line,
                message: format!("node {node} out of range for {node_count} nodes"),
            });
        }
        let count: f64 = match fields.get(2) {
            Some(c) => parse_field(c, line, "count")?,
            None => 1.0,
        };
        if !count.is_finite() || count < 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("invalid count {count}"),
            });
        }
        raw.push((node, fields[1].clone(), count));
    }
    Incidence::from_records(node_count, raw.iter().map(|(n, l, c)| (*n, l.as_str(), *c)))
}
