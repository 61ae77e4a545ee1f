//! CSV rows for metric and timing output.
//!
//! Missing values (failed runs, untimed runs) are empty fields.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use tension_core::evaluation::Metrics;

pub const METRIC_COLUMNS: [&str; 13] = [
    "run_id",
    "algorithm",
    "variant",
    "group",
    "tau",
    "mpe",
    "mpc",
    "raw_tension",
    "nodes",
    "edges",
    "seconds",
    "status",
    "step2_noop",
];

pub const BENCH_COLUMNS: [&str; 7] = [
    "graph",
    "variant",
    "nodes",
    "edges",
    "runs",
    "mean_seconds",
    "stddev_seconds",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub run_id: usize,
    pub algorithm: String,
    pub variant: String,
    pub group: String,
    pub tau: Option<f64>,
    pub mpe: Option<f64>,
    pub mpc: Option<f64>,
    pub raw_tension: Option<f64>,
    pub nodes: Option<usize>,
    pub edges: Option<usize>,
    pub seconds: Option<f64>,
    pub status: String,
    pub step2_noop: Option<bool>,
}

impl MetricRow {
    pub fn ok(
        run_id: usize,
        algorithm: &str,
        variant: &str,
        group: &str,
        m: &Metrics,
        nodes: usize,
        edges: usize,
    ) -> Self {
        MetricRow {
            run_id,
            algorithm: algorithm.into(),
            variant: variant.into(),
            group: group.into(),
            tau: Some(m.tau),
            mpe: Some(m.mpe),
            mpc: Some(m.mpc),
            raw_tension: Some(m.raw_tension),
            nodes: Some(nodes),
            edges: Some(edges),
            seconds: None,
            status: if m.degenerate {
                "ok: edgeless".into()
            } else {
                "ok".into()
            },
            step2_noop: None,
        }
    }

    pub fn failed(
        run_id: usize,
        algorithm: &str,
        variant: &str,
        group: &str,
        reason: &str,
    ) -> Self {
        MetricRow {
            run_id,
            algorithm: algorithm.into(),
            variant: variant.into(),
            group: group.into(),
            tau: None,
            mpe: None,
            mpc: None,
            raw_tension: None,
            nodes: None,
            edges: None,
            seconds: None,
            status: format!("failed: {reason}"),
            step2_noop: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status.starts_with("ok")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub graph: String,
    pub variant: String,
    pub nodes: usize,
    pub edges: usize,
    pub runs: usize,
    pub mean_seconds: f64,
    pub stddev_seconds: f64,
}

fn write_rows<W: Write, R: Serialize>(out: W, header: &[&str], rows: &[R]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_metrics<W: Write>(out: W, rows: &[MetricRow]) -> Result<()> {
    write_rows(out, &METRIC_COLUMNS, rows)
}

pub fn write_bench<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    write_rows(out, &BENCH_COLUMNS, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_empty_fields() {
        let rows = vec![MetricRow::failed(
            3,
            "qtree",
            "QTree(e)",
            "D1",
            "disconnected seeds",
        )];
        let mut buf = Vec::new();
        write_metrics(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), METRIC_COLUMNS.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "3,qtree,QTree(e),D1,,,,,,,,failed: disconnected seeds,"
        );
    }

    #[test]
    fn header_written_without_rows() {
        let mut buf = Vec::new();
        write_bench(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            BENCH_COLUMNS.join(",") + "\n"
        );
    }
}
