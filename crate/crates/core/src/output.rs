//! CSV tables for replication results and their summaries.
//!
//! Undefined statistics are written as empty fields.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{summarize, ReplicationResult, Statistic};

/// One row of the per-replication table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub graph: String,
    pub sampling: String,
    pub n: usize,
    pub index: usize,
    pub ppv: Option<f64>,
    pub bppv_mean: Option<f64>,
    pub auc: Option<f64>,
    pub population_nodes: usize,
    pub population_forest_edges: usize,
    pub population_components: usize,
    pub sample_nodes: usize,
    pub sample_edges: usize,
    pub sample_forest_edges: usize,
    pub sample_components: usize,
}

impl ReplicationRow {
    pub fn new(graph: &str, sampling: &str, n: usize, r: &ReplicationResult) -> Self {
        Self {
            graph: graph.to_string(),
            sampling: sampling.to_string(),
            n,
            index: r.index,
            ppv: r.ppv,
            bppv_mean: r.bppv_mean,
            auc: r.auc,
            population_nodes: r.population_nodes,
            population_forest_edges: r.population_forest_edges,
            population_components: r.population_components,
            sample_nodes: r.sample_nodes,
            sample_edges: r.sample_edges,
            sample_forest_edges: r.sample_forest_edges,
            sample_components: r.sample_components,
        }
    }

    pub fn result(&self) -> ReplicationResult {
        ReplicationResult {
            index: self.index,
            ppv: self.ppv,
            bppv_mean: self.bppv_mean,
            auc: self.auc,
            population_nodes: self.population_nodes,
            population_forest_edges: self.population_forest_edges,
            population_components: self.population_components,
            sample_nodes: self.sample_nodes,
            sample_edges: self.sample_edges,
            sample_forest_edges: self.sample_forest_edges,
            sample_components: self.sample_components,
        }
    }
}

/// One row of the summary table; the interval is empty when fewer than
/// two replications define the statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub graph: String,
    pub sampling: String,
    pub n: usize,
    pub statistic: String,
    pub mean: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n_defined: usize,
}

/// Summary rows for every statistic of one (graph, design, n) cell.
pub fn summary_rows(graph: &str, sampling: &str, n: usize, results: &[ReplicationResult]) -> Vec<SummaryRow> {
    Statistic::ALL
        .iter()
        .map(|stat| {
            let n_defined = results.iter().filter(|r| stat.of(r).is_some()).count();
            let s = summarize(results, *stat).ok();
            SummaryRow {
                graph: graph.to_string(),
                sampling: sampling.to_string(),
                n,
                statistic: stat.name().to_string(),
                mean: s.map(|s| s.mean),
                ci_low: s.map(|s| s.ci_low),
                ci_high: s.map(|s| s.ci_high),
                n_defined,
            }
        })
        .collect()
}

fn write_rows<T: Serialize, W: Write>(rows: &[T], writer: W, header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const REPLICATION_COLUMNS: [&str; 14] = [
    "graph",
    "sampling",
    "n",
    "index",
    "ppv",
    "bppv_mean",
    "auc",
    "population_nodes",
    "population_forest_edges",
    "population_components",
    "sample_nodes",
    "sample_edges",
    "sample_forest_edges",
    "sample_components",
];

pub const SUMMARY_COLUMNS: [&str; 8] = ["graph", "sampling", "n", "statistic", "mean", "ci_low", "ci_high", "n_defined"];

pub fn write_replications<W: Write>(rows: &[ReplicationRow], writer: W) -> Result<()> {
    write_rows(rows, writer, &REPLICATION_COLUMNS)
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], writer: W) -> Result<()> {
    write_rows(rows, writer, &SUMMARY_COLUMNS)
}

pub fn read_replications<R: Read>(reader: R) -> Result<Vec<ReplicationRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(REPLICATION_COLUMNS.iter().copied()) {
        return Err(Error::Parse { line: 1, msg: "not a replications table".into() });
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Summary rows for a replications table, grouped by (graph, sampling, n)
/// in order of first appearance.
pub fn summarize_rows(rows: &[ReplicationRow]) -> Vec<SummaryRow> {
    let mut cells: Vec<((String, String, usize), Vec<ReplicationResult>)> = Vec::new();
    for r in rows {
        let key = (r.graph.clone(), r.sampling.clone(), r.n);
        match cells.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r.result()),
            None => cells.push((key, vec![r.result()])),
        }
    }
    cells.iter().flat_map(|((g, s, n), rs)| summary_rows(g, s, *n, rs)).collect()
}
